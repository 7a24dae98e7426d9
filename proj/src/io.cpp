#include "interplay/io.hpp"

#include <png.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

namespace interplay::io {

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw IoError("matrix must be a non-empty array of rows");
    const std::size_t rows = j.size();
    if (!j[0].is_array() || j[0].empty()) throw IoError("matrix rows must be non-empty arrays");
    const std::size_t cols = j[0].size();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw IoError("matrix rows have unequal lengths");
        for (std::size_t k = 0; k < cols; ++k) {
            if (!j[i][k].is_number()) throw IoError("matrix entries must be numbers");
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

Json trajectory_to_json(const Trajectory& traj, const SimulationConfig& config) {
    Json doc;
    doc["format"] = kTrajectoryFormat;
    doc["version"] = kTrajectoryVersion;
    doc["agents"] = traj.snapshots.empty() ? 0 : traj.first().Y.rows();
    doc["issues"] = traj.snapshots.empty() ? 0 : traj.first().Y.cols();
    doc["config"] = {{"max_steps", config.max_steps},
                     {"convergence_tolerance", config.convergence_tolerance},
                     {"row_tolerance", config.row_tolerance},
                     {"record_every", config.record_every}};
    doc["termination"] = {{"status", to_string(traj.termination.status)}, {"step", traj.termination.step}};
    Json snaps = Json::array();
    for (const Snapshot& s : traj.snapshots) {
        Json js;
        js["t"] = s.t;
        js["Y"] = matrix_to_json(s.Y);
        if (s.X) js["X"] = matrix_to_json(*s.X);
        if (s.W) js["W"] = matrix_to_json(*s.W);
        snaps.push_back(std::move(js));
    }
    doc["snapshots"] = std::move(snaps);
    return doc;
}

Trajectory trajectory_from_json(const Json& doc) {
    try {
        if (doc.value("format", std::string{}) != kTrajectoryFormat) throw IoError("not a trajectory document");
        if (doc.at("version").get<int>() != kTrajectoryVersion) throw IoError("unsupported trajectory version");
        Trajectory traj;
        traj.termination.status = termination_status_from_string(doc.at("termination").at("status").get<std::string>());
        traj.termination.step = doc.at("termination").at("step").get<std::size_t>();
        for (const Json& js : doc.at("snapshots")) {
            Snapshot s;
            s.t = js.at("t").get<std::size_t>();
            s.Y = matrix_from_json(js.at("Y"));
            if (js.contains("X")) s.X = matrix_from_json(js.at("X"));
            if (js.contains("W")) s.W = matrix_from_json(js.at("W"));
            traj.snapshots.push_back(std::move(s));
        }
        if (traj.snapshots.empty()) throw IoError("trajectory has no snapshots");
        return traj;
    } catch (const Json::exception& e) {
        throw IoError(std::string("malformed trajectory document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("malformed trajectory document: ") + e.what());
    }
}

namespace {

void append_double(std::string& out, double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, end);
}

void append_matrix_rows(std::string& out, std::size_t t, const char* name, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out += std::to_string(t);
            out += ',';
            out += name;
            out += ',';
            out += std::to_string(i);
            out += ',';
            out += std::to_string(j);
            out += ',';
            append_double(out, m(i, j));
            out += '\n';
        }
}

}  // namespace

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "t,matrix,i,j,value\n";
    for (const Snapshot& s : traj.snapshots) {
        append_matrix_rows(out, s.t, "Y", s.Y);
        if (s.X) append_matrix_rows(out, s.t, "X", *s.X);
        if (s.W) append_matrix_rows(out, s.t, "W", *s.W);
    }
    return out;
}

Json report_to_json(const MonteCarloReport& report) {
    const ExperimentParams& p = report.params;
    Json doc;
    doc["format"] = "interplay-montecarlo-report";
    doc["version"] = 1;
    doc["params"] = {{"agents", p.agents},
                     {"issues", p.issues},
                     {"support_half_width", p.support_half_width},
                     {"runs", p.runs},
                     {"master_seed", p.master_seed},
                     {"window_start", p.window_start},
                     {"window_end", p.window_end},
                     {"threshold", p.threshold},
                     {"epsilon", p.epsilon},
                     {"xi", p.xi}};
    doc["runs_requested"] = report.runs_requested;
    doc["runs_completed"] = report.runs_completed;
    doc["successes"] = report.successes;
    doc["p_hat"] = report.p_hat;
    doc["chernoff_minimum_runs"] = report.chernoff_minimum_runs;
    Json runs = Json::array();
    for (const RunRecord& r : report.records) {
        runs.push_back({{"index", r.index},
                        {"seed", r.seed},
                        {"Z", r.nonvanishing ? 1 : 0},
                        {"termination", to_string(r.termination.status)},
                        {"termination_step", r.termination.step},
                        {"window_min_abs_appraisal", r.window_min_appraisal},
                        {"resamples", r.resamples},
                        {"final_balanced", r.final_balanced},
                        {"final_sign_consensus", r.final_sign_consensus}});
    }
    doc["records"] = std::move(runs);
    return doc;
}

namespace {

Json labels_json(const FactionPartition& p) { return p.labels().entries(); }

}  // namespace

Json balance_to_json(const BalanceVerdict& verdict) {
    Json j;
    j["balanced"] = verdict.balanced;
    if (verdict.partition) j["partition"] = labels_json(*verdict.partition);
    if (verdict.witness) j["witness"] = describe(*verdict.witness);
    return j;
}

Json consensus_to_json(const ConsensusVerdict& verdict) {
    Json j;
    j["kind"] = to_string(verdict.kind);
    if (verdict.partition) j["partition"] = labels_json(*verdict.partition);
    return j;
}

Json equilibrium_to_json(const EquilibriumClassification& result) {
    Json j;
    if (const auto* eq = std::get_if<EquilibriumDescription>(&result)) {
        j["equilibrium"] = true;
        j["rho"] = labels_json(eq->rho);
        j["coefficients"] = std::vector<double>(eq->coefficients.begin(), eq->coefficients.end());
        j["residual"] = eq->residual;
    } else {
        const auto& no = std::get<NotAnEquilibrium>(result);
        j["equilibrium"] = false;
        j["reason"] = no.reason;
        if (no.violating_column) j["violating_column"] = *no.violating_column;
        if (std::isfinite(no.residual)) j["residual"] = no.residual;
    }
    return j;
}

Matrix parse_matrix_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::exception& e) {
        throw IoError(std::string("cannot parse matrix: ") + e.what());
    }
    if (doc.is_object()) {
        if (doc.contains("Y")) return matrix_from_json(doc["Y"]);
        if (doc.contains("matrix")) return matrix_from_json(doc["matrix"]);
        throw IoError("matrix object needs a \"Y\" or \"matrix\" field");
    }
    return matrix_from_json(doc);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("failed writing " + path.string());
}

Json read_json(const std::filesystem::path& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const Json::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_text(path, doc.dump(1) + "\n"); }

GrayImage render_matrix(const Matrix& m, double range, std::size_t cell_px) {
    if (cell_px < 1) throw std::invalid_argument("cell size must be positive");
    GrayImage img;
    img.width = static_cast<std::size_t>(m.cols()) * cell_px;
    img.height = static_cast<std::size_t>(m.rows()) * cell_px;
    img.pixels.assign(img.width * img.height, 0);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double level = 0.5;
            if (range > 0.0) level = std::clamp((m(i, j) + range) / (2.0 * range), 0.0, 1.0);
            const auto gray = static_cast<std::uint8_t>(std::lround(level * 255.0));
            for (std::size_t y = 0; y < cell_px; ++y) {
                auto* row = img.pixels.data() + (static_cast<std::size_t>(i) * cell_px + y) * img.width;
                std::fill_n(row + static_cast<std::size_t>(j) * cell_px, cell_px, gray);
            }
        }
    return img;
}

GrayImage filmstrip(const std::vector<GrayImage>& frames, std::size_t gap_px) {
    GrayImage out;
    if (frames.empty()) return out;
    for (const GrayImage& f : frames) {
        out.width += f.width;
        out.height = std::max(out.height, f.height);
    }
    out.width += gap_px * (frames.size() - 1);
    out.pixels.assign(out.width * out.height, 128);
    std::size_t x0 = 0;
    for (const GrayImage& f : frames) {
        for (std::size_t y = 0; y < f.height; ++y)
            std::copy_n(f.pixels.data() + y * f.width, f.width, out.pixels.data() + y * out.width + x0);
        x0 += f.width + gap_px;
    }
    return out;
}

namespace {

void png_append(png_structp png, png_bytep data, png_size_t length) {
    auto* buffer = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    buffer->insert(buffer->end(), data, data + length);
}

void png_flush_noop(png_structp) {}

}  // namespace

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
    if (image.width == 0 || image.height == 0) throw IoError("cannot encode an empty image");
    std::vector<std::uint8_t> buffer;
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("png encoding failed");
    }
    png_set_write_fn(png, &buffer, png_append, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t y = 0; y < image.height; ++y)
        png_write_row(png, const_cast<png_bytep>(image.pixels.data() + y * image.width));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return buffer;
}

void write_png(const std::filesystem::path& path, const GrayImage& image) {
    const auto bytes = encode_png(image);
    write_text(path, std::string(bytes.begin(), bytes.end()));
}

std::vector<std::size_t> default_frames(const Trajectory& traj) {
    if (traj.snapshots.empty()) return {};
    const std::size_t final_t = traj.last().t;
    const std::size_t wanted[] = {0, 1, final_t / 2, final_t};
    std::set<std::size_t> picked;
    for (std::size_t w : wanted) {
        // nearest recorded step
        const Snapshot* best = &traj.snapshots.front();
        for (const Snapshot& s : traj.snapshots) {
            const auto dist = [&](std::size_t t) { return t > w ? t - w : w - t; };
            if (dist(s.t) < dist(best->t)) best = &s;
        }
        picked.insert(best->t);
    }
    return {picked.begin(), picked.end()};
}

}  // namespace interplay::io
