// interplay: simulate the coupled appraisal/opinion dynamics, run the Monte Carlo
// non-vanishing experiment, classify matrices, and render trajectories as heatmaps.
//
// Exit codes: 0 success (a domain violation during simulation is a valid outcome),
// 1 usage or parameter error, 2 I/O error.

#include "interplay/analysis.hpp"
#include "interplay/dynamics.hpp"
#include "interplay/io.hpp"
#include "interplay/montecarlo.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace interplay;
using interplay::io::Json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;

struct InputOptions {
    std::string file;
    std::string literal;
    bool generate = false;
    std::size_t n = 9;
    std::size_t m = 6;
    double support = 1.0;
    std::uint64_t seed = 0;
};

struct SimulateOptions {
    InputOptions input;
    SimulationConfig config;
    double value_tol = 1e-6;
    std::string out_dir = ".";
    std::string format = "json";
};

struct ValidateOptions {
    ExperimentParams params;
    std::string out_dir = ".";
};

struct ClassifyOptions {
    InputOptions input;
    std::string kind = "opinion";
    double sign_tol = kDefaultSignTolerance;
    double value_tol = 1e-6;
    std::string out_dir;
};

struct RenderOptions {
    std::string trajectory;
    std::string out_dir = ".";
    std::size_t cell_px = 32;
    std::vector<std::size_t> frames;
};

void add_input_options(CLI::App* cmd, InputOptions& in, bool allow_generate) {
    auto* file = cmd->add_option("--input", in.file, "JSON file holding the matrix (array of rows, or {\"Y\": ...})");
    auto* literal = cmd->add_option("--matrix", in.literal, "Inline JSON matrix, e.g. '[[1,2],[-1,3]]'");
    file->excludes(literal);
    if (allow_generate) {
        auto* gen = cmd->add_flag("--generate", in.generate, "Draw a generic initial condition from --n/--m/--support/--seed");
        gen->excludes(file)->excludes(literal);
        cmd->add_option("--n", in.n, "Agents for --generate")->check(CLI::PositiveNumber);
        cmd->add_option("--m", in.m, "Issues for --generate")->check(CLI::PositiveNumber);
        cmd->add_option("--support", in.support, "Half-width a of the uniform support [-a, a]")->check(CLI::PositiveNumber);
        cmd->add_option("--seed", in.seed, "Seed for --generate");
    }
}

Matrix load_input(const InputOptions& in) {
    const int sources = (!in.file.empty()) + (!in.literal.empty()) + (in.generate ? 1 : 0);
    if (sources != 1) throw CLI::ValidationError("input", "exactly one of --input, --matrix, --generate is required");
    if (in.generate) return generic_initial(in.n, in.m, in.support, in.seed).values();
    if (!in.literal.empty()) return io::parse_matrix_text(in.literal);
    return io::parse_matrix_text(io::read_text(in.file));
}

fs::path ensure_dir(const std::string& dir) {
    fs::path p(dir.empty() ? "." : dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw io::IoError("cannot create output directory " + p.string() + ": " + ec.message());
    return p;
}

std::string format_coefficients(const Vector& a) {
    std::ostringstream os;
    os << "(";
    for (Eigen::Index k = 0; k < a.size(); ++k) os << (k ? ", " : "") << a(k);
    os << ")";
    return os.str();
}

int cmd_simulate(const SimulateOptions& opt) {
    const OpinionMatrix Y0(load_input(opt.input), opt.config.row_tolerance);
    const Trajectory traj = simulate(Y0, opt.config);
    const fs::path out = ensure_dir(opt.out_dir);

    if (opt.format == "json" || opt.format == "both")
        io::write_json(out / "trajectory.json", io::trajectory_to_json(traj, opt.config));
    if (opt.format == "csv" || opt.format == "both") io::write_text(out / "trajectory.csv", io::trajectory_to_csv(traj));

    const Snapshot& last = traj.last();
    Json summary;
    summary["termination"] = {{"status", to_string(traj.termination.status)}, {"step", traj.termination.step}};
    summary["final_step"] = last.t;
    std::cout << "termination: " << to_string(traj.termination.status) << " at step " << traj.termination.step
              << " (last recorded step " << last.t << ")\n";

    const OpinionMatrix final_y(last.Y, 0.0);
    const ConsensusVerdict sign_verdict = modulus_sign_consensus(final_y);
    const ConsensusVerdict value_verdict = modulus_consensus(final_y, opt.value_tol);
    summary["sign_consensus"] = io::consensus_to_json(sign_verdict);
    summary["consensus"] = io::consensus_to_json(value_verdict);
    std::cout << "modulus sign-consensus: " << to_string(sign_verdict.kind) << "\n"
              << "modulus consensus: " << to_string(value_verdict.kind) << "\n";

    if (const Snapshot* with_x = traj.last_with_appraisal()) {
        const BalanceVerdict balance = is_socially_balanced_triads(AppraisalMatrix(*with_x->X));
        summary["balance"] = io::balance_to_json(balance);
        std::cout << "social balance of X(" << with_x->t << "): " << (balance.balanced ? "balanced" : "unbalanced");
        if (balance.witness) std::cout << " (" << describe(*balance.witness) << ")";
        std::cout << "\n";
    }

    const EquilibriumClassification eq = classify_equilibrium(final_y, opt.value_tol);
    summary["equilibrium"] = io::equilibrium_to_json(eq);
    if (const auto* d = std::get_if<EquilibriumDescription>(&eq)) {
        std::cout << "equilibrium: coefficients " << format_coefficients(d->coefficients) << ", "
                  << (d->rho.single_faction() ? "one faction" : "two factions") << ", residual " << d->residual << "\n";
    } else {
        std::cout << "equilibrium: none (" << std::get<NotAnEquilibrium>(eq).reason << ")\n";
    }
    io::write_json(out / "summary.json", summary);
    return 0;
}

int cmd_validate(const ValidateOptions& opt) {
    const MonteCarloReport report = run_experiment(opt.params);
    const fs::path out = ensure_dir(opt.out_dir);
    io::write_json(out / "report.json", io::report_to_json(report));
    std::cout << "runs: " << report.runs_completed << "\n"
              << "successes: " << report.successes << "\n"
              << "p_hat: " << report.p_hat << "\n"
              << "chernoff minimum N: " << report.chernoff_minimum_runs << "\n";
    if (report.runs_completed < report.chernoff_minimum_runs)
        std::cout << "note: fewer runs than the Chernoff minimum for the requested epsilon/xi\n";
    return 0;
}

int cmd_classify(const ClassifyOptions& opt) {
    const Matrix m = load_input(opt.input);
    Json result;
    if (opt.kind == "appraisal") {
        const AppraisalMatrix X(m);
        result["balance_triads"] = io::balance_to_json(is_socially_balanced_triads(X, opt.sign_tol));
        result["balance_rows"] = io::balance_to_json(is_socially_balanced_rows(X, opt.sign_tol));
    } else {
        const OpinionMatrix Y(m);
        result["sign_consensus"] = io::consensus_to_json(modulus_sign_consensus(Y, opt.sign_tol));
        result["consensus"] = io::consensus_to_json(modulus_consensus(Y, opt.value_tol));
        result["equilibrium"] = io::equilibrium_to_json(classify_equilibrium(Y, opt.value_tol));
        try {
            const AppraisalMatrix X = appraisal_update(Y);
            result["next_appraisal_balance"] = io::balance_to_json(is_socially_balanced_triads(X, opt.sign_tol));
        } catch (const DomainViolation& e) {
            result["next_appraisal_balance"] = {{"error", e.what()}};
        }
    }
    std::cout << result.dump(1) << "\n";
    if (!opt.out_dir.empty()) io::write_json(ensure_dir(opt.out_dir) / "classify.json", result);
    return 0;
}

int cmd_render(const RenderOptions& opt) {
    const fs::path out = ensure_dir(opt.out_dir);
    const fs::path source = opt.trajectory.empty() ? out / "trajectory.json" : fs::path(opt.trajectory);
    if (!fs::exists(source)) throw io::IoError("trajectory not found: " + source.string());
    const Trajectory traj = io::trajectory_from_json(io::read_json(source));

    std::vector<std::size_t> frames = opt.frames.empty() ? io::default_frames(traj) : opt.frames;
    std::vector<const Snapshot*> selected;
    for (std::size_t t : frames) {
        const Snapshot* found = nullptr;
        for (const Snapshot& s : traj.snapshots)
            if (s.t == t) found = &s;
        if (found == nullptr) throw CLI::ValidationError("--frames", "step " + std::to_string(t) + " was not recorded");
        selected.push_back(found);
    }

    for (const char* name : {"X", "Y"}) {
        const bool is_x = name[0] == 'X';
        std::vector<std::pair<std::size_t, const Matrix*>> mats;
        for (const Snapshot* s : selected) {
            if (is_x && !s->X) continue;
            mats.emplace_back(s->t, is_x ? &*s->X : &s->Y);
        }
        if (mats.empty()) continue;
        double range = 0.0;
        for (const auto& [t, mat] : mats) range = std::max(range, mat->cwiseAbs().maxCoeff());
        std::vector<io::GrayImage> images;
        for (const auto& [t, mat] : mats) {
            images.push_back(io::render_matrix(*mat, range, opt.cell_px));
            const fs::path file = out / (std::string(name) + "_t" + std::to_string(t) + ".png");
            io::write_png(file, images.back());
            std::cout << "wrote " << file.string() << "\n";
        }
        const fs::path strip = out / (std::string(name) + "_filmstrip.png");
        io::write_png(strip, io::filmstrip(images, std::max<std::size_t>(1, opt.cell_px / 2)));
        std::cout << "wrote " << strip.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coupled homophily appraisal / influence opinion dynamics"};
    app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags take precedence");
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a trajectory and summarize its limit");
    add_input_options(simulate_cmd, sim.input, true);
    simulate_cmd->add_option("--max-steps", sim.config.max_steps, "Maximum number of steps")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--tol", sim.config.convergence_tolerance, "Max-norm change below which Y counts as converged")
        ->check(CLI::NonNegativeNumber);
    simulate_cmd->add_option("--record-every", sim.config.record_every, "Snapshot stride")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--value-tol", sim.value_tol, "Tolerance for consensus and equilibrium classification");
    simulate_cmd->add_option("--out-dir", sim.out_dir, "Output directory");
    simulate_cmd->add_option("--format", sim.format, "Trajectory export format")
        ->check(CLI::IsMember({"json", "csv", "both"}));

    ValidateOptions val;
    val.params.runs = 1000;
    auto* validate_cmd = app.add_subcommand("validate", "Monte Carlo check of the non-vanishing appraisal condition");
    validate_cmd->add_option("--n", val.params.agents, "Agents");
    validate_cmd->add_option("--m", val.params.issues, "Issues");
    validate_cmd->add_option("--support", val.params.support_half_width, "Half-width a of the uniform support");
    validate_cmd->add_option("--runs", val.params.runs, "Number of runs N");
    validate_cmd->add_option("--seed", val.params.master_seed, "Master seed");
    validate_cmd->add_option("--window-start", val.params.window_start, "First step of the observation window");
    validate_cmd->add_option("--window-end", val.params.window_end, "Last step of the observation window (horizon)");
    validate_cmd->add_option("--threshold", val.params.threshold, "Minimum |X_ij| over the window");
    validate_cmd->add_option("--epsilon", val.params.epsilon, "Accuracy for the Chernoff bound");
    validate_cmd->add_option("--xi", val.params.xi, "Confidence parameter for the Chernoff bound");
    validate_cmd->add_option("--threads", val.params.threads, "Worker threads (0 = hardware concurrency)");
    validate_cmd->add_option("--out-dir", val.out_dir, "Output directory");
    std::string validate_format = "json";
    validate_cmd->add_option("--format", validate_format, "Report format")->check(CLI::IsMember({"json"}));

    ClassifyOptions cls;
    auto* classify_cmd = app.add_subcommand("classify", "Run the balance, consensus and equilibrium predicates on a matrix");
    add_input_options(classify_cmd, cls.input, false);
    classify_cmd->add_option("--kind", cls.kind, "Interpret the matrix as an opinion or appraisal matrix")
        ->check(CLI::IsMember({"opinion", "appraisal"}));
    classify_cmd->add_option("--sign-tol", cls.sign_tol, "Entries at or below this magnitude have sign 0");
    classify_cmd->add_option("--value-tol", cls.value_tol, "Tolerance for consensus and equilibrium classification");
    classify_cmd->add_option("--out-dir", cls.out_dir, "Also write classify.json here");

    RenderOptions ren;
    auto* render_cmd = app.add_subcommand("render", "Render trajectory snapshots as grayscale heatmaps");
    render_cmd->add_option("--trajectory", ren.trajectory, "Trajectory JSON (default: <out-dir>/trajectory.json)");
    render_cmd->add_option("--out-dir", ren.out_dir, "Output directory");
    render_cmd->add_option("--cell-size", ren.cell_px, "Pixels per matrix entry")->check(CLI::PositiveNumber);
    render_cmd->add_option("--frames", ren.frames, "Steps to render (default: 0, 1, midpoint, final)")->delimiter(',');

    try {
        app.parse(argc, argv);
        if (*simulate_cmd) return cmd_simulate(sim);
        if (*validate_cmd) return cmd_validate(val);
        if (*classify_cmd) return cmd_classify(cls);
        if (*render_cmd) return cmd_render(ren);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const io::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
