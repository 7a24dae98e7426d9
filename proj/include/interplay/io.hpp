#pragma once

#include "interplay/analysis.hpp"
#include "interplay/dynamics.hpp"
#include "interplay/montecarlo.hpp"
#include "interplay/types.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace interplay::io {

using Json = nlohmann::json;

/// Raised for unreadable/unwritable files and malformed documents.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kTrajectoryFormat = "interplay-trajectory";
inline constexpr int kTrajectoryVersion = 1;

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// Self-describing document: dimensions, config echo, termination, snapshots (row-major,
/// shortest round-trip decimals).
Json trajectory_to_json(const Trajectory& traj, const SimulationConfig& config);
Trajectory trajectory_from_json(const Json& doc);

/// One record per (t, matrix, i, j): "t,matrix,i,j,value".
std::string trajectory_to_csv(const Trajectory& traj);

Json report_to_json(const MonteCarloReport& report);
Json balance_to_json(const BalanceVerdict& verdict);
Json consensus_to_json(const ConsensusVerdict& verdict);
Json equilibrium_to_json(const EquilibriumClassification& result);

/// Accepts either a bare array of rows or an object with a "Y" (or "matrix") array of rows.
Matrix parse_matrix_text(const std::string& text);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& doc);

struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, 0 = black
};

/// One `cell_px` square per entry; value -range maps to black, +range to white.
GrayImage render_matrix(const Matrix& m, double range, std::size_t cell_px);

/// Frames side by side, top-aligned, separated by `gap_px` columns of mid-gray.
GrayImage filmstrip(const std::vector<GrayImage>& frames, std::size_t gap_px);

/// 8-bit grayscale PNG. Output bytes depend only on the image.
void write_png(const std::filesystem::path& path, const GrayImage& image);
std::vector<std::uint8_t> encode_png(const GrayImage& image);

/// Default frame steps {0, 1, midpoint, final} among the recorded steps, deduplicated.
std::vector<std::size_t> default_frames(const Trajectory& traj);

}  // namespace interplay::io
