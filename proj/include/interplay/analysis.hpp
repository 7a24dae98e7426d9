#pragma once

#include "interplay/dynamics.hpp"
#include "interplay/types.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace interplay {

/// Two-camp membership; agent 0 is always labeled +1.
class FactionPartition {
public:
    /// Normalizes `labels` so that agent 0 is +1. Throws on zero labels.
    explicit FactionPartition(const SignVector& labels);

    const SignVector& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }
    bool single_faction() const noexcept;

    friend bool operator==(const FactionPartition&, const FactionPartition&) = default;

private:
    SignVector labels_;
};

struct NonPositiveDiagonal {
    std::size_t index;
};
struct ZeroEntry {
    std::size_t row;
    std::size_t col;
};
struct ViolatingTriad {
    std::array<std::size_t, 3> agents;
};
/// Pair of rows whose sign patterns are neither equal nor opposite.
struct MismatchedRows {
    std::size_t first;
    std::size_t second;
};

using BalanceWitness = std::variant<NonPositiveDiagonal, ZeroEntry, ViolatingTriad, MismatchedRows>;

struct BalanceVerdict {
    bool balanced = false;
    std::optional<FactionPartition> partition;  // set iff balanced
    std::optional<BalanceWitness> witness;      // set iff not balanced
};

std::string describe(const BalanceWitness& witness);

/// Brute-force check of every triad sign product, including repeated indices. O(n^3).
BalanceVerdict is_socially_balanced_triads(const AppraisalMatrix& X,
                                           double sign_tolerance = kDefaultSignTolerance);

/// Row sign-pattern check: positive diagonal and rows pairwise equal or opposite in sign.
BalanceVerdict is_socially_balanced_rows(const AppraisalMatrix& X,
                                         double sign_tolerance = kDefaultSignTolerance);

enum class ConsensusKind { none, sign_consensus, bipartite_sign_consensus, consensus, bipartite_consensus };

std::string to_string(ConsensusKind kind);

struct ConsensusVerdict {
    ConsensusKind kind = ConsensusKind::none;
    std::optional<FactionPartition> partition;  // set iff kind != none
};

/// Rows share one sign pattern, or split into two exactly opposite patterns.
/// Columns that are zero for every agent are ignored.
ConsensusVerdict modulus_sign_consensus(const OpinionMatrix& Y,
                                        double sign_tolerance = kDefaultSignTolerance);

/// Rows all equal, or take exactly the two values v and -v.
ConsensusVerdict modulus_consensus(const OpinionMatrix& Y, double value_tolerance = 1e-9);

struct EquilibriumDescription {
    FactionPartition rho;
    Vector coefficients;
    double residual = 0.0;  // max-norm of f(Y) - Y
};

struct NotAnEquilibrium {
    /// First column not proportional to the common sign vector; empty if the columns align
    /// but the step residual exceeds the tolerance (or all columns are zero).
    std::optional<std::size_t> violating_column;
    double residual = 0.0;
    std::string reason;
};

using EquilibriumClassification = std::variant<EquilibriumDescription, NotAnEquilibrium>;

/// Tests whether every column of Y is a multiple a_k * rho of a single rho in {+-1}^n and
/// whether Y is a fixed point of the dynamics within `value_tolerance`.
EquilibriumClassification classify_equilibrium(const OpinionMatrix& Y, double value_tolerance = 1e-9);

/// Builds [a_1 rho, ..., a_m rho].
Matrix equilibrium_matrix(const Vector& coefficients, const SignVector& rho);

/// min |X(t)_ij| >= threshold for all t in [window_start, window_end], and no domain violation.
/// A converged trajectory keeps its final appraisals for all later steps.
/// Throws std::invalid_argument if the trajectory stops short of window_end for any other reason.
bool nonvanishing_check(const Trajectory& traj, std::size_t window_start = 100,
                        std::size_t window_end = 1000, double threshold = 1e-3);

struct StabilityReport {
    double fraction_returning = 0.0;
    double max_final_distance = 0.0;
    std::size_t trials = 0;
};

/// Perturbs the equilibrium entry-wise by U[-scale, scale] noise and checks each trajectory stays
/// within 2 * scale of it in max-norm. Requires every coefficient non-zero and scale < min |a_k|.
StabilityReport local_stability_probe(const EquilibriumDescription& equilibrium, double perturbation_scale,
                                      std::size_t trials, std::uint64_t seed,
                                      const SimulationConfig& config = {});

}  // namespace interplay
