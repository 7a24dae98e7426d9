#include "interplay/analysis.hpp"

#include "interplay/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace interplay {

namespace {

SignVector normalized_labels(const SignVector& labels) {
    if (labels.size() == 0) throw std::invalid_argument("empty faction labels");
    if (labels.has_zero()) throw std::invalid_argument("faction labels must be +-1");
    if (labels[0] == 1) return labels;
    std::vector<int> flipped = labels.entries();
    for (int& l : flipped) l = -l;
    return SignVector(std::move(flipped));
}

BalanceVerdict unbalanced(BalanceWitness witness) {
    return BalanceVerdict{false, std::nullopt, std::move(witness)};
}

BalanceVerdict balanced(const SignVector& labels) {
    return BalanceVerdict{true, FactionPartition(labels), std::nullopt};
}

// Checks shared by both balance tests: positive diagonal, then no zero entries.
std::optional<BalanceWitness> sign_preconditions(const Matrix& x, double tol) {
    const auto n = static_cast<std::size_t>(x.rows());
    for (std::size_t i = 0; i < n; ++i)
        if (!(x(i, i) > tol)) return NonPositiveDiagonal{i};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (sign_of(x(i, j), tol) == 0) return ZeroEntry{i, j};
    return std::nullopt;
}

// Ignoring the given columns, returns +1 if the rows have equal sign patterns, -1 if opposite,
// 0 otherwise. Equal wins when both hold.
int pattern_relation(const std::vector<int>& a, const std::vector<int>& b, const std::vector<bool>& skip) {
    bool equal = true;
    bool opposite = true;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (skip[k]) continue;
        if (a[k] != b[k]) equal = false;
        if (a[k] != -b[k]) opposite = false;
    }
    if (equal) return 1;
    if (opposite) return -1;
    return 0;
}

}  // namespace

FactionPartition::FactionPartition(const SignVector& labels) : labels_(normalized_labels(labels)) {}

bool FactionPartition::single_faction() const noexcept {
    for (int l : labels_.entries())
        if (l != 1) return false;
    return true;
}

std::string describe(const BalanceWitness& witness) {
    std::ostringstream os;
    std::visit(
        [&](const auto& w) {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, NonPositiveDiagonal>) {
                os << "non-positive diagonal at " << w.index;
            } else if constexpr (std::is_same_v<T, ZeroEntry>) {
                os << "zero entry at (" << w.row << ", " << w.col << ")";
            } else if constexpr (std::is_same_v<T, ViolatingTriad>) {
                os << "negative triad (" << w.agents[0] << ", " << w.agents[1] << ", " << w.agents[2] << ")";
            } else {
                os << "rows " << w.first << " and " << w.second << " neither equal nor opposite in sign";
            }
        },
        witness);
    return os.str();
}

BalanceVerdict is_socially_balanced_triads(const AppraisalMatrix& X, double sign_tolerance) {
    const Matrix& x = X.values();
    if (auto w = sign_preconditions(x, sign_tolerance)) return unbalanced(*w);
    const auto n = static_cast<std::size_t>(x.rows());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const int product = sign_of(x(i, j), sign_tolerance) * sign_of(x(j, k), sign_tolerance) *
                                    sign_of(x(k, i), sign_tolerance);
                if (product != 1) return unbalanced(ViolatingTriad{{i, j, k}});
            }
    return balanced(SignVector::of(x.row(0).transpose(), sign_tolerance));
}

BalanceVerdict is_socially_balanced_rows(const AppraisalMatrix& X, double sign_tolerance) {
    const Matrix& x = X.values();
    if (auto w = sign_preconditions(x, sign_tolerance)) return unbalanced(*w);
    const auto n = static_cast<std::size_t>(x.rows());
    std::vector<std::vector<int>> patterns(n);
    for (std::size_t i = 0; i < n; ++i) patterns[i] = SignVector::of(x.row(i).transpose(), sign_tolerance).entries();
    const std::vector<bool> skip(n, false);

    // Comparing every row against row 0 suffices: equal/opposite is transitive.
    std::vector<int> labels(n, 1);
    for (std::size_t i = 1; i < n; ++i) {
        labels[i] = pattern_relation(patterns[0], patterns[i], skip);
        if (labels[i] == 0) return unbalanced(MismatchedRows{0, i});
    }
    return balanced(SignVector(std::move(labels)));
}

std::string to_string(ConsensusKind kind) {
    switch (kind) {
        case ConsensusKind::none: return "none";
        case ConsensusKind::sign_consensus: return "sign_consensus";
        case ConsensusKind::bipartite_sign_consensus: return "bipartite_sign_consensus";
        case ConsensusKind::consensus: return "consensus";
        case ConsensusKind::bipartite_consensus: return "bipartite_consensus";
    }
    return "unknown";
}

ConsensusVerdict modulus_sign_consensus(const OpinionMatrix& Y, double sign_tolerance) {
    const Matrix& y = Y.values();
    const auto n = static_cast<std::size_t>(y.rows());
    const auto m = static_cast<std::size_t>(y.cols());
    std::vector<bool> zero_column(m);
    for (std::size_t k = 0; k < m; ++k) zero_column[k] = y.col(k).cwiseAbs().maxCoeff() <= sign_tolerance;

    const auto first = SignVector::of(y.row(0).transpose(), sign_tolerance).entries();
    std::vector<int> labels(n, 1);
    bool split = false;
    for (std::size_t i = 1; i < n; ++i) {
        labels[i] = pattern_relation(first, SignVector::of(y.row(i).transpose(), sign_tolerance).entries(),
                                     zero_column);
        if (labels[i] == 0) return {};
        split = split || labels[i] == -1;
    }
    return {split ? ConsensusKind::bipartite_sign_consensus : ConsensusKind::sign_consensus,
            FactionPartition(SignVector(std::move(labels)))};
}

ConsensusVerdict modulus_consensus(const OpinionMatrix& Y, double value_tolerance) {
    const Matrix& y = Y.values();
    const auto n = static_cast<std::size_t>(y.rows());
    std::vector<int> labels(n, 1);
    bool split = false;
    for (std::size_t i = 1; i < n; ++i) {
        const double same = (y.row(i) - y.row(0)).cwiseAbs().maxCoeff();
        const double flipped = (y.row(i) + y.row(0)).cwiseAbs().maxCoeff();
        if (same <= value_tolerance) continue;
        if (flipped > value_tolerance) return {};
        labels[i] = -1;
        split = true;
    }
    return {split ? ConsensusKind::bipartite_consensus : ConsensusKind::consensus,
            FactionPartition(SignVector(std::move(labels)))};
}

Matrix equilibrium_matrix(const Vector& coefficients, const SignVector& rho) {
    return rho.as_vector() * coefficients.transpose();
}

EquilibriumClassification classify_equilibrium(const OpinionMatrix& Y, double value_tolerance) {
    const Matrix& y = Y.values();
    const Eigen::Index n = y.rows();
    const Eigen::Index m = y.cols();

    Eigen::Index anchor = -1;
    for (Eigen::Index k = 0; k < m && anchor < 0; ++k)
        if (y.col(k).cwiseAbs().maxCoeff() > value_tolerance) anchor = k;
    if (anchor < 0) return NotAnEquilibrium{std::nullopt, 0.0, "every column is zero"};

    std::vector<int> signs(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) signs[i] = y(i, anchor) >= 0.0 ? 1 : -1;
    const FactionPartition rho{SignVector(std::move(signs))};
    const Vector r = rho.labels().as_vector();

    Vector coefficients = Vector::Zero(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        if (y.col(k).cwiseAbs().maxCoeff() <= value_tolerance) continue;
        coefficients(k) = r.dot(y.col(k)) / static_cast<double>(n);
        if ((y.col(k) - coefficients(k) * r).cwiseAbs().maxCoeff() > value_tolerance)
            return NotAnEquilibrium{static_cast<std::size_t>(k), 0.0,
                                    "column " + std::to_string(k) + " is not a multiple of the faction vector"};
    }

    double residual = 0.0;
    try {
        residual = (step(Y).Y_next.values() - y).cwiseAbs().maxCoeff();
    } catch (const DomainViolation& e) {
        return NotAnEquilibrium{std::nullopt, std::numeric_limits<double>::infinity(), e.what()};
    }
    if (residual > value_tolerance)
        return NotAnEquilibrium{std::nullopt, residual, "step residual exceeds tolerance"};
    return EquilibriumDescription{rho, std::move(coefficients), residual};
}

bool nonvanishing_check(const Trajectory& traj, std::size_t window_start, std::size_t window_end,
                        double threshold) {
    if (window_start > window_end) throw std::invalid_argument("window_start must not exceed window_end");
    if (traj.snapshots.empty()) throw std::invalid_argument("empty trajectory");
    const Termination& term = traj.termination;
    if (term.status == TerminationStatus::domain_violation && term.step <= window_end) return false;

    const Snapshot& last = traj.last();
    const bool frozen = term.status == TerminationStatus::converged;
    if (!frozen && last.t < window_end)
        throw std::invalid_argument("trajectory ends at step " + std::to_string(last.t) + " before window end " +
                                    std::to_string(window_end));

    double smallest = std::numeric_limits<double>::infinity();
    bool covered = false;
    for (const Snapshot& s : traj.snapshots) {
        if (!s.X || s.t < window_start || s.t > window_end) continue;
        smallest = std::min(smallest, s.X->cwiseAbs().minCoeff());
        covered = true;
    }
    if (frozen && last.t < window_end) {
        const Snapshot* final_x = traj.last_with_appraisal();
        if (final_x == nullptr) throw std::invalid_argument("converged trajectory carries no appraisal matrix");
        smallest = std::min(smallest, final_x->X->cwiseAbs().minCoeff());
        covered = true;
    }
    if (!covered) throw std::invalid_argument("no recorded appraisal matrix inside the window");
    return smallest >= threshold;
}

StabilityReport local_stability_probe(const EquilibriumDescription& equilibrium, double perturbation_scale,
                                      std::size_t trials, std::uint64_t seed, const SimulationConfig& config) {
    const Vector& a = equilibrium.coefficients;
    if (a.size() == 0) throw std::invalid_argument("equilibrium has no coefficients");
    const double min_coefficient = a.cwiseAbs().minCoeff();
    if (!(min_coefficient > 0.0)) throw std::invalid_argument("every coefficient must be non-zero");
    if (!(perturbation_scale >= 0.0) || perturbation_scale >= min_coefficient)
        throw std::invalid_argument("perturbation scale must lie in [0, min |a_k|)");
    if (trials < 1) throw std::invalid_argument("at least one trial is required");

    const Matrix target = equilibrium_matrix(a, equilibrium.rho.labels());
    // Room for rounding in the step itself; matters only when the scale is ~0.
    const double bound = 2.0 * perturbation_scale + 64.0 * std::numeric_limits<double>::epsilon() * a.cwiseAbs().maxCoeff();

    std::size_t returning = 0;
    StabilityReport report;
    report.trials = trials;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        UniformSource noise(derive_seed(seed, trial));
        Matrix start = target;
        for (Eigen::Index i = 0; i < start.rows(); ++i)
            for (Eigen::Index j = 0; j < start.cols(); ++j) start(i, j) += noise(-perturbation_scale, perturbation_scale);

        double worst = (start - target).cwiseAbs().maxCoeff();
        double final_distance = worst;
        const Termination term = evolve(OpinionMatrix(start, config.row_tolerance), config,
                                        [&](std::size_t, const StepResult& r) {
                                            final_distance = (r.Y_next.values() - target).cwiseAbs().maxCoeff();
                                            worst = std::max(worst, final_distance);
                                            return true;
                                        });
        if (term.status != TerminationStatus::domain_violation && worst <= bound) ++returning;
        report.max_final_distance = std::max(report.max_final_distance, final_distance);
    }
    report.fraction_returning = static_cast<double>(returning) / static_cast<double>(trials);
    return report;
}

}  // namespace interplay
