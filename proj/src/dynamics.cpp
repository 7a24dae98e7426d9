#include "interplay/dynamics.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace interplay {

void SimulationConfig::validate() const {
    if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
    if (record_every < 1) throw std::invalid_argument("record_every must be at least 1");
    if (!(convergence_tolerance >= 0.0)) throw std::invalid_argument("convergence tolerance must be >= 0");
    if (!(row_tolerance >= 0.0)) throw std::invalid_argument("row tolerance must be >= 0");
}

AppraisalMatrix appraisal_update(const OpinionMatrix& Y, double row_tolerance) {
    const Matrix& y = Y.values();
    const Vector row_norms = y.cwiseAbs().rowwise().sum();
    for (Eigen::Index i = 0; i < row_norms.size(); ++i)
        if (row_norms(i) <= row_tolerance) throw DomainViolation(i, "opinion matrix");
    Matrix gram = y * y.transpose();
    return AppraisalMatrix(row_norms.cwiseInverse().asDiagonal() * gram);
}

InfluenceMatrix influence_from_appraisal(const AppraisalMatrix& X, double row_tolerance) {
    const Matrix& x = X.values();
    const Vector row_norms = x.cwiseAbs().rowwise().sum();
    for (Eigen::Index i = 0; i < row_norms.size(); ++i)
        if (!(row_norms(i) > row_tolerance)) throw DomainViolation(i, "appraisal matrix");
    return InfluenceMatrix(row_norms.cwiseInverse().asDiagonal() * x);
}

OpinionMatrix opinion_update(const InfluenceMatrix& W, const OpinionMatrix& Y, double row_tolerance) {
    if (W.agents() != Y.agents())
        throw std::invalid_argument("influence and opinion matrices disagree on agent count");
    return OpinionMatrix(W.values() * Y.values(), row_tolerance);
}

StepResult step(const OpinionMatrix& Y, double row_tolerance) {
    AppraisalMatrix X = appraisal_update(Y, row_tolerance);
    InfluenceMatrix W = influence_from_appraisal(X, row_tolerance);
    OpinionMatrix Y_next = opinion_update(W, Y, row_tolerance);
    return StepResult{std::move(X), std::move(W), std::move(Y_next)};
}

Termination evolve(const OpinionMatrix& Y0, const SimulationConfig& config,
                   const StepObserver& observer) {
    config.validate();
    OpinionMatrix current = Y0;
    for (std::size_t t = 1; t <= config.max_steps; ++t) {
        std::optional<StepResult> result;
        try {
            result.emplace(step(current, config.row_tolerance));
        } catch (const DomainViolation&) {
            return {TerminationStatus::domain_violation, t};
        }
        const double change = (result->Y_next.values() - current.values()).cwiseAbs().maxCoeff();
        const bool keep_going = observer ? observer(t, *result) : true;
        if (change == 0.0 || change < config.convergence_tolerance)
            return {TerminationStatus::converged, t - 1};
        if (!keep_going) return {TerminationStatus::max_steps_reached, t};
        current = std::move(result->Y_next);
    }
    return {TerminationStatus::max_steps_reached, config.max_steps};
}

Trajectory simulate(const OpinionMatrix& Y0, const SimulationConfig& config) {
    Trajectory traj;
    traj.snapshots.push_back(Snapshot{0, Y0.values(), std::nullopt, std::nullopt});

    std::optional<Snapshot> pending;  // last computed step when it fell between strides
    traj.termination = evolve(Y0, config, [&](std::size_t t, const StepResult& r) {
        Snapshot snap{t, r.Y_next.values(), r.X_next.values(), r.W_next.values()};
        if (t % config.record_every == 0) {
            traj.snapshots.push_back(std::move(snap));
            pending.reset();
        } else {
            pending = std::move(snap);
        }
        return true;
    });
    if (pending) traj.snapshots.push_back(std::move(*pending));
    return traj;
}

Vector single_issue_closed_form(const Vector& y0) {
    if (y0.size() < 1) throw std::invalid_argument("empty opinion vector");
    Vector signs(y0.size());
    for (Eigen::Index i = 0; i < y0.size(); ++i) {
        if (!std::isfinite(y0(i))) throw NonFiniteEntry(i, 0);
        if (y0(i) == 0.0) throw DomainViolation(i, "single-issue opinion vector");
        signs(i) = y0(i) > 0.0 ? 1.0 : -1.0;
    }
    return (y0.squaredNorm() / y0.lpNorm<1>()) * signs;
}

AppraisalMatrix predicted_limit_appraisal(const Vector& coefficients, const SignVector& rho) {
    const double sum_sq = coefficients.squaredNorm();
    if (!(sum_sq > 0.0)) throw std::invalid_argument("coefficients must not all be zero");
    if (rho.size() == 0 || rho.has_zero()) throw std::invalid_argument("faction vector must be all +-1");
    const Vector r = rho.as_vector();
    return AppraisalMatrix((sum_sq / coefficients.lpNorm<1>()) * (r * r.transpose()));
}

}  // namespace interplay
