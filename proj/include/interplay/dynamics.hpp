#pragma once

#include "interplay/types.hpp"

#include <cstddef>
#include <functional>

namespace interplay {

struct StepResult {
    AppraisalMatrix X_next;
    InfluenceMatrix W_next;
    OpinionMatrix Y_next;
};

struct SimulationConfig {
    std::size_t max_steps = 1000;
    /// Converged once max_ij |Y(t+1) - Y(t)| drops below this (an exact repeat always counts).
    double convergence_tolerance = 1e-9;
    double row_tolerance = kDefaultRowTolerance;
    /// Snapshot stride; step 0 and the last computed step are always kept.
    std::size_t record_every = 1;

    void validate() const;
};

/// Homophily appraisal: X_ij = <Y_i*, Y_j*> / ||Y_i*||_1.
AppraisalMatrix appraisal_update(const OpinionMatrix& Y, double row_tolerance = kDefaultRowTolerance);

/// Row-normalizes the appraisals by their absolute row sums. Throws DomainViolation on a
/// vanishing row.
InfluenceMatrix influence_from_appraisal(const AppraisalMatrix& X,
                                         double row_tolerance = kDefaultRowTolerance);

/// Signed averaging W * Y. Throws DomainViolation if the result has a zero row.
OpinionMatrix opinion_update(const InfluenceMatrix& W, const OpinionMatrix& Y,
                             double row_tolerance = kDefaultRowTolerance);

/// One step of the coupled dynamics.
StepResult step(const OpinionMatrix& Y, double row_tolerance = kDefaultRowTolerance);

/// Called with (t, result) after every computed step t >= 1; return false to stop early.
using StepObserver = std::function<bool(std::size_t, const StepResult&)>;

/// Iterates `step` from Y0 under `config`, reporting each step to `observer`.
/// A domain violation ends the run and is reported in the returned Termination.
Termination evolve(const OpinionMatrix& Y0, const SimulationConfig& config,
                   const StepObserver& observer);

Trajectory simulate(const OpinionMatrix& Y0, const SimulationConfig& config = {});

/// Single-issue limit (||y||_2^2 / ||y||_1) * sgn(y), reached after one step.
/// Throws DomainViolation if some entry is zero.
Vector single_issue_closed_form(const Vector& y0);

/// Limit appraisal (sum a_k^2 / sum |a_k|) * rho rho^T of an equilibrium [a_1 rho, ..., a_m rho].
AppraisalMatrix predicted_limit_appraisal(const Vector& coefficients, const SignVector& rho);

}  // namespace interplay
