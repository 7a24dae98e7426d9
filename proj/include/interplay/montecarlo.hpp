#pragma once

#include "interplay/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace interplay {

struct ExperimentParams {
    std::size_t agents = 9;
    std::size_t issues = 4;
    double support_half_width = 1.0;
    std::size_t runs = 27000;
    std::uint64_t master_seed = 0;
    std::size_t window_start = 100;
    std::size_t window_end = 1000;
    double threshold = 1e-3;
    double epsilon = 0.01;
    double xi = 0.01;
    /// Worker threads; 0 picks the hardware concurrency. Does not affect results.
    std::size_t threads = 0;

    void validate() const;
};

struct RunRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    bool nonvanishing = false;  // the Z indicator
    Termination termination;
    /// min over the window of min_ij |X_ij(t)|; 0 when the window was never reached.
    double window_min_appraisal = 0.0;
    std::size_t resamples = 0;
    bool final_balanced = false;
    bool final_sign_consensus = false;
};

struct MonteCarloReport {
    ExperimentParams params;
    std::size_t runs_requested = 0;
    std::size_t runs_completed = 0;
    std::size_t successes = 0;
    double p_hat = 0.0;
    std::size_t chernoff_minimum_runs = 0;
    std::vector<RunRecord> records;  // ordered by run index
};

struct GenericSample {
    OpinionMatrix opinions;
    std::size_t resamples = 0;
};

/// Entries i.i.d. uniform on [-a, a] from a stream seeded by `seed`; rows whose 1-norm is at or
/// below the row tolerance are redrawn and counted.
GenericSample generic_initial_sample(std::size_t agents, std::size_t issues, double support_half_width,
                                     std::uint64_t seed);

OpinionMatrix generic_initial(std::size_t agents, std::size_t issues, double support_half_width,
                              std::uint64_t seed);

/// Smallest N with N >= ln(2 / xi) / (2 epsilon^2).
std::size_t chernoff_sample_size(double epsilon, double xi);

/// Evaluates the non-vanishing indicator for one initial condition without storing the trajectory.
RunRecord run_single(const OpinionMatrix& Y0, const ExperimentParams& params);

MonteCarloReport run_experiment(const ExperimentParams& params);

/// Same protocol on caller-supplied initial conditions; `params.runs` is replaced by their count.
MonteCarloReport run_experiment(const ExperimentParams& params, std::span<const OpinionMatrix> initial);

}  // namespace interplay
