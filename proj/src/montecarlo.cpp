#include "interplay/montecarlo.hpp"

#include "interplay/analysis.hpp"
#include "interplay/dynamics.hpp"
#include "interplay/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

namespace interplay {

void ExperimentParams::validate() const {
    if (agents < 1 || issues < 1) throw std::invalid_argument("agents and issues must be positive");
    if (!(support_half_width > 0.0) || !std::isfinite(support_half_width))
        throw std::invalid_argument("support half-width must be positive");
    if (runs < 1) throw std::invalid_argument("runs must be positive");
    if (window_start >= window_end) throw std::invalid_argument("window_start must be below window_end");
    if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
}

GenericSample generic_initial_sample(std::size_t agents, std::size_t issues, double support_half_width,
                                     std::uint64_t seed) {
    if (agents < 1 || issues < 1) throw std::invalid_argument("agents and issues must be positive");
    if (!(support_half_width > 0.0)) throw std::invalid_argument("support half-width must be positive");
    UniformSource uniform(seed);
    const double a = support_half_width;
    Matrix y(static_cast<Eigen::Index>(agents), static_cast<Eigen::Index>(issues));
    std::size_t resamples = 0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
        for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) = uniform(-a, a);
        while (y.row(i).lpNorm<1>() <= kDefaultRowTolerance) {
            ++resamples;
            for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) = uniform(-a, a);
        }
    }
    return GenericSample{OpinionMatrix(std::move(y)), resamples};
}

OpinionMatrix generic_initial(std::size_t agents, std::size_t issues, double support_half_width,
                              std::uint64_t seed) {
    return generic_initial_sample(agents, issues, support_half_width, seed).opinions;
}

std::size_t chernoff_sample_size(double epsilon, double xi) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
    if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("xi must lie in (0, 1)");
    return static_cast<std::size_t>(std::ceil(std::log(2.0 / xi) / (2.0 * epsilon * epsilon)));
}

RunRecord run_single(const OpinionMatrix& Y0, const ExperimentParams& params) {
    SimulationConfig config;
    config.max_steps = params.window_end;
    config.convergence_tolerance = 0.0;  // stop only on an exact repeat

    RunRecord record;
    double window_min = std::numeric_limits<double>::infinity();
    std::optional<StepResult> last;
    record.termination = evolve(Y0, config, [&](std::size_t t, const StepResult& r) {
        if (t >= params.window_start) window_min = std::min(window_min, r.X_next.min_abs());
        last = r;
        return true;
    });

    switch (record.termination.status) {
        case TerminationStatus::domain_violation:
            record.nonvanishing = false;
            break;
        case TerminationStatus::converged:
            // Y repeated exactly, so every later appraisal equals the last one computed.
            window_min = std::min(window_min, last->X_next.min_abs());
            [[fallthrough]];
        case TerminationStatus::max_steps_reached:
            record.nonvanishing = window_min >= params.threshold;
            break;
    }
    record.window_min_appraisal = std::isfinite(window_min) ? window_min : 0.0;
    if (last) {
        record.final_balanced = is_socially_balanced_rows(last->X_next).balanced;
        record.final_sign_consensus = modulus_sign_consensus(last->Y_next).kind != ConsensusKind::none;
    }
    return record;
}

namespace {

using InitialFactory = std::function<GenericSample(std::size_t index, std::uint64_t seed)>;

MonteCarloReport run_batch(const ExperimentParams& params, std::size_t count, const InitialFactory& make_initial) {
    MonteCarloReport report;
    report.params = params;
    report.params.runs = count;
    report.runs_requested = count;
    report.chernoff_minimum_runs = chernoff_sample_size(params.epsilon, params.xi);
    report.records.resize(count);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            const std::uint64_t seed = derive_seed(params.master_seed, i);
            GenericSample sample = make_initial(i, seed);
            RunRecord record = run_single(sample.opinions, params);
            record.index = i;
            record.seed = seed;
            record.resamples = sample.resamples;
            report.records[i] = std::move(record);
        }
    };

    std::size_t threads = params.threads != 0 ? params.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
    }

    report.runs_completed = report.records.size();
    for (const RunRecord& r : report.records) report.successes += r.nonvanishing ? 1 : 0;
    report.p_hat = static_cast<double>(report.successes) / static_cast<double>(report.runs_completed);
    return report;
}

}  // namespace

MonteCarloReport run_experiment(const ExperimentParams& params) {
    params.validate();
    return run_batch(params, params.runs, [&](std::size_t, std::uint64_t seed) {
        return generic_initial_sample(params.agents, params.issues, params.support_half_width, seed);
    });
}

MonteCarloReport run_experiment(const ExperimentParams& params, std::span<const OpinionMatrix> initial) {
    ExperimentParams adjusted = params;
    adjusted.runs = initial.size();
    adjusted.validate();
    return run_batch(adjusted, initial.size(), [&](std::size_t index, std::uint64_t) {
        return GenericSample{initial[index], 0};
    });
}

}  // namespace interplay
