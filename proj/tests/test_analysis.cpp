#include "doctest.h"

#include "interplay/analysis.hpp"

#include "oracle.hpp"

#include <random>

using namespace interplay;

namespace {

Matrix rank_one(const std::vector<int>& rho) {
    Vector r(static_cast<Eigen::Index>(rho.size()));
    for (std::size_t i = 0; i < rho.size(); ++i) r(i) = rho[i];
    return r * r.transpose();
}

Matrix worked_example() {
    Matrix y(4, 3);
    y << 1, 2, 5, -1, -2, 5, -1, -2, 5, 1, 2, 5;
    return y;
}

// Balanced sign structure with random magnitudes, then each entry flipped with probability p.
Matrix perturbed_balanced(std::mt19937_64& rng, std::size_t n, double p) {
    const auto rho = oracle::random_signs(rng, n);
    Matrix x = oracle::random_matrix(rng, n, n, 0.1, 2.0);
    std::bernoulli_distribution flip(p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            x(i, j) *= rho[i] * rho[j];
            if (flip(rng)) x(i, j) = -x(i, j);
        }
    return x;
}

}  // namespace

TEST_CASE("triad balance test") {
    SUBCASE("rank-one sign structure") {
        const BalanceVerdict v = is_socially_balanced_triads(AppraisalMatrix(rank_one({1, 1, -1, -1})));
        CHECK(v.balanced);
        REQUIRE(v.partition);
        CHECK(v.partition->labels().entries() == std::vector<int>{1, 1, -1, -1});
        CHECK_FALSE(v.witness);
    }
    SUBCASE("all-negative off-diagonal triangle") {
        Matrix x = -Matrix::Ones(3, 3);
        x.diagonal().setOnes();
        const BalanceVerdict v = is_socially_balanced_triads(AppraisalMatrix(x));
        CHECK_FALSE(v.balanced);
        CHECK_FALSE(v.partition);
        REQUIRE(v.witness);
        const auto* triad = std::get_if<ViolatingTriad>(&*v.witness);
        REQUIRE(triad != nullptr);
        CHECK(triad->agents == std::array<std::size_t, 3>{0, 1, 2});
    }
    SUBCASE("uniform limit appraisal is one faction") {
        const BalanceVerdict v = is_socially_balanced_triads(AppraisalMatrix(5.0 * Matrix::Ones(4, 4)));
        CHECK(v.balanced);
        CHECK(v.partition->single_faction());
    }
    SUBCASE("zero entry") {
        Matrix x = Matrix::Ones(3, 3);
        x(1, 2) = 1e-12;
        const BalanceVerdict v = is_socially_balanced_triads(AppraisalMatrix(x));
        CHECK_FALSE(v.balanced);
        const auto* zero = std::get_if<ZeroEntry>(&*v.witness);
        REQUIRE(zero != nullptr);
        CHECK(zero->row == 1);
        CHECK(zero->col == 2);
    }
    SUBCASE("non-positive diagonal") {
        Matrix x = Matrix::Ones(3, 3);
        x(2, 2) = -1.0;
        const BalanceVerdict v = is_socially_balanced_triads(AppraisalMatrix(x));
        CHECK_FALSE(v.balanced);
        const auto* diag = std::get_if<NonPositiveDiagonal>(&*v.witness);
        REQUIRE(diag != nullptr);
        CHECK(diag->index == 2);
    }
    SUBCASE("sign-asymmetric two-agent matrix fails on a repeated-index triad") {
        Matrix x(2, 2);
        x << 1, 1, -1, 1;
        CHECK_FALSE(is_socially_balanced_triads(AppraisalMatrix(x)).balanced);
    }
}

TEST_CASE("row balance test") {
    SUBCASE("same verdicts as the triad test on the basic examples") {
        Matrix triangle = -Matrix::Ones(3, 3);
        triangle.diagonal().setOnes();
        for (const Matrix& x : {rank_one({1, 1, -1, -1}), triangle, Matrix(5.0 * Matrix::Ones(4, 4))}) {
            const BalanceVerdict rows = is_socially_balanced_rows(AppraisalMatrix(x));
            const BalanceVerdict triads = is_socially_balanced_triads(AppraisalMatrix(x));
            CHECK(rows.balanced == triads.balanced);
            if (rows.balanced) CHECK(*rows.partition == *triads.partition);
        }
    }
    SUBCASE("rows neither equal nor opposite") {
        Matrix x(2, 2);
        x << 1, 1, 1, -1;
        CHECK_FALSE(is_socially_balanced_rows(AppraisalMatrix(x)).balanced);
    }
    SUBCASE("two singleton factions") {
        Matrix x(2, 2);
        x << 1, -1, -1, 1;
        const BalanceVerdict v = is_socially_balanced_rows(AppraisalMatrix(x));
        CHECK(v.balanced);
        CHECK(v.partition->labels().entries() == std::vector<int>{1, -1});
    }
    SUBCASE("mismatch witness") {
        Matrix x = Matrix::Ones(3, 3);
        x(2, 0) = -1;
        x(0, 2) = -1;
        x(2, 1) = -1;
        const BalanceVerdict v = is_socially_balanced_rows(AppraisalMatrix(x));
        CHECK_FALSE(v.balanced);
        CHECK(std::holds_alternative<MismatchedRows>(*v.witness));
    }
}

TEST_CASE("triad and row balance tests agree on random non-zero matrices") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    std::uniform_real_distribution<double> flip_rate(0.0, 0.3);
    int balanced = 0;
    int disagreements = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const std::size_t n = dim(rng);
        const Matrix x = trial % 3 == 0 ? oracle::random_matrix(rng, n, n, -1.0, 1.0)
                                        : perturbed_balanced(rng, n, trial % 3 == 1 ? 0.0 : flip_rate(rng));
        const BalanceVerdict a = is_socially_balanced_triads(AppraisalMatrix(x));
        const BalanceVerdict b = is_socially_balanced_rows(AppraisalMatrix(x));
        if (a.balanced != b.balanced || (a.balanced && !(*a.partition == *b.partition))) ++disagreements;
        balanced += a.balanced ? 1 : 0;
    }
    CHECK(disagreements == 0);
    CHECK(balanced > 2000);
}

TEST_CASE("modulus sign-consensus") {
    SUBCASE("shared pattern") {
        Matrix y(3, 3);
        y << 1, 2, 5, 0.5, 3, 1, 2, 0.1, 7;
        CHECK(modulus_sign_consensus(OpinionMatrix(y)).kind == ConsensusKind::sign_consensus);
    }
    SUBCASE("zero columns are ignored") {
        Matrix y(4, 3);
        y << 0, 0, 5, 0, 0, 5, 0, 0, 5, 0, 0, 5;
        const ConsensusVerdict v = modulus_sign_consensus(OpinionMatrix(y));
        CHECK(v.kind == ConsensusKind::sign_consensus);
        CHECK(v.partition->single_faction());
    }
    SUBCASE("opposite patterns") {
        Matrix y(2, 2);
        y << 1, -2, -3, 4;
        const ConsensusVerdict v = modulus_sign_consensus(OpinionMatrix(y));
        CHECK(v.kind == ConsensusKind::bipartite_sign_consensus);
        CHECK(v.partition->labels().entries() == std::vector<int>{1, -1});
    }
    SUBCASE("agent 0 is always labeled +1") {
        Matrix y(3, 2);
        y << -1, 2, 1, -2, -3, 1;
        const ConsensusVerdict v = modulus_sign_consensus(OpinionMatrix(y));
        CHECK(v.partition->labels().entries() == std::vector<int>{1, -1, 1});
    }
    SUBCASE("unrelated patterns") {
        CHECK(modulus_sign_consensus(OpinionMatrix(worked_example())).kind == ConsensusKind::none);
        CHECK_FALSE(modulus_sign_consensus(OpinionMatrix(worked_example())).partition);
    }
}

TEST_CASE("modulus consensus") {
    Matrix limit(4, 3);
    limit << 0, 0, 5, 0, 0, 5, 0, 0, 5, 0, 0, 5;
    CHECK(modulus_consensus(OpinionMatrix(limit)).kind == ConsensusKind::consensus);

    Matrix bipartite(2, 2);
    bipartite << 1, -2, -1, 2;
    const ConsensusVerdict v = modulus_consensus(OpinionMatrix(bipartite));
    CHECK(v.kind == ConsensusKind::bipartite_consensus);
    CHECK(v.partition->labels().entries() == std::vector<int>{1, -1});

    Matrix unequal(2, 2);
    unequal << 1, -2, -2, 4;
    CHECK(modulus_consensus(OpinionMatrix(unequal)).kind == ConsensusKind::none);

    Matrix near(2, 1);
    near << 1.0, -1.0 - 1e-7;
    CHECK(modulus_consensus(OpinionMatrix(near), 1e-6).kind == ConsensusKind::bipartite_consensus);
    CHECK(modulus_consensus(OpinionMatrix(near), 1e-9).kind == ConsensusKind::none);
}

TEST_CASE("modulus consensus implies modulus sign-consensus") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<std::size_t> dim(1, 6);
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t n = dim(rng);
        const std::size_t m = dim(rng);
        Matrix y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
        const Matrix base = oracle::random_matrix(rng, 1, m);
        const auto rho = oracle::random_signs(rng, n);
        for (std::size_t i = 0; i < n; ++i) y.row(i) = rho[i] * base.row(0);
        if (trial % 2) y += 1e-3 * oracle::random_matrix(rng, n, m);
        const OpinionMatrix Y(y);
        if (modulus_consensus(Y).kind != ConsensusKind::none)
            CHECK(modulus_sign_consensus(Y).kind != ConsensusKind::none);
    }
}

TEST_CASE("classify_equilibrium") {
    SUBCASE("aligned columns") {
        Vector rho(3);
        rho << 1, -1, 1;
        Matrix y(3, 2);
        y.col(0) = 2.0 * rho;
        y.col(1) = -3.0 * rho;
        const auto result = classify_equilibrium(OpinionMatrix(y));
        const auto* eq = std::get_if<EquilibriumDescription>(&result);
        REQUIRE(eq != nullptr);
        CHECK(eq->rho.labels().entries() == std::vector<int>{1, -1, 1});
        CHECK(eq->coefficients(0) == doctest::Approx(2.0));
        CHECK(eq->coefficients(1) == doctest::Approx(-3.0));
        CHECK(eq->residual <= 1e-12);
    }
    SUBCASE("faction vector is normalized to agent 0") {
        Matrix y(2, 1);
        y << -2, 2;
        const auto result = classify_equilibrium(OpinionMatrix(y));
        const auto& eq = std::get<EquilibriumDescription>(result);
        CHECK(eq.rho.labels().entries() == std::vector<int>{1, -1});
        CHECK(eq.coefficients(0) == doctest::Approx(-2.0));
    }
    SUBCASE("zero columns get coefficient zero") {
        Matrix y(4, 3);
        y << 0, 0, 5, 0, 0, 5, 0, 0, 5, 0, 0, 5;
        const auto result = classify_equilibrium(OpinionMatrix(y));
        const auto& eq = std::get<EquilibriumDescription>(result);
        CHECK(eq.rho.single_faction());
        CHECK(eq.coefficients(0) == 0.0);
        CHECK(eq.coefficients(1) == 0.0);
        CHECK(eq.coefficients(2) == doctest::Approx(5.0));
    }
    SUBCASE("worked initial condition is not an equilibrium") {
        const auto result = classify_equilibrium(OpinionMatrix(worked_example()));
        const auto* no = std::get_if<NotAnEquilibrium>(&result);
        REQUIRE(no != nullptr);
        REQUIRE(no->violating_column);
        CHECK(*no->violating_column == 2);  // column 0 fixes rho, the all-5 column breaks it
        CHECK(oracle::max_abs_diff(step(OpinionMatrix(worked_example())).Y_next.values(), worked_example()) > 1.0);
    }
}

TEST_CASE("classification succeeds exactly when the step residual is small") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::size_t> dim(1, 7);
    std::uniform_real_distribution<double> coef(0.2, 2.0);
    const double tol = 1e-9;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = dim(rng);
        const std::size_t m = dim(rng);
        Matrix y;
        if (trial % 2 == 0) {
            const auto rho = oracle::random_signs(rng, n);
            const auto signs = oracle::random_signs(rng, m);
            y.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
            for (std::size_t j = 0; j < m; ++j) {
                const double a = signs[j] * coef(rng);
                for (std::size_t i = 0; i < n; ++i) y(i, j) = a * rho[i];
            }
        } else {
            // Opinions sharing one pattern keep every appraisal away from zero.
            const auto rho = oracle::random_signs(rng, n);
            y = oracle::random_matrix(rng, n, m, 0.2, 1.0);
            for (std::size_t i = 0; i < n; ++i) y.row(i) *= rho[i];
        }
        const OpinionMatrix Y(y);
        REQUIRE(appraisal_update(Y).min_abs() > 1e-3);
        const double residual = oracle::max_abs_diff(step(Y).Y_next.values(), y);
        const bool classified = std::holds_alternative<EquilibriumDescription>(classify_equilibrium(Y, tol));
        CHECK(classified == (residual <= tol));
    }
}

TEST_CASE("nonvanishing_check") {
    SUBCASE("worked example keeps appraisals near 5") {
        const Trajectory traj = simulate(OpinionMatrix(worked_example()));
        CHECK(nonvanishing_check(traj));
    }
    SUBCASE("orthogonal opinion blocks vanish") {
        Matrix y(4, 2);
        y << 1, 0, -1, 0, 0, 2, 0, 3;
        SimulationConfig config;
        config.max_steps = 1000;
        const Trajectory traj = simulate(OpinionMatrix(y), config);
        CHECK_FALSE(nonvanishing_check(traj));
    }
    SUBCASE("single issue") {
        Matrix y(2, 1);
        y << 1, -2;
        CHECK(nonvanishing_check(simulate(OpinionMatrix(y))));
    }
    SUBCASE("threshold and window") {
        const Trajectory traj = simulate(OpinionMatrix(worked_example()));
        CHECK(nonvanishing_check(traj, 1, 10, 2.0));
        CHECK_FALSE(nonvanishing_check(traj, 1, 10, 4.0));
        CHECK_THROWS_AS(nonvanishing_check(traj, 10, 1, 1.0), std::invalid_argument);
    }
    SUBCASE("domain violation before the window end") {
        SimulationConfig config;
        config.row_tolerance = 6.0;
        CHECK_FALSE(nonvanishing_check(simulate(OpinionMatrix(worked_example(), 6.0), config)));
    }
    SUBCASE("trajectory too short for the window") {
        std::mt19937_64 rng(4);
        SimulationConfig config;
        config.max_steps = 20;
        config.convergence_tolerance = 0.0;
        const Trajectory traj = simulate(OpinionMatrix(oracle::random_matrix(rng, 9, 4)), config);
        if (traj.termination.status == TerminationStatus::max_steps_reached)
            CHECK_THROWS_AS(nonvanishing_check(traj), std::invalid_argument);
    }
}

TEST_CASE("local_stability_probe") {
    Vector a(2);
    a << 2, -3;
    const EquilibriumDescription eq{FactionPartition(SignVector({1, -1, 1})), a, 0.0};

    SUBCASE("perturbed trajectories stay close") {
        const StabilityReport r = local_stability_probe(eq, 0.1, 100, 5);
        CHECK(r.fraction_returning == 1.0);
        CHECK(r.trials == 100);
        CHECK(r.max_final_distance <= 0.2);
    }
    SUBCASE("zero perturbation") {
        const StabilityReport r = local_stability_probe(eq, 0.0, 10, 5);
        CHECK(r.fraction_returning == 1.0);
        CHECK(r.max_final_distance <= 1e-12);
    }
    SUBCASE("same seed, same report") {
        const StabilityReport a1 = local_stability_probe(eq, 0.5, 20, 123);
        const StabilityReport a2 = local_stability_probe(eq, 0.5, 20, 123);
        CHECK(a1.fraction_returning == a2.fraction_returning);
        CHECK(a1.max_final_distance == a2.max_final_distance);
    }
    SUBCASE("hypotheses are enforced") {
        Vector with_zero(2);
        with_zero << 2, 0;
        const EquilibriumDescription bad{FactionPartition(SignVector({1, -1, 1})), with_zero, 0.0};
        CHECK_THROWS_AS(local_stability_probe(bad, 0.1, 10, 1), std::invalid_argument);
        CHECK_THROWS_AS(local_stability_probe(eq, 2.5, 10, 1), std::invalid_argument);
        CHECK_THROWS_AS(local_stability_probe(eq, -0.1, 10, 1), std::invalid_argument);
        CHECK_THROWS_AS(local_stability_probe(eq, 0.1, 0, 1), std::invalid_argument);
    }
}
