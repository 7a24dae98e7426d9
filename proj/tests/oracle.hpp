#pragma once

// Brute-force reference implementations used only by the tests. They work on plain
// nested vectors with explicit loops and share no code with the library.

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Grid = std::vector<std::vector<double>>;

inline Grid from_eigen(const Eigen::MatrixXd& m) {
    Grid g(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
    return g;
}

inline Eigen::MatrixXd to_eigen(const Grid& g) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(g.empty() ? 0 : g[0].size()));
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = 0; j < g[i].size(); ++j) m(i, j) = g[i][j];
    return m;
}

inline double row_l1(const std::vector<double>& row) {
    double s = 0.0;
    for (double v : row) s += std::fabs(v);
    return s;
}

/// X_ij = sum_k Y_ik Y_jk / ||Y_i*||_1, entry by entry.
inline Grid appraisal(const Grid& y) {
    const std::size_t n = y.size();
    Grid x(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double norm = row_l1(y[i]);
        for (std::size_t j = 0; j < n; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < y[i].size(); ++k) dot += y[i][k] * y[j][k];
            x[i][j] = dot / norm;
        }
    }
    return x;
}

/// W_ij = X_ij / sum_k |X_ik|.
inline Grid influence(const Grid& x) {
    Grid w = x;
    for (auto& row : w) {
        const double norm = row_l1(row);
        for (double& v : row) v /= norm;
    }
    return w;
}

inline Grid product(const Grid& a, const Grid& b) {
    Grid c(a.size(), std::vector<double>(b[0].size(), 0.0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    return c;
}

/// Composite map evaluated directly: Dg(|Y Y^T| 1_n)^{-1} Y Y^T Y.
inline Grid composite(const Grid& y) {
    Grid yt(y[0].size(), std::vector<double>(y.size()));
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y[0].size(); ++j) yt[j][i] = y[i][j];
    const Grid gram = product(y, yt);
    Grid out = product(gram, y);
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double norm = row_l1(gram[i]);
        for (double& v : out[i]) v /= norm;
    }
    return out;
}

inline int sgn(double v, double tol) { return std::fabs(v) <= tol ? 0 : (v > 0 ? 1 : -1); }

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

/// Uniform random matrix for property tests.
inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                                     double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = dist(rng);
    return m;
}

inline std::vector<int> random_signs(std::mt19937_64& rng, std::size_t n) {
    std::vector<int> s(n);
    for (auto& v : s) v = (rng() & 1) ? 1 : -1;
    return s;
}

}  // namespace oracle
