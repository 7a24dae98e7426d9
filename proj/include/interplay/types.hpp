#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace interplay {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default 1-norm threshold under which a row counts as zero.
inline constexpr double kDefaultRowTolerance = 1e-12;
/// Default absolute threshold under which an entry has sign 0.
inline constexpr double kDefaultSignTolerance = 1e-9;

/// Raised when a matrix leaves the model's domain: some row has (numerically) zero 1-norm.
class DomainViolation : public std::runtime_error {
public:
    DomainViolation(std::size_t row, const std::string& what_matrix);

    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// Raised when an input matrix contains NaN or infinity.
class NonFiniteEntry : public std::invalid_argument {
public:
    NonFiniteEntry(std::size_t row, std::size_t col);

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

/// Returns 0 if |value| <= tolerance, otherwise the arithmetic sign.
int sign_of(double value, double tolerance = kDefaultSignTolerance);

/// Entry-wise sign with values in {-1, 0, +1}.
class SignVector {
public:
    SignVector() = default;
    explicit SignVector(std::vector<int> entries);

    /// Sign of every entry of `values` at the given tolerance.
    static SignVector of(const Vector& values, double tolerance = kDefaultSignTolerance);

    std::size_t size() const noexcept { return entries_.size(); }
    int operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<int>& entries() const noexcept { return entries_; }
    bool has_zero() const noexcept;
    Vector as_vector() const;

    friend bool operator==(const SignVector&, const SignVector&) = default;

private:
    std::vector<int> entries_;
};

/// n x m opinions; every row has 1-norm above the row tolerance and all entries are finite.
class OpinionMatrix {
public:
    /// Validates `entries`. Throws NonFiniteEntry or DomainViolation.
    explicit OpinionMatrix(Matrix entries, double row_tolerance = kDefaultRowTolerance);

    std::size_t agents() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t issues() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const Matrix& values() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

    /// Largest absolute entry.
    double max_abs() const { return values_.cwiseAbs().maxCoeff(); }

private:
    Matrix values_;
};

/// Same as constructing an OpinionMatrix; kept as a named entry point for callers.
OpinionMatrix validate_opinion_matrix(const Matrix& entries,
                                      double row_tolerance = kDefaultRowTolerance);

/// n x n interpersonal appraisals. Entry (i, j) is agent i's appraisal of agent j.
class AppraisalMatrix {
public:
    explicit AppraisalMatrix(Matrix entries);

    std::size_t agents() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    const Matrix& values() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

    /// Smallest absolute entry.
    double min_abs() const { return values_.cwiseAbs().minCoeff(); }

private:
    Matrix values_;
};

/// n x n signed influence weights; |W| is row-stochastic.
class InfluenceMatrix {
public:
    explicit InfluenceMatrix(Matrix entries);

    std::size_t agents() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    const Matrix& values() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

private:
    Matrix values_;
};

struct Snapshot {
    std::size_t t = 0;
    Matrix Y;
    std::optional<Matrix> X;  // absent at t = 0
    std::optional<Matrix> W;  // absent at t = 0
};

enum class TerminationStatus { converged, max_steps_reached, domain_violation };

std::string to_string(TerminationStatus status);
TerminationStatus termination_status_from_string(const std::string& name);

struct Termination {
    TerminationStatus status = TerminationStatus::max_steps_reached;
    // converged: first step whose Y is a fixed point (the trajectory also holds step + 1).
    // max_steps_reached: the last computed step.
    // domain_violation: the step that could not be computed.
    std::size_t step = 0;
};

/// Recorded solution sequence of the coupled dynamics.
struct Trajectory {
    std::vector<Snapshot> snapshots;
    Termination termination;

    const Snapshot& first() const { return snapshots.front(); }
    const Snapshot& last() const { return snapshots.back(); }
    /// Last snapshot carrying an appraisal matrix, or nullptr.
    const Snapshot* last_with_appraisal() const;
};

}  // namespace interplay
