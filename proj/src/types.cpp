#include "interplay/types.hpp"

#include <cmath>

namespace interplay {

DomainViolation::DomainViolation(std::size_t row, const std::string& what_matrix)
    : std::runtime_error("domain violation: row " + std::to_string(row) + " of " + what_matrix +
                         " has zero 1-norm"),
      row_(row) {}

NonFiniteEntry::NonFiniteEntry(std::size_t row, std::size_t col)
    : std::invalid_argument("non-finite entry at (" + std::to_string(row) + ", " +
                            std::to_string(col) + ")"),
      row_(row),
      col_(col) {}

int sign_of(double value, double tolerance) {
    if (std::abs(value) <= tolerance) return 0;
    return value > 0.0 ? 1 : -1;
}

SignVector::SignVector(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_) {
        if (e < -1 || e > 1) throw std::invalid_argument("sign vector entries must be -1, 0 or +1");
    }
}

SignVector SignVector::of(const Vector& values, double tolerance) {
    std::vector<int> out(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) out[i] = sign_of(values(i), tolerance);
    return SignVector(std::move(out));
}

bool SignVector::has_zero() const noexcept {
    for (int e : entries_)
        if (e == 0) return true;
    return false;
}

Vector SignVector::as_vector() const {
    Vector v(static_cast<Eigen::Index>(entries_.size()));
    for (std::size_t i = 0; i < entries_.size(); ++i) v(i) = entries_[i];
    return v;
}

OpinionMatrix::OpinionMatrix(Matrix entries, double row_tolerance) : values_(std::move(entries)) {
    if (values_.rows() < 1 || values_.cols() < 1)
        throw std::invalid_argument("opinion matrix needs at least one agent and one issue");
    if (row_tolerance < 0.0) throw std::invalid_argument("row tolerance must be non-negative");
    for (Eigen::Index i = 0; i < values_.rows(); ++i)
        for (Eigen::Index j = 0; j < values_.cols(); ++j)
            if (!std::isfinite(values_(i, j))) throw NonFiniteEntry(i, j);
    for (Eigen::Index i = 0; i < values_.rows(); ++i)
        if (values_.row(i).lpNorm<1>() <= row_tolerance) throw DomainViolation(i, "opinion matrix");
}

OpinionMatrix validate_opinion_matrix(const Matrix& entries, double row_tolerance) {
    return OpinionMatrix(entries, row_tolerance);
}

AppraisalMatrix::AppraisalMatrix(Matrix entries) : values_(std::move(entries)) {
    if (values_.rows() != values_.cols()) throw std::invalid_argument("appraisal matrix must be square");
}

InfluenceMatrix::InfluenceMatrix(Matrix entries) : values_(std::move(entries)) {
    if (values_.rows() != values_.cols()) throw std::invalid_argument("influence matrix must be square");
}

std::string to_string(TerminationStatus status) {
    switch (status) {
        case TerminationStatus::converged: return "converged";
        case TerminationStatus::max_steps_reached: return "max_steps_reached";
        case TerminationStatus::domain_violation: return "domain_violation";
    }
    return "unknown";
}

TerminationStatus termination_status_from_string(const std::string& name) {
    if (name == "converged") return TerminationStatus::converged;
    if (name == "max_steps_reached") return TerminationStatus::max_steps_reached;
    if (name == "domain_violation") return TerminationStatus::domain_violation;
    throw std::invalid_argument("unknown termination status '" + name + "'");
}

const Snapshot* Trajectory::last_with_appraisal() const {
    for (auto it = snapshots.rbegin(); it != snapshots.rend(); ++it)
        if (it->X) return &*it;
    return nullptr;
}

}  // namespace interplay
