#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace robust_trim {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Coefficient vector of length p; entry 0 is the intercept.
using Coefficients = Eigen::VectorXd;

/**
 * Regression data: an n x p design whose first column is identically one
 * (the intercept) and a response of length n. Immutable once built.
 */
class Dataset
{
public:
    Dataset(Matrix x, Vector y);

    // Prepends the intercept column to an n x (p-1) feature matrix.
    static Dataset with_intercept(const Matrix& features, Vector y);

    const Matrix& x() const noexcept { return x_; }
    const Vector& y() const noexcept { return y_; }
    Index n() const noexcept { return x_.rows(); }
    Index p() const noexcept { return x_.cols(); }

    // Dataset whose row i is row order[i] of this one.
    Dataset permuted(const std::vector<Index>& order) const;

private:
    Matrix x_;
    Vector y_;
};

/**
 * Knobs of the penalized trimmed objective
 *
 *   (1/n) sum_{i in h smallest r_i^2} r_i^2 + lambda1 sum_j |b_j|^gamma + lambda2 ||b||_2^2
 *
 * The loss is divided by n, not h. The intercept is penalized unless
 * penalize_intercept is switched off.
 */
struct TrimPenaltyConfig
{
    Index h = 0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double gamma = 1.0;
    double tol = 1e-8;
    int max_iter = 10000;
    bool penalize_intercept = true;

    // Throws InvalidArgument unless ceil(n/2) <= h <= n and the penalties are admissible.
    void validate(Index n) const;
};

// ceil(0.75 n), clamped into [ceil(n/2), n].
Index default_h(Index n);

/**
 * A subset of exactly h row indices out of n, i.e. one 0/1 diagonal
 * trimming matrix. Indices are kept sorted ascending.
 */
class TrimSet
{
public:
    TrimSet(std::vector<Index> indices, Index n);

    static TrimSet all(Index n);

    const std::vector<Index>& indices() const noexcept { return indices_; }
    Index h() const noexcept { return static_cast<Index>(indices_.size()); }
    Index n() const noexcept { return static_cast<Index>(mask_.size()); }
    bool contains(Index i) const { return mask_[static_cast<std::size_t>(i)] != 0; }

    // 0/1 vector of length n.
    Vector weights() const;

    friend bool operator==(const TrimSet& a, const TrimSet& b) { return a.indices_ == b.indices_ && a.n() == b.n(); }

private:
    std::vector<Index> indices_;
    std::vector<std::uint8_t> mask_;
};

// r_i = y_i - v_i^T beta.
Vector residuals(const Dataset& data, const Coefficients& beta);

// Indices of the h smallest squared residuals; ties broken by lower row index.
TrimSet trim_weights(const Vector& residual_sq, Index h);

// lambda1 sum |b_j|^gamma + lambda2 sum b_j^2 over the penalized coordinates.
double penalty(const Coefficients& beta, const TrimPenaltyConfig& cfg);

// (1/n) sum_{i in trim} r_i(beta)^2.
double trimmed_loss(const Dataset& data, const Coefficients& beta, const TrimSet& trim);

// Full penalized trimmed objective with the trim set recomputed from beta.
double objective(const Dataset& data, const Coefficients& beta, const TrimPenaltyConfig& cfg);

// (1/n) sum_{i in trim} (v_i^T delta)^2.
double trimmed_seminorm(const Dataset& data, const Coefficients& delta, const TrimSet& trim);

struct Normalization
{
    Dataset data;
    // Column j of data.x() equals the original column times scale[j].
    Vector scale;
    Index rescaled_columns = 0;
};

// Shrinks every column with ||x_j||_2 / sqrt(n) > 1 down to ratio 1. Compliant
// columns are left untouched. Throws DegenerateColumn on an all-zero column.
Normalization normalize_columns(const Dataset& data);

// Maps coefficients fitted on the normalized design back to the original scale.
Coefficients denormalize(const Coefficients& beta, const Vector& scale);

namespace detail {
void check_dims(const Dataset& data, const Coefficients& beta);
void check_trim(const Dataset& data, const TrimSet& trim);
} // namespace detail

} // namespace robust_trim
