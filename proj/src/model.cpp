#include "robust_trim/model.hpp"

#include "robust_trim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace robust_trim {

namespace {

bool all_finite(const Eigen::Ref<const Matrix>& m) { return m.allFinite(); }

} // namespace

Dataset::Dataset(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y))
{
    if (x_.rows() < 1)
        throw InvalidArgument("dataset needs at least one row");
    if (x_.cols() < 2)
        throw InvalidArgument("dataset needs p >= 2 (intercept plus at least one predictor)");
    if (y_.size() != x_.rows())
        throw DimensionMismatch("response length " + std::to_string(y_.size()) + " does not match " +
                                std::to_string(x_.rows()) + " design rows");
    if (!all_finite(x_) || !y_.allFinite())
        throw InvalidArgument("dataset contains non-finite values");
    if ((x_.col(0).array() != 1.0).any())
        throw InvalidArgument("first design column must be identically 1 (intercept)");
}

Dataset Dataset::with_intercept(const Matrix& features, Vector y)
{
    Matrix x(features.rows(), features.cols() + 1);
    x.col(0).setOnes();
    x.rightCols(features.cols()) = features;
    return Dataset(std::move(x), std::move(y));
}

Dataset Dataset::permuted(const std::vector<Index>& order) const
{
    if (static_cast<Index>(order.size()) != n())
        throw DimensionMismatch("permutation length does not match n");
    Matrix x(n(), p());
    Vector y(n());
    for (Index i = 0; i < n(); ++i) {
        x.row(i) = x_.row(order[static_cast<std::size_t>(i)]);
        y[i] = y_[order[static_cast<std::size_t>(i)]];
    }
    return Dataset(std::move(x), std::move(y));
}

void TrimPenaltyConfig::validate(Index n) const
{
    const Index lo = (n + 1) / 2;
    if (h < lo || h > n)
        throw InvalidArgument("h = " + std::to_string(h) + " outside [" + std::to_string(lo) + ", " +
                              std::to_string(n) + "]");
    if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0))
        throw InvalidArgument("penalty weights must be nonnegative");
    if (!(gamma >= 1.0))
        throw InvalidArgument("gamma must be >= 1");
    if (!(tol > 0.0))
        throw InvalidArgument("tol must be positive");
    if (max_iter < 1)
        throw InvalidArgument("max_iter must be positive");
}

Index default_h(Index n)
{
    auto h = static_cast<Index>(std::ceil(0.75 * static_cast<double>(n)));
    return std::clamp(h, (n + 1) / 2, n);
}

TrimSet::TrimSet(std::vector<Index> indices, Index n) : indices_(std::move(indices))
{
    if (n < 1)
        throw InvalidArgument("trim set needs n >= 1");
    std::sort(indices_.begin(), indices_.end());
    if (indices_.empty() || static_cast<Index>(indices_.size()) > n)
        throw InvalidArgument("trim set size must lie in [1, n]");
    if (indices_.front() < 0 || indices_.back() >= n)
        throw InvalidArgument("trim index out of range");
    if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
        throw InvalidArgument("duplicate trim index");
    mask_.assign(static_cast<std::size_t>(n), 0);
    for (Index i : indices_)
        mask_[static_cast<std::size_t>(i)] = 1;
}

TrimSet TrimSet::all(Index n)
{
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    return TrimSet(std::move(idx), n);
}

Vector TrimSet::weights() const
{
    Vector w(n());
    for (Index i = 0; i < n(); ++i)
        w[i] = mask_[static_cast<std::size_t>(i)];
    return w;
}

namespace detail {

void check_dims(const Dataset& data, const Coefficients& beta)
{
    if (beta.size() != data.p())
        throw DimensionMismatch("coefficient length " + std::to_string(beta.size()) + " does not match p = " +
                                std::to_string(data.p()));
}

void check_trim(const Dataset& data, const TrimSet& trim)
{
    if (trim.n() != data.n())
        throw DimensionMismatch("trim set built for n = " + std::to_string(trim.n()) + ", dataset has n = " +
                                std::to_string(data.n()));
}

} // namespace detail

Vector residuals(const Dataset& data, const Coefficients& beta)
{
    detail::check_dims(data, beta);
    return data.y() - data.x() * beta;
}

TrimSet trim_weights(const Vector& residual_sq, Index h)
{
    const Index n = residual_sq.size();
    if (h < 1 || h > n)
        throw InvalidArgument("h = " + std::to_string(h) + " outside [1, " + std::to_string(n) + "]");
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    // (value, index) is a strict total order, so the selected set is unique.
    auto less = [&](Index a, Index b) {
        return residual_sq[a] < residual_sq[b] || (residual_sq[a] == residual_sq[b] && a < b);
    };
    if (h < n)
        std::nth_element(order.begin(), order.begin() + h, order.end(), less);
    order.resize(static_cast<std::size_t>(h));
    return TrimSet(std::move(order), n);
}

double penalty(const Coefficients& beta, const TrimPenaltyConfig& cfg)
{
    const Index first = cfg.penalize_intercept ? 0 : 1;
    const auto tail = beta.tail(beta.size() - first);
    double l1 = 0.0;
    if (cfg.gamma == 1.0)
        l1 = tail.cwiseAbs().sum();
    else
        l1 = tail.cwiseAbs().array().pow(cfg.gamma).sum();
    return cfg.lambda1 * l1 + cfg.lambda2 * tail.squaredNorm();
}

double trimmed_loss(const Dataset& data, const Coefficients& beta, const TrimSet& trim)
{
    detail::check_trim(data, trim);
    const Vector r = residuals(data, beta);
    double s = 0.0;
    for (Index i : trim.indices())
        s += r[i] * r[i];
    return s / static_cast<double>(data.n());
}

double objective(const Dataset& data, const Coefficients& beta, const TrimPenaltyConfig& cfg)
{
    const Vector r = residuals(data, beta);
    const Vector r2 = r.array().square();
    const TrimSet trim = trim_weights(r2, cfg.h);
    double s = 0.0;
    for (Index i : trim.indices())
        s += r2[i];
    return s / static_cast<double>(data.n()) + penalty(beta, cfg);
}

double trimmed_seminorm(const Dataset& data, const Coefficients& delta, const TrimSet& trim)
{
    detail::check_dims(data, delta);
    detail::check_trim(data, trim);
    double s = 0.0;
    for (Index i : trim.indices()) {
        const double f = data.x().row(i).dot(delta);
        s += f * f;
    }
    return s / static_cast<double>(data.n());
}

Normalization normalize_columns(const Dataset& data)
{
    const double sqrt_n = std::sqrt(static_cast<double>(data.n()));
    Matrix x = data.x();
    Vector scale = Vector::Ones(data.p());
    Index rescaled = 0;
    for (Index j = 1; j < data.p(); ++j) {
        const double ratio = x.col(j).norm() / sqrt_n;
        if (ratio == 0.0)
            throw DegenerateColumn("predictor column " + std::to_string(j) + " is identically zero");
        if (ratio > 1.0) {
            scale[j] = 1.0 / ratio;
            x.col(j) *= scale[j];
            ++rescaled;
        }
    }
    return Normalization{Dataset(std::move(x), data.y()), std::move(scale), rescaled};
}

Coefficients denormalize(const Coefficients& beta, const Vector& scale)
{
    if (beta.size() != scale.size())
        throw DimensionMismatch("scale length does not match coefficients");
    return beta.cwiseProduct(scale);
}

} // namespace robust_trim
