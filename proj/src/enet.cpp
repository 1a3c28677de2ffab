#include "robust_trim/enet.hpp"

#include "robust_trim/errors.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>

namespace robust_trim {

namespace {

SolveObserver& observer_slot()
{
    static SolveObserver slot;
    return slot;
}

struct Restricted
{
    Matrix x;
    Vector y;
};

Restricted restrict_rows(const Dataset& data, const TrimSet& trim)
{
    Restricted r{Matrix(trim.h(), data.p()), Vector(trim.h())};
    Index k = 0;
    for (Index i : trim.indices()) {
        r.x.row(k) = data.x().row(i);
        r.y[k] = data.y()[i];
        ++k;
    }
    return r;
}

double penalty_weight(Index j, const EnetOptions& opts) { return (j == 0 && !opts.penalize_intercept) ? 0.0 : 1.0; }

double kkt_from_gradient(const Vector& loss_grad, const Coefficients& beta, const EnetOptions& opts)
{
    double worst = 0.0;
    for (Index j = 0; j < beta.size(); ++j) {
        const double w = penalty_weight(j, opts);
        const double l1 = w * opts.lambda1;
        double v;
        if (beta[j] != 0.0)
            v = std::abs(loss_grad[j] + l1 * (beta[j] > 0 ? 1.0 : -1.0) + 2.0 * w * opts.lambda2 * beta[j]);
        else
            v = std::max(0.0, std::abs(loss_grad[j]) - l1);
        worst = std::max(worst, v);
    }
    return worst;
}

double restricted_value(const Restricted& sub, double n, const Coefficients& beta, const EnetOptions& opts)
{
    const double loss = (sub.y - sub.x * beta).squaredNorm() / n;
    double pen = 0.0;
    for (Index j = 0; j < beta.size(); ++j) {
        const double w = penalty_weight(j, opts);
        pen += w * (opts.lambda1 * std::abs(beta[j]) + opts.lambda2 * beta[j] * beta[j]);
    }
    return loss + pen;
}

void validate(const Dataset& data, const TrimSet& trim, const EnetOptions& opts)
{
    detail::check_trim(data, trim);
    if (!(opts.lambda1 >= 0.0) || !(opts.lambda2 >= 0.0) || !std::isfinite(opts.lambda1) ||
        !std::isfinite(opts.lambda2))
        throw InvalidArgument("penalty weights must be finite and nonnegative");
    if (!(opts.tol > 0.0))
        throw InvalidArgument("tol must be positive");
    if (opts.max_iter < 1)
        throw InvalidArgument("max_iter must be positive");
}

SubproblemSolution least_squares(const Restricted& sub, double n, const EnetOptions& opts)
{
    SubproblemSolution sol;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub.x);
    sol.beta = cod.solve(sub.y);
    sol.rank_deficient = cod.rank() < sub.x.cols();
    sol.iterations = 1;
    const Vector grad = -(2.0 / n) * (sub.x.transpose() * (sub.y - sub.x * sol.beta));
    sol.kkt_residual = kkt_from_gradient(grad, sol.beta, opts);
    sol.converged = sol.kkt_residual <= opts.tol;
    if (opts.record_trace)
        sol.trace.push_back(restricted_value(sub, n, sol.beta, opts));
    return sol;
}

SubproblemSolution coordinate_descent(const Restricted& sub, double n, const EnetOptions& opts,
                                      Coefficients beta)
{
    const Index p = sub.x.cols();
    Vector col_sq(p);
    for (Index j = 0; j < p; ++j)
        col_sq[j] = sub.x.col(j).squaredNorm() / n;

    SubproblemSolution sol;
    Vector r = sub.y - sub.x * beta;
    if (opts.record_trace)
        sol.trace.push_back(restricted_value(sub, n, beta, opts));

    for (int sweep = 1; sweep <= opts.max_iter; ++sweep) {
        double max_move = 0.0;
        for (Index j = 0; j < p; ++j) {
            const double w = penalty_weight(j, opts);
            const double denom = col_sq[j] + w * opts.lambda2;
            const double old = beta[j];
            double fresh = 0.0;
            if (denom > 0.0) {
                const double z = sub.x.col(j).dot(r) / n + col_sq[j] * old;
                fresh = soft_threshold(z, 0.5 * w * opts.lambda1) / denom;
            }
            if (fresh != old) {
                r.noalias() -= (fresh - old) * sub.x.col(j);
                beta[j] = fresh;
                max_move = std::max(max_move, std::abs(fresh - old));
            }
        }
        sol.iterations = sweep;
        if (opts.record_trace)
            sol.trace.push_back(restricted_value(sub, n, beta, opts));
        if (max_move <= opts.tol) {
            // Incremental residual updates drift; certify on a fresh one.
            r = sub.y - sub.x * beta;
            const Vector grad = -(2.0 / n) * (sub.x.transpose() * r);
            sol.kkt_residual = kkt_from_gradient(grad, beta, opts);
            if (sol.kkt_residual <= opts.tol) {
                sol.converged = true;
                break;
            }
        }
    }
    if (!sol.converged) {
        const Vector grad = -(2.0 / n) * (sub.x.transpose() * (sub.y - sub.x * beta));
        sol.kkt_residual = kkt_from_gradient(grad, beta, opts);
    }
    sol.beta = std::move(beta);
    return sol;
}

} // namespace

double soft_threshold(double z, double t)
{
    if (z > t)
        return z - t;
    if (z < -t)
        return z + t;
    return 0.0;
}

EnetOptions enet_options(const TrimPenaltyConfig& cfg)
{
    EnetOptions opts;
    opts.lambda1 = cfg.lambda1;
    opts.lambda2 = cfg.lambda2;
    opts.tol = cfg.tol;
    opts.max_iter = cfg.max_iter;
    opts.penalize_intercept = cfg.penalize_intercept;
    return opts;
}

SubproblemSolution solve_enet_on_subset(const Dataset& data, const TrimSet& trim, const EnetOptions& opts,
                                        const std::optional<Coefficients>& warm_start)
{
    validate(data, trim, opts);
    if (warm_start)
        detail::check_dims(data, *warm_start);
    const Restricted sub = restrict_rows(data, trim);
    const auto n = static_cast<double>(data.n());

    SubproblemSolution sol;
    if (opts.lambda1 == 0.0 && opts.lambda2 == 0.0) {
        sol = least_squares(sub, n, opts);
    } else {
        sol = coordinate_descent(sub, n, opts, warm_start ? *warm_start : Coefficients::Zero(data.p()));
    }
    if (const auto& obs = observer_slot())
        obs(data, trim, opts, sol);
    return sol;
}

double restricted_objective(const Dataset& data, const TrimSet& trim, const Coefficients& beta,
                            const EnetOptions& opts)
{
    detail::check_trim(data, trim);
    detail::check_dims(data, beta);
    return restricted_value(restrict_rows(data, trim), static_cast<double>(data.n()), beta, opts);
}

double kkt_residual(const Dataset& data, const TrimSet& trim, const Coefficients& beta, const EnetOptions& opts)
{
    detail::check_trim(data, trim);
    detail::check_dims(data, beta);
    const Restricted sub = restrict_rows(data, trim);
    const auto n = static_cast<double>(data.n());
    const Vector grad = -(2.0 / n) * (sub.x.transpose() * (sub.y - sub.x * beta));
    return kkt_from_gradient(grad, beta, opts);
}

double subset_dead_zone(const Dataset& data, const TrimSet& trim)
{
    detail::check_trim(data, trim);
    const Restricted sub = restrict_rows(data, trim);
    return (2.0 / static_cast<double>(data.n())) * (sub.x.transpose() * sub.y).cwiseAbs().maxCoeff();
}

void set_solve_observer(SolveObserver observer) { observer_slot() = std::move(observer); }

} // namespace robust_trim
