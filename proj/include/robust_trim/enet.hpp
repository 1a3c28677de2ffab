#pragma once

#include "robust_trim/model.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace robust_trim {

// sign(z) * max(|z| - t, 0)
double soft_threshold(double z, double t);

struct EnetOptions
{
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double tol = 1e-8;
    int max_iter = 10000;
    bool penalize_intercept = true;
    // Keep the restricted objective after every sweep in SubproblemSolution::trace.
    bool record_trace = false;
};

EnetOptions enet_options(const TrimPenaltyConfig& cfg);

struct SubproblemSolution
{
    Coefficients beta;
    double kkt_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    // Set when lambda1 = lambda2 = 0 and the restricted design has rank < p;
    // beta is then the minimum-norm least squares solution.
    bool rank_deficient = false;
    std::vector<double> trace;
};

/**
 * Minimizes the elastic net least squares problem restricted to the rows of
 * `trim`:
 *
 *   f(b) = (1/n) sum_{i in trim} (y_i - v_i^T b)^2 + lambda1 ||b||_1 + lambda2 ||b||_2^2
 *
 * The loss keeps the 1/n scaling of the full objective so that restricted
 * minimizers compose with it exactly. Cyclic coordinate descent is used when
 * some penalty is positive; the unpenalized case is a direct (minimum-norm)
 * least squares solve.
 *
 * Convergence requires the largest coordinate move and the KKT residual to
 * both be <= tol. When the sweep budget runs out the best iterate is returned
 * with converged = false.
 */
SubproblemSolution solve_enet_on_subset(const Dataset& data, const TrimSet& trim, const EnetOptions& opts,
                                        const std::optional<Coefficients>& warm_start = std::nullopt);

// f(b) as defined above.
double restricted_objective(const Dataset& data, const TrimSet& trim, const Coefficients& beta,
                            const EnetOptions& opts);

// Max over coordinates of the KKT stationarity violation of f at beta.
double kkt_residual(const Dataset& data, const TrimSet& trim, const Coefficients& beta, const EnetOptions& opts);

// max_j |(2/n) sum_{i in trim} x_ij y_i|: with lambda2 = 0 and a penalized
// intercept, beta = 0 solves the restricted problem iff lambda1 reaches this.
double subset_dead_zone(const Dataset& data, const TrimSet& trim);

// Called after every solve. Used by diagnostics to certify solutions
// independently; install before any solving starts. May be invoked from
// several threads at once.
using SolveObserver =
    std::function<void(const Dataset&, const TrimSet&, const EnetOptions&, const SubproblemSolution&)>;
void set_solve_observer(SolveObserver observer);

} // namespace robust_trim
