#pragma once

#include "robust_trim/enet.hpp"
#include "robust_trim/model.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace robust_trim {

enum class FitMethod { exact, cstep };

std::string_view to_string(FitMethod m);

struct FitResult
{
    Coefficients beta;
    TrimSet trim;
    double objective_value = 0.0;
    FitMethod method = FitMethod::cstep;
    int starts_used = 0;
    // C-steps taken by the winning start (cstep) / 0 (exact).
    int cstep_iterations = 0;
    // C-steps summed over all starts.
    int total_csteps = 0;
    // Exact only: no second subset reaches the optimum (within 1e-9) with a
    // different coefficient vector (beyond 1e-6 in max norm).
    bool unique_flag = true;
    std::uint64_t seed = 0;
    // Exact only.
    std::uint64_t subsets_evaluated = 0;
    int nonconverged_solves = 0;
};

struct CStep
{
    Coefficients beta;
    TrimSet trim;
};

// One concentration step: trim on beta's residuals, then solve the restricted
// elastic net warm-started at beta. Never increases the objective. Throws
// SolverError when the restricted solve does not converge.
CStep c_step(const Dataset& data, const Coefficients& beta, const TrimPenaltyConfig& cfg);

// Number of h-subsets C(n, h), saturating at UINT64_MAX.
std::uint64_t subset_count(Index n, Index h);

inline constexpr std::uint64_t kDefaultExactCap = 100000;

/**
 * Global minimizer by enumerating every h-subset and solving the convex
 * restricted problem on each. Throws TooLarge when C(n, h) > cap.
 */
FitResult fit_exact(const Dataset& data, const TrimPenaltyConfig& cfg, std::uint64_t cap = kDefaultExactCap);

struct CStepOptions
{
    int n_starts = 500;
    std::uint64_t seed = 0;
    int max_csteps = 100;
    double min_decrease = 1e-10;
    // Extra starting coefficient vectors tried before the random subsets.
    std::vector<Coefficients> warm_starts;
    std::size_t threads = 1;
};

/**
 * Multistart C-step heuristic. Each random start draws a uniform h-subset
 * from an RNG seeded by (seed, start), solves on it and then iterates C-steps
 * until the trim set repeats, the objective drops by less than min_decrease,
 * or max_csteps is hit. The best fixed point wins; ties go to the lowest
 * start index, so results do not depend on the thread count.
 */
FitResult fit_cstep(const Dataset& data, const TrimPenaltyConfig& cfg, const CStepOptions& opts);

struct PathEntry
{
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    FitResult fit;
};

struct PathResult
{
    std::vector<PathEntry> entries;
};

// Solves along a strictly decreasing lambda1 grid with lambda2 = ratio * lambda1.
// Each point after the first is warm-started from the previous solution and
// also gets max(1, n_starts / 5) fresh random starts.
PathResult fit_path(const Dataset& data, const TrimPenaltyConfig& base, const std::vector<double>& lambda1_grid,
                    double lambda2_ratio, const CStepOptions& opts);

/**
 * Smallest lambda1 (with lambda2 = 0 and a penalized intercept) at which
 * beta = 0 minimizes every restricted problem, hence the full trimmed
 * objective: max_j (2/n) times the sum of the h largest |x_ij y_i|.
 */
double global_dead_zone(const Dataset& data, Index h);

} // namespace robust_trim
