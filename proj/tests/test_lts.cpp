#include "robust_trim/errors.hpp"
#include "robust_trim/lts.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace robust_trim;
using test_support::random_dataset;
using test_support::random_vector;

namespace {

TrimPenaltyConfig config(Index h, double l1, double l2)
{
    TrimPenaltyConfig c;
    c.h = h;
    c.lambda1 = l1;
    c.lambda2 = l2;
    return c;
}

Dataset outlier_line()
{
    Matrix f(4, 1);
    f << 0, 1, 2, 10;
    Vector y(4);
    y << 0, 1, 2, 0;
    return Dataset::with_intercept(f, y);
}

CStepOptions starts(int n, std::uint64_t seed)
{
    CStepOptions o;
    o.n_starts = n;
    o.seed = seed;
    return o;
}

// Minimum over every h-subset of the restricted optimum, enumerated by bitmask.
double brute_force_minimum(const Dataset& d, const TrimPenaltyConfig& cfg)
{
    double best = std::numeric_limits<double>::infinity();
    const EnetOptions o = enet_options(cfg);
    for (const auto& sub : test_support::all_subsets(d.n(), cfg.h)) {
        const TrimSet t(sub, d.n());
        const auto sol = solve_enet_on_subset(d, t, o);
        best = std::min(best, test_support::naive_objective(d, sol.beta, cfg.h, cfg.lambda1, cfg.lambda2));
    }
    return best;
}

void expect_fit_invariants(const Dataset& d, const TrimPenaltyConfig& cfg, const FitResult& fit)
{
    EXPECT_NEAR(objective(d, fit.beta, cfg), fit.objective_value, 1e-10);
    EXPECT_EQ(fit.trim, trim_weights(residuals(d, fit.beta).array().square(), cfg.h));
}

} // namespace

TEST(CStep, FixedPointIsUnchanged)
{
    const Dataset d = random_dataset(20, 4, 1);
    const TrimPenaltyConfig cfg = config(15, 0.05, 0.02);
    const FitResult fit = fit_cstep(d, cfg, starts(20, 2));
    const CStep step = c_step(d, fit.beta, cfg);
    EXPECT_LE((step.beta - fit.beta).cwiseAbs().maxCoeff(), 10.0 * cfg.tol);
    EXPECT_EQ(step.trim, fit.trim);
}

TEST(CStep, StrictlyImprovesOnOutlierLine)
{
    const Dataset d = outlier_line();
    const TrimPenaltyConfig cfg = config(3, 1e-6, 1e-6);
    const Coefficients zero = Coefficients::Zero(2);
    const CStep step = c_step(d, zero, cfg);
    EXPECT_LT(objective(d, step.beta, cfg), objective(d, zero, cfg));
    EXPECT_EQ(step.trim.indices(), (std::vector<Index>{0, 1, 3}));
}

TEST(CStep, ChainedStepsNeverIncrease)
{
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Index n = 10 + static_cast<Index>(s % 15);
        const Index p = 2 + static_cast<Index>(s % 4);
        const Dataset d = random_dataset(n, p, 10 + s, 1.0);
        const TrimPenaltyConfig cfg = config(default_h(n), 0.05, s % 2 ? 0.02 : 0.0);
        Coefficients b = random_vector(p, 20 + s, 2.0);
        double prev = objective(d, b, cfg);
        for (int k = 0; k < 50; ++k) {
            b = c_step(d, b, cfg).beta;
            const double cur = objective(d, b, cfg);
            ASSERT_LE(cur, prev + 1e-12) << "instance " << s << " step " << k;
            prev = cur;
        }
    }
}

TEST(CStep, RejectsNonLassoPenalty)
{
    const Dataset d = random_dataset(10, 3, 3);
    TrimPenaltyConfig cfg = config(8, 0.1, 0.0);
    cfg.gamma = 2.0;
    EXPECT_THROW(c_step(d, Coefficients::Zero(3), cfg), InvalidArgument);
}

TEST(CStep, NonConvergenceIsAnError)
{
    const Dataset d = random_dataset(30, 8, 4);
    TrimPenaltyConfig cfg = config(25, 1e-4, 0.0);
    cfg.max_iter = 1;
    cfg.tol = 1e-14;
    EXPECT_THROW(c_step(d, Coefficients::Zero(8), cfg), SolverError);
}

TEST(SubsetCount, SmallAndSaturating)
{
    EXPECT_EQ(subset_count(4, 2), 6u);
    EXPECT_EQ(subset_count(8, 5), 56u);
    EXPECT_EQ(subset_count(8, 6), 28u);
    EXPECT_EQ(subset_count(10, 10), 1u);
    EXPECT_EQ(subset_count(60, 30), 118264581564861424u);
    EXPECT_EQ(subset_count(100, 75), std::numeric_limits<std::uint64_t>::max());
}

TEST(FitExact, CollinearPointsWithOutlier)
{
    const Dataset d = outlier_line();
    const FitResult fit = fit_exact(d, config(3, 0.0, 0.0));
    EXPECT_NEAR(fit.beta[0], 0.0, 1e-10);
    EXPECT_NEAR(fit.beta[1], 1.0, 1e-10);
    EXPECT_NEAR(fit.objective_value, 0.0, 1e-20);
    EXPECT_EQ(fit.trim.indices(), (std::vector<Index>{0, 1, 2}));
    EXPECT_EQ(fit.method, FitMethod::exact);
    EXPECT_EQ(fit.subsets_evaluated, 4u);
}

TEST(FitExact, UntrimmedAgreesWithSubproblem)
{
    const Dataset d = random_dataset(12, 4, 5);
    const TrimPenaltyConfig cfg = config(12, 0.1, 0.05);
    const FitResult fit = fit_exact(d, cfg);
    const auto sol = solve_enet_on_subset(d, TrimSet::all(12), enet_options(cfg));
    EXPECT_LE((fit.beta - sol.beta).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(fit.subsets_evaluated, 1u);
}

TEST(FitExact, MatchesIndependentEnumeration)
{
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset d = random_dataset(8, 3, 30 + s, 1.0);
        const TrimPenaltyConfig cfg = config(5, 0.1, 0.05);
        const FitResult fit = fit_exact(d, cfg);
        EXPECT_EQ(fit.subsets_evaluated, 56u);
        EXPECT_NEAR(fit.objective_value, brute_force_minimum(d, cfg), 1e-10);
        expect_fit_invariants(d, cfg, fit);
    }
}

TEST(FitExact, CapIsEnforced)
{
    const Dataset d = random_dataset(20, 3, 6);
    EXPECT_THROW(fit_exact(d, config(15, 0.1, 0.0), 1000), TooLarge);
}

TEST(FitExact, UniqueOnContinuousData)
{
    int unique = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Dataset d = random_dataset(8, 3, 40 + s, 1.0);
        unique += fit_exact(d, config(6, 0.1, 0.05)).unique_flag ? 1 : 0;
    }
    EXPECT_GE(unique, 19);
}

TEST(FitExact, DetectsTiesOnDuplicatedRows)
{
    // {(0,0),(0,0),(1,1)} and {(0,3),(0,3),(1,1)} are both fitted exactly.
    Matrix f(6, 1);
    f << 0, 0, 1, 1, 0, 0;
    Vector y(6);
    y << 0, 0, 1, 1, 3, 3;
    const Dataset d = Dataset::with_intercept(f, y);
    const FitResult fit = fit_exact(d, config(3, 0.0, 0.0));
    EXPECT_NEAR(fit.objective_value, 0.0, 1e-20);
    EXPECT_FALSE(fit.unique_flag);
}

TEST(FitCStep, DeterministicAcrossRunsAndThreads)
{
    const Dataset d = random_dataset(40, 6, 7, 1.0);
    const TrimPenaltyConfig cfg = config(30, 0.05, 0.01);
    CStepOptions o = starts(64, 99);
    const FitResult a = fit_cstep(d, cfg, o);
    const FitResult b = fit_cstep(d, cfg, o);
    o.threads = 4;
    const FitResult c = fit_cstep(d, cfg, o);
    for (const FitResult* other : {&b, &c}) {
        EXPECT_EQ(a.beta, other->beta);
        EXPECT_EQ(a.trim, other->trim);
        EXPECT_EQ(a.objective_value, other->objective_value);
        EXPECT_EQ(a.cstep_iterations, other->cstep_iterations);
        EXPECT_EQ(a.total_csteps, other->total_csteps);
    }
    EXPECT_EQ(a.starts_used, 64);
    EXPECT_EQ(a.seed, 99u);
}

TEST(FitCStep, AgreesWithExactOracle)
{
    int matched = 0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Dataset d = random_dataset(8, 3, 50 + s, 1.0);
        const TrimPenaltyConfig cfg = config(6, 0.1, 0.05);
        const FitResult exact = fit_exact(d, cfg);
        const FitResult heur = fit_cstep(d, cfg, starts(100, s));
        EXPECT_GE(heur.objective_value, exact.objective_value - 1e-10);
        matched += std::abs(heur.objective_value - exact.objective_value) <= 1e-8 ? 1 : 0;
        expect_fit_invariants(d, cfg, heur);
    }
    EXPECT_GE(matched, 19);
}

TEST(FitCStep, ExcludesGrossOutliers)
{
    for (std::uint64_t s = 0; s < 5; ++s) {
        Coefficients truth;
        const Dataset clean = random_dataset(50, 4, 60 + s, 0.3, &truth);
        Vector y = clean.y();
        const double scale = y.cwiseAbs().maxCoeff();
        for (Index i = 0; i < 10; ++i)
            y[5 * i] += (i % 2 ? -1.0 : 1.0) * 100.0 * scale;
        const Dataset d(clean.x(), y);
        const FitResult fit = fit_cstep(d, config(38, 0.01, 0.0), starts(50, s));
        for (Index i = 0; i < 10; ++i)
            EXPECT_FALSE(fit.trim.contains(5 * i));
    }
}

TEST(FitCStep, ResultIsFixedPoint)
{
    for (std::uint64_t s = 0; s < 10; ++s) {
        const Dataset d = random_dataset(25, 5, 70 + s, 1.0);
        const TrimPenaltyConfig cfg = config(19, 0.05, 0.01);
        const FitResult fit = fit_cstep(d, cfg, starts(30, s));
        const CStep step = c_step(d, fit.beta, cfg);
        EXPECT_LT(std::abs(objective(d, step.beta, cfg) - fit.objective_value), 1e-10);
    }
}

TEST(FitCStep, WarmStartNeverHurts)
{
    const Dataset d = random_dataset(30, 5, 8, 1.0);
    const TrimPenaltyConfig cfg = config(23, 0.05, 0.0);
    const FitResult ref = fit_cstep(d, cfg, starts(100, 1));
    CStepOptions o = starts(1, 2);
    o.warm_starts.push_back(ref.beta);
    const FitResult warm = fit_cstep(d, cfg, o);
    EXPECT_LE(warm.objective_value, ref.objective_value + 1e-10);
    EXPECT_EQ(warm.starts_used, 2);
}

TEST(FitPath, SinglePointEqualsFitCStep)
{
    const Dataset d = random_dataset(30, 5, 9);
    const TrimPenaltyConfig base = config(23, 0.0, 0.0);
    const PathResult path = fit_path(d, base, {0.2}, 0.5, starts(40, 3));
    ASSERT_EQ(path.entries.size(), 1u);
    const FitResult direct = fit_cstep(d, config(23, 0.2, 0.1), starts(40, 3));
    EXPECT_EQ(path.entries[0].fit.beta, direct.beta);
    EXPECT_EQ(path.entries[0].fit.objective_value, direct.objective_value);
    EXPECT_DOUBLE_EQ(path.entries[0].lambda2, 0.1);
}

TEST(FitPath, DeadZoneEntryIsZero)
{
    const Dataset d = random_dataset(30, 5, 10);
    const double lmax = global_dead_zone(d, 23);
    const PathResult path = fit_path(d, config(23, 0.0, 0.0), {1.01 * lmax, 0.1 * lmax}, 0.0, starts(20, 4));
    EXPECT_EQ(path.entries[0].fit.beta, Coefficients::Zero(5));
    EXPECT_GT(path.entries[1].fit.beta.cwiseAbs().maxCoeff(), 0.0);
}

TEST(FitPath, DeadZoneBoundsEverySubset)
{
    const Dataset d = random_dataset(9, 3, 11);
    const double lmax = global_dead_zone(d, 6);
    double worst = 0.0;
    for (const auto& sub : test_support::all_subsets(9, 6))
        worst = std::max(worst, subset_dead_zone(d, TrimSet(sub, 9)));
    EXPECT_LE(worst, lmax * (1.0 + 1e-12));
}

TEST(FitPath, WarmStartDominance)
{
    const Dataset d = random_dataset(40, 6, 12, 1.0);
    const TrimPenaltyConfig base = config(30, 0.0, 0.0);
    const std::vector<double> grid{0.8, 0.4, 0.2, 0.1, 0.05, 0.02};
    const PathResult path = fit_path(d, base, grid, 0.25, starts(25, 5));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const TrimPenaltyConfig cur = config(30, grid[k], 0.25 * grid[k]);
        const double previous_here = objective(d, path.entries[k - 1].fit.beta, cur);
        EXPECT_LE(path.entries[k].fit.objective_value, previous_here + 1e-12);
        expect_fit_invariants(d, cur, path.entries[k].fit);
    }
}

TEST(FitPath, ValidatesGrid)
{
    const Dataset d = random_dataset(20, 3, 13);
    const TrimPenaltyConfig base = config(15, 0.0, 0.0);
    EXPECT_THROW(fit_path(d, base, {}, 0.0, starts(5, 0)), InvalidArgument);
    EXPECT_THROW(fit_path(d, base, {0.1, 0.2}, 0.0, starts(5, 0)), InvalidArgument);
    EXPECT_THROW(fit_path(d, base, {0.1, 0.1}, 0.0, starts(5, 0)), InvalidArgument);
    EXPECT_THROW(fit_path(d, base, {0.1, 0.0}, 0.0, starts(5, 0)), InvalidArgument);
    EXPECT_THROW(fit_path(d, base, {0.1}, -1.0, starts(5, 0)), InvalidArgument);
}
