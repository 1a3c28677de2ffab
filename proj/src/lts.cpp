#include "robust_trim/lts.hpp"

#include "robust_trim/errors.hpp"
#include "robust_trim/parallel.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>

namespace robust_trim {

namespace {

constexpr double kTieObjective = 1e-9;
constexpr double kTieBeta = 1e-6;

void require_lasso_type(const TrimPenaltyConfig& cfg)
{
    if (cfg.gamma != 1.0)
        throw InvalidArgument("solvers support gamma = 1 only");
}

TrimSet trim_of(const Dataset& data, const Coefficients& beta, Index h)
{
    return trim_weights(residuals(data, beta).array().square(), h);
}

TrimSet random_subset(Index n, Index h, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    // partial Fisher-Yates
    for (Index i = 0; i < h; ++i) {
        std::uniform_int_distribution<Index> pick(i, n - 1);
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(pick(rng))]);
    }
    idx.resize(static_cast<std::size_t>(h));
    return TrimSet(std::move(idx), n);
}

struct StartOutcome
{
    Coefficients beta;
    double objective = std::numeric_limits<double>::infinity();
    int csteps = 0;
};

SubproblemSolution checked_solve(const Dataset& data, const TrimSet& trim, const EnetOptions& opts,
                                 const std::optional<Coefficients>& warm, std::string_view where)
{
    SubproblemSolution sol = solve_enet_on_subset(data, trim, opts, warm);
    if (!sol.converged)
        throw SolverError(std::string(where) + ": restricted elastic net did not converge in " +
                          std::to_string(opts.max_iter) + " sweeps (KKT residual " +
                          std::to_string(sol.kkt_residual) + ")");
    return sol;
}

StartOutcome concentrate(const Dataset& data, const TrimPenaltyConfig& cfg, const EnetOptions& eopts,
                         TrimSet trim, Coefficients beta, const CStepOptions& opts)
{
    StartOutcome out;
    double obj = objective(data, beta, cfg);
    for (int it = 0; it < opts.max_csteps; ++it) {
        TrimSet next = trim_of(data, beta, cfg.h);
        if (next == trim)
            break;
        SubproblemSolution sol = checked_solve(data, next, eopts, beta, "c-step");
        const double next_obj = objective(data, sol.beta, cfg);
        ++out.csteps;
        const double decrease = obj - next_obj;
        trim = std::move(next);
        beta = std::move(sol.beta);
        obj = next_obj;
        if (decrease < opts.min_decrease)
            break;
    }
    out.beta = std::move(beta);
    out.objective = obj;
    return out;
}

} // namespace

std::string_view to_string(FitMethod m) { return m == FitMethod::exact ? "exact" : "cstep"; }

CStep c_step(const Dataset& data, const Coefficients& beta, const TrimPenaltyConfig& cfg)
{
    require_lasso_type(cfg);
    cfg.validate(data.n());
    detail::check_dims(data, beta);
    TrimSet trim = trim_of(data, beta, cfg.h);
    SubproblemSolution sol = checked_solve(data, trim, enet_options(cfg), beta, "c_step");
    return CStep{std::move(sol.beta), std::move(trim)};
}

std::uint64_t subset_count(Index n, Index h)
{
    if (h < 0 || h > n)
        return 0;
    h = std::min(h, n - h);
    // C(n, k) = C(n, k-1) * (n-k+1) / k stays integral at every step.
    unsigned __int128 c = 1;
    for (Index k = 1; k <= h; ++k) {
        c = c * static_cast<unsigned __int128>(n - k + 1) / static_cast<unsigned __int128>(k);
        if (c > std::numeric_limits<std::uint64_t>::max())
            return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

FitResult fit_exact(const Dataset& data, const TrimPenaltyConfig& cfg, std::uint64_t cap)
{
    require_lasso_type(cfg);
    cfg.validate(data.n());
    const Index n = data.n();
    const Index h = cfg.h;
    const std::uint64_t total = subset_count(n, h);
    if (total > cap)
        throw TooLarge("C(" + std::to_string(n) + ", " + std::to_string(h) + ") subsets exceed the exact cap of " +
                       std::to_string(cap) + "; use the C-step solver instead");

    const EnetOptions eopts = enet_options(cfg);
    struct Candidate
    {
        double value;
        Coefficients beta;
    };
    std::vector<Candidate> near_best;
    double best = std::numeric_limits<double>::infinity();
    Coefficients best_beta = Coefficients::Zero(data.p());
    int nonconverged = 0;

    std::vector<Index> comb(static_cast<std::size_t>(h));
    std::iota(comb.begin(), comb.end(), Index{0});
    std::uint64_t evaluated = 0;
    while (true) {
        const TrimSet trim(comb, n);
        SubproblemSolution sol = solve_enet_on_subset(data, trim, eopts);
        if (!sol.converged)
            ++nonconverged;
        const double value = restricted_objective(data, trim, sol.beta, eopts);
        ++evaluated;
        if (value < best) {
            best = value;
            best_beta = sol.beta;
            std::erase_if(near_best, [&](const Candidate& c) { return c.value > best + kTieObjective; });
        }
        if (value <= best + kTieObjective)
            near_best.push_back({value, std::move(sol.beta)});

        // next combination in lexicographic order
        Index k = h - 1;
        while (k >= 0 && comb[static_cast<std::size_t>(k)] == n - h + k)
            --k;
        if (k < 0)
            break;
        ++comb[static_cast<std::size_t>(k)];
        for (Index j = k + 1; j < h; ++j)
            comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
    }

    bool unique = true;
    for (const auto& c : near_best)
        if (c.value <= best + kTieObjective && (c.beta - best_beta).lpNorm<Eigen::Infinity>() > kTieBeta)
            unique = false;

    FitResult fit{best_beta, trim_of(data, best_beta, h), objective(data, best_beta, cfg)};
    fit.method = FitMethod::exact;
    fit.unique_flag = unique;
    fit.subsets_evaluated = evaluated;
    fit.nonconverged_solves = nonconverged;
    return fit;
}

FitResult fit_cstep(const Dataset& data, const TrimPenaltyConfig& cfg, const CStepOptions& opts)
{
    require_lasso_type(cfg);
    cfg.validate(data.n());
    if (opts.n_starts < 1)
        throw InvalidArgument("n_starts must be >= 1");
    for (const auto& w : opts.warm_starts)
        detail::check_dims(data, w);

    const EnetOptions eopts = enet_options(cfg);
    const std::size_t n_warm = opts.warm_starts.size();
    const std::size_t n_total = n_warm + static_cast<std::size_t>(opts.n_starts);
    std::vector<StartOutcome> outcomes(n_total);

    parallel_for(n_total, opts.threads, [&](std::size_t s) {
        if (s < n_warm) {
            const Coefficients& w = opts.warm_starts[s];
            TrimSet trim = trim_of(data, w, cfg.h);
            SubproblemSolution sol = checked_solve(data, trim, eopts, w, "warm start");
            outcomes[s] = concentrate(data, cfg, eopts, std::move(trim), std::move(sol.beta), opts);
        } else {
            TrimSet trim = random_subset(data.n(), cfg.h, mix_seed(opts.seed, s - n_warm));
            SubproblemSolution sol = checked_solve(data, trim, eopts, std::nullopt, "random start");
            outcomes[s] = concentrate(data, cfg, eopts, std::move(trim), std::move(sol.beta), opts);
        }
    });

    std::size_t winner = 0;
    int total = 0;
    for (std::size_t s = 0; s < n_total; ++s) {
        total += outcomes[s].csteps;
        if (outcomes[s].objective < outcomes[winner].objective)
            winner = s;
    }
    StartOutcome& best = outcomes[winner];
    FitResult fit{best.beta, trim_of(data, best.beta, cfg.h), best.objective};
    fit.method = FitMethod::cstep;
    fit.starts_used = static_cast<int>(n_total);
    fit.cstep_iterations = best.csteps;
    fit.total_csteps = total;
    fit.seed = opts.seed;
    return fit;
}

double global_dead_zone(const Dataset& data, Index h)
{
    if (h < 1 || h > data.n())
        throw InvalidArgument("h out of range");
    double worst = 0.0;
    std::vector<double> prod(static_cast<std::size_t>(data.n()));
    for (Index j = 0; j < data.p(); ++j) {
        for (Index i = 0; i < data.n(); ++i)
            prod[static_cast<std::size_t>(i)] = std::abs(data.x()(i, j) * data.y()[i]);
        std::nth_element(prod.begin(), prod.begin() + (h - 1), prod.end(), std::greater<>());
        worst = std::max(worst, std::accumulate(prod.begin(), prod.begin() + h, 0.0));
    }
    return 2.0 * worst / static_cast<double>(data.n());
}

PathResult fit_path(const Dataset& data, const TrimPenaltyConfig& base, const std::vector<double>& lambda1_grid,
                    double lambda2_ratio, const CStepOptions& opts)
{
    if (lambda1_grid.empty())
        throw InvalidArgument("lambda grid is empty");
    for (std::size_t k = 0; k < lambda1_grid.size(); ++k) {
        if (!(lambda1_grid[k] > 0.0))
            throw InvalidArgument("lambda grid entries must be positive");
        if (k > 0 && !(lambda1_grid[k] < lambda1_grid[k - 1]))
            throw InvalidArgument("lambda grid must be strictly decreasing");
    }
    if (!(lambda2_ratio >= 0.0))
        throw InvalidArgument("lambda2 ratio must be nonnegative");

    PathResult path;
    for (std::size_t k = 0; k < lambda1_grid.size(); ++k) {
        TrimPenaltyConfig cfg = base;
        cfg.lambda1 = lambda1_grid[k];
        cfg.lambda2 = lambda2_ratio * lambda1_grid[k];
        CStepOptions step = opts;
        step.warm_starts.clear();
        if (k > 0) {
            step.warm_starts.push_back(path.entries.back().fit.beta);
            step.n_starts = std::max(1, opts.n_starts / 5);
            step.seed = mix_seed(opts.seed, k);
        }
        FitResult fit = fit_cstep(data, cfg, step);
        fit.seed = step.seed;
        path.entries.push_back(PathEntry{cfg.lambda1, cfg.lambda2, std::move(fit)});
    }
    return path;
}

} // namespace robust_trim
