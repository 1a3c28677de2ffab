#pragma once

#include "robust_trim/bounds.hpp"
#include "robust_trim/lts.hpp"
#include "robust_trim/model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace robust_trim {

enum class ErrorDist { gaussian, bounded_subgaussian };

std::string_view to_string(ErrorDist d);
ErrorDist parse_error_dist(std::string_view s);

struct SimConfig
{
    Index n = 100;
    Index p = 20;
    Index s0 = 3;
    double beta_amplitude = 1.0;
    double sigma = 1.0;
    Index h = 75;
    double delta = 0.1;
    ErrorDist error_dist = ErrorDist::gaussian;
    double contamination_fraction = 0.0;
    // Outliers get y_i += +/- contamination_magnitude.
    double contamination_magnitude = 0.0;
    int n_trials = 500;
    std::uint64_t seed = 0;

    void validate() const;
    Index contaminated_count() const;
};

struct Instance
{
    Dataset data;
    Coefficients beta0;
    // y = X beta0 + errors holds exactly, outlier shifts included.
    Vector errors;
    std::vector<Index> contaminated;
};

/**
 * Draws one synthetic sparse regression problem. The design is standard
 * Gaussian with an intercept column, passed through normalize_columns. beta0
 * has s0 nonzero entries of size +/- beta_amplitude on a uniformly chosen
 * support that excludes the intercept. Everything is a function of
 * (cfg.seed, trial).
 */
Instance generate_instance(const SimConfig& cfg, std::uint64_t trial);

// sqrt((1/h) sum_{i in trim} r_i^2) on the fit's active subset. Biased low
// under trimming.
double estimate_sigma(const Dataset& data, const FitResult& fit);

// sqrt(level (1 - level) / reps)
double binomial_se(double level, std::size_t reps);

struct TailCheck
{
    Index h;
    double t;
    std::size_t reps;
    // P(chi2_h - h >= 2 sqrt(h t) + 2 t)
    double upper_rate;
    // P(h - chi2_h >= 2 sqrt(h t))
    double lower_rate;
    // e^{-t}
    double bound;
    bool passes() const;
};

// Monte Carlo check of the Laurent-Massart chi-square tail inequalities.
TailCheck chi_square_tail_check(Index h, double t, std::size_t reps, std::uint64_t seed);

struct MaxCheck
{
    double rate;
    // 2p exp(-n q1^2 / (8 sigma^2)) = delta / 2 at the single-subset level (L = 1)
    double target;
    double q1;
    std::size_t reps;
    bool passes() const;
};

/**
 * Estimates P(max_j 2 |e^T D x_j| / n > q1) for a fixed normalized Gaussian
 * design and a fixed h-subset D, with e ~ N(0, sigma^2 I) and q1 evaluated
 * at L = 1.
 */
MaxCheck subgaussian_max_check(Index n, Index p, Index h, double sigma, double delta, std::size_t reps,
                               std::uint64_t seed);

// Both sides of the basic inequality
//   (1/n)||X(b - b0)||^2_{D(b)} <= (2/n) e^T D(b) X (b - b0)
//                                  + (1/n)(||e||^2_{D(b0)} - ||e||^2_{D(b)}) + pen(b0) - pen(b)
// with every term evaluated separately.
struct BasicInequality
{
    double lhs;
    double cross_term;
    double noise_term;
    double penalty_term;
    double rhs;
    double slack() const { return rhs - lhs; }
};

BasicInequality basic_inequality(const Dataset& data, const Coefficients& beta_hat, const Coefficients& beta0,
                                 const Vector& errors, const TrimPenaltyConfig& cfg);

enum class SigmaMode { known, estimated };

struct SolverSettings
{
    int n_starts = 50;
    // Use the exact enumerator when C(n, h) is at most this.
    std::uint64_t exact_cap = kDefaultExactCap;
    std::optional<double> lambda2_override;
    // Replaces select_lambdas entirely (robustness demonstrations).
    std::optional<LambdaPair> lambda_override;
    SigmaMode sigma_mode = SigmaMode::known;
    double tol = 1e-8;
    int max_iter = 10000;
    bool penalize_intercept = true;
    std::size_t threads = 1;
};

struct TrialRecord
{
    std::uint64_t trial = 0;
    bool failed = false;
    std::string failure;
    std::string method;
    double sigma_used = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double objective = 0.0;
    double realized_prediction_error = 0.0;
    double prediction_bound = 0.0;
    bool prediction_held = false;
    double cone_gap = 0.0;
    double basic_inequality_slack = 0.0;
    double estimation_error_sq = 0.0;
    double incoherence_deviation = 0.0;
    bool incoherence_holds = false;
    double estimation_bound_highdim = 0.0;
    std::optional<double> estimation_bound_lowdim;
    bool contaminated_excluded = true;
};

struct ClaimRecord
{
    std::string name;
    int trials = 0;
    int times_held = 0;
    double empirical_rate = 0.0;
    double target = 0.0;
};

struct CoverageReport
{
    SimConfig config;
    SolverSettings settings;
    int n_trials = 0;
    int failed_trials = 0;
    double log_L = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    std::vector<ClaimRecord> claims;
    double mean_prediction_error = 0.0;
    double median_prediction_error = 0.0;
    double mean_bound = 0.0;
    std::vector<TrialRecord> trials;

    const ClaimRecord& claim(std::string_view name) const;
};

/**
 * Per trial: draw an instance, pick lambdas from q1 (or the override), fit
 * (exact when enumerable, C-steps otherwise) and record whether
 *   prediction_bound        realized trimmed prediction error <= bound
 *   cone_condition          cone_gap <= 0
 *   basic_inequality        slack >= -1e-9
 *   estimation_bound_highdim  (when the fitted trimmed design is incoherent)
 *   estimation_bound_lowdim   (when p < n and the trimmed Gram matrix has rank p)
 * Trials whose solver fails are excluded and counted.
 */
CoverageReport run_coverage_experiment(const SimConfig& cfg, const SolverSettings& settings);

nlohmann::json to_json(const CoverageReport& report);
nlohmann::json to_json(const SimConfig& cfg);

// One row per (trial, claim).
std::string trials_csv(const CoverageReport& report);
// Realized error against the bound per trial, sorted by realized error.
std::string plot_csv(const CoverageReport& report);

struct RobustnessTrial
{
    std::uint64_t trial = 0;
    double lts_error = 0.0;
    double enet_error = 0.0;
    bool excluded_all = false;
};

struct RobustnessReport
{
    int n_trials = 0;
    int failed_trials = 0;
    int excluded_all_count = 0;
    int lts_wins = 0;
    double median_lts_error = 0.0;
    double median_enet_error = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::vector<RobustnessTrial> trials;
};

// Paired comparison on contaminated data: trimmed fit with cfg.h against the
// untrimmed elastic net (h = n) at the same penalties; errors are ||b - b0||_2.
RobustnessReport run_robustness_comparison(const SimConfig& cfg, const SolverSettings& settings);

nlohmann::json to_json(const RobustnessReport& report);

} // namespace robust_trim
