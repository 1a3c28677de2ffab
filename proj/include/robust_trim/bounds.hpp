#pragma once

#include "robust_trim/model.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace robust_trim {

// log C(n, h) without forming C(n, h); absolute error below 1e-10 up to n = 1e6.
double log_binomial(Index n, Index h);

/**
 * Confidence-split constants. With sigma known the failure probability is
 * spread as delta/(2L), delta/(4L), delta/(4L), giving log(4pL/delta) and
 * log(4L/delta). When sigma is replaced by an estimate that dominates it
 * with probability 1 - delta/(3L), the split becomes delta/(3L), delta/(6L)
 * and the logs use 6 in place of 4.
 */
enum class ConstantSet { known_sigma, estimated_sigma };

double split_factor(ConstantSet set);

// 2 sigma sqrt(2 log(c p L / delta) / n), c = 4 or 6.
double q1(double sigma, Index n, Index p, double log_L, double delta, ConstantSet set = ConstantSet::known_sigma);

struct ChiSquareQuantiles
{
    double q2;
    double q3;
};

// t = log(c L / delta); q2 = 2 sqrt(t) (sqrt(h) + sqrt(t)); q3 = q2 - 2t.
ChiSquareQuantiles q2_q3(Index h, double log_L, double delta, ConstantSet set = ConstantSet::known_sigma);

struct LambdaPair
{
    double lambda1;
    double lambda2;
};

// lambda1 = 2 q1, lambda2 = q1 unless overridden with a value in [0, q1].
LambdaPair select_lambdas(double q1_value, std::optional<double> lambda2_override = std::nullopt);

// C = 2 n q1 (2 + ||b0||_1) / sigma^2 + 2 q2 / ||b0||_1.
double bound_constant(double l1_beta0, Index n, double sigma, double q1_value, double q2_value);

struct BoundInputs
{
    Index n = 0;
    Index p = 0;
    Index h = 0;
    double sigma = 1.0;
    double delta = 0.1;
    Coefficients beta0;
    double log_L = 0.0;

    // Fills log_L from (n, h).
    static BoundInputs make(Index n, Index p, Index h, double sigma, double delta, Coefficients beta0);
    void validate() const;
};

// (sigma^2 / n) ||b0||_1 C. Throws UndefinedBound when ||b0||_1 = 0.
double prediction_bound(const BoundInputs& in, double q1_value, double q2_value);
double prediction_bound(double l1_beta0, Index n, double sigma, double q1_value, double q2_value);

// Sharper form available when lambda2 = 0: 2 lambda1 ||b0||_1 + 2 sigma^2 q2 / n.
double prediction_bound_lasso(double l1_beta0, Index n, double sigma, double lambda1, double q2_value);

struct EtaZeta
{
    double eta;
    double zeta;
};

// eta = 4 sigma_hat^2 q2 / n, zeta = eta / lambda.
EtaZeta eta_zeta(double sigma_hat, double q2_value, Index n, double lambda);

// ||D_{S0^c}||_1 - 3 ||D_{S0}||_1 - eta / lambda with D = beta_hat - beta0.
// Nonpositive exactly when the relaxed cone condition holds.
double cone_gap(const Coefficients& beta_hat, const Coefficients& beta0, const std::vector<Index>& support,
                double eta, double lambda);

// Indices of the nonzero entries of beta0.
std::vector<Index> support_of(const Coefficients& beta0);

struct IncoherenceResult
{
    double deviation;
    bool holds;
};

// max |X^T X / n - I| entrywise, compared against 1/(32k). x_star is the
// trimmed design D X (zero rows for trimmed observations); n is its row count.
IncoherenceResult incoherence_check(const Matrix& x_star, Index k);

// D X for a trim set: trimmed rows are zeroed, n stays the same.
Matrix trimmed_design(const Dataset& data, const TrimSet& trim);

// Worst incoherence deviation over trim sets: every h-subset when
// C(n, h) <= enumeration_cap, otherwise `samples` seeded random subsets.
double incoherence_worst_case(const Dataset& data, Index h, std::size_t samples, std::uint64_t seed,
                              std::uint64_t enumeration_cap = 2000);

// (1/n) ||X (beta_hat - beta0)||^2_D.
double mse_trimmed(const Dataset& data, const Coefficients& beta_hat, const Coefficients& beta0, const TrimSet& trim);

// Smallest eigenvalue of x_star^T x_star / n.
double min_gram_eigenvalue(const Matrix& x_star);

// mse / lambda_min(X*^T X* / n). Requires p < n and a rank-p Gram matrix,
// otherwise RankDeficient.
double estimation_bound_lowdim(double mse, const Matrix& x_star);

// (8/3) mse + zeta^2 / (6k).
double estimation_bound_highdim(double mse, Index k, double zeta);

// Required incoherence level: max(s0, (p - s0)/20) and the weaker min form.
double required_k_stated(Index s0, Index p);
double required_k_proof(Index s0, Index p);

struct BoundOptions
{
    std::optional<double> lambda2_override;
    ConstantSet constants = ConstantSet::known_sigma;
    // sigma used in eta; defaults to inputs.sigma.
    std::optional<double> sigma_hat;
    // Incoherence level; defaults to ceil(max(s0, (p - s0)/20)), at least 1.
    std::optional<Index> k;
    // Realized trimmed MSE; when absent the prediction bound stands in for it.
    std::optional<double> mse;
    std::optional<double> incoherence_deviation;
};

struct BoundReport
{
    BoundInputs inputs;
    BoundOptions options;
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double C_const = 0.0;
    double prediction_bound = 0.0;
    // Only when lambda2 = 0.
    std::optional<double> prediction_bound_lasso;
    double eta = 0.0;
    double zeta = 0.0;
    double estimation_bound = 0.0;
    std::optional<double> incoherence_deviation;
    std::optional<bool> incoherence_holds;
    Index k = 1;
    Index s0 = 0;
    double k_required_stated = 0.0;
    double k_required_proof = 0.0;
    bool highdim_pathway = false;
    // q1/q2/q3 under the other constant set, for comparison.
    double alt_q1 = 0.0;
    double alt_q2 = 0.0;
    double alt_q3 = 0.0;
};

BoundReport compute_bounds(const BoundInputs& inputs, const BoundOptions& options = {});

nlohmann::json to_json(const BoundReport& report);

} // namespace robust_trim
