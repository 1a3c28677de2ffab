#include "robust_trim/bounds.hpp"

#include "robust_trim/errors.hpp"
#include "robust_trim/lts.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

namespace robust_trim {

namespace {

void check_delta(double delta)
{
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidArgument("delta must lie in (0, 1)");
}

std::string to_string(ConstantSet set) { return set == ConstantSet::known_sigma ? "known_sigma" : "estimated_sigma"; }

double gram_deviation(const Matrix& x_star)
{
    const auto n = static_cast<double>(x_star.rows());
    Matrix g = x_star.transpose() * x_star / n;
    g.diagonal().array() -= 1.0;
    return g.cwiseAbs().maxCoeff();
}

// log Gamma(x + 1) - (x log x - x + 0.5 log(2 pi x)); truncation error below
// 1e-15 for x > 30.
long double stirling_tail(long double x)
{
    const long double r = 1.0L / x;
    const long double r2 = r * r;
    return r * (1.0L / 12 - r2 * (1.0L / 360 - r2 * (1.0L / 1260 - r2 / 1680)));
}

} // namespace

double log_binomial(Index n, Index h)
{
    if (n < 0 || h < 0 || h > n)
        throw InvalidArgument("log_binomial needs 0 <= h <= n");
    const Index m = std::min(h, n - h);
    if (m <= 30) {
        long double s = 0.0L;
        for (Index k = 1; k <= m; ++k)
            s += std::log(static_cast<long double>(n - m + k) / static_cast<long double>(k));
        return static_cast<double>(s);
    }
    // Stirling in extended precision, with the leading terms regrouped so that
    // nothing of size n log n is formed and then cancelled.
    const auto nn = static_cast<long double>(n);
    const auto k = static_cast<long double>(m);
    const long double rest = nn - k;
    const long double lead = k * std::log(nn / k) - rest * std::log1p(-k / nn);
    const long double half = 0.5L * std::log(nn / (2.0L * std::numbers::pi_v<long double> * k * rest));
    return static_cast<double>(lead + half + stirling_tail(nn) - stirling_tail(k) - stirling_tail(rest));
}

double split_factor(ConstantSet set) { return set == ConstantSet::known_sigma ? 4.0 : 6.0; }

double q1(double sigma, Index n, Index p, double log_L, double delta, ConstantSet set)
{
    check_delta(delta);
    if (!(sigma >= 0.0) || n < 1 || p < 1)
        throw InvalidArgument("q1 needs sigma >= 0, n >= 1, p >= 1");
    const double log_term =
        std::log(split_factor(set)) + std::log(static_cast<double>(p)) + log_L - std::log(delta);
    return 2.0 * sigma * std::sqrt(2.0 * log_term / static_cast<double>(n));
}

ChiSquareQuantiles q2_q3(Index h, double log_L, double delta, ConstantSet set)
{
    check_delta(delta);
    if (h < 1)
        throw InvalidArgument("q2 needs h >= 1");
    const double t = std::log(split_factor(set)) + log_L - std::log(delta);
    const double q2 = 2.0 * std::sqrt(t) * (std::sqrt(static_cast<double>(h)) + std::sqrt(t));
    return {q2, q2 - 2.0 * t};
}

LambdaPair select_lambdas(double q1_value, std::optional<double> lambda2_override)
{
    if (!(q1_value > 0.0))
        throw InvalidArgument("q1 must be positive");
    double lambda2 = q1_value;
    if (lambda2_override) {
        if (!(*lambda2_override >= 0.0))
            throw InvalidArgument("lambda2 must be nonnegative");
        if (*lambda2_override > q1_value)
            throw InvalidArgument("lambda2 override exceeds q1 = lambda1 / 2");
        lambda2 = *lambda2_override;
    }
    return {2.0 * q1_value, lambda2};
}

double bound_constant(double l1_beta0, Index n, double sigma, double q1_value, double q2_value)
{
    if (!(l1_beta0 > 0.0))
        throw UndefinedBound("||beta0||_1 = 0 leaves the prediction bound constant undefined");
    if (!(sigma > 0.0))
        throw InvalidArgument("sigma must be positive");
    return 2.0 * static_cast<double>(n) * q1_value * (2.0 + l1_beta0) / (sigma * sigma) + 2.0 * q2_value / l1_beta0;
}

BoundInputs BoundInputs::make(Index n, Index p, Index h, double sigma, double delta, Coefficients beta0)
{
    BoundInputs in{n, p, h, sigma, delta, std::move(beta0), log_binomial(n, h)};
    in.validate();
    return in;
}

void BoundInputs::validate() const
{
    check_delta(delta);
    if (n < 1 || p < 1)
        throw InvalidArgument("n and p must be positive");
    if (h < (n + 1) / 2 || h > n)
        throw InvalidArgument("h must lie in [ceil(n/2), n]");
    if (!(sigma > 0.0))
        throw InvalidArgument("sigma must be positive");
    if (beta0.size() != p)
        throw DimensionMismatch("beta0 length does not match p");
    if (std::abs(log_L - log_binomial(n, h)) > 1e-12 * std::max(1.0, std::abs(log_L)))
        throw InvalidArgument("log_L does not equal log C(n, h)");
}

double prediction_bound(double l1_beta0, Index n, double sigma, double q1_value, double q2_value)
{
    const double c = bound_constant(l1_beta0, n, sigma, q1_value, q2_value);
    return sigma * sigma / static_cast<double>(n) * l1_beta0 * c;
}

double prediction_bound(const BoundInputs& in, double q1_value, double q2_value)
{
    return prediction_bound(in.beta0.lpNorm<1>(), in.n, in.sigma, q1_value, q2_value);
}

double prediction_bound_lasso(double l1_beta0, Index n, double sigma, double lambda1, double q2_value)
{
    if (!(l1_beta0 > 0.0))
        throw UndefinedBound("||beta0||_1 = 0 leaves the prediction bound undefined");
    return 2.0 * lambda1 * l1_beta0 + 2.0 * sigma * sigma * q2_value / static_cast<double>(n);
}

EtaZeta eta_zeta(double sigma_hat, double q2_value, Index n, double lambda)
{
    if (!(lambda > 0.0))
        throw InvalidArgument("lambda must be positive");
    const double eta = 4.0 * sigma_hat * sigma_hat * q2_value / static_cast<double>(n);
    return {eta, eta / lambda};
}

double cone_gap(const Coefficients& beta_hat, const Coefficients& beta0, const std::vector<Index>& support,
                double eta, double lambda)
{
    if (beta_hat.size() != beta0.size())
        throw DimensionMismatch("beta_hat and beta0 differ in length");
    if (!(lambda > 0.0))
        throw InvalidArgument("lambda must be positive");
    std::vector<char> on(static_cast<std::size_t>(beta0.size()), 0);
    for (Index j : support) {
        if (j < 0 || j >= beta0.size())
            throw InvalidArgument("support index out of range");
        on[static_cast<std::size_t>(j)] = 1;
    }
    double in_l1 = 0.0;
    double out_l1 = 0.0;
    for (Index j = 0; j < beta0.size(); ++j) {
        const double d = std::abs(beta_hat[j] - beta0[j]);
        (on[static_cast<std::size_t>(j)] ? in_l1 : out_l1) += d;
    }
    return out_l1 - 3.0 * in_l1 - eta / lambda;
}

std::vector<Index> support_of(const Coefficients& beta0)
{
    std::vector<Index> s;
    for (Index j = 0; j < beta0.size(); ++j)
        if (beta0[j] != 0.0)
            s.push_back(j);
    return s;
}

IncoherenceResult incoherence_check(const Matrix& x_star, Index k)
{
    if (k < 1)
        throw InvalidArgument("incoherence level k must be >= 1");
    if (x_star.rows() < 1)
        throw InvalidArgument("empty design");
    const double dev = gram_deviation(x_star);
    return {dev, dev <= 1.0 / (32.0 * static_cast<double>(k))};
}

Matrix trimmed_design(const Dataset& data, const TrimSet& trim)
{
    detail::check_trim(data, trim);
    Matrix xs = Matrix::Zero(data.n(), data.p());
    for (Index i : trim.indices())
        xs.row(i) = data.x().row(i);
    return xs;
}

double incoherence_worst_case(const Dataset& data, Index h, std::size_t samples, std::uint64_t seed,
                              std::uint64_t enumeration_cap)
{
    const Index n = data.n();
    if (h < 1 || h > n)
        throw InvalidArgument("h out of range");
    double worst = 0.0;
    if (subset_count(n, h) <= enumeration_cap) {
        std::vector<Index> comb(static_cast<std::size_t>(h));
        std::iota(comb.begin(), comb.end(), Index{0});
        while (true) {
            worst = std::max(worst, gram_deviation(trimmed_design(data, TrimSet(comb, n))));
            Index k = h - 1;
            while (k >= 0 && comb[static_cast<std::size_t>(k)] == n - h + k)
                --k;
            if (k < 0)
                break;
            ++comb[static_cast<std::size_t>(k)];
            for (Index j = k + 1; j < h; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
        return worst;
    }
    std::mt19937_64 rng(seed);
    std::vector<Index> idx(static_cast<std::size_t>(n));
    for (std::size_t s = 0; s < samples; ++s) {
        std::iota(idx.begin(), idx.end(), Index{0});
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<Index> pick(idx.begin(), idx.begin() + h);
        worst = std::max(worst, gram_deviation(trimmed_design(data, TrimSet(std::move(pick), n))));
    }
    return worst;
}

double mse_trimmed(const Dataset& data, const Coefficients& beta_hat, const Coefficients& beta0, const TrimSet& trim)
{
    detail::check_dims(data, beta0);
    return trimmed_seminorm(data, beta_hat - beta0, trim);
}

double min_gram_eigenvalue(const Matrix& x_star)
{
    const Matrix a = x_star.transpose() * x_star / static_cast<double>(x_star.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

double estimation_bound_lowdim(double mse, const Matrix& x_star)
{
    if (x_star.cols() >= x_star.rows())
        throw RankDeficient("the low-dimensional estimation bound needs p < n");
    const Matrix a = x_star.transpose() * x_star / static_cast<double>(x_star.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(hi, 1.0)))
        throw RankDeficient("trimmed Gram matrix is rank deficient; the low-dimensional bound does not apply");
    return mse / lo;
}

double estimation_bound_highdim(double mse, Index k, double zeta)
{
    if (k < 1)
        throw InvalidArgument("incoherence level k must be >= 1");
    return 8.0 / 3.0 * mse + zeta * zeta / (6.0 * static_cast<double>(k));
}

double required_k_stated(Index s0, Index p)
{
    return std::max(static_cast<double>(s0), static_cast<double>(p - s0) / 20.0);
}

double required_k_proof(Index s0, Index p)
{
    return std::min(static_cast<double>(s0), static_cast<double>(p - s0) / 20.0);
}

BoundReport compute_bounds(const BoundInputs& inputs, const BoundOptions& options)
{
    inputs.validate();
    BoundReport r;
    r.inputs = inputs;
    r.options = options;

    const ConstantSet other =
        options.constants == ConstantSet::known_sigma ? ConstantSet::estimated_sigma : ConstantSet::known_sigma;
    r.q1 = q1(inputs.sigma, inputs.n, inputs.p, inputs.log_L, inputs.delta, options.constants);
    const auto qs = q2_q3(inputs.h, inputs.log_L, inputs.delta, options.constants);
    r.q2 = qs.q2;
    r.q3 = qs.q3;
    r.alt_q1 = q1(inputs.sigma, inputs.n, inputs.p, inputs.log_L, inputs.delta, other);
    const auto alt = q2_q3(inputs.h, inputs.log_L, inputs.delta, other);
    r.alt_q2 = alt.q2;
    r.alt_q3 = alt.q3;

    const LambdaPair lambdas = select_lambdas(r.q1, options.lambda2_override);
    r.lambda1 = lambdas.lambda1;
    r.lambda2 = lambdas.lambda2;
    r.highdim_pathway = r.lambda2 == 0.0;

    const double l1 = inputs.beta0.lpNorm<1>();
    r.C_const = bound_constant(l1, inputs.n, inputs.sigma, r.q1, r.q2);
    r.prediction_bound = prediction_bound(l1, inputs.n, inputs.sigma, r.q1, r.q2);
    if (r.highdim_pathway)
        r.prediction_bound_lasso = prediction_bound_lasso(l1, inputs.n, inputs.sigma, r.lambda1, r.q2);

    const EtaZeta ez = eta_zeta(options.sigma_hat.value_or(inputs.sigma), r.q2, inputs.n, r.lambda1);
    r.eta = ez.eta;
    r.zeta = ez.zeta;

    r.s0 = static_cast<Index>(support_of(inputs.beta0).size());
    r.k_required_stated = required_k_stated(r.s0, inputs.p);
    r.k_required_proof = required_k_proof(r.s0, inputs.p);
    r.k = options.k.value_or(std::max<Index>(1, static_cast<Index>(std::ceil(r.k_required_stated))));

    const double mse = options.mse.value_or(r.prediction_bound_lasso.value_or(r.prediction_bound));
    r.estimation_bound = estimation_bound_highdim(mse, r.k, r.zeta);

    if (options.incoherence_deviation) {
        r.incoherence_deviation = *options.incoherence_deviation;
        r.incoherence_holds = *options.incoherence_deviation <= 1.0 / (32.0 * static_cast<double>(r.k));
    }
    return r;
}

nlohmann::json to_json(const BoundReport& r)
{
    using nlohmann::json;
    auto opt = [](const auto& o) -> json { return o ? json(*o) : json(nullptr); };
    std::vector<double> beta0(r.inputs.beta0.data(), r.inputs.beta0.data() + r.inputs.beta0.size());
    json j;
    j["schema_version"] = 1;
    j["inputs"] = {
        {"n", r.inputs.n},
        {"p", r.inputs.p},
        {"h", r.inputs.h},
        {"sigma", r.inputs.sigma},
        {"delta", r.inputs.delta},
        {"log_L", r.inputs.log_L},
        {"beta0", beta0},
        {"beta0_l1", r.inputs.beta0.lpNorm<1>()},
        {"lambda2_override", opt(r.options.lambda2_override)},
        {"sigma_hat", opt(r.options.sigma_hat)},
        {"mse", opt(r.options.mse)},
        {"k_override", opt(r.options.k)},
    };
    j["constant_set"] = to_string(r.options.constants);
    j["q1"] = r.q1;
    j["q2"] = r.q2;
    j["q3"] = r.q3;
    j["lambda1"] = r.lambda1;
    j["lambda2"] = r.lambda2;
    j["C_const"] = r.C_const;
    j["prediction_bound"] = r.prediction_bound;
    j["prediction_bound_lasso"] = opt(r.prediction_bound_lasso);
    j["eta"] = r.eta;
    j["zeta"] = r.zeta;
    j["k"] = r.k;
    j["s0"] = r.s0;
    j["estimation_bound"] = r.estimation_bound;
    j["estimation_bound_mse_source"] = r.options.mse ? "realized" : "prediction_bound";
    j["incoherence_deviation"] = opt(r.incoherence_deviation);
    j["incoherence_holds"] = opt(r.incoherence_holds);
    j["k_required_stated_max_form"] = r.k_required_stated;
    j["k_required_proof_min_form"] = r.k_required_proof;
    j["k_meets_stated_requirement"] = static_cast<double>(r.k) >= r.k_required_stated;
    j["highdim_pathway"] = r.highdim_pathway;
    const ConstantSet other =
        r.options.constants == ConstantSet::known_sigma ? ConstantSet::estimated_sigma : ConstantSet::known_sigma;
    j["alternate_constants"] = {{"constant_set", to_string(other)}, {"q1", r.alt_q1}, {"q2", r.alt_q2}, {"q3", r.alt_q3}};
    return j;
}

} // namespace robust_trim
