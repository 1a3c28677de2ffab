#include "robust_trim/simulate.hpp"

#include "robust_trim/enet.hpp"
#include "robust_trim/errors.hpp"
#include "robust_trim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace robust_trim {

namespace {

// Noise level used for q1 and the bounds when the true sigma is zero.
constexpr double kSigmaFloor = 1e-6;
constexpr double kBasicInequalitySlack = 1e-9;

double median(std::vector<double> v)
{
    if (v.empty())
        return 0.0;
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = 0.5 * (m + lo);
    }
    return m;
}

Matrix gaussian_design(Index n, Index p, std::mt19937_64& rng)
{
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix features(n, p - 1);
    for (Index j = 0; j < p - 1; ++j)
        for (Index i = 0; i < n; ++i)
            features(i, j) = z(rng);
    return features;
}

TrimPenaltyConfig penalty_config(const SimConfig& cfg, const SolverSettings& s, LambdaPair lambdas)
{
    TrimPenaltyConfig pc;
    pc.h = cfg.h;
    pc.lambda1 = lambdas.lambda1;
    pc.lambda2 = lambdas.lambda2;
    pc.tol = s.tol;
    pc.max_iter = s.max_iter;
    pc.penalize_intercept = s.penalize_intercept;
    return pc;
}

FitResult fit_auto(const Dataset& data, const TrimPenaltyConfig& pc, const SolverSettings& s, std::uint64_t seed)
{
    if (subset_count(data.n(), pc.h) <= s.exact_cap)
        return fit_exact(data, pc, s.exact_cap);
    CStepOptions opts;
    opts.n_starts = s.n_starts;
    opts.seed = seed;
    return fit_cstep(data, pc, opts);
}

std::size_t trial_threads(const SolverSettings& s) { return s.threads == 0 ? thread_budget() : s.threads; }

} // namespace

std::string_view to_string(ErrorDist d) { return d == ErrorDist::gaussian ? "gaussian" : "bounded_subgaussian"; }

ErrorDist parse_error_dist(std::string_view s)
{
    if (s == "gaussian")
        return ErrorDist::gaussian;
    if (s == "bounded_subgaussian")
        return ErrorDist::bounded_subgaussian;
    throw InvalidArgument("unknown error distribution '" + std::string(s) + "'");
}

void SimConfig::validate() const
{
    if (n < 1 || p < 2)
        throw InvalidArgument("need n >= 1 and p >= 2");
    if (s0 < 0 || s0 > p - 1)
        throw InvalidArgument("s0 must lie in [0, p - 1] (the intercept is never in the support)");
    if (h < (n + 1) / 2 || h > n)
        throw InvalidArgument("h must lie in [ceil(n/2), n]");
    if (!(sigma >= 0.0))
        throw InvalidArgument("sigma must be nonnegative");
    if (!(delta > 0.0 && delta < 1.0))
        throw InvalidArgument("delta must lie in (0, 1)");
    if (!(contamination_fraction >= 0.0 && contamination_fraction < 1.0))
        throw InvalidArgument("contamination fraction must lie in [0, 1)");
    if (n_trials < 1)
        throw InvalidArgument("n_trials must be >= 1");
}

Index SimConfig::contaminated_count() const
{
    return static_cast<Index>(std::floor(contamination_fraction * static_cast<double>(n)));
}

Instance generate_instance(const SimConfig& cfg, std::uint64_t trial)
{
    cfg.validate();
    std::mt19937_64 rng(mix_seed(cfg.seed, trial));

    Normalization norm = normalize_columns(Dataset::with_intercept(gaussian_design(cfg.n, cfg.p, rng),
                                                                   Vector::Zero(cfg.n)));
    const Matrix& x = norm.data.x();

    Coefficients beta0 = Coefficients::Zero(cfg.p);
    std::vector<Index> cols(static_cast<std::size_t>(cfg.p - 1));
    std::iota(cols.begin(), cols.end(), Index{1});
    std::shuffle(cols.begin(), cols.end(), rng);
    std::bernoulli_distribution coin(0.5);
    for (Index k = 0; k < cfg.s0; ++k)
        beta0[cols[static_cast<std::size_t>(k)]] = coin(rng) ? cfg.beta_amplitude : -cfg.beta_amplitude;

    Vector errors(cfg.n);
    if (cfg.error_dist == ErrorDist::gaussian) {
        std::normal_distribution<double> z(0.0, 1.0);
        for (Index i = 0; i < cfg.n; ++i)
            errors[i] = cfg.sigma * z(rng);
    } else {
        // uniform on [-sqrt(3) sigma, sqrt(3) sigma] has variance sigma^2
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (Index i = 0; i < cfg.n; ++i)
            errors[i] = std::sqrt(3.0) * cfg.sigma * u(rng);
    }

    std::vector<Index> rows(static_cast<std::size_t>(cfg.n));
    std::iota(rows.begin(), rows.end(), Index{0});
    std::shuffle(rows.begin(), rows.end(), rng);
    std::vector<Index> contaminated(rows.begin(), rows.begin() + cfg.contaminated_count());
    std::sort(contaminated.begin(), contaminated.end());
    for (Index i : contaminated)
        errors[i] += coin(rng) ? cfg.contamination_magnitude : -cfg.contamination_magnitude;

    Vector y = x * beta0 + errors;
    return Instance{Dataset(x, std::move(y)), std::move(beta0), std::move(errors), std::move(contaminated)};
}

double estimate_sigma(const Dataset& data, const FitResult& fit)
{
    detail::check_trim(data, fit.trim);
    const Vector r = residuals(data, fit.beta);
    double s = 0.0;
    for (Index i : fit.trim.indices())
        s += r[i] * r[i];
    return std::sqrt(s / static_cast<double>(fit.trim.h()));
}

double binomial_se(double level, std::size_t reps)
{
    return std::sqrt(level * (1.0 - level) / static_cast<double>(reps));
}

bool TailCheck::passes() const
{
    const double slack = 3.0 * binomial_se(std::min(bound, 1.0), reps);
    return upper_rate <= bound + slack && lower_rate <= bound + slack;
}

TailCheck chi_square_tail_check(Index h, double t, std::size_t reps, std::uint64_t seed)
{
    if (h < 1)
        throw InvalidArgument("degrees of freedom must be >= 1");
    if (!(t >= 0.0))
        throw InvalidArgument("t must be nonnegative");
    if (reps < 1000)
        throw InvalidArgument("at least 1000 replications are required");
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(h)));
    std::normal_distribution<double> z(0.0, 1.0);
    const double hd = static_cast<double>(h);
    const double upper = hd + 2.0 * std::sqrt(hd * t) + 2.0 * t;
    const double lower_gap = 2.0 * std::sqrt(hd * t);
    std::size_t up = 0;
    std::size_t lo = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        double chi2 = 0.0;
        for (Index k = 0; k < h; ++k) {
            const double v = z(rng);
            chi2 += v * v;
        }
        up += chi2 >= upper;
        lo += hd - chi2 >= lower_gap;
    }
    const auto total = static_cast<double>(reps);
    return TailCheck{h, t, reps, static_cast<double>(up) / total, static_cast<double>(lo) / total, std::exp(-t)};
}

bool MaxCheck::passes() const { return rate <= target + 3.0 * binomial_se(std::min(target, 1.0), reps); }

MaxCheck subgaussian_max_check(Index n, Index p, Index h, double sigma, double delta, std::size_t reps,
                               std::uint64_t seed)
{
    if (h < 1 || h > n)
        throw InvalidArgument("h must lie in [1, n]");
    if (reps < 1000)
        throw InvalidArgument("at least 1000 replications are required");
    std::mt19937_64 rng(mix_seed(seed, 0));
    const Normalization norm =
        normalize_columns(Dataset::with_intercept(gaussian_design(n, p, rng), Vector::Zero(n)));
    std::vector<Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Index{0});
    std::shuffle(rows.begin(), rows.end(), rng);
    rows.resize(static_cast<std::size_t>(h));
    Matrix xd(h, p);
    for (Index k = 0; k < h; ++k)
        xd.row(k) = norm.data.x().row(rows[static_cast<std::size_t>(k)]);

    const double threshold = q1(sigma, n, p, 0.0, delta);
    const double nd = static_cast<double>(n);
    const double target =
        sigma > 0.0 ? 2.0 * static_cast<double>(p) * std::exp(-nd * threshold * threshold / (8.0 * sigma * sigma))
                    : 0.0;

    std::normal_distribution<double> z(0.0, 1.0);
    Vector e(h);
    std::size_t exceed = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        for (Index k = 0; k < h; ++k)
            e[k] = sigma * z(rng);
        const double stat = 2.0 * (xd.transpose() * e).cwiseAbs().maxCoeff() / nd;
        exceed += stat > threshold;
    }
    return MaxCheck{static_cast<double>(exceed) / static_cast<double>(reps), target, threshold, reps};
}

BasicInequality basic_inequality(const Dataset& data, const Coefficients& beta_hat, const Coefficients& beta0,
                                 const Vector& errors, const TrimPenaltyConfig& cfg)
{
    detail::check_dims(data, beta_hat);
    detail::check_dims(data, beta0);
    if (errors.size() != data.n())
        throw DimensionMismatch("error vector length does not match n");
    const double nd = static_cast<double>(data.n());
    const TrimSet d_hat = trim_weights(residuals(data, beta_hat).array().square(), cfg.h);
    const TrimSet d_true = trim_weights(errors.array().square(), cfg.h);
    const Coefficients delta = beta_hat - beta0;
    const Vector fitted_gap = data.x() * delta;

    double cross = 0.0;
    double e_hat = 0.0;
    for (Index i : d_hat.indices()) {
        cross += errors[i] * fitted_gap[i];
        e_hat += errors[i] * errors[i];
    }
    double e_true = 0.0;
    for (Index i : d_true.indices())
        e_true += errors[i] * errors[i];

    BasicInequality b{};
    b.lhs = trimmed_seminorm(data, delta, d_hat);
    b.cross_term = 2.0 * cross / nd;
    b.noise_term = (e_true - e_hat) / nd;
    b.penalty_term = penalty(beta0, cfg) - penalty(beta_hat, cfg);
    b.rhs = b.cross_term + b.noise_term + b.penalty_term;
    return b;
}

const ClaimRecord& CoverageReport::claim(std::string_view name) const
{
    for (const auto& c : claims)
        if (c.name == name)
            return c;
    throw InvalidArgument("no claim named '" + std::string(name) + "'");
}

CoverageReport run_coverage_experiment(const SimConfig& cfg, const SolverSettings& settings)
{
    cfg.validate();
    CoverageReport rep;
    rep.config = cfg;
    rep.settings = settings;
    rep.n_trials = cfg.n_trials;
    rep.log_L = log_binomial(cfg.n, cfg.h);

    std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.n_trials));
    parallel_for(records.size(), trial_threads(settings), [&](std::size_t t) {
        TrialRecord& rec = records[t];
        rec.trial = t;
        try {
            const Instance inst = generate_instance(cfg, t);
            const Dataset& data = inst.data;
            const std::uint64_t fit_seed = mix_seed(cfg.seed ^ 0x5bd1e995ULL, t);

            ConstantSet constants = ConstantSet::known_sigma;
            double sigma_used = std::max(cfg.sigma, kSigmaFloor);
            if (settings.sigma_mode == SigmaMode::estimated) {
                TrimPenaltyConfig pilot = penalty_config(cfg, settings, {0.0, 0.0});
                sigma_used = std::max(estimate_sigma(data, fit_auto(data, pilot, settings, fit_seed)), kSigmaFloor);
                constants = ConstantSet::estimated_sigma;
            }
            rec.sigma_used = sigma_used;

            const double q1v = q1(sigma_used, cfg.n, cfg.p, rep.log_L, cfg.delta, constants);
            const double q2v = q2_q3(cfg.h, rep.log_L, cfg.delta, constants).q2;
            const LambdaPair lambdas =
                settings.lambda_override ? *settings.lambda_override : select_lambdas(q1v, settings.lambda2_override);
            rec.lambda1 = lambdas.lambda1;
            rec.lambda2 = lambdas.lambda2;
            const TrimPenaltyConfig pc = penalty_config(cfg, settings, lambdas);

            const FitResult fit = fit_auto(data, pc, settings, fit_seed);
            rec.method = std::string(to_string(fit.method));
            rec.objective = fit.objective_value;

            const Coefficients delta = fit.beta - inst.beta0;
            rec.realized_prediction_error = mse_trimmed(data, fit.beta, inst.beta0, fit.trim);
            const double l1 = inst.beta0.lpNorm<1>();
            // The zero-signal model leaves C undefined; the bound then degenerates to its noise part.
            rec.prediction_bound = l1 > 0.0 ? prediction_bound(l1, cfg.n, sigma_used, q1v, q2v)
                                            : 2.0 * sigma_used * sigma_used * q2v / static_cast<double>(cfg.n);
            rec.prediction_held = rec.realized_prediction_error <= rec.prediction_bound;

            const EtaZeta ez = eta_zeta(sigma_used, q2v, cfg.n, lambdas.lambda1);
            rec.cone_gap = cone_gap(fit.beta, inst.beta0, support_of(inst.beta0), ez.eta, lambdas.lambda1);
            rec.basic_inequality_slack = basic_inequality(data, fit.beta, inst.beta0, inst.errors, pc).slack();
            rec.estimation_error_sq = delta.squaredNorm();

            const Matrix x_star = trimmed_design(data, fit.trim);
            const auto s0 = static_cast<Index>(support_of(inst.beta0).size());
            const Index k = std::max<Index>(1, static_cast<Index>(std::ceil(required_k_stated(s0, cfg.p))));
            const IncoherenceResult inc = incoherence_check(x_star, k);
            rec.incoherence_deviation = inc.deviation;
            rec.incoherence_holds = inc.holds;
            rec.estimation_bound_highdim = estimation_bound_highdim(rec.realized_prediction_error, k, ez.zeta);
            if (cfg.p < cfg.n) {
                try {
                    rec.estimation_bound_lowdim = estimation_bound_lowdim(rec.prediction_bound, x_star);
                } catch (const RankDeficient&) {
                    rec.estimation_bound_lowdim.reset();
                }
            }
            rec.contaminated_excluded = std::none_of(inst.contaminated.begin(), inst.contaminated.end(),
                                                     [&](Index i) { return fit.trim.contains(i); });
        } catch (const Error& e) {
            rec.failed = true;
            rec.failure = e.what();
        }
    });

    const double target = 1.0 - cfg.delta;
    ClaimRecord pred{"prediction_bound", 0, 0, 0.0, target};
    ClaimRecord cone{"cone_condition", 0, 0, 0.0, target};
    ClaimRecord basic{"basic_inequality", 0, 0, 0.0, 1.0};
    ClaimRecord high{"estimation_bound_highdim", 0, 0, 0.0, target};
    ClaimRecord low{"estimation_bound_lowdim", 0, 0, 0.0, target};
    std::vector<double> realized;
    double bound_sum = 0.0;
    for (const auto& r : records) {
        if (r.failed) {
            ++rep.failed_trials;
            continue;
        }
        ++pred.trials;
        pred.times_held += r.prediction_held;
        ++cone.trials;
        cone.times_held += r.cone_gap <= 0.0;
        ++basic.trials;
        basic.times_held += r.basic_inequality_slack >= -kBasicInequalitySlack;
        if (r.incoherence_holds) {
            ++high.trials;
            high.times_held += r.estimation_error_sq <= r.estimation_bound_highdim;
        }
        if (r.estimation_bound_lowdim) {
            ++low.trials;
            low.times_held += r.estimation_error_sq <= *r.estimation_bound_lowdim;
        }
        realized.push_back(r.realized_prediction_error);
        bound_sum += r.prediction_bound;
    }
    for (ClaimRecord* c : {&pred, &cone, &basic, &high, &low}) {
        c->empirical_rate = c->trials > 0 ? static_cast<double>(c->times_held) / c->trials : 0.0;
        rep.claims.push_back(*c);
    }
    if (!realized.empty()) {
        rep.mean_prediction_error = std::accumulate(realized.begin(), realized.end(), 0.0) / realized.size();
        rep.median_prediction_error = median(realized);
        rep.mean_bound = bound_sum / realized.size();
    }
    const double q1_sigma = std::max(cfg.sigma, kSigmaFloor);
    rep.q1 = q1(q1_sigma, cfg.n, cfg.p, rep.log_L, cfg.delta);
    rep.q2 = q2_q3(cfg.h, rep.log_L, cfg.delta).q2;
    rep.trials = std::move(records);
    return rep;
}

nlohmann::json to_json(const SimConfig& cfg)
{
    return {
        {"n", cfg.n},
        {"p", cfg.p},
        {"s0", cfg.s0},
        {"beta_amplitude", cfg.beta_amplitude},
        {"sigma", cfg.sigma},
        {"h", cfg.h},
        {"delta", cfg.delta},
        {"error_dist", std::string(to_string(cfg.error_dist))},
        {"contamination_fraction", cfg.contamination_fraction},
        {"contamination_magnitude", cfg.contamination_magnitude},
        {"n_trials", cfg.n_trials},
        {"seed", cfg.seed},
    };
}

namespace {

nlohmann::json to_json(const SolverSettings& s)
{
    nlohmann::json j = {
        {"n_starts", s.n_starts},
        {"exact_cap", s.exact_cap},
        {"sigma_mode", s.sigma_mode == SigmaMode::known ? "known" : "estimated"},
        {"tol", s.tol},
        {"max_iter", s.max_iter},
        {"penalize_intercept", s.penalize_intercept},
    };
    j["lambda2_override"] = s.lambda2_override ? nlohmann::json(*s.lambda2_override) : nlohmann::json(nullptr);
    if (s.lambda_override)
        j["lambda_override"] = {s.lambda_override->lambda1, s.lambda_override->lambda2};
    else
        j["lambda_override"] = nullptr;
    return j;
}

} // namespace

nlohmann::json to_json(const CoverageReport& r)
{
    nlohmann::json j;
    j["schema_version"] = 1;
    j["config"] = to_json(r.config);
    j["solver"] = to_json(r.settings);
    j["constant_set"] = r.settings.sigma_mode == SigmaMode::known ? "known_sigma" : "estimated_sigma";
    j["n_trials"] = r.n_trials;
    j["failed_trials"] = r.failed_trials;
    j["log_L"] = r.log_L;
    j["q1"] = r.q1;
    j["q2"] = r.q2;
    j["claims"] = nlohmann::json::array();
    for (const auto& c : r.claims)
        j["claims"].push_back({{"claim", c.name},
                               {"trials", c.trials},
                               {"times_held", c.times_held},
                               {"empirical_rate", c.empirical_rate},
                               {"target", c.target}});
    j["mean_prediction_error"] = r.mean_prediction_error;
    j["median_prediction_error"] = r.median_prediction_error;
    j["mean_prediction_bound"] = r.mean_bound;
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& t : r.trials)
        if (t.failed)
            failures.push_back({{"trial", t.trial}, {"reason", t.failure}});
    j["failures"] = failures;
    return j;
}

std::string trials_csv(const CoverageReport& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "trial,claim,applicable,held,value,bound\n";
    for (const auto& t : r.trials) {
        if (t.failed) {
            os << t.trial << ",failed,0,0,,\n";
            continue;
        }
        os << t.trial << ",prediction_bound,1," << t.prediction_held << ',' << t.realized_prediction_error << ','
           << t.prediction_bound << '\n';
        os << t.trial << ",cone_condition,1," << (t.cone_gap <= 0.0) << ',' << t.cone_gap << ",0\n";
        os << t.trial << ",basic_inequality,1," << (t.basic_inequality_slack >= -kBasicInequalitySlack) << ','
           << t.basic_inequality_slack << ",0\n";
        os << t.trial << ",estimation_bound_highdim," << t.incoherence_holds << ','
           << (t.incoherence_holds && t.estimation_error_sq <= t.estimation_bound_highdim) << ','
           << t.estimation_error_sq << ',' << t.estimation_bound_highdim << '\n';
        os << t.trial << ",estimation_bound_lowdim," << t.estimation_bound_lowdim.has_value() << ','
           << (t.estimation_bound_lowdim && t.estimation_error_sq <= *t.estimation_bound_lowdim) << ','
           << t.estimation_error_sq << ',';
        if (t.estimation_bound_lowdim)
            os << *t.estimation_bound_lowdim;
        os << '\n';
    }
    return os.str();
}

std::string plot_csv(const CoverageReport& r)
{
    std::vector<const TrialRecord*> ok;
    for (const auto& t : r.trials)
        if (!t.failed)
            ok.push_back(&t);
    std::stable_sort(ok.begin(), ok.end(), [](const TrialRecord* a, const TrialRecord* b) {
        return a->realized_prediction_error < b->realized_prediction_error;
    });
    std::ostringstream os;
    os.precision(17);
    os << "rank,trial,realized_prediction_error,prediction_bound\n";
    for (std::size_t k = 0; k < ok.size(); ++k)
        os << k << ',' << ok[k]->trial << ',' << ok[k]->realized_prediction_error << ',' << ok[k]->prediction_bound
           << '\n';
    return os.str();
}

RobustnessReport run_robustness_comparison(const SimConfig& cfg, const SolverSettings& settings)
{
    cfg.validate();
    RobustnessReport rep;
    rep.n_trials = cfg.n_trials;
    const double log_L = log_binomial(cfg.n, cfg.h);
    const double sigma_used = std::max(cfg.sigma, kSigmaFloor);
    const LambdaPair lambdas =
        settings.lambda_override
            ? *settings.lambda_override
            : select_lambdas(q1(sigma_used, cfg.n, cfg.p, log_L, cfg.delta), settings.lambda2_override);
    rep.lambda1 = lambdas.lambda1;
    rep.lambda2 = lambdas.lambda2;

    struct Slot
    {
        bool failed = false;
        RobustnessTrial trial;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(cfg.n_trials));
    parallel_for(slots.size(), trial_threads(settings), [&](std::size_t t) {
        Slot& slot = slots[t];
        slot.trial.trial = t;
        try {
            const Instance inst = generate_instance(cfg, t);
            const TrimPenaltyConfig pc = penalty_config(cfg, settings, lambdas);
            const FitResult fit = fit_auto(inst.data, pc, settings, mix_seed(cfg.seed ^ 0x5bd1e995ULL, t));
            const SubproblemSolution full =
                solve_enet_on_subset(inst.data, TrimSet::all(cfg.n), enet_options(pc));
            if (!full.converged)
                throw SolverError("untrimmed elastic net did not converge");
            slot.trial.lts_error = (fit.beta - inst.beta0).norm();
            slot.trial.enet_error = (full.beta - inst.beta0).norm();
            slot.trial.excluded_all = std::none_of(inst.contaminated.begin(), inst.contaminated.end(),
                                                   [&](Index i) { return fit.trim.contains(i); });
        } catch (const Error&) {
            slot.failed = true;
        }
    });

    std::vector<double> lts;
    std::vector<double> enet;
    for (const auto& s : slots) {
        if (s.failed) {
            ++rep.failed_trials;
            continue;
        }
        rep.excluded_all_count += s.trial.excluded_all;
        rep.lts_wins += s.trial.lts_error < s.trial.enet_error;
        lts.push_back(s.trial.lts_error);
        enet.push_back(s.trial.enet_error);
        rep.trials.push_back(s.trial);
    }
    rep.median_lts_error = median(lts);
    rep.median_enet_error = median(enet);
    return rep;
}

nlohmann::json to_json(const RobustnessReport& r)
{
    return {
        {"schema_version", 1},
        {"n_trials", r.n_trials},
        {"failed_trials", r.failed_trials},
        {"lambda1", r.lambda1},
        {"lambda2", r.lambda2},
        {"trim_excludes_all_outliers", r.excluded_all_count},
        {"trimmed_fit_wins", r.lts_wins},
        {"median_trimmed_error", r.median_lts_error},
        {"median_untrimmed_error", r.median_enet_error},
    };
}

} // namespace robust_trim
