// robust-trim: command-line front end for the penalized trimmed regression
// library. See `robust-trim --help` and `robust-trim <command> --help`.

#include "robust_trim/bounds.hpp"
#include "robust_trim/errors.hpp"
#include "robust_trim/io.hpp"
#include "robust_trim/lts.hpp"
#include "robust_trim/model.hpp"
#include "robust_trim/parallel.hpp"
#include "robust_trim/simulate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rt = robust_trim;
using nlohmann::json;

namespace {

enum Exit : int {
    ok = 0,
    verification_failed = 1,
    data_error = 2,
    solver_failure = 3,
    usage = 64,
    undefined_bound = 65,
};

constexpr int kSchemaVersion = 1;

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void emit(const std::string& output, const std::string& content)
{
    if (output.empty() || output == "-")
        std::cout << content;
    else
        rt::io::write_atomic(output, content);
}

void emit_json(const std::string& output, json report)
{
    report["created_at"] = utc_timestamp();
    emit(output, report.dump(2) + "\n");
}

std::vector<double> parse_list(const std::string& text, const std::string& flag)
{
    std::vector<double> out;
    std::istringstream is(text);
    std::string cell;
    while (std::getline(is, cell, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(cell, &used));
            if (used != cell.size())
                throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw rt::InvalidArgument(flag + ": '" + cell + "' is not a number");
        }
    }
    if (out.empty())
        throw rt::InvalidArgument(flag + " is empty");
    return out;
}

// Shared by fit and fit-path.
struct DataOptions
{
    std::string input;
    std::string response;
    bool add_intercept = true;
    bool normalize = false;
};

struct SolveOptions
{
    rt::Index h = 0;
    bool exempt_intercept = false;
    int n_starts = 500;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    int max_iter = 10000;
};

void add_data_options(CLI::App* cmd, DataOptions& d)
{
    cmd->add_option("--input,-i", d.input, "CSV file with a header row and numeric columns")->required();
    cmd->add_option("--response", d.response, "name of the response column (default: last column)");
    cmd->add_flag("--add-intercept,!--no-add-intercept", d.add_intercept,
                  "prepend an all-ones intercept column (default: on); with --no-add-intercept the first "
                  "predictor must already be all ones");
    cmd->add_flag("--normalize", d.normalize,
                  "rescale columns with ||x_j||/sqrt(n) > 1 before fitting; coefficients are reported on the "
                  "original scale (default: off)");
}

void add_solve_options(CLI::App* cmd, SolveOptions& s)
{
    cmd->add_option("--h", s.h, "trimming size: number of observations kept, in [ceil(n/2), n] (default: ceil(0.75 n))");
    cmd->add_flag("--exempt-intercept", s.exempt_intercept, "do not penalize the intercept (default: penalized)");
    cmd->add_option("--n-starts", s.n_starts, "random C-step starts")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", s.seed, "RNG seed for the C-step starts")->capture_default_str();
    cmd->add_option("--tol", s.tol, "coordinate descent tolerance on moves and KKT residual")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", s.max_iter, "coordinate descent sweep budget per subproblem")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

struct Prepared
{
    rt::io::LoadedData loaded;
    std::optional<rt::Normalization> norm;
    const rt::Dataset& fit_data() const { return norm ? norm->data : loaded.data; }
};

Prepared prepare(const DataOptions& d)
{
    Prepared p{rt::io::to_dataset(rt::io::read_csv(d.input), d.response, d.add_intercept), std::nullopt};
    if (d.normalize) {
        try {
            p.norm = rt::normalize_columns(p.loaded.data);
        } catch (const rt::DegenerateColumn& e) {
            throw rt::DataError(e.what());
        }
    }
    return p;
}

rt::TrimPenaltyConfig make_config(const rt::Dataset& data, const SolveOptions& s, double lambda1, double lambda2)
{
    rt::TrimPenaltyConfig cfg;
    cfg.h = s.h > 0 ? s.h : rt::default_h(data.n());
    cfg.lambda1 = lambda1;
    cfg.lambda2 = lambda2;
    cfg.tol = s.tol;
    cfg.max_iter = s.max_iter;
    cfg.penalize_intercept = !s.exempt_intercept;
    cfg.validate(data.n());
    return cfg;
}

json config_json(const DataOptions& d, const SolveOptions& s, const rt::TrimPenaltyConfig& cfg)
{
    return {
        {"input", d.input},
        {"response", d.response.empty() ? json(nullptr) : json(d.response)},
        {"add_intercept", d.add_intercept},
        {"normalize", d.normalize},
        {"h", cfg.h},
        {"penalize_intercept", cfg.penalize_intercept},
        {"n_starts", s.n_starts},
        {"seed", s.seed},
        {"tol", cfg.tol},
        {"max_iter", cfg.max_iter},
    };
}

json fit_json(const Prepared& prep, const rt::TrimPenaltyConfig& cfg, const rt::FitResult& fit)
{
    const rt::Dataset& data = prep.fit_data();
    json out;
    out["coefficient_names"] = prep.loaded.coefficient_names;
    out["coefficients"] = rt::io::to_std(prep.norm ? rt::denormalize(fit.beta, prep.norm->scale) : fit.beta);
    if (prep.norm)
        out["coefficients_normalized"] = rt::io::to_std(fit.beta);
    out["trim_indices"] = rt::io::one_based(fit.trim);
    out["objective"] = fit.objective_value;
    out["method"] = std::string(rt::to_string(fit.method));
    json diag = {
        {"kkt_residual", rt::kkt_residual(data, fit.trim, fit.beta, rt::enet_options(cfg))},
        {"unique_flag", fit.unique_flag},
        {"nonconverged_solves", fit.nonconverged_solves},
    };
    if (fit.method == rt::FitMethod::exact) {
        diag["subsets_evaluated"] = fit.subsets_evaluated;
    } else {
        diag["starts_used"] = fit.starts_used;
        diag["cstep_iterations"] = fit.cstep_iterations;
        diag["total_csteps"] = fit.total_csteps;
        diag["seed"] = fit.seed;
    }
    if (prep.norm)
        diag["rescaled_columns"] = prep.norm->rescaled_columns;
    out["diagnostics"] = diag;
    return out;
}

// ---- fit -------------------------------------------------------------------

struct FitArgs
{
    DataOptions data;
    SolveOptions solve;
    double lambda1 = 0.1;
    double lambda2 = 0.0;
    bool exact = false;
    std::uint64_t exact_cap = rt::kDefaultExactCap;
    std::string warm_start;
    std::string output;
};

int run_fit(const FitArgs& a)
{
    const Prepared prep = prepare(a.data);
    const rt::Dataset& data = prep.fit_data();
    const rt::TrimPenaltyConfig cfg = make_config(data, a.solve, a.lambda1, a.lambda2);

    std::optional<rt::FitResult> fit;
    if (a.exact) {
        fit = rt::fit_exact(data, cfg, a.exact_cap);
    } else {
        rt::CStepOptions opts;
        opts.n_starts = a.solve.n_starts;
        opts.seed = a.solve.seed;
        opts.threads = rt::thread_budget();
        if (!a.warm_start.empty()) {
            std::ifstream f(a.warm_start);
            if (!f)
                throw rt::DataError("cannot open '" + a.warm_start + "'");
            json report;
            try {
                report = json::parse(f);
            } catch (const json::exception& e) {
                throw rt::DataError("warm start '" + a.warm_start + "': " + e.what());
            }
            rt::Coefficients w = rt::io::read_coefficients(report);
            if (w.size() != data.p())
                throw rt::DataError("warm start has " + std::to_string(w.size()) + " coefficients, design has " +
                                    std::to_string(data.p()));
            if (prep.norm)
                w = w.cwiseQuotient(prep.norm->scale);
            opts.warm_starts.push_back(std::move(w));
        }
        fit = rt::fit_cstep(data, cfg, opts);
    }

    json out = fit_json(prep, cfg, *fit);
    json config = config_json(a.data, a.solve, cfg);
    config["lambda1"] = cfg.lambda1;
    config["lambda2"] = cfg.lambda2;
    config["exact"] = a.exact;
    config["exact_cap"] = a.exact_cap;
    config["warm_start"] = a.warm_start.empty() ? json(nullptr) : json(a.warm_start);
    json report = {{"schema_version", kSchemaVersion}, {"command", "fit"}, {"config", config}};
    report.update(out);
    emit_json(a.output, std::move(report));
    return Exit::ok;
}

// ---- fit-path --------------------------------------------------------------

struct PathArgs
{
    DataOptions data;
    SolveOptions solve;
    std::string grid;
    int n_lambda = 10;
    double lambda_min_ratio = 0.01;
    double lambda2_ratio = 0.0;
    std::string output;
};

int run_fit_path(const PathArgs& a)
{
    const Prepared prep = prepare(a.data);
    const rt::Dataset& data = prep.fit_data();
    const rt::TrimPenaltyConfig base = make_config(data, a.solve, 0.0, 0.0);

    std::vector<double> grid;
    double lambda_max = 0.0;
    if (!a.grid.empty()) {
        grid = parse_list(a.grid, "--lambda1-grid");
    } else {
        if (a.n_lambda < 1)
            throw rt::InvalidArgument("--n-lambda must be >= 1");
        if (!(a.lambda_min_ratio > 0.0 && a.lambda_min_ratio < 1.0))
            throw rt::InvalidArgument("--lambda-min-ratio must lie in (0, 1)");
        lambda_max = rt::global_dead_zone(data, base.h);
        if (!(lambda_max > 0.0))
            throw rt::DataError("response is identically zero; no lambda grid to build");
        for (int k = 0; k < a.n_lambda; ++k) {
            const double frac = a.n_lambda == 1 ? 0.0 : static_cast<double>(k) / (a.n_lambda - 1);
            grid.push_back(lambda_max * std::pow(a.lambda_min_ratio, frac));
        }
    }

    rt::CStepOptions opts;
    opts.n_starts = a.solve.n_starts;
    opts.seed = a.solve.seed;
    opts.threads = rt::thread_budget();
    const rt::PathResult path = rt::fit_path(data, base, grid, a.lambda2_ratio, opts);

    json entries = json::array();
    for (const auto& e : path.entries) {
        rt::TrimPenaltyConfig cfg = base;
        cfg.lambda1 = e.lambda1;
        cfg.lambda2 = e.lambda2;
        json entry = {{"lambda1", e.lambda1}, {"lambda2", e.lambda2}};
        entry.update(fit_json(prep, cfg, e.fit));
        entries.push_back(std::move(entry));
    }
    json config = config_json(a.data, a.solve, base);
    config["lambda1_grid"] = grid;
    config["lambda2_ratio"] = a.lambda2_ratio;
    if (a.grid.empty()) {
        config["n_lambda"] = a.n_lambda;
        config["lambda_min_ratio"] = a.lambda_min_ratio;
        config["lambda_max"] = lambda_max;
    }
    json report = {{"schema_version", kSchemaVersion},
                   {"command", "fit-path"},
                   {"config", config},
                   {"coefficient_names", prep.loaded.coefficient_names},
                   {"path", entries}};
    emit_json(a.output, std::move(report));
    return Exit::ok;
}

// ---- bounds ----------------------------------------------------------------

struct BoundsArgs
{
    rt::Index n = 0;
    rt::Index p = 0;
    rt::Index h = 0;
    double sigma = 1.0;
    double delta = 0.1;
    std::optional<double> norm_beta0;
    rt::Index s0 = 1;
    std::string beta0_file;
    std::optional<double> lambda2;
    bool sigma_estimated = false;
    std::optional<double> sigma_hat;
    std::optional<rt::Index> k;
    std::optional<double> mse;
    std::string design;
    std::size_t incoherence_samples = 200;
    std::uint64_t seed = 0;
    std::string output;
};

int run_bounds(const BoundsArgs& a)
{
    rt::Coefficients beta0;
    rt::Index p = a.p;
    if (!a.beta0_file.empty()) {
        beta0 = rt::io::read_vector_file(a.beta0_file);
        if (p == 0)
            p = beta0.size();
        else if (beta0.size() != p)
            throw rt::InvalidArgument("--beta0-file has " + std::to_string(beta0.size()) + " entries but --p is " +
                                      std::to_string(p));
    } else {
        if (!a.norm_beta0 || p == 0)
            throw rt::InvalidArgument("give either --beta0-file or both --p and --norm-beta0");
        if (!(*a.norm_beta0 >= 0.0) || !std::isfinite(*a.norm_beta0))
            throw rt::InvalidArgument("--norm-beta0 must be finite and nonnegative");
        if (a.s0 < 1 || a.s0 > p - 1)
            throw rt::InvalidArgument("--s0 must lie in [1, p - 1]");
        beta0 = rt::Coefficients::Zero(p);
        beta0.segment(1, a.s0).setConstant(*a.norm_beta0 / static_cast<double>(a.s0));
    }
    const rt::Index h = a.h > 0 ? a.h : rt::default_h(a.n);
    const rt::BoundInputs inputs = rt::BoundInputs::make(a.n, p, h, a.sigma, a.delta, beta0);

    rt::BoundOptions opts;
    opts.lambda2_override = a.lambda2;
    opts.constants = a.sigma_estimated ? rt::ConstantSet::estimated_sigma : rt::ConstantSet::known_sigma;
    opts.sigma_hat = a.sigma_hat;
    opts.k = a.k;
    opts.mse = a.mse;
    if (!a.design.empty()) {
        const rt::io::Table t = rt::io::read_csv(a.design);
        if (t.values.rows() != a.n || t.values.cols() + 1 != p)
            throw rt::DataError("--design must have n rows and p - 1 feature columns (intercept is added)");
        const rt::Dataset d = rt::Dataset::with_intercept(t.values, rt::Vector::Zero(a.n));
        opts.incoherence_deviation = rt::incoherence_worst_case(d, h, a.incoherence_samples, a.seed);
    }

    json report = rt::to_json(rt::compute_bounds(inputs, opts));
    report["command"] = "bounds";
    report["config"] = {
        {"beta0_file", a.beta0_file.empty() ? json(nullptr) : json(a.beta0_file)},
        {"norm_beta0", a.norm_beta0 ? json(*a.norm_beta0) : json(nullptr)},
        {"s0", a.beta0_file.empty() ? json(a.s0) : json(nullptr)},
        {"design", a.design.empty() ? json(nullptr) : json(a.design)},
        {"incoherence_samples", a.incoherence_samples},
        {"seed", a.seed},
    };
    emit_json(a.output, std::move(report));
    return Exit::ok;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs
{
    rt::SimConfig cfg;
    std::string error_dist = "gaussian";
    int n_starts = 50;
    std::uint64_t exact_cap = rt::kDefaultExactCap;
    std::optional<double> lambda1;
    std::optional<double> lambda2;
    std::string sigma_mode = "known";
    bool compare_untrimmed = false;
    std::string output;
    std::string trials_csv;
    std::string plot_csv;
};

int run_simulate(SimulateArgs a)
{
    a.cfg.error_dist = rt::parse_error_dist(a.error_dist);
    if (a.cfg.n_trials < 1)
        throw rt::InvalidArgument("--trials must be >= 1");
    a.cfg.validate();

    rt::SolverSettings s;
    s.n_starts = a.n_starts;
    s.exact_cap = a.exact_cap;
    s.threads = 0;
    if (a.sigma_mode == "known")
        s.sigma_mode = rt::SigmaMode::known;
    else if (a.sigma_mode == "estimated")
        s.sigma_mode = rt::SigmaMode::estimated;
    else
        throw rt::InvalidArgument("--sigma-mode must be 'known' or 'estimated'");
    if (a.lambda1)
        s.lambda_override = rt::LambdaPair{*a.lambda1, a.lambda2.value_or(0.0)};
    else
        s.lambda2_override = a.lambda2;

    const rt::CoverageReport report = rt::run_coverage_experiment(a.cfg, s);
    json out = rt::to_json(report);
    out["command"] = "simulate";
    if (a.compare_untrimmed)
        out["robustness"] = rt::to_json(rt::run_robustness_comparison(a.cfg, s));
    emit_json(a.output, std::move(out));
    if (!a.trials_csv.empty())
        rt::io::write_atomic(a.trials_csv, rt::trials_csv(report));
    if (!a.plot_csv.empty())
        rt::io::write_atomic(a.plot_csv, rt::plot_csv(report));

    if (report.failed_trials * 20 > report.n_trials) {
        std::cerr << "robust-trim: " << report.failed_trials << " of " << report.n_trials
                  << " trials failed to converge (limit 5%)\n";
        return Exit::solver_failure;
    }
    return Exit::ok;
}

// ---- verify-tails ----------------------------------------------------------

struct TailsArgs
{
    std::string h_grid = "5,20,100";
    std::string t_grid = "1,3";
    std::size_t reps = 100000;
    rt::Index max_n = 100;
    rt::Index max_p = 10;
    rt::Index max_h = 75;
    double sigma = 1.0;
    double delta = 0.1;
    std::size_t max_reps = 10000;
    std::uint64_t seed = 0;
    std::string output;
};

int run_verify_tails(const TailsArgs& a)
{
    if (a.reps < 1000 || a.max_reps < 1000)
        throw rt::InvalidArgument("--reps and --max-reps must be >= 1000");
    const std::vector<double> hs = parse_list(a.h_grid, "--h-grid");
    const std::vector<double> ts = parse_list(a.t_grid, "--t-grid");

    std::ostringstream table;
    table << std::setprecision(6);
    table << "check,h,t,reps,empirical_rate,level,binomial_se,limit,pass\n";
    bool all_pass = true;
    std::uint64_t stream = 0;
    auto fmt = [](double v) {
        std::ostringstream os;
        os << v;
        return os.str();
    };
    auto row = [&](const std::string& name, rt::Index h, const std::string& t, std::size_t reps, double rate,
                   double level) {
        const double se = rt::binomial_se(level, reps);
        const bool pass = rate <= level + 3.0 * se;
        all_pass = all_pass && pass;
        table << name << ',' << h << ',' << t << ',' << reps << ',' << rate << ',' << level << ',' << se << ','
              << level + 3.0 * se << ',' << (pass ? "PASS" : "FAIL") << '\n';
    };
    for (double hv : hs) {
        if (hv < 1 || hv != std::floor(hv))
            throw rt::InvalidArgument("--h-grid entries must be positive integers");
        for (double t : ts) {
            const auto h = static_cast<rt::Index>(hv);
            const rt::TailCheck c = rt::chi_square_tail_check(h, t, a.reps, rt::mix_seed(a.seed, stream++));
            row("chi2_upper", h, fmt(t), a.reps, c.upper_rate, c.bound);
            row("chi2_lower", h, fmt(t), a.reps, c.lower_rate, c.bound);
        }
    }
    const rt::MaxCheck m =
        rt::subgaussian_max_check(a.max_n, a.max_p, a.max_h, a.sigma, a.delta, a.max_reps, rt::mix_seed(a.seed, stream));
    row("subgaussian_max", a.max_h, "", a.max_reps, m.rate, m.target);

    emit(a.output, table.str());
    if (!all_pass) {
        std::cerr << "robust-trim: at least one tail check exceeded its level by more than 3 binomial SE\n";
        return Exit::verification_failed;
    }
    return Exit::ok;
}

int guarded(const std::function<int()>& body)
{
    try {
        return body();
    } catch (const rt::DataError& e) {
        std::cerr << "robust-trim: data error: " << e.what() << '\n';
        return Exit::data_error;
    } catch (const rt::RankDeficient& e) {
        std::cerr << "robust-trim: data error: " << e.what() << '\n';
        return Exit::data_error;
    } catch (const rt::DegenerateColumn& e) {
        std::cerr << "robust-trim: data error: " << e.what() << '\n';
        return Exit::data_error;
    } catch (const rt::SolverError& e) {
        std::cerr << "robust-trim: solver failure: " << e.what() << '\n';
        return Exit::solver_failure;
    } catch (const rt::UndefinedBound& e) {
        std::cerr << "robust-trim: undefined bound: " << e.what() << '\n';
        return Exit::undefined_bound;
    } catch (const rt::TooLarge& e) {
        std::cerr << "robust-trim: " << e.what() << '\n';
        return Exit::usage;
    } catch (const rt::InvalidArgument& e) {
        std::cerr << "robust-trim: invalid argument: " << e.what() << '\n';
        return Exit::usage;
    } catch (const rt::Error& e) {
        std::cerr << "robust-trim: " << e.what() << '\n';
        return Exit::solver_failure;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Penalized least trimmed squares regression: fitting, finite-sample bounds and Monte Carlo checks.\n"
                 "Exit codes: 0 ok, 1 verification failure, 2 data error, 3 solver failure, 64 usage, "
                 "65 undefined bound. ROBUST_TRIM_THREADS caps worker threads.",
                 "robust-trim"};
    // --h is the trimming size, so help is long-form only.
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file with simulate options under a [simulate] section; unknown keys "
                                   "are rejected");
    app.allow_config_extras(false);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "fit the penalized trimmed estimator at one (lambda1, lambda2)");
    add_data_options(fit_cmd, fit.data);
    add_solve_options(fit_cmd, fit.solve);
    fit_cmd->add_option("--lambda1", fit.lambda1, "l1 penalty weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    fit_cmd->add_option("--lambda2", fit.lambda2, "squared l2 penalty weight")->capture_default_str()->check(CLI::NonNegativeNumber);
    fit_cmd->add_flag("--exact", fit.exact, "enumerate every h-subset for the global minimizer (default: C-steps)");
    fit_cmd->add_option("--exact-cap", fit.exact_cap, "refuse --exact when C(n, h) exceeds this")->capture_default_str();
    fit_cmd->add_option("--warm-start", fit.warm_start, "fit report JSON whose coefficients seed an extra C-step start");
    fit_cmd->add_option("--output,-o", fit.output, "output JSON path (default: stdout)");

    PathArgs path;
    auto* path_cmd = app.add_subcommand("fit-path", "fit along a decreasing lambda1 grid with warm starts");
    add_data_options(path_cmd, path.data);
    add_solve_options(path_cmd, path.solve);
    auto* grid_opt = path_cmd->add_option("--lambda1-grid", path.grid, "comma-separated, strictly decreasing lambda1 values");
    path_cmd->add_option("--n-lambda", path.n_lambda, "grid size when --lambda1-grid is absent")
        ->capture_default_str()
        ->excludes(grid_opt);
    path_cmd->add_option("--lambda-min-ratio", path.lambda_min_ratio,
                         "smallest grid value as a fraction of the dead-zone threshold lambda_max")
        ->capture_default_str()
        ->excludes(grid_opt);
    path_cmd->add_option("--lambda2-ratio", path.lambda2_ratio, "lambda2 = ratio * lambda1 at every grid point")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    path_cmd->add_option("--output,-o", path.output, "output JSON path (default: stdout)");

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "evaluate the finite-sample prediction and estimation bounds");
    bounds_cmd->add_option("--n", bounds.n, "sample size")->required()->check(CLI::PositiveNumber);
    bounds_cmd->add_option("--p", bounds.p, "design columns including the intercept (default: length of --beta0-file)");
    bounds_cmd->add_option("--h", bounds.h, "trimming size (default: ceil(0.75 n))");
    bounds_cmd->add_option("--sigma", bounds.sigma, "noise standard deviation")->capture_default_str();
    bounds_cmd->add_option("--delta", bounds.delta, "failure probability, in (0, 1)")->capture_default_str();
    auto* norm_opt = bounds_cmd->add_option("--norm-beta0", bounds.norm_beta0, "||beta0||_1 of the true coefficients");
    bounds_cmd->add_option("--s0", bounds.s0, "support size over which --norm-beta0 is spread evenly")
        ->capture_default_str();
    bounds_cmd->add_option("--beta0-file", bounds.beta0_file, "true coefficients, one per line or a JSON array")
        ->excludes(norm_opt);
    bounds_cmd->add_option("--lambda2", bounds.lambda2, "lambda2 in [0, q1] (default: q1); 0 selects the sparse pathway");
    bounds_cmd->add_flag("--sigma-estimated", bounds.sigma_estimated,
                         "use the confidence split for an estimated sigma (default: known sigma)");
    bounds_cmd->add_option("--sigma-hat", bounds.sigma_hat, "sigma estimate used in eta (default: --sigma)");
    bounds_cmd->add_option("--k", bounds.k, "incoherence level (default: ceil(max(s0, (p - s0)/20)))");
    bounds_cmd->add_option("--mse", bounds.mse, "realized trimmed MSE (default: the prediction bound)");
    bounds_cmd->add_option("--design", bounds.design, "feature CSV (n rows, p - 1 columns) for the incoherence check");
    bounds_cmd->add_option("--incoherence-samples", bounds.incoherence_samples,
                           "random h-subsets tried when C(n, h) is too large to enumerate")
        ->capture_default_str();
    bounds_cmd->add_option("--seed", bounds.seed, "RNG seed for subset sampling")->capture_default_str();
    bounds_cmd->add_option("--output,-o", bounds.output, "output JSON path (default: stdout)");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo coverage of the bounds on synthetic sparse data");
    // Config files are read by the root app; simulate keys live under [simulate].
    sim_cmd->fallthrough();
    sim_cmd->add_option("--n", sim.cfg.n, "sample size")->capture_default_str();
    sim_cmd->add_option("--p", sim.cfg.p, "design columns including the intercept")->capture_default_str();
    sim_cmd->add_option("--s0", sim.cfg.s0, "nonzero true coefficients (intercept excluded)")->capture_default_str();
    sim_cmd->add_option("--amplitude", sim.cfg.beta_amplitude, "magnitude of each nonzero true coefficient")
        ->capture_default_str();
    sim_cmd->add_option("--sigma", sim.cfg.sigma, "noise standard deviation")->capture_default_str();
    sim_cmd->add_option("--h", sim.cfg.h, "trimming size")->capture_default_str();
    sim_cmd->add_option("--delta", sim.cfg.delta, "failure probability")->capture_default_str();
    sim_cmd->add_option("--error-dist", sim.error_dist, "gaussian or bounded_subgaussian (uniform with the same variance)")
        ->capture_default_str();
    sim_cmd->add_option("--contamination", sim.cfg.contamination_fraction, "fraction of rows given gross y-outliers")
        ->capture_default_str();
    sim_cmd->add_option("--contamination-magnitude", sim.cfg.contamination_magnitude,
                        "size of the +/- shift added to contaminated responses")
        ->capture_default_str();
    sim_cmd->add_option("--trials", sim.cfg.n_trials, "Monte Carlo trials")->capture_default_str();
    sim_cmd->add_option("--seed", sim.cfg.seed, "base RNG seed")->capture_default_str();
    sim_cmd->add_option("--n-starts", sim.n_starts, "C-step starts per fit")->capture_default_str();
    sim_cmd->add_option("--exact-cap", sim.exact_cap, "use exact enumeration when C(n, h) is at most this")
        ->capture_default_str();
    sim_cmd->add_option("--lambda1", sim.lambda1, "fix lambda1 instead of deriving it from q1");
    sim_cmd->add_option("--lambda2", sim.lambda2,
                        "with --lambda1: fixed lambda2 (default 0); alone: lambda2 override in [0, q1]");
    sim_cmd->add_option("--sigma-mode", sim.sigma_mode, "known or estimated")->capture_default_str();
    sim_cmd->add_flag("--compare-untrimmed", sim.compare_untrimmed,
                      "also compare against the untrimmed elastic net (h = n) on the same instances");
    sim_cmd->add_option("--output,-o", sim.output, "coverage report JSON path (default: stdout)");
    sim_cmd->add_option("--trials-csv", sim.trials_csv, "per-trial, per-claim CSV");
    sim_cmd->add_option("--plot-csv", sim.plot_csv, "realized error vs bound per trial, sorted by realized error");

    TailsArgs tails;
    auto* tails_cmd = app.add_subcommand("verify-tails", "Monte Carlo check of the chi-square and maximal tail bounds");
    tails_cmd->add_option("--h-grid", tails.h_grid, "chi-square degrees of freedom")->capture_default_str();
    tails_cmd->add_option("--t-grid", tails.t_grid, "deviation levels t")->capture_default_str();
    tails_cmd->add_option("--reps", tails.reps, "replications per chi-square cell (>= 1000)")->capture_default_str();
    tails_cmd->add_option("--max-n", tails.max_n, "n for the maximal-inequality check")->capture_default_str();
    tails_cmd->add_option("--max-p", tails.max_p, "p for the maximal-inequality check")->capture_default_str();
    tails_cmd->add_option("--max-h", tails.max_h, "h for the maximal-inequality check")->capture_default_str();
    tails_cmd->add_option("--sigma", tails.sigma, "noise level for the maximal-inequality check")->capture_default_str();
    tails_cmd->add_option("--delta", tails.delta, "delta for the maximal-inequality check")->capture_default_str();
    tails_cmd->add_option("--max-reps", tails.max_reps, "replications for the maximal-inequality check (>= 1000)")
        ->capture_default_str();
    tails_cmd->add_option("--seed", tails.seed, "base RNG seed")->capture_default_str();
    tails_cmd->add_option("--output,-o", tails.output, "pass/fail table CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? Exit::ok : Exit::usage;
    }

    if (fit_cmd->parsed())
        return guarded([&] { return run_fit(fit); });
    if (path_cmd->parsed())
        return guarded([&] { return run_fit_path(path); });
    if (bounds_cmd->parsed())
        return guarded([&] { return run_bounds(bounds); });
    if (sim_cmd->parsed())
        return guarded([&] { return run_simulate(sim); });
    return guarded([&] { return run_verify_tails(tails); });
}
