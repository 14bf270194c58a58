#include "losnlos/cli.hpp"

#include "losnlos/analytic.hpp"
#include "losnlos/ase.hpp"
#include "losnlos/case3gpp.hpp"
#include "losnlos/montecarlo.hpp"
#include "losnlos/units.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace losnlos::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

enum class Provider { General, Closed, MonteCarlo };

Provider parse_provider(const std::string& name)
{
    if (name == "analytic-general") {
        return Provider::General;
    }
    if (name == "analytic-closed") {
        return Provider::Closed;
    }
    if (name == "monte-carlo") {
        return Provider::MonteCarlo;
    }
    throw ConfigError("unknown provider '" + name + "' (analytic-general, analytic-closed, monte-carlo)");
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        parts.push_back(item);
    }
    if (!text.empty() && text.back() == sep) {
        parts.emplace_back();
    }
    return parts;
}

double parse_number(const std::string& text, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("malformed " + what + ": '" + text + "'");
    }
}

template <class T>
std::string join(const std::vector<T>& v)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? "," : "") << v[i];
    }
    return os.str();
}

/// Runs fn(0..n-1) on up to `threads` workers. Results are written by index,
/// so completion order does not matter.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn)
{
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n && !failed; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        if (!failed.exchange(true)) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

unsigned pool_size(const ScenarioSpec& spec)
{
    return spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
}

/// Everything needed to evaluate one provider at a density.
struct Context {
    ScenarioSpec spec;
    Scenario scenario;
    std::vector<double> lambdas;
    std::vector<Provider> providers;
};

Context make_context(const ScenarioSpec& spec)
{
    Context ctx{spec, build_scenario(spec), parse_lambda_grid(spec.lambda_grid), {}};
    if (spec.providers.empty()) {
        throw ConfigError("no provider selected");
    }
    for (const auto& p : spec.providers) {
        ctx.providers.push_back(parse_provider(p));
    }
    if (spec.trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (spec.disk_radius_km && !(*spec.disk_radius_km > 0.0)) {
        throw ConfigError("disk radius must be positive");
    }
    for (Provider p : ctx.providers) {
        if (p == Provider::Closed) {
            try {
                case3gpp::Case1Params::from_scenario(ctx.scenario, 1.0);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("analytic-closed unavailable for this scenario: ") + e.what());
            }
        }
    }
    return ctx;
}

mc::McConfig mc_config(const Context& ctx, double lambda, bool nested)
{
    auto cfg = mc::default_config(ctx.scenario.path_loss, ctx.scenario.los, lambda, ctx.spec.trials, ctx.spec.seed);
    if (ctx.spec.disk_radius_km) {
        cfg.disk_radius_km = *ctx.spec.disk_radius_km;
    }
    cfg.threads = nested ? 1 : ctx.spec.threads;
    return cfg;
}

struct Value {
    double value = 0.0;
    double err = 0.0;
};

double analytic_coverage(const Context& ctx, Provider p, double lambda, double gamma)
{
    const auto& s = ctx.scenario;
    if (p == Provider::Closed) {
        return case3gpp::coverage_case1(case3gpp::Case1Params::from_scenario(s, lambda), gamma).p_cov;
    }
    return analytic::coverage_probability(s.path_loss, s.los, s.network(lambda, gamma)).p_cov;
}

/// Coverage at every gamma for one (lambda, provider).
std::vector<Value> coverage_values(const Context& ctx, Provider p, double lambda, const std::vector<double>& gammas,
                                   bool nested)
{
    const auto& s = ctx.scenario;
    std::vector<Value> out;
    if (p == Provider::MonteCarlo) {
        const auto drops =
            mc::simulate_drops(s.path_loss, s.los, s.network(lambda, 1.0), mc_config(ctx, lambda, nested));
        for (double g : gammas) {
            const auto est = mc::coverage_from_drops(drops, g, ctx.spec.seed);
            out.push_back({est.mean, est.std_error});
        }
        return out;
    }
    for (double g : gammas) {
        if (p == Provider::Closed) {
            const auto pt = case3gpp::coverage_case1(case3gpp::Case1Params::from_scenario(s, lambda), g);
            out.push_back({pt.p_cov, pt.abs_error_est});
        } else {
            const auto pt = analytic::coverage_probability(s.path_loss, s.los, s.network(lambda, g));
            out.push_back({pt.p_cov, pt.abs_error_est});
        }
    }
    return out;
}

std::vector<double> to_linear(const std::vector<double>& db)
{
    std::vector<double> out;
    for (double x : db) {
        out.push_back(db_to_linear(x));
    }
    return out;
}

void write_header(std::ostream& out, const Context& ctx, const std::string& command)
{
    const auto& spec = ctx.spec;
    const auto& seg = ctx.scenario.path_loss.segments().front();
    out << "# tool=scnperf\n"
        << "# version=" << kVersion << "\n"
        << "# command=" << command << "\n"
        << "# preset=" << spec.preset << "\n"
        << "# los=" << ctx.scenario.los.describe() << "\n"
        << std::setprecision(10) << "# alpha_los=" << seg.alpha_los << "\n"
        << "# alpha_nlos=" << seg.alpha_nlos << "\n"
        << "# p_tx_dbm=" << mw_to_dbm(ctx.scenario.p_tx_mw) << "\n"
        << "# n0_dbm=" << mw_to_dbm(ctx.scenario.n0_mw) << "\n"
        << "# lambda_grid=" << spec.lambda_grid << "\n"
        << "# providers=" << join(spec.providers) << "\n"
        << "# trials=" << spec.trials << "\n"
        << "# seed=" << spec.seed << "\n"
        << "# disk_radius_km=" << (spec.disk_radius_km ? std::to_string(*spec.disk_radius_km) : "auto") << "\n";
    const analytic::EngineTolerance tol;
    out << "# tolerance=mass:" << tol.mass << ",laplace:" << tol.laplace << ",coverage:" << tol.coverage << "\n";
}

/// Opens --out if set, else uses the given stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw ConfigError("cannot open output file '" + path + "'");
            }
            out_ = &file_;
        }
    }
    std::ostream& get() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

double elapsed_ms(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::vector<double> parse_lambda_grid(const std::string& text)
{
    const auto parts = split(text, ':');
    if (parts.size() != 3) {
        throw ConfigError("lambda grid must be start:stop:ppd, got '" + text + "'");
    }
    const double start = parse_number(parts[0], "grid start");
    const double stop = parse_number(parts[1], "grid stop");
    const double ppd = parse_number(parts[2], "points per decade");
    if (!(start > 0.0) || !(stop >= start) || !(ppd > 0.0) || std::floor(ppd) != ppd) {
        throw ConfigError("lambda grid needs 0 < start <= stop and a positive integer ppd");
    }
    if (stop == start) {
        return {start};
    }
    const double decades = std::log10(stop / start);
    const auto steps = static_cast<int>(std::ceil(decades * ppd - 1e-9));
    std::vector<double> grid;
    for (int i = 0; i <= steps; ++i) {
        grid.push_back(i == steps ? stop : start * std::pow(10.0, i / ppd));
    }
    return grid;
}

LosProbabilityFn parse_los_fn(const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (kind == "always-nlos" && rest.empty()) {
            return los::AlwaysNlos{};
        }
        if (kind == "linear") {
            return los::Linear{parse_number(rest, "linear d1")};
        }
        if (kind == "two-piece-exp") {
            const auto p = split(rest, ':');
            if (p.size() == 2) {
                return los::TwoPieceExp{parse_number(p[0], "R1"), parse_number(p[1], "R2")};
            }
        }
        if (kind == "piecewise-linear") {
            los::PiecewiseLinear pl;
            for (const auto& knot : split(rest, ',')) {
                const auto p = split(knot, ':');
                if (p.size() != 2) {
                    throw ConfigError("knot must be distance:probability, got '" + knot + "'");
                }
                pl.knots.push_back({parse_number(p[0], "knot distance"), parse_number(p[1], "knot probability")});
            }
            return pl;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid LoS function: ") + e.what());
    }
    throw ConfigError("unknown LoS function '" + text + "'");
}

Scenario build_scenario(const ScenarioSpec& spec)
{
    Scenario s = [&] {
        try {
            return preset(spec.preset);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }();
    if (spec.los_fn) {
        s.los = parse_los_fn(*spec.los_fn);
    }
    if (spec.alpha_los) {
        auto segs = s.path_loss.segments();
        for (auto& seg : segs) {
            seg.alpha_los = *spec.alpha_los;
        }
        try {
            s.path_loss = PathLossModel(segs);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("invalid LoS exponent override: ") + e.what());
        }
    }
    return s;
}

int cmd_coverage(const ScenarioSpec& spec, std::ostream& os)
{
    const Context ctx = make_context(spec);
    const auto gammas = to_linear(spec.gamma_db);
    const std::size_t np = ctx.providers.size();
    const std::size_t tasks = ctx.lambdas.size() * np;
    const unsigned workers = pool_size(spec);

    std::vector<std::vector<Value>> values(tasks);
    std::vector<double> wall(tasks);
    parallel_for(tasks, workers, [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        values[i] = coverage_values(ctx, ctx.providers[i % np], ctx.lambdas[i / np], gammas, workers > 1);
        wall[i] = elapsed_ms(t0);
    });

    Sink sink(spec.out, os);
    auto& out = sink.get();
    write_header(out, ctx, "coverage");
    out << "lambda,gamma_db,p_cov,err_or_se,provider,wall_ms\n" << std::setprecision(10);
    for (std::size_t li = 0; li < ctx.lambdas.size(); ++li) {
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            for (std::size_t pi = 0; pi < np; ++pi) {
                const std::size_t i = li * np + pi;
                out << ctx.lambdas[li] << ',' << spec.gamma_db[gi] << ',' << values[i][gi].value << ','
                    << values[i][gi].err << ',' << spec.providers[pi] << ',' << std::fixed << std::setprecision(1)
                    << wall[i] << std::defaultfloat << std::setprecision(10) << '\n';
            }
        }
    }
    return kExitOk;
}

int cmd_ase(const ScenarioSpec& spec, std::ostream& os)
{
    const Context ctx = make_context(spec);
    const auto gamma0s = to_linear(spec.gamma0_db);
    const std::size_t np = ctx.providers.size();
    const std::size_t tasks = gamma0s.empty() ? 0 : ctx.lambdas.size() * np;
    const unsigned workers = pool_size(spec);
    const auto& s = ctx.scenario;

    std::vector<std::vector<double>> values(tasks);
    parallel_for(tasks, workers, [&](std::size_t i) {
        const Provider p = ctx.providers[i % np];
        const double lambda = ctx.lambdas[i / np];
        if (p == Provider::MonteCarlo) {
            const auto drops =
                mc::simulate_drops(s.path_loss, s.los, s.network(lambda, 1.0), mc_config(ctx, lambda, workers > 1));
            std::vector<double> sinr;
            sinr.reserve(drops.size());
            for (const auto& d : drops) {
                sinr.push_back(d.sinr);
            }
            for (double g0 : gamma0s) {
                values[i].push_back(ase_mc(sinr, lambda, g0).ase);
            }
            return;
        }
        const CoverageFn fn = [&](double g) { return analytic_coverage(ctx, p, lambda, g); };
        for (double g0 : gamma0s) {
            values[i].push_back(ase(fn, lambda, g0, Method::AnalyticGeneral, {1e-7, 1e-7}).ase);
        }
    });

    Sink sink(spec.out, os);
    auto& out = sink.get();
    write_header(out, ctx, "ase");
    out << "lambda,gamma0_db,ase,provider\n" << std::setprecision(10);
    for (std::size_t li = 0; li < ctx.lambdas.size() && !gamma0s.empty(); ++li) {
        for (std::size_t gi = 0; gi < gamma0s.size(); ++gi) {
            for (std::size_t pi = 0; pi < np; ++pi) {
                out << ctx.lambdas[li] << ',' << spec.gamma0_db[gi] << ',' << values[li * np + pi][gi] << ','
                    << spec.providers[pi] << '\n';
            }
        }
    }
    return kExitOk;
}

int cmd_validate(const ScenarioSpec& spec, std::ostream& os)
{
    const Context ctx = make_context(spec);
    const Provider reference = parse_provider(spec.reference);
    const Provider candidate = ctx.providers.front();
    if (reference == Provider::Closed) {
        make_context([&] {
            ScenarioSpec probe = spec;
            probe.providers = {spec.reference};
            return probe;
        }());
    }
    if (!(spec.abs_tol > 0.0)) {
        throw ConfigError("abs-tol must be positive");
    }
    const auto gammas = to_linear(spec.gamma_db);
    const unsigned workers = pool_size(spec);
    const std::size_t n = ctx.lambdas.size();

    std::vector<std::vector<Value>> ref(n);
    std::vector<std::vector<Value>> cand(n);
    parallel_for(n, workers, [&](std::size_t i) {
        ref[i] = coverage_values(ctx, reference, ctx.lambdas[i], gammas, workers > 1);
        cand[i] = reference == candidate ? ref[i] : coverage_values(ctx, candidate, ctx.lambdas[i], gammas, workers > 1);
    });

    Sink sink(spec.out, os);
    auto& out = sink.get();
    write_header(out, ctx, "validate");
    out << "# reference=" << spec.reference << "\n# abs_tol=" << spec.abs_tol << "\n";
    out << "lambda,gamma_db,reference_value,candidate_value,std_error,abs_diff,bound,status\n" << std::setprecision(10);
    int failures = 0;
    for (std::size_t li = 0; li < n; ++li) {
        for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
            const Value& r = ref[li][gi];
            const Value& c = cand[li][gi];
            // Only simulated values carry a sampling error.
            double se = 0.0;
            if (reference == Provider::MonteCarlo) {
                se += r.err * r.err;
            }
            if (candidate == Provider::MonteCarlo) {
                se += c.err * c.err;
            }
            se = std::sqrt(se);
            const double diff = std::abs(r.value - c.value);
            const double bound = std::max(spec.abs_tol, 3.0 * se);
            std::string status = diff <= bound ? "pass" : "fail";
            if (3.0 * se > spec.abs_tol) {
                status = "advisory-insufficient-trials";
            }
            if (status != "pass") {
                ++failures;
            }
            out << ctx.lambdas[li] << ',' << spec.gamma_db[gi] << ',' << r.value << ',' << c.value << ',' << se << ','
                << diff << ',' << bound << ',' << status << '\n';
        }
    }
    out << "# failures=" << failures << "\n";
    return failures == 0 ? kExitOk : kExitValidationFailed;
}

int cmd_peak(const ScenarioSpec& spec, std::ostream& os)
{
    const Context ctx = make_context(spec);
    const Provider p = ctx.providers.front();
    if (p == Provider::MonteCarlo) {
        throw ConfigError("peak search needs an analytic provider");
    }
    if (ctx.lambdas.size() < 3) {
        throw ConfigError("peak search needs a lambda grid of at least 3 points");
    }
    analytic::PeakOptions opts;
    opts.scan_points = static_cast<int>(ctx.lambdas.size());
    const std::pair range{ctx.lambdas.front(), ctx.lambdas.back()};

    Sink sink(spec.out, os);
    auto& out = sink.get();
    write_header(out, ctx, "peak");
    out << std::setprecision(10);
    int status = kExitOk;
    for (std::size_t gi = 0; gi < spec.gamma_db.size(); ++gi) {
        const double gamma = db_to_linear(spec.gamma_db[gi]);
        out << (gi ? "\n" : "") << "gamma_db=" << spec.gamma_db[gi] << "\n";
        try {
            analytic::PeakResult r;
            if (p == Provider::Closed) {
                r = analytic::find_peak(
                    [&](double lambda) {
                        return case3gpp::coverage_case1(case3gpp::Case1Params::from_scenario(ctx.scenario, lambda),
                                                        gamma, 1e-11)
                            .p_cov;
                    },
                    range, opts);
            } else {
                r = analytic::find_coverage_peak(ctx.scenario.path_loss, ctx.scenario.los,
                                                 ctx.scenario.network(1.0, gamma), range, opts);
            }
            out << "lambda_star=" << r.lambda_star << "\np_cov=" << r.p_cov << "\nbracket_lo=" << r.bracket_lo
                << "\nbracket_hi=" << r.bracket_hi << "\nevaluations=" << r.evaluations << "\n";
        } catch (const analytic::NoInteriorPeak& e) {
            out << "error=" << e.what() << "\n";
            status = kExitValidationFailed;
        }
    }
    return status;
}

int run(int argc, char** argv)
{
    CLI::App app{"Coverage and area spectral efficiency of LoS/NLoS small-cell networks", "scnperf"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Flat key=value file; command-line flags take precedence");
    app.require_subcommand(1);

    ScenarioSpec spec;
    double alpha_los = 0.0;
    std::string los_fn;
    double disk_radius = 0.0;

    app.add_option("--preset", spec.preset, "case1, case2, approx-case2, single-slope")->capture_default_str();
    app.add_option("--alpha-los", alpha_los, "Override the LoS path loss exponent");
    app.add_option("--los-fn", los_fn, "Override the LoS probability, e.g. linear:0.3");
    app.add_option("--lambda-grid", spec.lambda_grid, "start:stop:points-per-decade (BSs/km^2)")
        ->capture_default_str();
    app.add_option("--gamma-db", spec.gamma_db, "SINR thresholds in dB")->delimiter(',')->capture_default_str();
    app.add_option("--gamma0-db", spec.gamma0_db, "Minimum working SINR for ASE in dB")
        ->delimiter(',')
        ->expected(0, -1)
        ->capture_default_str();
    app.add_option("--provider", spec.providers, "analytic-general, analytic-closed, monte-carlo")
        ->delimiter(',')
        ->capture_default_str();
    app.add_option("--trials", spec.trials, "Monte Carlo drops per density")->capture_default_str();
    app.add_option("--seed", spec.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--disk-radius-km", disk_radius, "Simulation window radius (default: automatic)");
    app.add_option("--threads", spec.threads, "Worker threads, 0 for all cores")->capture_default_str();
    app.add_option("--reference", spec.reference, "validate: provider to compare against")->capture_default_str();
    app.add_option("--abs-tol", spec.abs_tol, "validate: absolute tolerance")->capture_default_str();
    app.add_option("--out", spec.out, "Output file (default: stdout)");

    auto* coverage = app.add_subcommand("coverage", "Coverage probability over the density grid");
    auto* ase_cmd = app.add_subcommand("ase", "Area spectral efficiency over the density grid");
    auto* validate = app.add_subcommand("validate", "Compare a provider against a reference");
    auto* peak = app.add_subcommand("peak", "Density that maximises coverage");
    for (auto* sub : {coverage, ase_cmd, validate, peak}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    if (app.count("--alpha-los") > 0) {
        spec.alpha_los = alpha_los;
    }
    if (app.count("--los-fn") > 0) {
        spec.los_fn = los_fn;
    }
    if (app.count("--disk-radius-km") > 0) {
        spec.disk_radius_km = disk_radius;
    }

    try {
        if (coverage->parsed()) {
            return cmd_coverage(spec, std::cout);
        }
        if (ase_cmd->parsed()) {
            return cmd_ase(spec, std::cout);
        }
        if (validate->parsed()) {
            return cmd_validate(spec, std::cout);
        }
        return cmd_peak(spec, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidationFailed;
    }
}

}  // namespace losnlos::cli
