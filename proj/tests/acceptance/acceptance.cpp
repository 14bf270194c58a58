// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "losnlos/analytic.hpp"
#include "losnlos/ase.hpp"
#include "losnlos/case3gpp.hpp"
#include "losnlos/cli.hpp"
#include "losnlos/hypergeometric.hpp"
#include "losnlos/montecarlo.hpp"
#include "losnlos/units.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace losnlos;
using case3gpp::Case1Params;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void note(Outcome& o, bool ok, const std::string& text)
{
    o.pass = o.pass && ok;
    if (!o.detail.empty()) {
        o.detail += "; ";
    }
    o.detail += text + (ok ? "" : " [miss]");
}

std::string fmt(const char* f, double a)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt2(const char* f, double a, double b)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

double closed(double lambda, double gamma, double tol = 1e-9)
{
    return case3gpp::coverage_case1(Case1Params::defaults(lambda), gamma, tol).p_cov;
}

double general(const Scenario& s, double lambda, double gamma)
{
    return analytic::coverage_probability(s.path_loss, s.los, s.network(lambda, gamma)).p_cov;
}

Outcome peak_reproduction()
{
    Outcome o;
    for (const auto& [db, target] : {std::pair{0.0, 19.01}, std::pair{3.0, 16.52}}) {
        const auto t0 = std::chrono::steady_clock::now();
        cli::ScenarioSpec spec;
        spec.lambda_grid = "1:200:10";
        spec.gamma_db = {db};
        std::ostringstream out;
        const int code = cli::cmd_peak(spec, out);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const auto text = out.str();
        const auto pos = text.find("lambda_star=");
        const double star = pos == std::string::npos ? NAN : std::stod(text.substr(pos + 12));
        note(o, code == 0 && std::abs(star - target) <= 0.5 && secs < 60.0,
             fmt2("%g dB: lambda*=%.4f", db, star) + fmt(" (%.1fs)", secs));
    }
    return o;
}

Outcome closed_vs_general()
{
    Outcome o;
    const auto s = preset("case1");
    double worst = 0.0;
    for (double lambda : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
        for (double db : {0.0, 3.0}) {
            const double g = db_to_linear(db);
            worst = std::max(worst, std::abs(closed(lambda, g) - general(s, lambda, g)));
        }
    }
    note(o, worst <= 1e-3, fmt("max |diff| = %.2e", worst));
    return o;
}

Outcome monte_carlo()
{
    Outcome o;
    const auto s = preset("case1");
    for (double lambda : {10.0, 100.0, 1000.0}) {
        const auto cfg = mc::default_config(s.path_loss, s.los, lambda, 100000, 2015);
        const auto est = mc::estimate_coverage(s.path_loss, s.los, s.network(lambda, 1.0), cfg);
        const double exact = closed(lambda, 1.0);
        const double diff = std::abs(est.mean - exact);
        note(o, diff <= std::max(0.01, 3.0 * est.std_error),
             fmt("lambda=%g", lambda) + fmt2(": mc=%.4f exact=%.4f", est.mean, exact) + fmt(" se=%.4f", est.std_error));
    }
    return o;
}

Outcome lemma_oracles()
{
    Outcome o;
    const auto s = preset("case1");
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int near = 0;
    int far = 0;
    for (int i = 0; i < 100; ++i) {
        const double lambda = std::pow(10.0, 4.0 * u(rng));
        const double gamma = std::pow(10.0, -1.0 + 2.0 * u(rng));
        const double r = std::pow(10.0, -3.0 + 3.0 * u(rng));
        const auto c = Case1Params::from_scenario(s, lambda);
        const auto engine = [&](Branch b) {
            const double sv = gamma / (s.p_tx_mw * s.path_loss.gain(r, b));
            return analytic::laplace_interference(s.path_loss, s.los, lambda, sv, b, r, s.p_tx_mw);
        };
        if (r <= c.d1) {
            ++near;
            worst = std::max(worst, std::abs(engine(Branch::Los) / case3gpp::laplace_los_near(c, gamma, r) - 1.0));
            worst = std::max(worst, std::abs(engine(Branch::Nlos) / case3gpp::laplace_nlos_near(c, gamma, r) - 1.0));
        } else {
            ++far;
            worst = std::max(worst, std::abs(engine(Branch::Nlos) / case3gpp::laplace_nlos_far(c, gamma, r) - 1.0));
        }
    }
    note(o, worst <= 1e-6, fmt("Laplace max rel err %.2e", worst) + " (" + std::to_string(near) + " near, " +
                               std::to_string(far) + " far)");

    double worst_rho = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double alpha = 2.0 + 3.0 * u(rng);
        const double beta = (alpha - 1.25) * u(rng);
        const double t = std::pow(10.0, -4.0 + 12.0 * u(rng));
        const double d = std::pow(10.0, -3.0 + 3.0 * u(rng));
        worst_rho = std::max(worst_rho, std::abs(rho1(alpha, beta, t, d) / oracle::rho1(alpha, beta, t, d) - 1.0));
        worst_rho = std::max(worst_rho, std::abs(rho2(alpha, beta, t, d) / oracle::rho2(alpha, beta, t, d) - 1.0));
    }
    note(o, worst_rho <= 1e-9, fmt("rho max rel err %.2e", worst_rho));
    return o;
}

Outcome distance_law()
{
    Outcome o;
    double worst = 0.0;
    for (const auto& name : preset_names()) {
        const auto s = preset(name);
        for (double lambda : {1.0, 10.0, 100.0, 1000.0}) {
            worst = std::max(worst, std::abs(analytic::distance_law_mass(s.path_loss, s.los, lambda) - 1.0));
        }
    }
    note(o, worst <= 1e-4, fmt("max |mass-1| = %.2e", worst));

    const auto s = preset("case1");
    const auto cfg = mc::default_config(s.path_loss, s.los, 100.0, 100000, 77);
    const auto h = mc::estimate_association_pdf(s.path_loss, s.los, s.network(100.0, 1.0), cfg, 20, 0.2);
    const auto c = Case1Params::defaults(100.0);
    const double dev = mc::histogram_sup_deviation(h, [&](double r) { return case3gpp::pdf_los(c, r); },
                                                   [&](double r) { return case3gpp::pdf_nlos(c, r); });
    note(o, dev <= 0.05, fmt("histogram sup deviation %.4f of peak", dev));
    return o;
}

CoverageFn closed_fn(double lambda)
{
    const auto c = Case1Params::defaults(lambda);
    return [c](double g) { return case3gpp::coverage_case1(c, g, 1e-11).p_cov; };
}

Outcome regimes()
{
    Outcome o;
    const auto single = preset("single-slope");
    const double flat = std::abs(general(single, 1e3, 1.0) - general(single, 1e4, 1.0));
    note(o, flat <= 0.01, fmt("(a) single-slope |p(1e3)-p(1e4)| = %.4f", flat));

    const double star = analytic::find_peak([](double l) { return closed(l, 1.0, 1e-11); }, {1.0, 200.0}).lambda_star;
    bool rise = true;
    bool fall = true;
    double prev = 0.0;
    for (int i = 0; i <= 20; ++i) {
        const double p = closed(star * std::pow(10.0, -1.0 + i / 20.0), 1.0);
        rise = rise && p > prev;
        prev = p;
    }
    for (int i = 1; i <= 20; ++i) {
        const double p = closed(star * std::pow(10.0, 2.0 * i / 20.0), 1.0);
        fall = fall && p < prev;
        prev = p;
    }
    note(o, rise && fall, fmt("(b) Case 1 rises on [lambda*/10, lambda*] and falls on [lambda*, 100 lambda*], lambda*=%.2f", star));

    const double g0 = db_to_linear(3.0);
    std::vector<double> grid;
    std::vector<double> a;
    for (double l = 20.0; l <= 100.0 + 1e-9; l += 10.0) {
        grid.push_back(l);
        a.push_back(ase(closed_fn(l), l, g0, Method::AnalyticClosed).ase);
    }
    double best_drop = 0.0;
    std::pair<double, double> where{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            if (a[i] - a[j] > best_drop) {
                best_drop = a[i] - a[j];
                where = {grid[i], grid[j]};
            }
        }
    }
    note(o, best_drop > 0.0, fmt2("(c) 3 dB ASE falls from lambda=%g to %g", where.first, where.second) +
                                 fmt(" by %.3f", best_drop));

    const double a1 = ase(closed_fn(2000.0), 2000.0, 1.0, Method::AnalyticClosed).ase;
    const double a2 = ase(closed_fn(4000.0), 4000.0, 1.0, Method::AnalyticClosed).ase;
    const double ratio = a2 / a1;
    note(o, ratio >= 1.8 && ratio <= 2.2, fmt("(d) 0 dB A(4000)/A(2000) = %.4f", ratio));
    return o;
}

Outcome approximation()
{
    Outcome o;
    const auto exact = preset("case2");
    const auto approx = preset("approx-case2");
    double worst = 0.0;
    double at = 0.0;
    for (double db : {0.0, 3.0}) {
        for (int i = 0; i <= 40; ++i) {
            const double lambda = std::pow(10.0, i / 10.0);
            const double d = std::abs(general(exact, lambda, db_to_linear(db)) - general(approx, lambda, db_to_linear(db)));
            if (d > worst) {
                worst = d;
                at = lambda;
            }
        }
    }
    note(o, worst <= 0.05, fmt2("max |case2 - approx| = %.4f at lambda=%.1f", worst, at));
    return o;
}

Outcome ase_routes()
{
    Outcome o;
    for (double lambda : {10.0, 100.0, 1000.0}) {
        const auto p = closed_fn(lambda);
        const double by_parts = ase(p, lambda, 1.0, Method::AnalyticClosed, {1e-11, 1e-11}).ase;
        const double direct = oracle::ase_direct(p, lambda, 1.0);
        const double rel = std::abs(by_parts / direct - 1.0);
        note(o, rel <= 1e-3, fmt("lambda=%g", lambda) + fmt(": rel diff %.2e", rel));
    }
    return o;
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 coverage peak", peak_reproduction},
        {"2 closed form vs general engine", closed_vs_general},
        {"3 Monte Carlo validation", monte_carlo},
        {"4 lemma and rho oracles", lemma_oracles},
        {"5 distance-law normalisation and histogram", distance_law},
        {"6 qualitative regimes", regimes},
        {"7 approximated Case 2 fidelity", approximation},
        {"8 ASE by parts vs direct", ase_routes},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s [%s] %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
