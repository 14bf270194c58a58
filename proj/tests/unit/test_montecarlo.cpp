#include "losnlos/case3gpp.hpp"
#include "losnlos/montecarlo.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

using namespace losnlos;

namespace {

mc::McConfig small_config(const Scenario& s, double lambda, std::int64_t trials, std::uint64_t seed)
{
    return mc::default_config(s.path_loss, s.los, lambda, trials, seed);
}

}  // namespace

TEST_CASE("default window radius")
{
    const auto s = preset("case1");
    CHECK(mc::default_disk_radius(s.path_loss, s.los, 100.0) == doctest::Approx(2.0));
    CHECK(mc::default_disk_radius(s.path_loss, s.los, 0.5) == doctest::Approx(5.0 / std::sqrt(0.5)));
    const auto lin = LosProbabilityFn(los::Linear{1.5});
    CHECK(mc::default_disk_radius(s.path_loss, lin, 100.0) == doctest::Approx(4.5));
}

TEST_CASE("trial streams depend only on seed and trial index")
{
    mc::SplitMix64 a = mc::SplitMix64::for_trial(1, 5);
    mc::SplitMix64 b = mc::SplitMix64::for_trial(1, 5);
    mc::SplitMix64 c = mc::SplitMix64::for_trial(1, 6);
    mc::SplitMix64 d = mc::SplitMix64::for_trial(2, 5);
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
}

TEST_CASE("drops are identical for any thread count and trial count")
{
    const auto s = preset("case2");
    auto cfg = small_config(s, 50.0, 600, 42);
    cfg.threads = 1;
    const auto one = mc::simulate_drops(s.path_loss, s.los, s.network(50.0, 1.0), cfg);
    cfg.threads = 3;
    const auto three = mc::simulate_drops(s.path_loss, s.los, s.network(50.0, 1.0), cfg);
    cfg.trials = 300;
    const auto fewer = mc::simulate_drops(s.path_loss, s.los, s.network(50.0, 1.0), cfg);
    REQUIRE(one.size() == 600);
    for (std::size_t i = 0; i < one.size(); ++i) {
        REQUIRE(one[i].sinr == three[i].sinr);
        REQUIRE(one[i].serving_distance == three[i].serving_distance);
        if (i < fewer.size()) {
            REQUIRE(one[i].sinr == fewer[i].sinr);
        }
    }
    const auto e1 = mc::coverage_from_drops(one, 1.0, 42);
    const auto e3 = mc::coverage_from_drops(three, 1.0, 42);
    CHECK(e1.mean == e3.mean);
    CHECK(e1.std_error == e3.std_error);
    CHECK(e1.trials == 600);
    CHECK(e1.seed == 42);
}

TEST_CASE("threshold extremes")
{
    const auto s = preset("case1");
    const auto drops = mc::simulate_drops(s.path_loss, s.los, s.network(10.0, 1.0), small_config(s, 10.0, 500, 1));
    CHECK(mc::coverage_from_drops(drops, 1e-300, 1).mean == 1.0);
    CHECK(mc::coverage_from_drops(drops, 1e12, 1).mean == 0.0);
}

TEST_CASE("huge noise drives the SINR to zero")
{
    const auto s = preset("case1");
    auto params = s.network(10.0, 1.0);
    const auto cfg = small_config(s, 10.0, 10, 3);
    const double quiet = mc::simulate_sinr(s.path_loss, s.los, params, cfg, 4);
    params.n0 = 1e30;
    const double loud = mc::simulate_sinr(s.path_loss, s.los, params, cfg, 4);
    CHECK(loud < 1e-20);
    CHECK(quiet > loud);
}

TEST_CASE("a lone BS is noise-limited with unit-mean fading")
{
    // Sparse window: many drops hold exactly one BS, whose SINR is P beta h / N0.
    const auto s = preset("single-slope");
    mc::McConfig cfg;
    cfg.disk_radius_km = 0.5;
    cfg.trials = 20000;
    cfg.seed = 8;
    const auto params = s.network(1.0, 1.0);
    const auto drops = mc::simulate_drops(s.path_loss, s.los, params, cfg);
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;
    for (const auto& d : drops) {
        if (d.bs_count == 1) {
            const double h = d.sinr * params.n0 / (params.p_tx * s.path_loss.gain(d.serving_distance, d.serving_branch));
            sum += h;
            sum_sq += h * h;
            ++n;
        }
    }
    REQUIRE(n > 1000);
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) <= 4.0 * se);
}

TEST_CASE("empty windows are resampled, then give up")
{
    const auto s = preset("case1");
    mc::McConfig cfg;
    cfg.disk_radius_km = 0.3;
    cfg.trials = 200;
    const auto drops = mc::simulate_drops(s.path_loss, s.los, s.network(1.0, 1.0), cfg);
    int resampled = 0;
    for (const auto& d : drops) {
        CHECK(d.bs_count >= 1);
        resampled += d.empty_draws > 0 ? 1 : 0;
    }
    CHECK(resampled > 0);
    cfg.disk_radius_km = 1e-4;
    CHECK_THROWS_AS(mc::simulate_drop(s.path_loss, s.los, s.network(1.0, 1.0), cfg, 0), std::runtime_error);
    cfg.trials = 0;
    CHECK_THROWS_AS(mc::simulate_drops(s.path_loss, s.los, s.network(1.0, 1.0), cfg), std::invalid_argument);
}

TEST_CASE("Monte Carlo coverage agrees with the closed form")
{
    const auto s = preset("case1");
    const auto est = mc::estimate_coverage(s.path_loss, s.los, s.network(100.0, 1.0), small_config(s, 100.0, 20000, 5));
    const double exact = case3gpp::coverage_case1(case3gpp::Case1Params::defaults(100.0), 1.0).p_cov;
    CHECK(std::abs(est.mean - exact) <= std::max(0.01, 3.0 * est.std_error));
    CHECK(est.std_error == doctest::Approx(std::sqrt(est.mean * (1 - est.mean) / 19999.0)).epsilon(1e-12));
}

TEST_CASE("doubling the window changes the estimate by sampling noise only")
{
    const auto s = preset("case1");
    auto cfg = small_config(s, 10.0, 20000, 17);
    const auto a = mc::estimate_coverage(s.path_loss, s.los, s.network(10.0, 1.0), cfg);
    cfg.disk_radius_km *= 2.0;
    const auto b = mc::estimate_coverage(s.path_loss, s.los, s.network(10.0, 1.0), cfg);
    const double se = std::hypot(a.std_error, b.std_error);
    CHECK(std::abs(a.mean - b.mean) <= 3.0 * se);
}

TEST_CASE("association histogram")
{
    const auto s = preset("case1");
    const auto cfg = small_config(s, 100.0, 20000, 23);
    const auto h = mc::estimate_association_pdf(s.path_loss, s.los, s.network(100.0, 1.0), cfg, 30, 0.2);
    CHECK(h.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(h.edges.size() == 31);
    const auto o = oracle::case1(100.0);
    const double dev = mc::histogram_sup_deviation(h, [&](double r) { return o.pdf_los(r); },
                                                   [&](double r) { return o.pdf_nlos(r); });
    CHECK(dev <= 0.1);
    CHECK_THROWS_AS(mc::estimate_association_pdf(s.path_loss, s.los, s.network(100.0, 1.0), cfg, 1, 0.2),
                    std::invalid_argument);
}

TEST_CASE("always-NLoS has no LoS association mass")
{
    const auto s = preset("single-slope");
    const auto cfg = small_config(s, 10.0, 2000, 2);
    const auto h = mc::estimate_association_pdf(s.path_loss, s.los, s.network(10.0, 1.0), cfg, 10, 0.5);
    for (double v : h.density_los) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("LoS frequency per distance bin follows the LoS probability")
{
    // Drops with a single BS expose its branch draw directly.
    const auto s = preset("case1");
    mc::McConfig cfg;
    cfg.disk_radius_km = 0.3;
    cfg.trials = 40000;
    cfg.seed = 12;
    const auto drops = mc::simulate_drops(s.path_loss, s.los, s.network(3.5, 1.0), cfg);
    constexpr int kBins = 5;
    std::array<int, kBins> total{};
    std::array<int, kBins> los{};
    for (const auto& d : drops) {
        if (d.bs_count != 1) {
            continue;
        }
        const int b = std::min(kBins - 1, static_cast<int>(d.serving_distance / 0.3 * kBins));
        ++total[b];
        los[b] += d.serving_branch == Branch::Los ? 1 : 0;
    }
    for (int b = 0; b < kBins; ++b) {
        const double lo = 0.3 * b / kBins;
        const double hi = 0.3 * (b + 1) / kBins;
        // Area-weighted mean of 1 - r/d1 over the annulus.
        const double p = 1.0 - 2.0 / 3.0 * (hi * hi * hi - lo * lo * lo) / ((hi * hi - lo * lo) * 0.3);
        REQUIRE(total[b] > 200);
        const double freq = static_cast<double>(los[b]) / total[b];
        CHECK(std::abs(freq - p) <= 4.0 * std::sqrt(p * (1.0 - p) / total[b]));
    }
}
