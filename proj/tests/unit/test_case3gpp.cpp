#include "losnlos/analytic.hpp"
#include "losnlos/case3gpp.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace losnlos;
using case3gpp::Case1Params;

TEST_CASE("parameters come from the case1 preset and are checked")
{
    const auto c = Case1Params::from_scenario(preset("case1"), 10.0);
    const auto d = Case1Params::defaults(10.0);
    CHECK(c.a_los == doctest::Approx(d.a_los));
    CHECK(c.a_nlos == doctest::Approx(d.a_nlos));
    CHECK(c.p_tx == doctest::Approx(d.p_tx));
    CHECK(c.y1() == doctest::Approx(0.03974).epsilon(1e-3));
    CHECK(c.y1() == doctest::Approx(oracle::case1(10.0).y1()).epsilon(1e-13));
    CHECK_THROWS_AS(Case1Params::from_scenario(preset("case2"), 10.0), std::invalid_argument);
    CHECK_THROWS_AS(Case1Params::from_scenario(preset("approx-case2"), 10.0), std::invalid_argument);
    auto bad = d;
    bad.alpha_nlos = 2.0;
    bad.alpha_los = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("closed-form densities")
{
    const auto c = Case1Params::defaults(100.0);
    const auto o = oracle::case1(100.0);
    for (double r : {0.001, 0.01, 0.03, 0.0397, 0.04, 0.1, 0.29}) {
        CHECK(case3gpp::pdf_los(c, r) == doctest::Approx(o.pdf_los(r)).epsilon(1e-12));
        CHECK(case3gpp::pdf_nlos(c, r) == doctest::Approx(o.pdf_nlos(r)).epsilon(1e-12));
    }
    // No LoS service beyond d1.
    CHECK(case3gpp::pdf_los(c, 0.3000001) == 0.0);
    CHECK(case3gpp::pdf_los(c, 2.0) == 0.0);
    // The NLoS density joins continuously at y1.
    const double y1 = c.y1();
    CHECK(case3gpp::pdf_nlos(c, y1) == doctest::Approx(case3gpp::pdf_nlos(c, y1 * (1 + 1e-12))).epsilon(1e-9));
}

TEST_CASE("Laplace transforms tend to one as gamma vanishes")
{
    const auto c = Case1Params::defaults(100.0);
    CHECK(case3gpp::laplace_los_near(c, 1e-12, 0.1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(case3gpp::laplace_nlos_near(c, 1e-12, 0.02) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(case3gpp::laplace_nlos_near(c, 1e-12, 0.1) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(case3gpp::laplace_nlos_far(c, 1e-12, 0.5) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(case3gpp::laplace_los_near(c, 0.0, 0.1) == 1.0);
}

TEST_CASE("Laplace transforms decrease with density and threshold")
{
    for (double r : {0.02, 0.1, 0.29}) {
        double prev_l = 1.0;
        double prev_n = 1.0;
        for (double lambda : {1.0, 10.0, 100.0, 1000.0}) {
            const auto c = Case1Params::defaults(lambda);
            const double l = case3gpp::laplace_los_near(c, 1.0, r);
            const double n = case3gpp::laplace_nlos_near(c, 1.0, r);
            CHECK(l < prev_l);
            CHECK(n < prev_n);
            prev_l = l;
            prev_n = n;
        }
    }
    const auto c = Case1Params::defaults(10.0);
    double prev = 1.0;
    for (double gamma : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double v = case3gpp::laplace_nlos_far(c, gamma, 0.6);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("NLoS Laplace transform is continuous at y1")
{
    for (double lambda : {1.0, 100.0, 1e4}) {
        const auto c = Case1Params::defaults(lambda);
        const double y1 = c.y1();
        const double below = case3gpp::laplace_nlos_near(c, 1.5, y1);
        const double above = case3gpp::laplace_nlos_near(c, 1.5, y1 * (1.0 + 1e-12));
        CHECK(below == doctest::Approx(above).epsilon(1e-9));
    }
}

TEST_CASE("lemma domains are enforced")
{
    const auto c = Case1Params::defaults(10.0);
    CHECK_THROWS_AS(case3gpp::laplace_los_near(c, 1.0, 0.31), std::domain_error);
    CHECK_THROWS_AS(case3gpp::laplace_los_near(c, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(case3gpp::laplace_nlos_near(c, 1.0, 0.5), std::domain_error);
    CHECK_THROWS_AS(case3gpp::laplace_nlos_far(c, 1.0, 0.3), std::domain_error);
}

TEST_CASE("closed-form coverage equals the general engine")
{
    const auto s = preset("case1");
    for (double lambda : {1.0, 10.0, 100.0, 1000.0, 10000.0}) {
        for (double gamma : {1.0, 2.0}) {
            const auto closed = case3gpp::coverage_case1(Case1Params::from_scenario(s, lambda), gamma);
            const auto general = analytic::coverage_probability(s.path_loss, s.los, s.network(lambda, gamma));
            CHECK(closed.method == Method::AnalyticClosed);
            CHECK(std::abs(closed.p_cov - general.p_cov) <= 1e-3);
        }
    }
}

TEST_CASE("closed-form coverage is a CCDF in gamma")
{
    const auto c = Case1Params::defaults(50.0);
    double prev = 1.0;
    for (double db = -10.0; db <= 30.0; db += 5.0) {
        const double p = case3gpp::coverage_case1(c, std::pow(10.0, db / 10.0)).p_cov;
        CHECK(p >= 0.0);
        CHECK(p <= prev);
        prev = p;
    }
}
