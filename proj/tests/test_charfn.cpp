#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "dclt/charfn.hpp"
#include "dclt/discounted.hpp"
#include "dclt/distributions.hpp"
#include "dclt/metrics.hpp"
#include "dclt/numeric.hpp"
#include "oracles.hpp"

using namespace dclt;

namespace {

CharFn named(char const* name)
{
    return analytic_cf(Distribution::from_name(name));
}

std::vector<double> standard_grid()
{
    return log_grid(1e-3, 1e2, 400);
}

}  // namespace

TEST_CASE("empirical cf of a symmetric two-point sample is cos")
{
    std::vector<double> const xs = {-1.0, 1.0};
    for (bool restd : {false, true})
    {
        CharFn const c = empirical_cf(xs, restd);
        CHECK(c.kind() == CfKind::empirical);
        CHECK(c.is_empirical());
        for (double xi : {0.0, 1e-3, 0.7, 3.0, 50.0})
        {
            CHECK(c(xi).real() == doctest::Approx(std::cos(xi)).epsilon(1e-15));
            CHECK(std::abs(c(xi).imag()) < 1e-15);
        }
    }
}

TEST_CASE("empirical cf basics")
{
    std::vector<double> const xs = {0.3, -1.7, 2.2, 0.05, 9.0};
    CharFn const raw = empirical_cf(xs, false);
    CHECK(raw(0.0) == std::complex<double>(1.0, 0.0));
    CHECK(raw.error_bound(1.0) == doctest::Approx(kEmpiricalErrorConstant / std::sqrt(5.0)));
    for (double xi : {0.01, 0.4, 2.0, 17.0})
    {
        auto const ref = oracle::naive_empirical_cf(xs, xi);
        CHECK(std::abs(raw(xi) - ref) < 1e-14);
        CHECK(std::abs(raw(-xi) - std::conj(raw(xi))) < 1e-14);
        CHECK(std::abs(raw(xi)) <= 1.0 + 1e-15);
    }

    CharFn const restd = empirical_cf(xs, true);
    REQUIRE(restd.third_moment());
    double const m = oracle::sample_mean(xs);
    double const sd = std::sqrt(oracle::sample_variance(xs));
    std::vector<double> zs;
    double m3 = 0.0;
    for (double x : xs)
    {
        zs.push_back((x - m) / sd);
        m3 += std::pow(zs.back(), 3) / 5.0;
    }
    CHECK(*restd.third_moment() == doctest::Approx(m3).epsilon(1e-12));
    CHECK(std::abs(restd(1.3) - oracle::naive_empirical_cf(zs, 1.3)) < 1e-14);

    CHECK_THROWS_AS(empirical_cf(std::vector<double>{}, false), std::invalid_argument);
    CHECK_THROWS_AS(empirical_cf(std::vector<double>{2.0, 2.0}, true), std::invalid_argument);
    CHECK_NOTHROW(empirical_cf(std::vector<double>{2.0, 2.0}, false));
}

TEST_CASE("empirical cf of 1e6 normal draws tracks exp(-xi^2/2)")
{
    auto const xs = Distribution::from_name("normal").sample(1000000, 11);
    CharFn const c = empirical_cf(xs, true);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
    {
        double const xi = -10.0 + 20.0 * i / 199.0;
        worst = std::max(worst, std::abs(c(xi) - std::exp(-0.5 * xi * xi)));
    }
    CHECK(worst <= 0.01);
}

TEST_CASE("discounted product of the gaussian cf closes on the gaussian")
{
    CharFn const phi = CharFn::gaussian();
    for (double a : {0.1, 0.5, 0.9, 0.99})
    {
        for (double tol : {1e-2, 1e-6, 1e-12})
        {
            CharFn const p = discounted_product_cf(phi, a, tol);
            CHECK(p.kind() == CfKind::discounted_product);
            double const n = double(truncation_length(a, tol));
            double const kept = 1.0 - std::pow(a, 2.0 * n);
            for (double xi : {1e-3, 0.5, 2.0, 6.0})
            {
                double const expect = std::exp(-0.5 * kept * xi * xi);
                CHECK(p(xi).real() == doctest::Approx(expect).epsilon(1e-12));
                CHECK(std::abs(p(xi) - std::exp(-0.5 * xi * xi)) <= p.error_bound(xi) + 1e-14);
                // The deficit stays accurate where 1 - value would cancel.
                CHECK(p.eval(xi).deficit.real()
                      == doctest::Approx(-std::expm1(-0.5 * kept * xi * xi)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("discounted product with a single factor is the rescaled base")
{
    CharFn const base = named("exponential");
    double const a = 1e-6;
    CharFn const p = discounted_product_cf(base, a, 1e-10);
    CHECK(p.meta()["truncation_length"] == 1);
    for (double xi : {0.2, 1.0, 4.0})
    {
        CHECK(std::abs(p(xi) - base(std::sqrt(1.0 - a * a) * xi)) < 1e-15);
        CHECK(std::abs(p(xi) - base(xi)) < 1e-11);
    }
}

TEST_CASE("discounted product matches a direct product of cosines")
{
    double const a = 0.9;
    double const tol = 1e-10;
    CharFn const p = discounted_product_cf(named("rademacher"), a, tol);
    std::size_t const n = truncation_length(a, tol);
    double const b = std::sqrt(1.0 - a * a);
    for (double xi : {1e-3, 0.3, 1.0, 5.0, 80.0})
    {
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k)
            prod *= std::cos(b * std::pow(a, double(k)) * xi);
        CHECK(std::abs(p(xi).real() - prod) < 1e-13);
        CHECK(p.error_bound(xi) == doctest::Approx(0.5 * std::pow(a, 2.0 * n) * xi * xi));
    }
    CHECK(p(0.0) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("discounted product agrees with simulated draws at xi = 1")
{
    SimConfig cfg;
    cfg.a = 0.9;
    cfg.n_samples = 1000000;
    cfg.trunc_tol = 1e-10;
    cfg.seed = 5;
    auto const draws = simulate_discounted(Distribution::from_name("rademacher"), cfg);
    CharFn const p = discounted_product_cf(named("rademacher"), 0.9, 1e-10);
    CHECK(std::abs(p(1.0) - oracle::naive_empirical_cf(draws, 1.0)) <= 0.005);
}

TEST_CASE("discounted product rejects bad parameters")
{
    CharFn const phi = CharFn::gaussian();
    CHECK_THROWS_AS(discounted_product_cf(phi, 0.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(discounted_product_cf(phi, 1.0, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(discounted_product_cf(phi, -0.5, 1e-8), std::invalid_argument);
    CHECK_THROWS_AS(discounted_product_cf(phi, 0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(discounted_product_cf(phi, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("apply_ta examples")
{
    CharFn const phi = CharFn::gaussian();
    CharFn const cosine = named("rademacher");

    SUBCASE("zero discount returns the base")
    {
        CharFn const t = apply_ta(cosine, named("exponential"), 0.0);
        CHECK(t.kind() == CfKind::ta_transform);
        for (double xi : {0.1, 1.0, 7.0})
            CHECK(std::abs(t(xi) - cosine(xi)) < 1e-15);
    }
    SUBCASE("gaussian is a fixed point for a gaussian base")
    {
        for (double a : {0.0, 0.3, 0.9, 0.999})
        {
            CharFn const t = apply_ta(phi, phi, a);
            for (double xi : {1e-3, 0.5, 3.0})
            {
                CHECK(t(xi).real() == doctest::Approx(std::exp(-0.5 * xi * xi)).epsilon(1e-14));
                CHECK(t.eval(xi).deficit.real()
                      == doctest::Approx(-std::expm1(-0.5 * xi * xi)).epsilon(1e-13));
            }
        }
    }
    SUBCASE("rademacher base on a gaussian at a = 0.6")
    {
        CharFn const t = apply_ta(cosine, phi, 0.6);
        CHECK(t(1.0).real() == doctest::Approx(0.5819383604080585).epsilon(1e-14));
        CHECK(t(1.0).imag() == 0.0);

        // aY + sqrt(1-a^2) X with Y ~ N(0,1), X ~ rademacher.
        std::size_t const n = 1000000;
        auto const ys = Distribution::from_name("normal").sample(n, 21);
        auto const xs = Distribution::from_name("rademacher").sample(n, 22);
        std::vector<double> mix(n);
        for (std::size_t i = 0; i < n; ++i)
            mix[i] = 0.6 * ys[i] + 0.8 * xs[i];
        CHECK(std::abs(t(1.0) - oracle::naive_empirical_cf(mix, 1.0)) < 0.005);
    }
    SUBCASE("invalid discount")
    {
        CHECK_THROWS_AS(apply_ta(phi, phi, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(apply_ta(phi, phi, -0.1), std::invalid_argument);
    }
}

TEST_CASE("third moments propagate through the algebra")
{
    CharFn const ex = named("exponential");
    REQUIRE(ex.third_moment());
    CHECK(*ex.third_moment() == doctest::Approx(2.0));

    double const a = 0.7;
    double const b = std::sqrt(1.0 - a * a);
    CharFn const t = apply_ta(ex, named("uniform"), a);
    CHECK(*t.third_moment() == doctest::Approx(2.0 * b * b * b));

    CharFn const p = discounted_product_cf(ex, a, 1e-9);
    std::size_t const n = truncation_length(a, 1e-9);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        sum += std::pow(b * std::pow(a, double(k)), 3) * 2.0;
    CHECK(*p.third_moment() == doctest::Approx(sum).epsilon(1e-13));

    CHECK_FALSE(apply_ta(ex, named("student_t:2.5"), a).third_moment());
    CHECK(apply_ta(ex, named("student_t:2.5"), a).moment_order() == 2.5);
}

TEST_CASE("every kind satisfies the cf invariants")
{
    auto const xs = Distribution::from_name("exponential").sample(2000, 3);
    std::vector<CharFn> const fns = {
        named("bernoulli:0.3"),
        empirical_cf(xs, true),
        discounted_product_cf(named("exponential"), 0.8, 1e-9),
        apply_ta(named("exponential"), named("student_t:2.5"), 0.4),
        apply_ta(empirical_cf(xs, false), CharFn::gaussian(), 0.5),
    };
    for (CharFn const& c : fns)
    {
        CHECK(std::abs(c(0.0) - 1.0) < 1e-15);
        for (double xi : log_grid(1e-4, 1e3, 300))
        {
            auto const e = c.eval(xi);
            CHECK(std::abs(e.value) <= 1.0 + 1e-12);
            CHECK(std::abs(c(-xi) - std::conj(e.value)) < 1e-12);
            CHECK(std::abs(1.0 - e.deficit - e.value) < 1e-12);
        }
    }
}

TEST_CASE("meta records provenance")
{
    auto const xs = Distribution::from_name("normal").sample(10, 1);
    CharFn const p = discounted_product_cf(named("rademacher"), 0.9, 1e-10);
    CharFn const t = apply_ta(named("uniform"), empirical_cf(xs, false), 0.5);
    CHECK(p.meta()["kind"] == "discounted_product");
    CHECK(p.meta()["truncation_length"] == truncation_length(0.9, 1e-10));
    CHECK(p.meta()["base"]["distribution"] == "rademacher");
    CHECK(t.meta()["g"]["n"] == 10);
    CHECK(t.meta()["base"]["kind"] == "analytic");
    CHECK(t.is_empirical());
    CHECK(to_string(t.kind()) == "ta_transform");
}

TEST_CASE("discounted product is a fixed point of T_a up to its error bound")
{
    for (char const* name : {"rademacher", "exponential", "uniform", "student_t:2.5"})
    {
        for (double a : {0.5, 0.9, 0.99})
        {
            CharFn const f = named(name);
            CharFn const p = discounted_product_cf(f, a, 1e-10);
            CharFn const tp = apply_ta(f, p, a);
            for (double xi : standard_grid())
            {
                double const gap = std::abs(p.eval(xi).deficit - tp.eval(xi).deficit);
                CHECK(gap <= 2.0 * p.error_bound(xi) + 1e-15 * std::abs(p.eval(xi).deficit));
            }
        }
    }
}

TEST_CASE("halving the truncation tolerance never moves away from the reference")
{
    for (char const* name : {"rademacher", "exponential"})
    {
        CharFn const f = named(name);
        double const a = 0.9;
        CharFn const ref = discounted_product_cf(f, a, 1e-14);
        double previous = std::numeric_limits<double>::infinity();
        for (double tol = 1e-2; tol > 1e-13; tol *= 0.5)
        {
            CharFn const p = discounted_product_cf(f, a, tol);
            double dev = 0.0;
            for (double xi : standard_grid())
                dev = std::max(dev, std::abs(p.eval(xi).deficit - ref.eval(xi).deficit));
            CHECK(dev <= previous);
            previous = dev;
        }
    }
}

TEST_CASE("composed T_a matches simulated AR(1) states")
{
    Distribution const f = Distribution::from_name("rademacher");
    Distribution const init = Distribution::from_name("uniform");
    double const a = 0.9;
    std::size_t const steps = 10;

    CharFn composed = analytic_cf(init);
    for (std::size_t k = 0; k < steps; ++k)
        composed = apply_ta(analytic_cf(f), composed, a);

    SimConfig cfg;
    cfg.n_samples = 200000;
    cfg.seed = 8;
    auto const ys = ar1_iterate(f, init, a, steps, cfg);
    double worst = 0.0;
    for (double xi : log_grid(1e-3, 1e2, 100))
        worst = std::max(worst, std::abs(composed(xi) - oracle::naive_empirical_cf(ys, xi)));
    CHECK(worst < 5.0 / std::sqrt(double(cfg.n_samples)));
}
