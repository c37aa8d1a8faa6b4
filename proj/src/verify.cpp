#include "dclt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "dclt/bounds.hpp"
#include "dclt/charfn.hpp"
#include "dclt/discounted.hpp"
#include "dclt/distributions.hpp"
#include "dclt/metrics.hpp"
#include "dclt/numeric.hpp"
#include "dclt/rng.hpp"

namespace dclt {
namespace {

CharFn named(std::string const& name)
{
    return analytic_cf(Distribution::from_name(name));
}

struct Tally
{
    bool ok = true;
    double margin = 0.0;
    std::string where;

    // Records `lhs <= rhs`, keeping the smallest margin rhs - lhs seen.
    void require(double lhs, double rhs, std::string const& label)
    {
        double const m = rhs - lhs;
        if (where.empty() || m < margin)
        {
            margin = m;
            where = label;
        }
        ok = ok && lhs <= rhs;
    }

    CheckResult result(std::string name) const
    {
        std::ostringstream detail;
        detail << "smallest margin " << format_double(margin) << " at " << where;
        return {std::move(name), ok, detail.str()};
    }
};

std::string label(std::string const& text, double a)
{
    return text + " a=" + format_double(a);
}

CheckResult cf_invariants()
{
    Tally t;
    for (char const* name : {"normal", "rademacher", "uniform", "exponential", "bernoulli:0.3",
                              "student_t:2.5", "student_t:4"})
    {
        Distribution const d = Distribution::from_name(name);
        t.require(std::abs(d.cf(0.0) - 1.0), 0.0, std::string(name) + " cf(0)");
        for (double xi : log_grid(1e-4, 1e3, 1000))
        {
            std::complex<double> const c = d.cf(xi);
            t.require(std::abs(c), 1.0 + 1e-12, std::string(name) + " |cf|");
            t.require(std::abs(d.cf(-xi) - std::conj(c)), 1e-12, std::string(name) + " hermitian");
        }
    }
    return t.result("cf_invariants");
}

CheckResult gaussian_null()
{
    Tally t;
    for (double a : {0.5, 0.9, 0.99})
    {
        CharFn const fa = discounted_product_cf(CharFn::gaussian(), a, 1e-12);
        t.require(fourier_distance(fa, CharFn::gaussian(), 2.0).value, 1e-8, label("d2", a));
    }
    return t.result("gaussian_null");
}

CheckResult metric_symmetry()
{
    Tally t;
    std::vector<std::string> const names = {"rademacher", "uniform", "exponential", "bernoulli:0.3"};
    for (auto const& g : names)
    {
        for (auto const& h : names)
        {
            double const gh = fourier_distance(named(g), named(h), 2.5).value;
            double const hg = fourier_distance(named(h), named(g), 2.5).value;
            t.require(std::abs(gh - hg), 0.0, g + "/" + h);
        }
    }
    return t.result("metric_symmetry");
}

CheckResult contraction()
{
    Tally t;
    std::vector<std::string> const names = {"normal", "rademacher", "uniform", "exponential"};
    Philox4x32 rng(mix_seed(1, 0xc0), 0);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::string const f = names[rng() % names.size()];
        std::string const g = names[rng() % names.size()];
        std::string const h = names[rng() % names.size()];
        for (double a : {0.3, 0.6, 0.9})
        {
            MetricResult const before = fourier_distance(named(g), named(h), 2.0);
            MetricResult const after = fourier_distance(apply_ta(named(f), named(g), a),
                                                        apply_ta(named(f), named(h), a), 2.0);
            double const eps = std::max(before.error_estimate, after.error_estimate);
            t.require(after.value, a * a * before.value + 2.0 * eps,
                      label(f + ":" + g + "/" + h, a));
        }
    }
    return t.result("contraction");
}

CheckResult fixed_point()
{
    Tally t;
    for (char const* name : {"rademacher", "exponential"})
    {
        for (double a : {0.5, 0.9})
        {
            CharFn const f = named(name);
            CharFn const fa = discounted_product_cf(f, a, 1e-12);
            MetricResult const r = fixed_point_residual(fa, f, a);
            t.require(r.value, 10.0 * r.error_estimate, label(name, a));
        }
    }
    return t.result("fixed_point_residual");
}

CheckResult lemma_identity()
{
    Tally t;
    for (char const* name : {"rademacher", "uniform", "exponential", "bernoulli:0.3",
                             "student_t:2.5"})
    {
        for (double a : {0.5, 0.95})
        {
            double const l2 = lemma2_bound(named(name), a).value;
            double const l1 = lemma1iii_bound(CharFn::gaussian(), named(name), a).value;
            t.require(std::abs(l2 - l1), 1e-6 * std::max(l1, l2), label(name, a));
        }
    }
    return t.result("lemma2_identity");
}

CheckResult envelope()
{
    Tally t;
    Philox4x32 rng(mix_seed(1, 0xe0), 0);
    for (int i = 0; i < 20; ++i)
    {
        double const a = rng.uniform_open();
        double const s = 2.0 + rng.uniform_open();
        double const closed = envelope_sup(a, s).value;
        double const numeric = envelope_sup_numeric(a, s).value;
        t.require(std::abs(numeric - closed), 1e-6 * closed,
                  label("s=" + format_double(s), a));
    }
    return t.result("envelope_closed_form");
}

CheckResult ordering_chain()
{
    Tally t;
    for (auto const& [name, s] : std::vector<std::pair<std::string, double>>{
             {"rademacher", 3.0}, {"uniform", 3.0}, {"exponential", 2.5}, {"student_t:2.5", 2.4}})
    {
        Distribution const f = Distribution::from_name(name);
        MetricResult const ds = fourier_distance(analytic_cf(f), CharFn::gaussian(), s);
        for (double a : {0.9, 0.99, 0.999})
        {
            MetricResult const d2 = fourier_distance(
                discounted_product_cf(analytic_cf(f), a, 1e-12), CharFn::gaussian(), 2.0);
            MetricResult const l2 = lemma2_bound(analytic_cf(f), a);
            double const eps = d2.error_estimate + l2.error_estimate + ds.error_estimate;
            t.require(d2.value, l2.value + eps, label(name + " d2<=lemma2", a));
            t.require(l2.value, theorem3_bound(a, s, ds.value) + eps,
                      label(name + " lemma2<=rate", a));
        }
    }
    return t.result("ordering_chain");
}

CheckResult two_oracles(std::size_t n)
{
    Tally t;
    SimConfig cfg;
    cfg.a = 0.9;
    cfg.n_samples = n;
    cfg.trunc_tol = 1e-10;
    auto const xs = simulate_discounted(Distribution::from_name("rademacher"), cfg);
    CharFn const sim = empirical_cf(xs, false);
    CharFn const prod = discounted_product_cf(named("rademacher"), cfg.a, cfg.trunc_tol);
    // Statistical scale of a uniform empirical-cf deviation.
    double const tol = 10.0 / std::sqrt(static_cast<double>(n));
    for (double xi : log_grid(1e-3, 1e2, 400))
        t.require(std::abs(sim(xi) - prod(xi)), tol, "xi=" + format_double(xi));
    return t.result("two_oracle_agreement");
}

CheckResult kolmogorov_bounds(std::size_t n)
{
    Tally t;
    Distribution const f = Distribution::from_name("rademacher");
    for (double a : {0.9, 0.99})
    {
        BoundRowInputs in;
        in.a = a;
        in.n_samples = n;
        BoundRow const row = compute_bound_row(f, in);
        double const slack = 3.0 * dkw_radius(n);
        t.require(row.kolmogorov_measured, *row.gerber_bound + slack, label("gerber", a));
        t.require(row.kolmogorov_measured, row.kolmogorov_from_d2 + slack, label("from d2", a));
    }
    return t.result("kolmogorov_bounds");
}

}  // namespace

std::vector<CheckResult> run_verification(bool quick)
{
    std::size_t const n = quick ? 20000 : 1000000;
    std::vector<std::function<CheckResult()>> const checks = {
        cf_invariants,
        gaussian_null,
        metric_symmetry,
        contraction,
        fixed_point,
        lemma_identity,
        envelope,
        ordering_chain,
        [n] { return two_oracles(n); },
        [n] { return kolmogorov_bounds(n); },
    };
    std::vector<CheckResult> results;
    for (auto const& check : checks)
    {
        try
        {
            results.push_back(check());
        }
        catch (std::exception const& e)
        {
            results.push_back({"exception", false, e.what()});
        }
    }
    return results;
}

}  // namespace dclt
