#include "dclt/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dclt/discounted.hpp"
#include "dclt/numeric.hpp"

namespace dclt {
namespace {

void require_open_unit(double a, char const* what)
{
    if (!(a > 0.0 && a < 1.0))
    {
        throw std::invalid_argument(std::string(what) + " requires a in (0,1)");
    }
}

// exp(-(a w)^2 / (2 (1 - a^2)))
double gaussian_envelope(double a, double w)
{
    double const aw = a * w;
    return std::exp(-0.5 * aw * aw / ((1.0 - a) * (1.0 + a)));
}

}  // namespace

double kolmogorov_conversion_constant()
{
    return 3.0 * std::cbrt(144.0) / std::numbers::pi;
}

double theorem3_bound(double a, double s, double ds_f_phi)
{
    require_open_unit(a, "theorem3_bound");
    if (!(s > 2.0 && s <= 3.0))
    {
        throw std::domain_error("theorem3_bound requires s in (2,3]");
    }
    if (!(ds_f_phi >= 0.0))
    {
        throw std::invalid_argument("theorem3_bound requires d_s(F,Phi) >= 0");
    }
    double const base = (s - 2.0) * (1.0 - a) * (1.0 + a) / (std::numbers::e * a * a);
    return std::pow(base, 0.5 * (s - 2.0)) * ds_f_phi;
}

EnvelopeSup envelope_sup(double a, double s)
{
    require_open_unit(a, "envelope_sup");
    if (!(s >= 2.0 && s <= 3.0))
    {
        throw std::domain_error("envelope_sup requires s in [2,3]");
    }
    if (s == 2.0)
    {
        return {0.0, 1.0};
    }
    double const b2 = (1.0 - a) * (1.0 + a);
    double const w_star = std::sqrt((s - 2.0) * b2) / a;
    double const value
        = std::pow((s - 2.0) * b2 / (std::numbers::e * a * a), 0.5 * (s - 2.0));
    return {w_star, value};
}

MetricResult envelope_sup_numeric(double a, double s)
{
    require_open_unit(a, "envelope_sup_numeric");
    if (!(s >= 2.0 && s <= 3.0))
    {
        throw std::domain_error("envelope_sup_numeric requires s in [2,3]");
    }
    SupProblem problem;
    problem.objective
        = [a, s](double w) { return gaussian_envelope(a, w) * std::pow(w, s - 2.0); };
    problem.zero_limit = s == 2.0 ? 1.0 : 0.0;
    GridSpec grid;
    grid.xi_min = 1e-8;
    grid.xi_max = 1e8;
    grid.points = 3201;
    grid.refine_tol = 1e-9;
    MetricResult r = grid_sup(problem, grid);
    r.s = s;
    return r;
}

MetricResult lemma2_bound(CharFn const& f_cf, double a, GridSpec const& grid)
{
    if (!(a >= 0.0 && a < 1.0))
    {
        throw std::invalid_argument("lemma2_bound requires a in [0,1)");
    }
    CharFn const phi = CharFn::gaussian();
    SupProblem problem;
    problem.objective = [&](double w) {
        double const diff = std::abs(f_cf.eval(w).deficit - phi.eval(w).deficit);
        return gaussian_envelope(a, w) * diff / (w * w);
    };
    problem.tail_bound
        = [a](double w) { return gaussian_envelope(a, w) * 2.0 / (w * w); };
    if (!f_cf.is_empirical())
    {
        problem.zero_limit = 0.0;
    }
    MetricResult r = grid_sup(problem, grid);
    r.s = 2.0;
    double input_error = 0.0;
    for (double w : log_grid(grid.xi_min, grid.xi_max, grid.points))
    {
        input_error
            = std::max(input_error, gaussian_envelope(a, w) * f_cf.error_bound(w) / (w * w));
    }
    r.error_estimate += input_error;
    return r;
}

MetricResult lemma1iii_bound(CharFn const& g_cf, CharFn const& f_cf, double a,
                             GridSpec const& grid)
{
    if (!(a >= 0.0 && a < 1.0))
    {
        throw std::invalid_argument("lemma1iii_bound requires a in [0,1)");
    }
    MetricResult r = fourier_distance(g_cf, apply_ta(f_cf, g_cf, a), 2.0, grid);
    double const scale = 1.0 / ((1.0 - a) * (1.0 + a));
    r.value *= scale;
    r.error_estimate *= scale;
    return r;
}

std::optional<double> gerber_bound(double a, double rho3)
{
    require_open_unit(a, "gerber_bound");
    if (std::isinf(rho3))
    {
        return std::nullopt;
    }
    if (!(rho3 >= 0.0))
    {
        throw std::invalid_argument("gerber_bound requires rho3 >= 0");
    }
    return kGerberConstant * rho3 * std::sqrt(1.0 - a);
}

double kolmogorov_from_d2(double d2)
{
    if (!(d2 >= 0.0))
    {
        throw std::invalid_argument("kolmogorov_from_d2 requires d2 >= 0");
    }
    return kolmogorov_conversion_constant() * std::cbrt(d2);
}

BoundRow compute_bound_row(Distribution const& f, BoundRowInputs const& in)
{
    require_open_unit(in.a, "compute_bound_row");
    BoundRow row;
    row.a = in.a;
    row.s = in.s;
    row.n_samples = in.n_samples;
    row.seed = in.seed;
    row.trunc_tol = in.trunc_tol;

    CharFn const f_cf = analytic_cf(f);
    CharFn const phi = CharFn::gaussian();

    bool const theorem_applies
        = in.s > 2.0 && in.s <= 3.0 && in.s < f.abs_moment_order();
    if (theorem_applies)
    {
        MetricResult const ds
            = in.ds_f_phi ? *in.ds_f_phi : fourier_distance(f_cf, phi, in.s, in.grid);
        row.ds_f_phi = ds.value;
        row.ds_error = ds.error_estimate;
        row.theorem3_bound = theorem3_bound(in.a, in.s, ds.value);
    }

    CharFn const fa = discounted_product_cf(f_cf, in.a, in.trunc_tol);
    MetricResult const d2 = fourier_distance(fa, phi, 2.0, in.grid);
    row.d2_measured = d2.value;
    row.d2_error = d2.error_estimate;

    MetricResult const l2 = lemma2_bound(f_cf, in.a, in.grid);
    row.lemma2_bound = l2.value;
    row.lemma2_error = l2.error_estimate;

    SimConfig sim;
    sim.a = in.a;
    sim.n_samples = in.n_samples;
    sim.trunc_tol = in.trunc_tol;
    sim.seed = in.seed;
    sim.jobs = in.jobs;
    std::vector<double> const draws = simulate_discounted(f, sim);
    row.kolmogorov_measured = kolmogorov_distance(draws, normal_cdf);

    row.gerber_bound = gerber_bound(in.a, f.abs_moment(3.0));
    row.kolmogorov_from_d2 = kolmogorov_from_d2(row.d2_measured);
    return row;
}

}  // namespace dclt
