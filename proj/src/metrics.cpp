#include "dclt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dclt/numeric.hpp"

namespace dclt {
namespace {

// The grid is never extended past xi_max * kTailReach.
constexpr double kTailReach = 1e4;
// Local grid maxima within this fraction of the best are all refined.
constexpr double kTieFraction = 0.5;
constexpr std::size_t kMaxRefinements = 16;

double inv_pow(double xi, double s)
{
    return s == 2.0 ? 1.0 / (xi * xi) : std::pow(xi, -s);
}

}  // namespace

void GridSpec::validate() const
{
    if (!(xi_min > 0.0 && xi_max > xi_min && std::isfinite(xi_max)))
    {
        throw std::invalid_argument("grid requires 0 < xi_min < xi_max < inf");
    }
    if (points < 3)
    {
        throw std::invalid_argument("grid requires at least 3 points");
    }
    if (!(refine_tol > 0.0 && refine_tol < 1.0))
    {
        throw std::invalid_argument("grid refine_tol must lie in (0,1)");
    }
}

nlohmann::ordered_json to_json(GridSpec const& grid)
{
    return {{"xi_min", grid.xi_min},
            {"xi_max", grid.xi_max},
            {"grid_points", grid.points},
            {"refine_tol", grid.refine_tol}};
}

GridSpec grid_from_json(nlohmann::json const& j)
{
    GridSpec grid;
    grid.xi_min = j.value("xi_min", grid.xi_min);
    grid.xi_max = j.value("xi_max", grid.xi_max);
    grid.points = j.value("grid_points", grid.points);
    grid.refine_tol = j.value("refine_tol", grid.refine_tol);
    return grid;
}

nlohmann::ordered_json to_json(MetricResult const& r)
{
    return {{"value", r.value},
            {"argmax_xi", r.argmax_xi},
            {"s", r.s},
            {"grid_points", r.grid_points},
            {"refinement_steps", r.refinement_steps},
            {"error_estimate", r.error_estimate}};
}

SupResult refine_sup(std::function<double(double)> const& f, double lo, double hi,
                     double rel_tol)
{
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi))
    {
        throw std::invalid_argument("refine_sup requires a finite bracket lo <= hi");
    }
    if (!(rel_tol > 0.0))
    {
        throw std::invalid_argument("refine_sup requires rel_tol > 0");
    }

    SupResult best{lo, f(lo), 1};
    auto consider = [&](double x, double v) {
        ++best.evaluations;
        if (v > best.value)
        {
            best.value = v;
            best.argmax = x;
        }
    };
    if (hi == lo)
    {
        return best;
    }
    consider(hi, f(hi));

    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    consider(x1, f1);
    consider(x2, f2);
    double const abs_floor = 1e-300;
    while ((b - a) > rel_tol * std::max(std::abs(0.5 * (a + b)), abs_floor))
    {
        if (f1 >= f2)
        {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = f(x1);
            consider(x1, f1);
        }
        else
        {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = f(x2);
            consider(x2, f2);
        }
        if (best.evaluations > 10000)
            break;
    }
    return best;
}

MetricResult grid_sup(SupProblem const& problem, GridSpec const& grid)
{
    grid.validate();
    std::vector<double> xs = log_grid(grid.xi_min, grid.xi_max, grid.points);
    std::vector<double> vals(xs.size());
    std::transform(xs.begin(), xs.end(), vals.begin(), problem.objective);

    double running = *std::max_element(vals.begin(), vals.end());
    if (problem.zero_limit)
    {
        running = std::max(running, *problem.zero_limit);
    }

    double tail_residual = 0.0;
    if (problem.tail_bound)
    {
        double const ratio = xs[1] / xs[0];
        double const reach = grid.xi_max * kTailReach;
        while (problem.tail_bound(xs.back()) > running && xs.back() < reach)
        {
            double const x = xs.back() * ratio;
            double const v = problem.objective(x);
            xs.push_back(x);
            vals.push_back(v);
            running = std::max(running, v);
        }
        tail_residual = std::max(0.0, problem.tail_bound(xs.back()) - running);
    }

    MetricResult result;
    result.grid_points = xs.size();

    std::size_t const last = xs.size() - 1;
    double const grid_max = *std::max_element(vals.begin(), vals.end());
    if (grid_max > 0.0)
    {
        std::vector<std::size_t> peaks;
        for (std::size_t i = 0; i <= last; ++i)
        {
            bool const left_ok = i == 0 || vals[i] >= vals[i - 1];
            bool const right_ok = i == last || vals[i] >= vals[i + 1];
            if (left_ok && right_ok && vals[i] >= kTieFraction * grid_max)
            {
                peaks.push_back(i);
            }
        }
        std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t l, std::size_t r) {
            return vals[l] > vals[r];
        });
        if (peaks.size() > kMaxRefinements)
        {
            peaks.resize(kMaxRefinements);
        }

        result.value = -1.0;
        for (std::size_t i : peaks)
        {
            double const lo = xs[i == 0 ? 0 : i - 1];
            double const hi = xs[std::min(i + 1, last)];
            SupResult const r = refine_sup(problem.objective, lo, hi, grid.refine_tol);
            result.refinement_steps += r.evaluations;
            if (r.value > result.value)
            {
                result.value = r.value;
                result.argmax_xi = r.argmax;
            }
        }
    }
    if (problem.zero_limit && *problem.zero_limit >= result.value)
    {
        result.value = *problem.zero_limit;
        result.argmax_xi = 0.0;
    }
    result.value = std::max(result.value, 0.0);
    result.error_estimate = grid.refine_tol * result.value + tail_residual;
    return result;
}

MetricResult fourier_distance(CharFn const& g, CharFn const& h, double s,
                              GridSpec const& grid)
{
    if (!(s >= 2.0 && s <= 3.0))
    {
        throw std::domain_error("fourier_distance requires s in [2,3]; d_s may be "
                                "infinite otherwise");
    }
    double const order = std::min(g.moment_order(), h.moment_order());
    if (s >= order)
    {
        throw std::domain_error("fourier_distance: s must be below the moment order "
                                "of both laws, otherwise d_s may be infinite");
    }

    SupProblem problem;
    problem.objective = [&](double xi) {
        return std::abs(g.eval(xi).deficit - h.eval(xi).deficit) * inv_pow(xi, s);
    };
    problem.tail_bound = [s](double xi) { return 2.0 * inv_pow(xi, s); };
    bool const empirical = g.is_empirical() || h.is_empirical();
    if (!empirical)
    {
        if (s < 3.0)
        {
            problem.zero_limit = 0.0;
        }
        else if (auto mg = g.third_moment(), mh = h.third_moment(); mg && mh)
        {
            problem.zero_limit = std::abs(*mg - *mh) / 6.0;
        }
    }

    MetricResult result = grid_sup(problem, grid);
    result.s = s;

    double input_error = 0.0;
    for (double xi : log_grid(grid.xi_min, grid.xi_max, grid.points))
    {
        input_error = std::max(input_error,
                               (g.error_bound(xi) + h.error_bound(xi)) * inv_pow(xi, s));
    }
    result.error_estimate += input_error;
    return result;
}

double kolmogorov_distance(std::span<double const> samples,
                           std::function<double(double)> const& cdf)
{
    if (samples.empty())
    {
        throw std::invalid_argument("kolmogorov_distance requires samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    double const n = static_cast<double>(sorted.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i)
    {
        double const f = cdf(sorted[i]);
        double const above = static_cast<double>(i + 1) / n - f;
        double const below = f - static_cast<double>(i) / n;
        worst = std::max({worst, above, below});
    }
    return worst;
}

double dkw_radius(std::size_t n, double alpha)
{
    if (n == 0 || !(alpha > 0.0 && alpha < 1.0))
    {
        throw std::invalid_argument("dkw_radius requires n >= 1 and alpha in (0,1)");
    }
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace dclt
