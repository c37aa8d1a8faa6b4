#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include <nlohmann/json.hpp>

#include "dclt/charfn.hpp"

namespace dclt {

// Search grid for sup over xi > 0. Defaults are the standard grid:
// 400 log-spaced points on [1e-3, 1e2].
struct GridSpec
{
    double xi_min = 1e-3;
    double xi_max = 1e2;
    std::size_t points = 400;
    double refine_tol = 1e-6;

    void validate() const;
    bool operator==(GridSpec const&) const = default;
};

nlohmann::ordered_json to_json(GridSpec const& grid);
GridSpec grid_from_json(nlohmann::json const& j);

struct MetricResult
{
    double value = 0.0;
    double argmax_xi = 0.0;  // 0 when the sup is the xi -> 0 limit
    double s = 2.0;
    std::size_t grid_points = 0;
    std::size_t refinement_steps = 0;
    double error_estimate = 0.0;
};

nlohmann::ordered_json to_json(MetricResult const& result);

struct SupResult
{
    double argmax = 0.0;
    double value = 0.0;
    std::size_t evaluations = 0;
};

// Golden-section maximization of f on [lo, hi] down to a bracket narrower
// than rel_tol * |x|. Never returns less than the best value evaluated,
// endpoints included.
SupResult refine_sup(std::function<double(double)> const& f, double lo, double hi,
                     double rel_tol = 1e-6);

// Problem description for a grid-plus-refinement supremum over xi > 0.
struct SupProblem
{
    // Objective to maximize, e.g. |G - H| / xi^s.
    std::function<double(double)> objective;
    // Upper bound of the objective for all xi' >= xi; the grid is extended
    // past xi_max until this falls below the running maximum.
    std::function<double(double)> tail_bound;
    // Known value of the objective as xi -> 0, if any.
    std::optional<double> zero_limit;
};

MetricResult grid_sup(SupProblem const& problem, GridSpec const& grid);

// Fourier distance d_s(G, H) = sup_{xi != 0} |C_G(xi) - C_H(xi)| / |xi|^s
// for s in [2, 3].
MetricResult fourier_distance(CharFn const& g, CharFn const& h, double s,
                              GridSpec const& grid = {});

// Exact sup |F_n(x) - cdf(x)| for the empirical CDF of the samples.
double kolmogorov_distance(std::span<double const> samples,
                           std::function<double(double)> const& cdf);

// Dvoretzky-Kiefer-Wolfowitz radius sqrt(ln(2/alpha) / (2n)).
double dkw_radius(std::size_t n, double alpha = 0.01);

}  // namespace dclt
