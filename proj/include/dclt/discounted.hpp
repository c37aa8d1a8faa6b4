#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dclt/charfn.hpp"
#include "dclt/distributions.hpp"
#include "dclt/metrics.hpp"

namespace dclt {

enum class SimMethod
{
    direct_truncation,
    ar1_iteration,
};

std::string to_string(SimMethod method);
SimMethod sim_method_from_string(std::string const& name);

//---------------------------------------------------------------------------//
/*!
 * Monte Carlo settings for the normalized discounted sum.
 *
 * `steps` and `initial` only matter for ar1_iteration. `jobs` only affects
 * wall time: output is identical for any worker count.
 */
struct SimConfig
{
    double a = 0.9;
    std::size_t n_samples = 100000;
    double trunc_tol = 1e-10;
    std::uint64_t seed = 1;
    SimMethod method = SimMethod::direct_truncation;
    std::size_t steps = 0;
    std::string initial = "normal";
    unsigned jobs = 1;

    void validate() const;
};

nlohmann::ordered_json to_json(SimConfig const& cfg);

// Smallest N >= 1 with a^{2N} <= tol: the normalized tail
// sum_{n>=N} (1-a^2) a^{2n} Var(X) = a^{2N} then carries at most tol.
std::size_t truncation_length(double a, double tol);

// Draws of sqrt(1-a^2) * sum_{n<N} a^n X_n with N = truncation_length.
std::vector<double> simulate_discounted(Distribution const& f, SimConfig const& cfg);

// Independent trajectories of Y_{k+1} = a Y_k + sqrt(1-a^2) X_k started from
// `initial`; returns Y_steps for each trajectory.
std::vector<double> ar1_iterate(Distribution const& f, Distribution const& initial,
                                double a, std::size_t steps, SimConfig const& cfg);

// Dispatches on cfg.method.
std::vector<double> simulate(Distribution const& f, SimConfig const& cfg);

// d_2(F_a, T_a[F_a]).
MetricResult fixed_point_residual(CharFn const& fa_cf, CharFn const& f_cf, double a,
                                  GridSpec const& grid = {});

}  // namespace dclt
