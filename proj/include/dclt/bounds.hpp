#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "dclt/charfn.hpp"
#include "dclt/distributions.hpp"
#include "dclt/metrics.hpp"

namespace dclt {

// Constant in the Kolmogorov-distance bound C * rho3 * sqrt(1 - a).
inline constexpr double kGerberConstant = 5.4;

// 3 * 12^{2/3} / pi, from optimizing the smoothing-inequality cutoff T.
double kolmogorov_conversion_constant();

// [(s-2)(1-a^2) / (e a^2)]^{(s-2)/2} * d_s(F, Phi), for a in (0,1), s in (2,3].
double theorem3_bound(double a, double s, double ds_f_phi);

struct EnvelopeSup
{
    double w_star = 0.0;  // 0 marks the w -> 0 limit (s = 2)
    double value = 1.0;
};

// Closed-form sup over w of exp(-(a w)^2 / (2(1-a^2))) |w|^{s-2}.
EnvelopeSup envelope_sup(double a, double s);

// The same supremum by grid search and golden-section refinement.
MetricResult envelope_sup_numeric(double a, double s);

// sup_w exp(-(a w)^2 / (2(1-a^2))) |C_F(w) - C_Phi(w)| / w^2,
// an upper bound on d_2(F_a, Phi).
MetricResult lemma2_bound(CharFn const& f_cf, double a, GridSpec const& grid = {});

// d_2(G, T_a[G]) / (1 - a^2), an upper bound on d_2(G, F_a).
MetricResult lemma1iii_bound(CharFn const& g_cf, CharFn const& f_cf, double a,
                             GridSpec const& grid = {});

// 5.4 * rho3 * sqrt(1-a); nullopt when rho3 is infinite.
std::optional<double> gerber_bound(double a, double rho3);

// Kolmogorov bound implied by a d_2 distance.
double kolmogorov_from_d2(double d2);

//---------------------------------------------------------------------------//
/*!
 * One row of the bound report for a single discount factor.
 *
 * Optional columns are empty when the quantity is not defined for the law
 * (e.g. no finite third moment, or s outside the law's moment range).
 */
struct BoundRow
{
    double a = 0.0;
    double s = 3.0;
    std::optional<double> ds_f_phi;
    double d2_measured = 0.0;
    double lemma2_bound = 0.0;
    std::optional<double> theorem3_bound;
    double kolmogorov_measured = 0.0;
    std::optional<double> gerber_bound;
    double kolmogorov_from_d2 = 0.0;
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;
    double trunc_tol = 0.0;

    // Diagnostics; not part of the serialized report.
    double d2_error = 0.0;
    double lemma2_error = 0.0;
    double ds_error = 0.0;

    bool operator==(BoundRow const&) const = default;
};

struct BoundRowInputs
{
    double a = 0.9;
    double s = 3.0;
    std::size_t n_samples = 100000;
    std::uint64_t seed = 1;
    double trunc_tol = 1e-10;
    GridSpec grid;
    // d_s(F, Phi) when already known; computed otherwise.
    std::optional<MetricResult> ds_f_phi;
    // Number of Monte Carlo workers; output does not depend on it.
    unsigned jobs = 1;
};

// Fills every column for one discount factor: d_2(F_a, Phi) from the
// truncated product cf, the Monte Carlo Kolmogorov distance, and all bounds.
BoundRow compute_bound_row(Distribution const& f, BoundRowInputs const& in);

}  // namespace dclt
