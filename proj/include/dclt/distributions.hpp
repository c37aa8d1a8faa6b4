#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dclt/rng.hpp"

namespace dclt {

enum class Family
{
    normal,
    rademacher,
    uniform,
    exponential,
    bernoulli,
    student_t,
};

// Characteristic function value together with its deficit 1 - C(xi).
// The deficit is computed directly (not as 1 - value) so that it keeps full
// relative precision near xi = 0, where all the interesting ratios live.
struct CfEval
{
    std::complex<double> value;
    std::complex<double> deficit;
};

//---------------------------------------------------------------------------//
/*!
 * A probability law standardized to mean 0 and variance 1.
 *
 * Characteristic functions follow the convention C(xi) = E exp(-i xi X).
 * Instances are immutable and all evaluators are safe to call concurrently.
 */
class Distribution
{
  public:
    // `param` is p for bernoulli, nu for student_t, ignored otherwise.
    static Distribution make_standardized(Family family, double param = 0.0);

    // Catalog lookup: "normal", "rademacher", "uniform", "exponential",
    // "bernoulli:<p>", "student_t:<nu>".
    static Distribution from_name(std::string_view name);

    Family family() const { return family_; }
    double param() const { return param_; }
    std::string const& name() const { return name_; }

    double mean() const { return 0.0; }
    double variance() const { return 1.0; }

    std::complex<double> cf(double xi) const { return cf_eval(xi).value; }
    CfEval cf_eval(double xi) const;

    // E|X|^s; +inf when s reaches the moment order of the law.
    double abs_moment(double s) const;

    // Supremum of orders with a finite absolute moment (+inf if all exist).
    // For student_t(nu) the supremum nu itself is not attained.
    double abs_moment_order() const;

    // E X^3 when finite.
    std::optional<double> third_moment() const;

    bool has_cdf() const { return true; }
    double cdf(double x) const;

    double draw(Philox4x32& rng) const;
    void fill(Philox4x32& rng, std::span<double> out) const;

    // n i.i.d. draws; deterministic in (seed, n) regardless of `jobs`.
    std::vector<double> sample(std::size_t n, std::uint64_t seed,
                               unsigned jobs = 1) const;

  private:
    Distribution(Family family, double param);

    CfEval student_t_cf(double xi) const;
    double student_t_deficit_quadrature(double xi) const;

    Family family_;
    double param_;
    std::string name_;
    // Family-specific constants fixed at construction.
    double scale_ = 1.0;
    double hi_atom_ = 0.0;  // bernoulli: value taken with probability p
    double lo_atom_ = 0.0;
};

// Samples handed to a single Philox stream before moving to the next one.
inline constexpr std::size_t kSampleChunk = 8192;

// Standard normal CDF.
double normal_cdf(double x);

}  // namespace dclt
