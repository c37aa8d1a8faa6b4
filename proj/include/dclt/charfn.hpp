#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <span>
#include <string_view>

#include <nlohmann/json.hpp>

#include "dclt/distributions.hpp"

namespace dclt {

namespace detail {
class CfNode;
}

enum class CfKind
{
    analytic,
    empirical,
    discounted_product,
    ta_transform,
};

std::string_view to_string(CfKind kind);

//---------------------------------------------------------------------------//
/*!
 * An immutable, evaluable characteristic function.
 *
 * Each evaluation returns both C(xi) and the deficit 1 - C(xi); distances
 * are computed from deficits so that ratios like |C_G - C_H| / xi^2 keep
 * full precision down to xi ~ 1e-3 and below. Copies share the underlying
 * node.
 */
class CharFn
{
  public:
    explicit CharFn(std::shared_ptr<detail::CfNode const> node);

    std::complex<double> operator()(double xi) const { return eval(xi).value; }
    CfEval eval(double xi) const;

    // Uniform bound on |this(xi) - exact(xi)| at xi (truncation or sampling).
    double error_bound(double xi) const;

    CfKind kind() const;

    // Whether any component was estimated from samples.
    bool is_empirical() const;

    // Third moment of the underlying law, when known.
    std::optional<double> third_moment() const;

    // Supremum of s with finite absolute moment of order s.
    double moment_order() const;

    // Provenance record.
    nlohmann::ordered_json meta() const;

    // Characteristic function of N(0,1): exp(-xi^2/2).
    static CharFn gaussian();

  private:
    std::shared_ptr<detail::CfNode const> node_;
};

CharFn analytic_cf(Distribution const& dist);

// Statistical error scale for empirical cfs: error_bound = c / sqrt(n).
inline constexpr double kEmpiricalErrorConstant = 3.0;

CharFn empirical_cf(std::span<double const> samples, bool restandardize);

// Truncated product  prod_{n<N} C_F(sqrt(1-a^2) a^n xi)  for the normalized
// discounted sum, with N = truncation_length(a, tol).
CharFn discounted_product_cf(CharFn const& base, double a, double tol);

// C_{T_a[G]}(xi) = C_F(sqrt(1-a^2) xi) * C_G(a xi).
CharFn apply_ta(CharFn const& base, CharFn const& g, double a);

namespace detail {

class CfNode
{
  public:
    virtual ~CfNode() = default;
    virtual CfEval eval(double xi) const = 0;
    virtual double error_bound(double) const { return 0.0; }
    virtual CfKind kind() const = 0;
    virtual bool is_empirical() const = 0;
    virtual std::optional<double> third_moment() const = 0;
    virtual double moment_order() const = 0;
    virtual nlohmann::ordered_json meta() const = 0;
};

}  // namespace detail
}  // namespace dclt
