#include "dclt/distributions.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "dclt/numeric.hpp"
#include "dclt/parallel.hpp"

namespace dclt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt3 = std::numbers::sqrt3;

// Non-integer orders within this distance of an integer make the Bessel
// power series cancel catastrophically; those fall back to quadrature.
constexpr double kIntegerOrderGuard = 1e-4;

std::string format_param(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

double parse_param(std::string_view text, std::string_view name)
{
    double v = 0.0;
    auto const* first = text.data();
    auto const* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
    {
        throw std::invalid_argument("bad parameter in distribution name '"
                                    + std::string(name) + "'");
    }
    return v;
}

// Marsaglia-Tsang; shape must be >= 1.
double draw_gamma(Philox4x32& rng, double shape)
{
    double const d = shape - 1.0 / 3.0;
    double const c = 1.0 / std::sqrt(9.0 * d);
    for (;;)
    {
        double x, v;
        do
        {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double const u = rng.uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x)
        {
            return d * v;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        {
            return d * v;
        }
    }
}

// 1 - z^n K_n(z) / ((n-1)! 2^(n-1)) for integer n >= 2 and q = z^2/4, from
// the logarithmic series of K_n:
//   -sum_{k=1}^{n-1} (n-k-1)! / ((n-1)! k!) (-q)^k
//   - 2 (-1)^n q^n / (n-1)! sum_{k>=0} q^k / (k! (n+k)!)
//       * [(psi(k+1) + psi(n+k+1)) / 2 - ln(q) / 2]
double integer_order_deficit(int n, double q)
{
    double finite = 0.0;
    double term = -q / (n - 1.0);
    for (int k = 1; k < n; ++k)
    {
        finite += term;
        term *= -q / ((n - k - 1.0) * (k + 1.0));
    }

    double const log_q = std::log(q);
    double h_k = 0.0;  // harmonic numbers H_k and H_{n+k}
    double h_nk = 0.0;
    for (int j = 1; j <= n; ++j)
        h_nk += 1.0 / j;
    double log_sum = 0.0;
    double weight = 1.0;  // q^k n! / (k! (n+k)!)
    for (int k = 0; k < 200; ++k)
    {
        double const digammas = 0.5 * (h_k + h_nk) - std::numbers::egamma;
        double const piece = weight * (digammas - 0.5 * log_q);
        log_sum += piece;
        if (std::abs(piece) <= 1e-18 * std::abs(log_sum))
            break;
        weight *= q / ((k + 1.0) * (n + k + 1.0));
        h_k += 1.0 / (k + 1.0);
        h_nk += 1.0 / (n + k + 1.0);
    }
    double const sign = n % 2 == 0 ? 1.0 : -1.0;
    double const scale
        = std::exp(n * log_q - std::lgamma(double(n)) - std::lgamma(n + 1.0));
    return -finite - 2.0 * sign * scale * log_sum;
}

}  // namespace

double normal_cdf(double x)
{
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

Distribution::Distribution(Family family, double param)
    : family_(family), param_(param)
{
    switch (family)
    {
        case Family::normal:
            name_ = "normal";
            break;
        case Family::rademacher:
            name_ = "rademacher";
            break;
        case Family::uniform:
            name_ = "uniform";
            scale_ = kSqrt3;
            break;
        case Family::exponential:
            name_ = "exponential";
            break;
        case Family::bernoulli: {
            if (!(param > 0.0 && param < 1.0))
            {
                throw std::invalid_argument("bernoulli requires p in (0,1)");
            }
            name_ = "bernoulli:" + format_param(param);
            double const sd = std::sqrt(param * (1.0 - param));
            hi_atom_ = (1.0 - param) / sd;
            lo_atom_ = -param / sd;
            break;
        }
        case Family::student_t:
            if (!(param > 2.0) || !std::isfinite(param))
            {
                throw std::invalid_argument(
                    "student_t requires finite nu > 2 for finite variance");
            }
            name_ = "student_t:" + format_param(param);
            scale_ = std::sqrt((param - 2.0) / param);
            break;
    }
}

Distribution Distribution::make_standardized(Family family, double param)
{
    return Distribution(family, param);
}

Distribution Distribution::from_name(std::string_view name)
{
    auto const colon = name.find(':');
    std::string_view const head = name.substr(0, colon);
    std::string_view const tail
        = colon == std::string_view::npos ? std::string_view{} : name.substr(colon + 1);
    auto no_param = [&](Family f) {
        if (colon != std::string_view::npos)
        {
            throw std::invalid_argument("distribution '" + std::string(head)
                                        + "' takes no parameter");
        }
        return Distribution(f, 0.0);
    };
    auto with_param = [&](Family f) {
        if (colon == std::string_view::npos)
        {
            throw std::invalid_argument("distribution '" + std::string(head)
                                        + "' requires a parameter, e.g. "
                                        + std::string(head) + ":2.5");
        }
        return Distribution(f, parse_param(tail, name));
    };

    if (head == "normal")
        return no_param(Family::normal);
    if (head == "rademacher")
        return no_param(Family::rademacher);
    if (head == "uniform")
        return no_param(Family::uniform);
    if (head == "exponential")
        return no_param(Family::exponential);
    if (head == "bernoulli")
        return with_param(Family::bernoulli);
    if (head == "student_t")
        return with_param(Family::student_t);
    throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

CfEval Distribution::cf_eval(double xi) const
{
    switch (family_)
    {
        case Family::normal: {
            double const h = -0.5 * xi * xi;
            return {std::exp(h), -std::expm1(h)};
        }
        case Family::rademacher: {
            double const s = std::sin(0.5 * xi);
            return {std::cos(xi), 2.0 * s * s};
        }
        case Family::uniform: {
            double const t = scale_ * xi;
            if (t == 0.0)
            {
                return {1.0, 0.0};
            }
            return {std::sin(t) / t, x_minus_sin(t) / t};
        }
        case Family::exponential: {
            // X = E - 1 with E ~ Exp(1): C(xi) = e^{i xi} / (1 + i xi).
            std::complex<double> const denom(1.0, xi);
            double const s = std::sin(0.5 * xi);
            std::complex<double> const numer(2.0 * s * s, x_minus_sin(xi));
            return {std::polar(1.0, xi) / denom, numer / denom};
        }
        case Family::bernoulli: {
            double const p = param_;
            double const t1 = xi * hi_atom_;
            double const t0 = xi * lo_atom_;
            std::complex<double> const value
                = p * std::polar(1.0, -t1) + (1.0 - p) * std::polar(1.0, -t0);
            double const s1 = std::sin(0.5 * t1);
            double const s0 = std::sin(0.5 * t0);
            // p*t1 + (1-p)*t0 = 0, so the linear parts of the sines cancel.
            double const re = 2.0 * (p * s1 * s1 + (1.0 - p) * s0 * s0);
            double const im = -(p * x_minus_sin(t1) + (1.0 - p) * x_minus_sin(t0));
            return {value, {re, im}};
        }
        case Family::student_t:
            return student_t_cf(xi);
    }
    return {1.0, 0.0};
}

//---------------------------------------------------------------------------//
/*!
 * Student-t characteristic function, standardized by c = sqrt((nu-2)/nu).
 *
 * With mu = nu/2 and z = sqrt(nu-2)|xi| the cf is
 *   f(z) = z^mu K_mu(z) / (Gamma(mu) 2^(mu-1)).
 * For z > 2 this is evaluated directly from the modified Bessel function.
 * For small z we use the expansion of K_mu in terms of I_{+-mu}:
 *   1 - f(z) = -sum_{k>=1} q^k / (k! (1-mu)_k)
 *              + Gamma(1-mu)/Gamma(1+mu) q^mu sum_{k>=0} q^k / (k! (1+mu)_k)
 * with q = z^2/4, which gives the deficit to full relative precision.
 * Integer mu (even nu) uses the logarithmic series of K_n instead.
 */
CfEval Distribution::student_t_cf(double xi) const
{
    double const nu = param_;
    double const mu = 0.5 * nu;
    double const z = std::sqrt(nu - 2.0) * std::abs(xi);
    if (z == 0.0)
    {
        return {1.0, 0.0};
    }
    if (z > 2.0)
    {
        double const log_value = mu * std::log(z)
                                 + std::log(std::cyl_bessel_k(mu, z))
                                 - std::lgamma(mu) - (mu - 1.0) * std::numbers::ln2;
        double const value = std::exp(log_value);
        return {value, 1.0 - value};
    }
    double const q = 0.25 * z * z;
    if (mu == std::round(mu))
    {
        double const deficit = integer_order_deficit(static_cast<int>(mu), q);
        return {1.0 - deficit, deficit};
    }
    if (std::abs(mu - std::round(mu)) < kIntegerOrderGuard)
    {
        double const deficit = student_t_deficit_quadrature(xi);
        return {1.0 - deficit, deficit};
    }

    double s1 = 0.0;
    double term = q / (1.0 - mu);
    for (int k = 1; k < 200; ++k)
    {
        s1 += term;
        if (std::abs(term) <= 1e-18 * std::abs(s1))
            break;
        term *= q / ((k + 1.0) * (k + 1.0 - mu));
    }
    double s2 = 0.0;
    term = 1.0;
    for (int k = 0; k < 200; ++k)
    {
        s2 += term;
        if (std::abs(term) <= 1e-18 * std::abs(s2))
            break;
        term *= q / ((k + 1.0) * (k + 1.0 + mu));
    }
    double const reflect = std::numbers::pi
                           / (std::sin(std::numbers::pi * mu) * mu
                              * std::exp(2.0 * std::lgamma(mu)));
    double const deficit = -s1 + reflect * std::pow(q, mu) * s2;
    return {1.0 - deficit, deficit};
}

// Deficit via the normal scale-mixture representation T = Z / sqrt(W),
// W ~ Gamma(nu/2, rate nu/2):  1 - C(xi) = E[-expm1(-c^2 xi^2 / (2W))].
// The integrand is positive, so no cancellation occurs for small xi.
double Distribution::student_t_deficit_quadrature(double xi) const
{
    double const mu = 0.5 * param_;
    double const kappa = 0.5 * scale_ * scale_ * xi * xi;
    double const log_norm = mu * std::log(mu) - std::lgamma(mu);
    auto integrand = [&](double w) {
        if (w <= 0.0)
            return 0.0;
        double const log_g = log_norm + (mu - 1.0) * std::log(w) - mu * w;
        return -std::expm1(-kappa / w) * std::exp(log_g);
    };
    double const split = std::min(kappa, 1.0);
    boost::math::quadrature::tanh_sinh<double> near;
    boost::math::quadrature::exp_sinh<double> far;
    double const tol = 1e-14;
    return near.integrate(integrand, 0.0, split, tol)
           + far.integrate(integrand, split, kInf, tol);
}

double Distribution::abs_moment(double s) const
{
    if (!(s > 0.0))
    {
        throw std::invalid_argument("abs_moment requires s > 0");
    }
    switch (family_)
    {
        case Family::normal:
            return std::pow(2.0, 0.5 * s) * std::tgamma(0.5 * (s + 1.0))
                   / std::sqrt(std::numbers::pi);
        case Family::rademacher:
            return 1.0;
        case Family::uniform:
            return std::pow(kSqrt3, s) / (s + 1.0);
        case Family::exponential: {
            // E|E-1|^s = e^{-1} (Gamma(s+1) + int_0^1 t^s e^t dt)
            double tail = 0.0;
            double fact = 1.0;
            for (int k = 0; k < 60; ++k)
            {
                if (k > 0)
                    fact *= k;
                tail += 1.0 / (fact * (s + k + 1.0));
            }
            return std::exp(-1.0) * (std::tgamma(s + 1.0) + tail);
        }
        case Family::bernoulli:
            return param_ * std::pow(std::abs(hi_atom_), s)
                   + (1.0 - param_) * std::pow(std::abs(lo_atom_), s);
        case Family::student_t: {
            double const nu = param_;
            if (s >= nu)
            {
                return kInf;
            }
            return std::exp(0.5 * s * std::log(nu - 2.0)
                            + std::lgamma(0.5 * (s + 1.0))
                            + std::lgamma(0.5 * (nu - s)) - std::lgamma(0.5 * nu))
                   / std::sqrt(std::numbers::pi);
        }
    }
    return kInf;
}

double Distribution::abs_moment_order() const
{
    return family_ == Family::student_t ? param_ : kInf;
}

std::optional<double> Distribution::third_moment() const
{
    switch (family_)
    {
        case Family::normal:
        case Family::rademacher:
        case Family::uniform:
            return 0.0;
        case Family::exponential:
            return 2.0;
        case Family::bernoulli:
            return (1.0 - 2.0 * param_) / std::sqrt(param_ * (1.0 - param_));
        case Family::student_t:
            if (param_ > 3.0)
                return 0.0;
            return std::nullopt;
    }
    return std::nullopt;
}

double Distribution::cdf(double x) const
{
    switch (family_)
    {
        case Family::normal:
            return normal_cdf(x);
        case Family::rademacher:
            return x < -1.0 ? 0.0 : (x < 1.0 ? 0.5 : 1.0);
        case Family::uniform:
            return std::clamp((x + kSqrt3) / (2.0 * kSqrt3), 0.0, 1.0);
        case Family::exponential:
            return x < -1.0 ? 0.0 : -std::expm1(-(x + 1.0));
        case Family::bernoulli:
            return x < lo_atom_ ? 0.0 : (x < hi_atom_ ? 1.0 - param_ : 1.0);
        case Family::student_t: {
            boost::math::students_t_distribution<double> t(param_);
            return boost::math::cdf(t, x / scale_);
        }
    }
    return 0.0;
}

double Distribution::draw(Philox4x32& rng) const
{
    switch (family_)
    {
        case Family::normal:
            return rng.normal();
        case Family::rademacher:
            return (rng() & 1U) ? 1.0 : -1.0;
        case Family::uniform:
            return kSqrt3 * (2.0 * rng.uniform() - 1.0);
        case Family::exponential:
            return -std::log(rng.uniform_open()) - 1.0;
        case Family::bernoulli:
            return rng.uniform() < param_ ? hi_atom_ : lo_atom_;
        case Family::student_t: {
            double const mu = 0.5 * param_;
            double const z = rng.normal();
            double const w = draw_gamma(rng, mu) / mu;
            return scale_ * z / std::sqrt(w);
        }
    }
    return 0.0;
}

void Distribution::fill(Philox4x32& rng, std::span<double> out) const
{
    if (family_ == Family::rademacher)
    {
        std::size_t i = 0;
        while (i < out.size())
        {
            std::uint64_t bits = rng();
            std::size_t const take = std::min<std::size_t>(64, out.size() - i);
            for (std::size_t b = 0; b < take; ++b, bits >>= 1)
            {
                out[i++] = (bits & 1U) ? 1.0 : -1.0;
            }
        }
        return;
    }
    for (double& x : out)
    {
        x = draw(rng);
    }
}

std::vector<double> Distribution::sample(std::size_t n, std::uint64_t seed,
                                         unsigned jobs) const
{
    if (n == 0)
    {
        throw std::invalid_argument("sample requires n >= 1");
    }
    std::vector<double> out(n);
    std::size_t const chunks = (n + kSampleChunk - 1) / kSampleChunk;
    parallel_for(chunks, jobs, [&](std::size_t c) {
        Philox4x32 rng(seed, c);
        std::size_t const begin = c * kSampleChunk;
        std::size_t const end = std::min(n, begin + kSampleChunk);
        fill(rng, std::span<double>(out).subspan(begin, end - begin));
    });
    return out;
}

}  // namespace dclt
