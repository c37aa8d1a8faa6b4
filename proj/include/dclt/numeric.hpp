#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace dclt {

// x - sin(x) without cancellation for small |x|.
inline double x_minus_sin(double x)
{
    if (std::abs(x) >= 0.5)
    {
        return x - std::sin(x);
    }
    // x^3/3! - x^5/5! + ...
    double const x2 = x * x;
    double term = x * x2 / 6.0;
    double sum = 0.0;
    for (int k = 1; k < 20; ++k)
    {
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum))
            break;
        term *= -x2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    return sum;
}

// `count` points spaced geometrically over [lo, hi], endpoints exact.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace dclt
