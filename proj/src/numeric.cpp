#include "dclt/numeric.hpp"

#include <charconv>
#include <stdexcept>

namespace dclt {

std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0 && hi > lo) || count < 2)
    {
        throw std::invalid_argument("log_grid requires 0 < lo < hi and count >= 2");
    }
    std::vector<double> grid(count);
    double const log_lo = std::log(lo);
    double const step = (std::log(hi) - log_lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
    {
        grid[i] = std::exp(log_lo + step * static_cast<double>(i));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::string format_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace dclt
