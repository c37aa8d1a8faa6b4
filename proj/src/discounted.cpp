#include "dclt/discounted.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dclt/parallel.hpp"
#include "dclt/rng.hpp"

namespace dclt {
namespace {

// Stream-key tags separating the random streams of the two simulators.
constexpr std::uint64_t kDirectTag = 0x5d1;
constexpr std::uint64_t kAr1Tag = 0xa21;

}  // namespace

std::string to_string(SimMethod method)
{
    return method == SimMethod::direct_truncation ? "direct_truncation"
                                                  : "ar1_iteration";
}

SimMethod sim_method_from_string(std::string const& name)
{
    if (name == "direct_truncation" || name == "direct")
        return SimMethod::direct_truncation;
    if (name == "ar1_iteration" || name == "ar1")
        return SimMethod::ar1_iteration;
    throw std::invalid_argument("unknown simulation method '" + name + "'");
}

void SimConfig::validate() const
{
    if (!(a >= 0.0 && a < 1.0))
    {
        throw std::invalid_argument("discount factor a must lie in [0,1)");
    }
    if (n_samples == 0)
    {
        throw std::invalid_argument("n_samples must be >= 1");
    }
    if (!(trunc_tol > 0.0 && trunc_tol < 1.0))
    {
        throw std::invalid_argument("trunc_tol must lie in (0,1)");
    }
}

nlohmann::ordered_json to_json(SimConfig const& cfg)
{
    nlohmann::ordered_json j = {{"a", cfg.a},
                                {"n_samples", cfg.n_samples},
                                {"trunc_tol", cfg.trunc_tol},
                                {"seed", cfg.seed},
                                {"method", to_string(cfg.method)}};
    if (cfg.method == SimMethod::ar1_iteration)
    {
        j["steps"] = cfg.steps;
        j["initial"] = cfg.initial;
    }
    return j;
}

std::size_t truncation_length(double a, double tol)
{
    if (!(a >= 0.0 && a < 1.0))
    {
        throw std::invalid_argument("truncation_length requires a in [0,1); the "
                                    "discounted sum has no finite horizon at a = 1");
    }
    if (!(tol > 0.0))
    {
        throw std::invalid_argument("truncation_length requires tol > 0");
    }
    if (tol >= 1.0 || a == 0.0)
    {
        return 1;
    }
    double const a2 = a * a;
    auto tail = [&](std::size_t n) { return std::pow(a2, static_cast<double>(n)); };
    auto n = static_cast<std::size_t>(
        std::max(1.0, std::ceil(std::log(tol) / (2.0 * std::log(a)))));
    while (n > 1 && tail(n - 1) <= tol)
        --n;
    while (tail(n) > tol)
        ++n;
    return n;
}

std::vector<double> simulate_discounted(Distribution const& f, SimConfig const& cfg)
{
    cfg.validate();
    std::size_t const length = truncation_length(cfg.a, cfg.trunc_tol);
    long double const a = cfg.a;
    long double const b = std::sqrt((1.0L - a) * (1.0L + a));
    std::size_t const n = cfg.n_samples;
    std::vector<double> out(n);
    std::size_t const chunks = (n + kSampleChunk - 1) / kSampleChunk;
    std::uint64_t const key = mix_seed(cfg.seed, kDirectTag);

    parallel_for(chunks, cfg.jobs, [&](std::size_t c) {
        Philox4x32 rng(key, c);
        std::vector<double> xs(length);
        std::size_t const begin = c * kSampleChunk;
        std::size_t const end = std::min(n, begin + kSampleChunk);
        for (std::size_t i = begin; i < end; ++i)
        {
            f.fill(rng, xs);
            // Horner from the smallest weight a^{N-1} up to a^0.
            long double acc = 0.0L;
            for (std::size_t k = length; k-- > 0;)
            {
                acc = xs[k] + a * acc;
            }
            out[i] = static_cast<double>(b * acc);
        }
    });
    return out;
}

std::vector<double> ar1_iterate(Distribution const& f, Distribution const& initial,
                                double a, std::size_t steps, SimConfig const& cfg)
{
    if (!(a >= 0.0 && a < 1.0))
    {
        throw std::invalid_argument("ar1_iterate requires a in [0,1)");
    }
    if (cfg.n_samples == 0)
    {
        throw std::invalid_argument("n_samples must be >= 1");
    }
    double const b = std::sqrt((1.0 - a) * (1.0 + a));
    std::size_t const n = cfg.n_samples;
    std::vector<double> out(n);
    std::size_t const chunks = (n + kSampleChunk - 1) / kSampleChunk;
    std::uint64_t const key = mix_seed(cfg.seed, kAr1Tag);

    parallel_for(chunks, cfg.jobs, [&](std::size_t c) {
        Philox4x32 rng(key, c);
        std::vector<double> xs(steps);
        std::size_t const begin = c * kSampleChunk;
        std::size_t const end = std::min(n, begin + kSampleChunk);
        for (std::size_t i = begin; i < end; ++i)
        {
            double y = initial.draw(rng);
            f.fill(rng, xs);
            for (double x : xs)
            {
                y = a * y + b * x;
            }
            out[i] = y;
        }
    });
    return out;
}

std::vector<double> simulate(Distribution const& f, SimConfig const& cfg)
{
    cfg.validate();
    if (cfg.method == SimMethod::direct_truncation)
    {
        return simulate_discounted(f, cfg);
    }
    return ar1_iterate(f, Distribution::from_name(cfg.initial), cfg.a, cfg.steps, cfg);
}

MetricResult fixed_point_residual(CharFn const& fa_cf, CharFn const& f_cf, double a,
                                  GridSpec const& grid)
{
    return fourier_distance(fa_cf, apply_ta(f_cf, fa_cf, a), 2.0, grid);
}

}  // namespace dclt
