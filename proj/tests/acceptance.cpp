// Acceptance suite: one PASS/FAIL line per criterion. Usage:
//   dclt_acceptance <path-to-dclt-cli> <scratch-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "dclt/bounds.hpp"
#include "dclt/charfn.hpp"
#include "dclt/discounted.hpp"
#include "dclt/distributions.hpp"
#include "dclt/metrics.hpp"
#include "dclt/numeric.hpp"
#include "dclt/rng.hpp"

using namespace dclt;

namespace {

struct Outcome
{
    bool passed = false;
    std::string detail;
};

struct Criterion
{
    int id;
    char const* title;
    double time_limit;  // seconds; 0 for none
    std::function<Outcome()> body;
};

CharFn named(std::string const& name)
{
    return analytic_cf(Distribution::from_name(name));
}

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

std::string slurp(std::filesystem::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string cli_path;
std::filesystem::path scratch;

Outcome gaussian_null()
{
    double worst = 0.0;
    for (double a : {0.5, 0.9, 0.99})
    {
        CharFn const fa = discounted_product_cf(CharFn::gaussian(), a, 1e-12);
        worst = std::max(worst, fourier_distance(fa, CharFn::gaussian(), 2.0).value);
    }
    return {worst <= 1e-8, "max d2(F_a, Phi) = " + num(worst) + " (limit 1e-08)"};
}

Outcome rate_chain()
{
    CharFn const f = named("rademacher");
    MetricResult const d3 = fourier_distance(f, CharFn::gaussian(), 3.0);
    bool chain = true;
    std::vector<double> d2s;
    std::ostringstream detail;
    for (double a : {0.9, 0.99, 0.999})
    {
        MetricResult const d2 = fourier_distance(discounted_product_cf(f, a, 1e-12),
                                                 CharFn::gaussian(), 2.0);
        MetricResult const l2 = lemma2_bound(f, a);
        double const rate = std::sqrt((1.0 - a * a) / (std::numbers::e * a * a)) * d3.value;
        double const eps = d2.error_estimate + l2.error_estimate + d3.error_estimate;
        chain = chain && d2.value <= l2.value + eps && l2.value <= rate + eps;
        d2s.push_back(d2.value);
        detail << "a=" << a << ": " << num(d2.value) << " <= " << num(l2.value) << " <= "
               << num(rate) << "; ";
    }
    double const measured = d2s[1] / d2s[0];
    double const predicted = std::sqrt((1.0 - 0.99 * 0.99) / (0.99 * 0.99))
                             / std::sqrt((1.0 - 0.9 * 0.9) / (0.9 * 0.9));
    bool const within_two = measured >= predicted / 2.0 && measured <= 2.0 * predicted;
    detail << "chain " << (chain ? "holds" : "violated") << "; decay ratio " << num(measured)
           << " vs (1-a^2)^{1/2} rate " << num(predicted) << ", "
           << (within_two ? "within" : "outside") << " a factor of 2";
    if (!within_two && measured < predicted)
        detail << " (faster than the bound: a symmetric law decays like 1-a^2)";
    return {chain && within_two, detail.str()};
}

Outcome contraction()
{
    std::vector<std::string> const names = {"normal", "rademacher", "uniform", "exponential"};
    Philox4x32 rng(mix_seed(3, 0xacce), 0);
    bool ok = true;
    double tightest = 1.0;
    for (int pair = 0; pair < 20; ++pair)
    {
        std::string const g = names[rng() % names.size()];
        std::string h;
        do
            h = names[rng() % names.size()];
        while (h == g);
        std::string const f = names[rng() % names.size()];
        MetricResult const before = fourier_distance(named(g), named(h), 2.0);
        for (double a : {0.3, 0.6, 0.9})
        {
            MetricResult const after = fourier_distance(apply_ta(named(f), named(g), a),
                                                        apply_ta(named(f), named(h), a), 2.0);
            double const eps = std::max(before.error_estimate, after.error_estimate);
            ok = ok && after.value <= a * a * before.value + 2.0 * eps;
            if (before.value > 0.0)
                tightest = std::min(tightest, 1.0 - after.value / (a * a * before.value));
        }
    }
    return {ok, "60 cases; smallest relative slack " + num(tightest)};
}

Outcome fixed_point()
{
    bool ok = true;
    std::ostringstream detail;
    for (char const* name : {"rademacher", "exponential"})
    {
        for (double a : {0.5, 0.9})
        {
            CharFn const f = named(name);
            CharFn const fa = discounted_product_cf(f, a, 1e-12);
            CharFn const tfa = apply_ta(f, fa, a);
            double truncation = 0.0;
            for (double xi : log_grid(1e-3, 1e2, 400))
                truncation = std::max(truncation, (fa.error_bound(xi) + tfa.error_bound(xi)) / (xi * xi));
            double const r = fixed_point_residual(fa, f, a).value;
            ok = ok && r <= 10.0 * truncation;
            if (detail.tellp() > 0)
                detail << "; ";
            detail << name << "@" << a << ": " << num(r) << " <= 10*" << num(truncation);
        }
    }
    return {ok, detail.str()};
}

Outcome lemma_identity()
{
    std::vector<std::pair<std::string, double>> const combos = {
        {"rademacher", 0.5}, {"rademacher", 0.99}, {"uniform", 0.3}, {"uniform", 0.9},
        {"exponential", 0.6}, {"exponential", 0.999}, {"bernoulli:0.3", 0.8},
        {"student_t:2.5", 0.9}, {"student_t:4", 0.95}, {"bernoulli:0.1", 0.7}};
    double worst = 0.0;
    bool ok = true;
    for (auto const& [name, a] : combos)
    {
        double const l2 = lemma2_bound(named(name), a).value;
        double const l1 = lemma1iii_bound(CharFn::gaussian(), named(name), a).value;
        double const scale = std::max(l1, l2);
        double const rel = scale > 0.0 ? std::abs(l2 - l1) / scale : 0.0;
        ok = ok && rel <= 1e-6;
        worst = std::max(worst, rel);
    }
    return {ok, "10 combinations; max relative gap " + num(worst)};
}

Outcome envelope()
{
    Philox4x32 rng(mix_seed(6, 0xe1), 0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
    {
        double const a = rng.uniform_open();
        double const s = 3.0 - rng.uniform();  // (2, 3]
        double const closed = envelope_sup(a, s).value;
        double const numeric = envelope_sup_numeric(a, s).value;
        worst = std::max(worst, std::abs(numeric - closed) / closed);
    }
    return {worst <= 1e-6, "20 random (a, s); max relative gap " + num(worst)};
}

Outcome heavy_tail()
{
    CharFn const f = named("student_t:2.5");
    std::vector<double> d2s;
    for (double a : {0.9, 0.99, 0.999})
        d2s.push_back(fourier_distance(discounted_product_cf(f, a, 1e-12), CharFn::gaussian(), 2.0).value);
    bool const decreasing = d2s[1] < d2s[0] && d2s[2] < d2s[1];
    bool const halved = d2s[2] <= 0.5 * d2s[0];
    bool const gerber_na = !gerber_bound(0.99, Distribution::from_name("student_t:2.5").abs_moment(3.0));
    return {decreasing && halved && gerber_na,
            "d2 = " + num(d2s[0]) + ", " + num(d2s[1]) + ", " + num(d2s[2])
                + "; ratio " + num(d2s[2] / d2s[0]) + " (limit 0.5); gerber "
                + (gerber_na ? "unavailable" : "available")};
}

Outcome kolmogorov()
{
    BoundRowInputs in;
    in.a = 0.99;
    in.n_samples = 1000000;
    in.trunc_tol = 1e-10;
    in.seed = 8;
    BoundRow const row = compute_bound_row(Distribution::from_name("rademacher"), in);
    double const slack = 3.0 * dkw_radius(in.n_samples);
    bool const gerber_ok = row.kolmogorov_measured <= 0.54;
    bool const d2_ok = row.kolmogorov_measured <= row.kolmogorov_from_d2 + slack;
    return {gerber_ok && d2_ok,
            "measured " + num(row.kolmogorov_measured) + " <= 0.54 and <= "
                + num(row.kolmogorov_from_d2) + " + " + num(slack)};
}

Outcome two_oracles()
{
    SimConfig cfg;
    cfg.a = 0.9;
    cfg.n_samples = 1000000;
    cfg.trunc_tol = 1e-10;
    cfg.seed = 9;
    auto const xs = simulate_discounted(Distribution::from_name("rademacher"), cfg);
    CharFn const sim = empirical_cf(xs, false);
    CharFn const prod = discounted_product_cf(named("rademacher"), cfg.a, cfg.trunc_tol);
    double worst = 0.0;
    for (double xi : log_grid(1e-3, 1e2, 400))
        worst = std::max(worst, std::abs(sim(xi) - prod(xi)));
    return {worst <= 0.01, "sup gap " + num(worst) + " (limit 0.01)"};
}

Outcome determinism()
{
    std::filesystem::create_directories(scratch);
    auto run = [&](std::string const& tag, int jobs) {
        std::string const cmd = "\"" + cli_path + "\" sweep --n-samples 20000 --seed 5 --jobs "
                                + std::to_string(jobs) + " --csv \"" + (scratch / (tag + ".csv")).string()
                                + "\" --json \"" + (scratch / (tag + ".json")).string() + "\" > /dev/null";
        return std::system(cmd.c_str()) == 0;
    };
    bool ok = run("r1", 1) && run("r2", 1) && run("r3", 4);
    if (!ok)
        return {false, "sweep command failed"};
    std::string const csv = slurp(scratch / "r1.csv");
    std::string const json = slurp(scratch / "r1.json");
    for (char const* tag : {"r2", "r3"})
    {
        ok = ok && slurp(scratch / (std::string(tag) + ".csv")) == csv
             && slurp(scratch / (std::string(tag) + ".json")) == json;
    }
    ok = ok && !csv.empty() && !json.empty();
    return {ok, std::string("3 runs (jobs 1, 1, 4): CSV and JSON ")
                    + (ok ? "byte-identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv)
{
    if (argc < 3)
    {
        std::fprintf(stderr, "usage: %s <dclt-cli> <scratch-dir>\n", argv[0]);
        return 2;
    }
    cli_path = argv[1];
    scratch = argv[2];

    std::vector<Criterion> const criteria = {
        {1, "gaussian null case", 10.0, gaussian_null},
        {2, "rate chain and decay (rademacher, s=3)", 120.0, rate_chain},
        {3, "T_a contraction", 60.0, contraction},
        {4, "fixed-point residual", 30.0, fixed_point},
        {5, "one-step bound equals envelope bound", 60.0, lemma_identity},
        {6, "envelope closed form", 5.0, envelope},
        {7, "convergence without third moments", 120.0, heavy_tail},
        {8, "kolmogorov comparisons", 60.0, kolmogorov},
        {9, "two-oracle agreement", 60.0, two_oracles},
        {10, "sweep determinism", 0.0, determinism},
    };

    int failures = 0;
    for (Criterion const& c : criteria)
    {
        auto const start = std::chrono::steady_clock::now();
        Outcome out;
        try
        {
            out = c.body();
        }
        catch (std::exception const& e)
        {
            out = {false, std::string("exception: ") + e.what()};
        }
        double const secs
            = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool const in_time = c.time_limit == 0.0 || secs < c.time_limit;
        bool const passed = out.passed && in_time;
        failures += passed ? 0 : 1;
        std::printf("%s criterion %d: %s | %s | %.2f s%s\n", passed ? "PASS" : "FAIL", c.id,
                    c.title, out.detail.c_str(), secs, in_time ? "" : " (over time limit)");
        std::fflush(stdout);
    }
    std::printf("acceptance complete: %d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
