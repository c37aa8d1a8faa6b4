#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dclt/bounds.hpp"
#include "dclt/charfn.hpp"
#include "dclt/discounted.hpp"
#include "dclt/distributions.hpp"
#include "dclt/metrics.hpp"
#include "dclt/numeric.hpp"
#include "dclt/sweep.hpp"
#include "dclt/verify.hpp"

namespace {

using dclt::GridSpec;
using ojson = nlohmann::ordered_json;

// Exit codes: 0 success, 1 failed computation or check, 2 bad usage.
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct GridFlags
{
    double xi_min = GridSpec{}.xi_min;
    double xi_max = GridSpec{}.xi_max;
    std::size_t points = GridSpec{}.points;
    double refine_tol = GridSpec{}.refine_tol;
    std::vector<CLI::Option*> opts;

    void attach(CLI::App* app)
    {
        opts = {app->add_option("--xi-min", xi_min, "Smallest xi on the search grid"),
                app->add_option("--xi-max", xi_max, "Largest xi before tail extension"),
                app->add_option("--grid-points", points, "Number of log-spaced grid points"),
                app->add_option("--refine-tol", refine_tol, "Relative bracket width for refinement")};
    }

    // Overlays the flags the user actually passed.
    GridSpec apply(GridSpec grid) const
    {
        if (opts[0]->count())
            grid.xi_min = xi_min;
        if (opts[1]->count())
            grid.xi_max = xi_max;
        if (opts[2]->count())
            grid.points = points;
        if (opts[3]->count())
            grid.refine_tol = refine_tol;
        return grid;
    }
};

nlohmann::json read_json_file(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("cannot open config '" + path + "'");
    }
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (nlohmann::json::parse_error const& e)
    {
        throw std::invalid_argument("config '" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text(std::string const& path, std::string const& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out)
    {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

std::filesystem::path output_dir()
{
    char const* env = std::getenv(dclt::kOutputDirEnv);
    std::filesystem::path dir = env && *env ? env : ".";
    std::filesystem::create_directories(dir);
    return dir;
}

//---------------------------------------------------------------------------//
struct MetricCmd
{
    std::string g;
    std::string h = "normal";
    double s = 2.0;
    std::optional<double> a;
    double trunc_tol = 1e-12;
    std::string json_path;
    GridFlags grid;

    int run() const
    {
        dclt::CharFn cg = dclt::analytic_cf(dclt::Distribution::from_name(g));
        if (a)
        {
            cg = dclt::discounted_product_cf(cg, *a, trunc_tol);
        }
        dclt::CharFn const ch = dclt::analytic_cf(dclt::Distribution::from_name(h));
        GridSpec const spec = grid.apply({});
        dclt::MetricResult const r = dclt::fourier_distance(cg, ch, s, spec);
        ojson doc = {{"g", cg.meta()},
                     {"h", ch.meta()},
                     {"grid", dclt::to_json(spec)},
                     {"result", dclt::to_json(r)}};
        std::string const text = doc.dump(2) + "\n";
        std::cout << text;
        if (!json_path.empty())
            write_text(json_path, text);
        return 0;
    }
};

//---------------------------------------------------------------------------//
struct SimulateCmd
{
    std::string distribution;
    dclt::SimConfig cfg;
    std::string method = "direct_truncation";
    std::string config_path;
    std::string csv_path;
    std::string json_path;
    std::vector<CLI::Option*> opts;

    int run()
    {
        if (!config_path.empty())
        {
            apply_config(read_json_file(config_path));
        }
        cfg.method = dclt::sim_method_from_string(method);
        dclt::Distribution const f = dclt::Distribution::from_name(distribution);
        std::vector<double> const xs = dclt::simulate(f, cfg);

        long double sum = 0.0L;
        for (double x : xs)
            sum += x;
        double const mean = static_cast<double>(sum / xs.size());
        long double sq = 0.0L;
        for (double x : xs)
            sq += static_cast<long double>(x - mean) * (x - mean);

        ojson doc = {{"distribution", f.name()},
                     {"config", dclt::to_json(cfg)},
                     {"truncation_length", dclt::truncation_length(cfg.a, cfg.trunc_tol)},
                     {"mean", mean},
                     {"variance", static_cast<double>(sq / xs.size())},
                     {"kolmogorov_vs_normal", dclt::kolmogorov_distance(xs, dclt::normal_cdf)},
                     {"dkw_radius_99", dclt::dkw_radius(xs.size())}};
        if (cfg.method == dclt::SimMethod::ar1_iteration)
            doc.erase("truncation_length");
        std::string const text = doc.dump(2) + "\n";
        std::cout << text;
        if (!json_path.empty())
            write_text(json_path, text);
        if (!csv_path.empty())
        {
            std::string body = "x\n";
            for (double x : xs)
                body += dclt::format_double(x) + "\n";
            write_text(csv_path, body);
        }
        return 0;
    }

    // File values apply only where no flag was given.
    void apply_config(nlohmann::json const& j)
    {
        if (!j.is_object())
            throw std::invalid_argument("simulate config must be a JSON object");
        auto const given = [&](char const* flag) {
            for (CLI::Option* o : opts)
                if (o->check_lname(flag))
                    return o->count() > 0;
            return false;
        };
        for (auto const& [key, value] : j.items())
        {
            if (key == "distribution")
            {
                if (distribution.empty())
                    distribution = value.get<std::string>();
            }
            else if (key == "a")
            {
                if (!given("a"))
                    cfg.a = value.get<double>();
            }
            else if (key == "n_samples")
            {
                if (!given("n-samples"))
                    cfg.n_samples = value.get<std::size_t>();
            }
            else if (key == "trunc_tol")
            {
                if (!given("trunc-tol"))
                    cfg.trunc_tol = value.get<double>();
            }
            else if (key == "seed")
            {
                if (!given("seed"))
                    cfg.seed = value.get<std::uint64_t>();
            }
            else if (key == "method")
            {
                if (!given("method"))
                    method = value.get<std::string>();
            }
            else if (key == "steps")
            {
                if (!given("steps"))
                    cfg.steps = value.get<std::size_t>();
            }
            else if (key == "initial")
            {
                if (!given("initial"))
                    cfg.initial = value.get<std::string>();
            }
            else
            {
                throw std::invalid_argument("unknown simulate config key '" + key + "'");
            }
        }
        if (distribution.empty())
            throw std::invalid_argument("simulate needs a distribution");
    }
};

//---------------------------------------------------------------------------//
struct SweepCmd
{
    std::string config_path;
    std::string distribution;
    double s = 3.0;
    std::vector<double> a_values;
    std::size_t n_samples = 0;
    double trunc_tol = 0.0;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string csv_path;
    std::string json_path;
    GridFlags grid;
    CLI::Option* o_dist = nullptr;
    CLI::Option* o_s = nullptr;
    CLI::Option* o_a = nullptr;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_tol = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_csv = nullptr;
    CLI::Option* o_json = nullptr;

    int run()
    {
        dclt::SweepConfig cfg;
        if (!config_path.empty())
        {
            nlohmann::json j = read_json_file(config_path);
            // Output locations and worker count are execution options.
            if (j.is_object())
            {
                if (j.contains("csv") && !o_csv->count())
                    csv_path = j["csv"].get<std::string>();
                if (j.contains("json") && !o_json->count())
                    json_path = j["json"].get<std::string>();
                j.erase("csv");
                j.erase("json");
            }
            cfg = dclt::sweep_config_from_json(j, cfg);
        }
        if (o_dist->count())
            cfg.distribution = distribution;
        if (o_s->count())
            cfg.s = s;
        if (o_a->count())
            cfg.a_values = a_values;
        if (o_n->count())
            cfg.n_samples = n_samples;
        if (o_tol->count())
            cfg.trunc_tol = trunc_tol;
        if (o_seed->count())
            cfg.seed = seed;
        cfg.grid = grid.apply(cfg.grid);

        if (csv_path.empty() && json_path.empty())
        {
            std::filesystem::path const dir = output_dir();
            csv_path = (dir / "sweep.csv").string();
            json_path = (dir / "sweep.json").string();
        }

        std::vector<dclt::BoundRow> const rows = dclt::run_sweep(cfg, jobs);
        if (!csv_path.empty())
            dclt::emit_report(rows, cfg, dclt::ReportFormat::csv, csv_path);
        if (!json_path.empty())
            dclt::emit_report(rows, cfg, dclt::ReportFormat::json, json_path);
        std::cout << dclt::report_csv(rows);
        return 0;
    }
};

//---------------------------------------------------------------------------//
struct VerifyCmd
{
    bool quick = false;
    std::string json_path;

    int run() const
    {
        std::vector<dclt::CheckResult> const results = dclt::run_verification(quick);
        ojson doc = ojson::array();
        bool all = true;
        for (auto const& r : results)
        {
            std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
            doc.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
            all = all && r.passed;
        }
        if (!json_path.empty())
            write_text(json_path, doc.dump(2) + "\n");
        return all ? 0 : kExitFailure;
    }
};

void report_error(std::string const& command, std::string const& type, std::string const& message)
{
    ojson err = {{"error", {{"command", command}, {"type", type}, {"message", message}}}};
    std::cerr << err.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Fourier-metric checks for the discounted central limit theorem", "dclt"};
    app.set_version_flag("--version", std::string(dclt::kToolVersion));
    app.require_subcommand(1);

    MetricCmd metric;
    CLI::App* m = app.add_subcommand("metric", "Fourier distance d_s between two laws");
    m->add_option("first", metric.g, "First law, e.g. rademacher or student_t:2.5")->required();
    m->add_option("second", metric.h, "Second law")->capture_default_str();
    m->add_option("--s", metric.s, "Order s in [2,3]")->capture_default_str();
    m->add_option("--a", metric.a, "Replace the first law by its discounted law at this a");
    m->add_option("--trunc-tol", metric.trunc_tol, "Tail variance left out of the product")
        ->capture_default_str();
    m->add_option("--json", metric.json_path, "Also write the result to this file");
    metric.grid.attach(m);

    SimulateCmd sim;
    CLI::App* sm = app.add_subcommand("simulate", "Sample the normalized discounted sum");
    sm->add_option("distribution", sim.distribution, "Law of the summands");
    sim.opts = {
        sm->add_option("--a", sim.cfg.a, "Discount factor in [0,1)")->capture_default_str(),
        sm->add_option("--n-samples", sim.cfg.n_samples)->capture_default_str(),
        sm->add_option("--trunc-tol", sim.cfg.trunc_tol, "Tail variance left out")->capture_default_str(),
        sm->add_option("--seed", sim.cfg.seed)->capture_default_str(),
        sm->add_option("--method", sim.method, "direct_truncation or ar1_iteration")
            ->capture_default_str(),
        sm->add_option("--steps", sim.cfg.steps, "AR(1) steps")->capture_default_str(),
        sm->add_option("--initial", sim.cfg.initial, "AR(1) starting law")->capture_default_str(),
    };
    sm->add_option("--jobs", sim.cfg.jobs, "Worker threads")->capture_default_str();
    sm->add_option("--config", sim.config_path, "JSON config; flags override it");
    sm->add_option("--csv", sim.csv_path, "Write the draws to this file");
    sm->add_option("--json", sim.json_path, "Write the summary to this file");

    SweepCmd sweep;
    {
        dclt::SweepConfig const d;
        sweep.distribution = d.distribution;
        sweep.s = d.s;
        sweep.a_values = d.a_values;
        sweep.n_samples = d.n_samples;
        sweep.trunc_tol = d.trunc_tol;
        sweep.seed = d.seed;
    }
    CLI::App* sw = app.add_subcommand("sweep", "Bound report across discount factors");
    sweep.o_dist = sw->add_option("--distribution", sweep.distribution)->capture_default_str();
    sweep.o_s = sw->add_option("--s", sweep.s, "Order s for the rate bound")->capture_default_str();
    sweep.o_a = sw->add_option("--a", sweep.a_values, "Discount factors, comma separated")
                    ->delimiter(',')
                    ->capture_default_str();
    sweep.o_n = sw->add_option("--n-samples", sweep.n_samples)->capture_default_str();
    sweep.o_tol = sw->add_option("--trunc-tol", sweep.trunc_tol)->capture_default_str();
    sweep.o_seed = sw->add_option("--seed", sweep.seed)->capture_default_str();
    sw->add_option("--jobs", sweep.jobs, "Rows computed concurrently")->capture_default_str();
    sw->add_option("--config", sweep.config_path, "JSON config; flags override it");
    sweep.o_csv = sw->add_option("--csv", sweep.csv_path, "CSV report path");
    sweep.o_json = sw->add_option("--json", sweep.json_path, "JSON report path");
    sweep.grid.attach(sw);
    sw->footer(std::string("Without --csv/--json both reports go to $") + dclt::kOutputDirEnv
               + " (default: current directory).");

    VerifyCmd verify;
    CLI::App* v = app.add_subcommand("verify", "Run the invariant checks");
    v->add_flag("--quick", verify.quick, "Smaller Monte Carlo sizes");
    v->add_option("--json", verify.json_path, "Write results to this file");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::CallForHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForAllHelp const& e)
    {
        return app.exit(e);
    }
    catch (CLI::CallForVersion const& e)
    {
        return app.exit(e);
    }
    catch (CLI::ParseError const& e)
    {
        report_error("", "usage", e.what());
        return kExitUsage;
    }

    std::string command;
    try
    {
        if (m->parsed())
        {
            command = "metric";
            return metric.run();
        }
        if (sm->parsed())
        {
            command = "simulate";
            if (sim.distribution.empty() && sim.config_path.empty())
                throw std::invalid_argument("simulate needs a distribution");
            return sim.run();
        }
        if (sw->parsed())
        {
            command = "sweep";
            return sweep.run();
        }
        command = "verify";
        return verify.run();
    }
    catch (std::domain_error const& e)
    {
        report_error(command, "domain_error", e.what());
    }
    catch (std::invalid_argument const& e)
    {
        report_error(command, "invalid_argument", e.what());
    }
    catch (nlohmann::json::exception const& e)
    {
        report_error(command, "config", e.what());
    }
    catch (std::exception const& e)
    {
        report_error(command, "runtime_error", e.what());
    }
    return kExitFailure;
}
