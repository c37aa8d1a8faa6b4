#include "dclt/sweep.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dclt/distributions.hpp"
#include "dclt/numeric.hpp"
#include "dclt/parallel.hpp"

namespace dclt {
namespace {

std::string csv_cell(std::optional<double> v)
{
    return v ? format_double(*v) : "NA";
}

nlohmann::ordered_json json_cell(std::optional<double> v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

void SweepConfig::validate() const
{
    (void)Distribution::from_name(distribution);
    if (!(s >= 2.0 && s <= 3.0))
    {
        throw std::invalid_argument("sweep s must lie in [2,3]");
    }
    if (a_values.empty())
    {
        throw std::invalid_argument("sweep needs at least one discount factor");
    }
    for (std::size_t i = 0; i < a_values.size(); ++i)
    {
        if (!(a_values[i] > 0.0 && a_values[i] < 1.0))
        {
            throw std::invalid_argument("sweep a_values must lie in (0,1)");
        }
        if (i > 0 && !(a_values[i] > a_values[i - 1]))
        {
            throw std::invalid_argument("sweep a_values must be strictly increasing");
        }
    }
    if (n_samples == 0)
    {
        throw std::invalid_argument("sweep n_samples must be >= 1");
    }
    if (!(trunc_tol > 0.0 && trunc_tol < 1.0))
    {
        throw std::invalid_argument("sweep trunc_tol must lie in (0,1)");
    }
    grid.validate();
}

nlohmann::ordered_json to_json(SweepConfig const& cfg)
{
    return {{"distribution", cfg.distribution},
            {"s", cfg.s},
            {"a_values", cfg.a_values},
            {"n_samples", cfg.n_samples},
            {"trunc_tol", cfg.trunc_tol},
            {"seed", cfg.seed},
            {"grid", to_json(cfg.grid)}};
}

SweepConfig sweep_config_from_json(nlohmann::json const& j, SweepConfig base)
{
    static std::set<std::string> const known = {
        "distribution", "s", "a_values", "n_samples", "trunc_tol", "seed", "grid"};
    if (!j.is_object())
    {
        throw std::invalid_argument("sweep config must be a JSON object");
    }
    for (auto const& [key, value] : j.items())
    {
        if (!known.contains(key))
        {
            throw std::invalid_argument("unknown sweep config key '" + key + "'");
        }
    }
    SweepConfig cfg = std::move(base);
    cfg.distribution = j.value("distribution", cfg.distribution);
    cfg.s = j.value("s", cfg.s);
    cfg.a_values = j.value("a_values", cfg.a_values);
    cfg.n_samples = j.value("n_samples", cfg.n_samples);
    cfg.trunc_tol = j.value("trunc_tol", cfg.trunc_tol);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("grid"))
    {
        GridSpec const defaults = cfg.grid;
        auto const& g = j.at("grid");
        cfg.grid.xi_min = g.value("xi_min", defaults.xi_min);
        cfg.grid.xi_max = g.value("xi_max", defaults.xi_max);
        cfg.grid.points = g.value("grid_points", defaults.points);
        cfg.grid.refine_tol = g.value("refine_tol", defaults.refine_tol);
    }
    return cfg;
}

std::vector<BoundRow> run_sweep(SweepConfig const& cfg, unsigned jobs)
{
    cfg.validate();
    Distribution const f = Distribution::from_name(cfg.distribution);

    // d_s(F, Phi) does not depend on a; compute it once.
    std::optional<MetricResult> ds;
    if (cfg.s > 2.0 && cfg.s < f.abs_moment_order())
    {
        ds = fourier_distance(analytic_cf(f), CharFn::gaussian(), cfg.s, cfg.grid);
    }

    std::vector<BoundRow> rows(cfg.a_values.size());
    parallel_for(rows.size(), jobs, [&](std::size_t i) {
        BoundRowInputs in;
        in.a = cfg.a_values[i];
        in.s = cfg.s;
        in.n_samples = cfg.n_samples;
        in.seed = cfg.seed;
        in.trunc_tol = cfg.trunc_tol;
        in.grid = cfg.grid;
        in.ds_f_phi = ds;
        rows[i] = compute_bound_row(f, in);
    });
    return rows;
}

std::vector<std::string> const& report_columns()
{
    static std::vector<std::string> const columns = {
        "a",           "s",
        "ds_F_Phi",    "d2_measured",
        "lemma2_bound", "theorem3_bound",
        "kolmogorov_measured", "gerber_bound",
        "kolmogorov_from_d2", "n_samples",
        "seed",        "trunc_tol"};
    return columns;
}

std::string report_csv(std::vector<BoundRow> const& rows)
{
    if (rows.empty())
    {
        throw std::invalid_argument("cannot emit a report with no rows");
    }
    std::ostringstream out;
    auto const& cols = report_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
    {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
    for (BoundRow const& r : rows)
    {
        out << format_double(r.a) << ',' << format_double(r.s) << ','
            << csv_cell(r.ds_f_phi) << ',' << format_double(r.d2_measured) << ','
            << format_double(r.lemma2_bound) << ',' << csv_cell(r.theorem3_bound)
            << ',' << format_double(r.kolmogorov_measured) << ','
            << csv_cell(r.gerber_bound) << ',' << format_double(r.kolmogorov_from_d2)
            << ',' << r.n_samples << ',' << r.seed << ',' << format_double(r.trunc_tol)
            << '\n';
    }
    return out.str();
}

std::string report_json(std::vector<BoundRow> const& rows, SweepConfig const& cfg)
{
    if (rows.empty())
    {
        throw std::invalid_argument("cannot emit a report with no rows");
    }
    nlohmann::ordered_json doc;
    doc["meta"] = {{"tool", kToolName},
                   {"version", kToolVersion},
                   {"seed", cfg.seed},
                   {"grid", to_json(cfg.grid)},
                   {"config", to_json(cfg)}};
    auto& out_rows = doc["rows"] = nlohmann::ordered_json::array();
    for (BoundRow const& r : rows)
    {
        out_rows.push_back({{"a", r.a},
                            {"s", r.s},
                            {"ds_F_Phi", json_cell(r.ds_f_phi)},
                            {"d2_measured", r.d2_measured},
                            {"lemma2_bound", r.lemma2_bound},
                            {"theorem3_bound", json_cell(r.theorem3_bound)},
                            {"kolmogorov_measured", r.kolmogorov_measured},
                            {"gerber_bound", json_cell(r.gerber_bound)},
                            {"kolmogorov_from_d2", r.kolmogorov_from_d2},
                            {"n_samples", r.n_samples},
                            {"seed", r.seed},
                            {"trunc_tol", r.trunc_tol}});
    }
    return doc.dump(2) + "\n";
}

void emit_report(std::vector<BoundRow> const& rows, SweepConfig const& cfg,
                 ReportFormat format, std::string const& path)
{
    std::string const text
        = format == ReportFormat::csv ? report_csv(rows) : report_json(rows, cfg);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
    {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    file << text;
    file.flush();
    if (!file)
    {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

}  // namespace dclt
