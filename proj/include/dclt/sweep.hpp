#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dclt/bounds.hpp"
#include "dclt/metrics.hpp"

namespace dclt {

inline constexpr char const* kToolName = "dclt";
inline constexpr char const* kToolVersion = "1.0.0";

// Environment variable naming the default directory for sweep reports.
inline constexpr char const* kOutputDirEnv = "DCLT_OUTPUT_DIR";

//---------------------------------------------------------------------------//
/*!
 * Everything that determines the numbers in a bound report.
 *
 * Output paths and the worker count are execution options: they are not
 * part of the config recorded in report metadata, so reruns with a
 * different --jobs produce byte-identical files.
 */
struct SweepConfig
{
    std::string distribution = "rademacher";
    double s = 3.0;
    std::vector<double> a_values = {0.9, 0.99, 0.999};
    std::size_t n_samples = 100000;
    double trunc_tol = 1e-10;
    std::uint64_t seed = 1;
    GridSpec grid;

    void validate() const;
    bool operator==(SweepConfig const&) const = default;
};

nlohmann::ordered_json to_json(SweepConfig const& cfg);

// Missing keys keep their defaults in `base`.
SweepConfig sweep_config_from_json(nlohmann::json const& j, SweepConfig base = {});

// Rows are ordered by a regardless of completion order.
std::vector<BoundRow> run_sweep(SweepConfig const& cfg, unsigned jobs = 1);

enum class ReportFormat
{
    csv,
    json,
};

// Column order of the CSV report.
std::vector<std::string> const& report_columns();

std::string report_csv(std::vector<BoundRow> const& rows);
std::string report_json(std::vector<BoundRow> const& rows, SweepConfig const& cfg);

// Writes the report; throws on empty rows or I/O failure.
void emit_report(std::vector<BoundRow> const& rows, SweepConfig const& cfg,
                 ReportFormat format, std::string const& path);

}  // namespace dclt
