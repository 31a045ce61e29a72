#pragma once

#include "fermihart/lattice.hpp"
#include "fermihart/mirror.hpp"

#include <json.hpp>

#include <cstdio>
#include <span>
#include <string>
#include <vector>

namespace fermihart {

/// Library version string, as configured by the build.
const char* version();

/// Column names of the metrics CSV, in order; identical to the MetricsRecord fields.
const std::vector<std::string>& metrics_columns();

/// Streams records to a CSV file. Missing optionals are written as empty fields,
/// doubles with 17 significant digits so parsing gives back the same bits.
class MetricsWriter
{
  public:
    explicit MetricsWriter(const std::string& path);
    ~MetricsWriter();
    MetricsWriter(const MetricsWriter&) = delete;
    MetricsWriter& operator=(const MetricsWriter&) = delete;

    void write(const MetricsRecord& r);
    void close();

  private:
    std::string path_;
    std::FILE* file_ = nullptr;
};

void write_metrics(std::span<const MetricsRecord> records, const std::string& path);
std::vector<MetricsRecord> read_metrics(const std::string& path);

/// JSON sidecar next to a CSV: resolved config, version and a free-form summary.
void write_sidecar(const std::string& path, const nlohmann::json& config, const nlohmann::json& summary);

/// Writes `<stem>.bin` (raw float64, row-major), `<stem>.json` (dims, sizes, lengths, count)
/// and, for 1D grids, `<stem>.csv` with "x,rho" lines.
void dump_density(std::span<const double> rho, const GridSpec& grid, const std::string& stem);

struct DensityDump
{
    GridSpec grid;
    RealVector rho;
};
/// Reads back `<stem>.bin` using the header; checks the payload length.
DensityDump read_density(const std::string& stem);

} // namespace fermihart
