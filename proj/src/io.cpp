#include "fermihart/io.hpp"

#include <cctype>
#include <cstdlib>

#include "fermihart/errors.hpp"

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef FERMIHART_VERSION
#define FERMIHART_VERSION "unknown"
#endif

namespace fermihart {

using nlohmann::json;

const char* version()
{
    return FERMIHART_VERSION;
}

namespace {

[[noreturn]] void io_fail(const std::string& what)
{
    throw Error(ErrorCode::IoError, what + (errno ? std::string(" (") + std::strerror(errno) + ")" : ""));
}

void ensure_parent(const std::string& path)
{
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(parent, ec);
        if (ec) {
            throw Error(ErrorCode::IoError, "cannot create directory '" + parent.string() + "': " + ec.message());
        }
    }
}

void put_double(std::string& line, double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    line += buf;
}

void put_optional(std::string& line, const std::optional<double>& x)
{
    if (x) {
        put_double(line, *x);
    }
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string& s, const std::string& path)
{
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || std::isspace(static_cast<unsigned char>(s[0])) || end != s.c_str() + s.size()) {
        throw Error(ErrorCode::IoError, "bad number '" + s + "' in " + path);
    }
    return x;
}

std::optional<double> parse_optional(const std::string& s, const std::string& path)
{
    if (s.empty()) {
        return std::nullopt;
    }
    return parse_double(s, path);
}

void write_json(const std::string& path, const json& j)
{
    ensure_parent(path);
    std::ofstream out(path);
    if (!out) {
        io_fail("cannot open '" + path + "' for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        io_fail("write to '" + path + "' failed");
    }
}

} // namespace

const std::vector<std::string>& metrics_columns()
{
    static const std::vector<std::string> cols{"t",
                                               "free_energy_per_volume",
                                               "free_energy_per_basis",
                                               "hartree_energy_per_volume",
                                               "electrons_per_volume",
                                               "rel_density_error",
                                               "step_gamma",
                                               "wall_time_matvec_batch",
                                               "solver_iterations_max"};
    return cols;
}

MetricsWriter::MetricsWriter(const std::string& path)
    : path_(path)
{
    ensure_parent(path);
    errno = 0;
    file_ = std::fopen(path.c_str(), "w");
    if (!file_) {
        io_fail("cannot open '" + path + "' for writing");
    }
    std::string header;
    for (const auto& c : metrics_columns()) {
        header += header.empty() ? "" : ",";
        header += c;
    }
    header += '\n';
    if (std::fputs(header.c_str(), file_) < 0) {
        io_fail("write to '" + path_ + "' failed");
    }
}

MetricsWriter::~MetricsWriter()
{
    if (file_) {
        std::fclose(file_);
    }
}

void MetricsWriter::write(const MetricsRecord& r)
{
    if (!file_) {
        throw Error(ErrorCode::IoError, "metrics writer for '" + path_ + "' is closed");
    }
    std::string line = std::to_string(r.t) + ",";
    put_double(line, r.free_energy_per_volume);
    line += ',';
    put_double(line, r.free_energy_per_basis);
    line += ',';
    put_double(line, r.hartree_energy_per_volume);
    line += ',';
    put_double(line, r.electrons_per_volume);
    line += ',';
    put_optional(line, r.rel_density_error);
    line += ',';
    put_double(line, r.step_gamma);
    line += ',';
    put_optional(line, r.wall_time_matvec_batch);
    line += ',' + std::to_string(r.solver_iterations_max) + '\n';
    errno = 0;
    if (std::fputs(line.c_str(), file_) < 0) {
        io_fail("write to '" + path_ + "' failed");
    }
}

void MetricsWriter::close()
{
    if (file_) {
        errno = 0;
        const int rc = std::fclose(file_);
        file_ = nullptr;
        if (rc != 0) {
            io_fail("closing '" + path_ + "' failed");
        }
    }
}

void write_metrics(std::span<const MetricsRecord> records, const std::string& path)
{
    MetricsWriter w(path);
    for (const auto& r : records) {
        w.write(r);
    }
    w.close();
}

std::vector<MetricsRecord> read_metrics(const std::string& path)
{
    errno = 0;
    std::ifstream in(path);
    if (!in) {
        io_fail("cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line) || split(line) != metrics_columns()) {
        throw Error(ErrorCode::IoError, "'" + path + "' does not start with the metrics header");
    }
    std::vector<MetricsRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto f = split(line);
        if (f.size() != metrics_columns().size()) {
            throw Error(ErrorCode::IoError, "wrong field count in '" + path + "': " + line);
        }
        MetricsRecord r;
        r.t = static_cast<long>(parse_double(f[0], path));
        r.free_energy_per_volume = parse_double(f[1], path);
        r.free_energy_per_basis = parse_double(f[2], path);
        r.hartree_energy_per_volume = parse_double(f[3], path);
        r.electrons_per_volume = parse_double(f[4], path);
        r.rel_density_error = parse_optional(f[5], path);
        r.step_gamma = parse_double(f[6], path);
        r.wall_time_matvec_batch = parse_optional(f[7], path);
        r.solver_iterations_max = static_cast<int>(parse_double(f[8], path));
        out.push_back(r);
    }
    return out;
}

void write_sidecar(const std::string& path, const json& config, const json& summary)
{
    write_json(path, json{{"version", version()}, {"config", config}, {"summary", summary}});
}

void dump_density(std::span<const double> rho, const GridSpec& grid, const std::string& stem)
{
    if (rho.size() != grid.n) {
        throw Error(ErrorCode::LengthMismatch, "density length does not match the grid");
    }
    const std::string bin = stem + ".bin";
    ensure_parent(bin);
    errno = 0;
    std::ofstream out(bin, std::ios::binary);
    if (!out) {
        io_fail("cannot open '" + bin + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(rho.data()), static_cast<std::streamsize>(rho.size() * sizeof(double)));
    if (!out) {
        io_fail("write to '" + bin + "' failed");
    }
    write_json(stem + ".json", json{{"dims", grid.dims},
                                    {"sizes", grid.sizes},
                                    {"lengths", grid.lengths},
                                    {"count", grid.n},
                                    {"dtype", "float64"},
                                    {"order", "row-major"}});
    if (grid.dims == 1) {
        const std::string csv = stem + ".csv";
        std::FILE* f = std::fopen(csv.c_str(), "w");
        if (!f) {
            io_fail("cannot open '" + csv + "' for writing");
        }
        for (std::size_t j = 0; j < rho.size(); ++j) {
            std::fprintf(f, "%.17g,%.17g\n", grid.coordinates(j)[0], rho[j]);
        }
        if (std::fclose(f) != 0) {
            io_fail("write to '" + csv + "' failed");
        }
    }
}

DensityDump read_density(const std::string& stem)
{
    errno = 0;
    std::ifstream hin(stem + ".json");
    if (!hin) {
        io_fail("cannot open '" + stem + ".json'");
    }
    json h;
    try {
        hin >> h;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, "bad density header '" + stem + ".json': " + e.what());
    }
    DensityDump d;
    try {
        d.grid = make_grid(h.at("dims").get<int>(), h.at("sizes").get<std::vector<int>>(),
                           h.at("lengths").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, "bad density header '" + stem + ".json': " + e.what());
    }
    errno = 0;
    std::ifstream in(stem + ".bin", std::ios::binary | std::ios::ate);
    if (!in) {
        io_fail("cannot open '" + stem + ".bin'");
    }
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes != d.grid.n * sizeof(double)) {
        throw Error(ErrorCode::IoError, "'" + stem + ".bin' holds " + std::to_string(bytes) + " bytes, header expects " +
                                            std::to_string(d.grid.n * sizeof(double)));
    }
    in.seekg(0);
    d.rho.resize(d.grid.n);
    in.read(reinterpret_cast<char*>(d.rho.data()), static_cast<std::streamsize>(bytes));
    if (!in) {
        io_fail("read from '" + stem + ".bin' failed");
    }
    return d;
}

} // namespace fermihart
