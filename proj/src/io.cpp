#include "rwalk/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rwalk {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace

void write_full_snapshots_csv(const std::string& path,
                              const EnsembleResult& result) {
    if (!result.has_full) {
        throw std::invalid_argument(
            "full snapshots were not recorded (memory budget); export the "
            "reduced form instead");
    }
    auto out = open_out(path);
    out << "rep,n,walker,z\n";
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        for (std::size_t gi = 0; gi < result.grid.size(); ++gi) {
            const double* z = result.state_at(rep, gi);
            for (int w = 0; w < result.n_walkers; ++w) {
                out << rep << ',' << result.grid[gi] << ',' << w << ','
                    << format_double(z[w]) << '\n';
            }
        }
    }
    finish(out, path);
}

void write_reduced_snapshots_csv(const std::string& path,
                                 const EnsembleResult& result) {
    auto out = open_out(path);
    out << "rep,n,zbar,sync_msq\n";
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        for (std::size_t gi = 0; gi < result.grid.size(); ++gi) {
            out << rep << ',' << result.grid[gi] << ','
                << format_double(result.zbar_at(rep, gi)) << ','
                << format_double(result.sync_at(rep, gi)) << '\n';
        }
    }
    finish(out, path);
}

void write_moments_csv(const std::string& path,
                       const std::vector<MomentRow>& rows) {
    auto out = open_out(path);
    out << "n,mean_zbar,var_zbar,mean_sq_sync,mean_sq_conv_proxy\n";
    for (const auto& row : rows) {
        out << row.n << ',' << format_double(row.mean_zbar) << ','
            << format_double(row.var_zbar) << ','
            << format_double(row.mean_sq_sync) << ','
            << format_double(row.mean_sq_conv_proxy) << '\n';
    }
    finish(out, path);
}

void write_rate_table_csv(const std::string& path,
                          const std::vector<RateRow>& rows) {
    auto out = open_out(path);
    out << "n,sync_msq,conv_msq,sync_fit,conv_fit\n";
    for (const auto& row : rows) {
        out << row.n << ',' << format_double(row.sync_msq) << ','
            << format_double(row.conv_msq) << ','
            << format_double(row.sync_fit) << ','
            << format_double(row.conv_fit) << '\n';
    }
    finish(out, path);
}

void write_degrees_csv(const std::string& path, const PAGraph& graph) {
    auto out = open_out(path);
    out << "vertex,degree\n";
    for (std::size_t i = 0; i < graph.degrees.size(); ++i) {
        out << (i + 1) << ',' << graph.degrees[i] << '\n';
    }
    finish(out, path);
}

void write_schedule_csv(const std::string& path,
                        const std::vector<double>& step_sizes) {
    auto out = open_out(path);
    out << "n,r\n";
    for (std::size_t n = 0; n < step_sizes.size(); ++n) {
        out << n << ',' << format_double(step_sizes[n]) << '\n';
    }
    finish(out, path);
}

void write_urn_schedule_csv(const std::string& path,
                            const UrnSchedule& urn_schedule,
                            std::uint64_t horizon) {
    auto out = open_out(path);
    out << "n,r,rho,q\n";
    const std::string rho = format_double(urn_schedule.kernel.rho);
    const std::string q = format_double(urn_schedule.kernel.q);
    for (std::uint64_t n = 0; n < horizon; ++n) {
        out << n << ',' << format_double(step_size(urn_schedule.schedule, n))
            << ',' << rho << ',' << q << '\n';
    }
    finish(out, path);
}

namespace {

nlohmann::json report_json(const TestReport& report) {
    nlohmann::json j;
    j["name"] = report.name;
    j["statistic"] = report.statistic;
    j["threshold"] = report.threshold;
    j["passed"] = report.passed;
    j["sample_size"] = report.sample_size;
    if (!report.note.empty()) j["note"] = report.note;
    nlohmann::json details = nlohmann::json::object();
    for (const auto& [key, value] : report.details) details[key] = value;
    j["details"] = details;
    return j;
}

}  // namespace

std::string report_to_json(const TestReport& report) {
    return report_json(report).dump(2);
}

void write_reports_json(const std::string& path,
                        const std::vector<TestReport>& reports) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& report : reports) arr.push_back(report_json(report));
    auto out = open_out(path);
    out << arr.dump(2) << '\n';
    finish(out, path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    auto out = open_out(path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    finish(out, path);
}

}  // namespace rwalk
