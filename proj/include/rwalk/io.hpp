#ifndef RWALK_IO_HPP
#define RWALK_IO_HPP

// Artifact writers.  Every floating-point value is printed with %.17g so a
// rerun under any worker count reproduces files byte for byte.

#include <cstdint>
#include <string>
#include <vector>

#include "rwalk/analytics.hpp"
#include "rwalk/ensemble.hpp"
#include "rwalk/pa_graph.hpp"
#include "rwalk/urn.hpp"

namespace rwalk {

// Shortest decimal form that round-trips a double ("%.17g").
std::string format_double(double v);

// FNV-1a 64-bit hash of a byte string, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

// Full snapshots, columns: rep,n,walker,z.  Requires result.has_full.
void write_full_snapshots_csv(const std::string& path,
                              const EnsembleResult& result);

// Reduced snapshots, columns: rep,n,zbar,sync_msq.
void write_reduced_snapshots_csv(const std::string& path,
                                 const EnsembleResult& result);

// Columns: n,mean_zbar,var_zbar,mean_sq_sync,mean_sq_conv_proxy.
void write_moments_csv(const std::string& path,
                       const std::vector<MomentRow>& rows);

struct RateRow {
    std::uint64_t n = 0;
    double sync_msq = 0.0;
    double conv_msq = 0.0;
    double sync_fit = 0.0;
    double conv_fit = 0.0;
};
// Columns: n,sync_msq,conv_msq,sync_fit,conv_fit.
void write_rate_table_csv(const std::string& path,
                          const std::vector<RateRow>& rows);

// Columns: vertex,degree (vertices numbered from 1).
void write_degrees_csv(const std::string& path, const PAGraph& graph);

// Columns: n,r.
void write_schedule_csv(const std::string& path,
                        const std::vector<double>& step_sizes);

// Columns: n,r,rho,q (kernel constants repeated per row for plot tooling).
void write_urn_schedule_csv(const std::string& path,
                            const UrnSchedule& urn_schedule,
                            std::uint64_t horizon);

// One JSON report (or an array of them).
std::string report_to_json(const TestReport& report);
void write_reports_json(const std::string& path,
                        const std::vector<TestReport>& reports);

// Reads a whole file; throws std::runtime_error when unreadable.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace rwalk

#endif
