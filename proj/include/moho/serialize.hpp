#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "moho/report.hpp"
#include "moho/sampling.hpp"
#include "moho/scalarization.hpp"
#include "moho/tracker.hpp"

namespace moho {

// CSV schema v1; headers are part of the file contract and pinned by tests.
std::string front_csv_header(int n, int p, int m, int s);
std::string cloud_csv_header(int n, int p);
std::string metrics_csv_header(int p);
std::string solutions_csv_header(int n, int p);
inline constexpr const char* kTraceCsvHeader = "k,t,alpha,residual,orientation";

void write_front_csv(std::ostream& out, const FrontSet& front, int n, int p, int m, int s);
void write_cloud_csv(std::ostream& out, const PointCloud& cloud, int n, int p);
void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows, int p);
void write_solutions_csv(std::ostream& out, const std::vector<SolveReport>& reports, int n,
                         int p);
void write_trace_csv(std::ostream& out, const PathTrace& path);

/// Single-report JSON document.
std::string report_to_json(const SolveReport& report);

}  // namespace moho
