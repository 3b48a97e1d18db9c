#include "moho/serialize.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace moho {

namespace {

std::string axis_columns(const char* stem, int count) {
    std::ostringstream out;
    for (int i = 0; i < count; ++i) out << "," << stem << i + 1;
    return out.str();
}

void write_values(std::ostream& out, const Vector& v) {
    for (int i = 0; i < v.size(); ++i) out << "," << std::setprecision(12) << v[i];
}

}  // namespace

std::string format_vector(const Vector& v, int precision) {
    std::ostringstream out;
    out << std::setprecision(precision);
    for (int i = 0; i < v.size(); ++i) {
        if (i) out << ",";
        out << v[i];
    }
    return out.str();
}

std::string front_csv_header(int n, int p, int m, int s) {
    return "method,params" + axis_columns("x", n) + axis_columns("f", p) +
           axis_columns("g", m) + axis_columns("h", s) + ",kkt_residual,feasible";
}

std::string cloud_csv_header(int n, int p) {
    return "x1" + axis_columns("x", n).substr(3) + axis_columns("f", p) + ",feasible";
}

std::string metrics_csv_header(int p) {
    return "method,wall_seconds" + axis_columns("f", p) +
           ",constraints,homotopy,homotopy_jacobian,asterisk,kkt_residual";
}

std::string solutions_csv_header(int n, int p) {
    return "method" + axis_columns("x", n) + axis_columns("f", p) +
           ",kkt_residual,feasible,converged";
}

void write_front_csv(std::ostream& out, const FrontSet& front, int n, int p, int m, int s) {
    out << front_csv_header(n, p, m, s) << "\n";
    for (const FrontEntry& entry : front.entries) {
        out << entry.method << ",\"" << entry.params << "\"";
        write_values(out, entry.x);
        write_values(out, entry.f);
        write_values(out, entry.feasibility.g_values);
        write_values(out, entry.feasibility.h_values);
        out << "," << std::setprecision(12) << entry.kkt_residual << ","
            << (entry.feasibility.feasible ? 1 : 0) << "\n";
    }
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud, int n, int p) {
    out << cloud_csv_header(n, p) << "\n";
    for (const CloudPoint& point : cloud.points) {
        bool first = true;
        for (int i = 0; i < point.x.size(); ++i) {
            if (!first) out << ",";
            out << std::setprecision(12) << point.x[i];
            first = false;
        }
        write_values(out, point.f);
        out << "," << (point.feasibility.feasible ? 1 : 0) << "\n";
    }
}

void write_metrics_csv(std::ostream& out, const std::vector<MetricsRow>& rows, int p) {
    out << metrics_csv_header(p) << "\n";
    for (const MetricsRow& row : rows) {
        out << row.method << "," << std::setprecision(6) << row.wall_seconds;
        for (int i = 0; i < p; ++i) {
            const std::int64_t objective_count =
                i < static_cast<int>(row.objective_evals.size()) ? row.objective_evals[static_cast<std::size_t>(i)] : 0;
            out << "," << (row.homotopy_convention ? row.homotopy_evals : objective_count);
        }
        out << "," << (row.homotopy_convention ? row.homotopy_evals : row.constraint_evals)
            << "," << row.homotopy_evals << "," << row.homotopy_jacobian_evals << ","
            << (row.homotopy_convention ? 1 : 0) << "," << std::setprecision(12)
            << row.kkt_residual << "\n";
    }
}

void write_solutions_csv(std::ostream& out, const std::vector<SolveReport>& reports, int n,
                         int p) {
    out << solutions_csv_header(n, p) << "\n";
    for (const SolveReport& report : reports) {
        out << report.method;
        Vector x = report.x.size() ? report.x : Vector::Constant(n, std::nan(""));
        Vector f = report.f.size() ? report.f : Vector::Constant(p, std::nan(""));
        write_values(out, x);
        write_values(out, f);
        out << "," << std::setprecision(12) << report.kkt_residual << ","
            << (report.feasible ? 1 : 0) << "," << (report.converged ? 1 : 0) << "\n";
    }
}

void write_trace_csv(std::ostream& out, const PathTrace& path) {
    out << kTraceCsvHeader << "\n";
    int k = 1;
    for (const StepRecord& record : path.records) {
        out << k++ << "," << std::setprecision(12) << record.after.t << "," << record.alpha
            << "," << record.residual << "," << record.orientation << "\n";
    }
}

std::string report_to_json(const SolveReport& report) {
    nlohmann::json doc;
    doc["method"] = report.method;
    doc["problem"] = report.problem;
    doc["x"] = std::vector<double>(report.x.data(), report.x.data() + report.x.size());
    doc["f"] = std::vector<double>(report.f.data(), report.f.data() + report.f.size());
    doc["g"] = std::vector<double>(report.g.data(), report.g.data() + report.g.size());
    doc["h"] = std::vector<double>(report.h.data(), report.h.data() + report.h.size());
    doc["kkt_residual"] = report.kkt_residual;
    doc["feasible"] = report.feasible;
    doc["converged"] = report.converged;
    doc["wall_seconds"] = report.wall_seconds;
    doc["message"] = report.message;
    doc["params"] = report.params;

    nlohmann::json counters;
    counters["objective"] = report.counters.objective;
    counters["constraints"] = report.counters.constraints;
    counters["gradients"] = report.counters.gradients;
    counters["hessians"] = report.counters.hessians;
    counters["homotopy"] = report.counters.homotopy;
    counters["homotopy_jacobian"] = report.counters.homotopy_jacobian;
    doc["counters"] = counters;
    return doc.dump(2);
}

}  // namespace moho
