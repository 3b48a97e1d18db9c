#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "moho/registry.hpp"
#include "moho/serialize.hpp"

using namespace moho;

namespace {

Vector vec(std::initializer_list<double> vals) {
    Vector v(static_cast<int>(vals.size()));
    int i = 0;
    for (double x : vals) v[i++] = x;
    return v;
}

}  // namespace

TEST_CASE("csv headers are pinned (schema v1)") {
    CHECK(front_csv_header(2, 2, 1, 1) ==
          "method,params,x1,x2,f1,f2,g1,h1,kkt_residual,feasible");
    CHECK(front_csv_header(5, 2, 1, 2) ==
          "method,params,x1,x2,x3,x4,x5,f1,f2,g1,h1,h2,kkt_residual,feasible");
    CHECK(cloud_csv_header(2, 2) == "x1,x2,f1,f2,feasible");
    CHECK(metrics_csv_header(2) ==
          "method,wall_seconds,f1,f2,constraints,homotopy,homotopy_jacobian,asterisk,"
          "kkt_residual");
    CHECK(solutions_csv_header(2, 2) == "method,x1,x2,f1,f2,kkt_residual,feasible,converged");
    CHECK(std::string(kTraceCsvHeader) == "k,t,alpha,residual,orientation");
}

TEST_CASE("front csv rows carry the entry data") {
    FrontSet front;
    FrontEntry entry;
    entry.method = "wsm";
    entry.params = "w=0.5,0.5";
    entry.x = vec({-1, 1});
    entry.f = vec({3, 5});
    entry.feasibility.g_values = vec({-1});
    entry.feasibility.h_values = vec({0});
    entry.feasibility.feasible = true;
    entry.kkt_residual = 1e-9;
    front.entries.push_back(entry);

    std::ostringstream out;
    write_front_csv(out, front, 2, 2, 1, 1);
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == front_csv_header(2, 2, 1, 1));
    CHECK(row.find("wsm,\"w=0.5,0.5\",-1,1,3,5,-1,0,") == 0);
    CHECK(row.back() == '1');
}

TEST_CASE("metrics csv applies the homotopy column convention") {
    MetricsRow deterministic;
    deterministic.method = "wsm";
    deterministic.objective_evals = {100, 100};
    deterministic.constraint_evals = 120;

    MetricsRow homotopy;
    homotopy.method = "homotopy";
    homotopy.homotopy_convention = true;
    homotopy.objective_evals = {2, 2};
    homotopy.constraint_evals = 400;
    homotopy.homotopy_evals = 321;
    homotopy.homotopy_jacobian_evals = 222;

    std::ostringstream out;
    write_metrics_csv(out, {deterministic, homotopy}, 2);
    std::istringstream in(out.str());
    std::string header, row1, row2;
    std::getline(in, header);
    std::getline(in, row1);
    std::getline(in, row2);
    CHECK(row1.find("wsm,0,100,100,120,0,0,0,") == 0);
    CHECK(row2.find("homotopy,0,321,321,321,321,222,1,") == 0);
}

TEST_CASE("report json is parseable and complete") {
    SolveReport report;
    report.method = "homotopy";
    report.problem = "ex1_2d";
    report.x = vec({-0.13, 0.6});
    report.f = vec({0.75, 0.84});
    report.g = vec({-0.01});
    report.h = vec({1e-9});
    report.kkt_residual = 3e-11;
    report.feasible = true;
    report.converged = true;
    report.counters = EvalCounters(2);
    report.counters.homotopy = 55;
    report.params["w"] = "0.5,0.5";

    const std::string text = report_to_json(report);
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc["method"] == "homotopy");
    CHECK(doc["x"].size() == 2);
    CHECK(doc["counters"]["homotopy"] == 55);
    CHECK(doc["params"]["w"] == "0.5,0.5");
    CHECK(doc["feasible"] == true);
}

TEST_CASE("format_vector") {
    CHECK(format_vector(vec({0.4, 0.6})) == "0.4,0.6");
    CHECK(format_vector(Vector()) == "");
}
