#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qnet/netlist.hpp"
#include "qnet/reduction.hpp"
#include "qnet/report.hpp"
#include "json_fmt.hpp"
#include "testutil.hpp"

using namespace qnet;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(QNET_FIXTURE_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("minimal single-cavity document") {
  const auto res = parse_netlist(read_fixture("single_cavity.json"));
  REQUIRE(res.ok());
  const auto net = to_network(*res.doc);
  CHECK(net.components.size() == 1);
  CHECK(net.internal_edges.empty());
  CHECK(validate(net).empty());
  CHECK(net.components[0].triple.dim_h == 2);
  CHECK((net.components[0].triple.L - annihilator(2)).max_abs() == 0.0);
  CHECK(net.components[0].triple.in_ports[0].label == "cav.in1");
}

TEST_CASE("figure-6 document matches the factory network") {
  const auto res = parse_netlist(read_fixture("figure6.json"));
  REQUIRE(res.ok());
  const auto net = to_network(*res.doc);
  CHECK(validate(net).empty());

  SLHTriple plant;
  plant.dim_h = 1;
  plant.in_ports = {{"in1", 1}};
  plant.out_ports = {{"out1", 1}};
  plant.S = Op::scalar({0, 1});
  plant.L = Op::scalar(0.6);
  plant.H = Op::scalar(0.3);
  const double r = 1 / std::sqrt(2.0);
  const auto factory = figure6_network(plant, Op::from_rows({{r, r}, {r, -r}}));

  CHECK((build_network_V(net).mat - build_network_V(factory).mat).max_abs() == 0.0);
  CHECK((adjacency(net).mat - adjacency(factory).mat).max_abs() == 0.0);
  const auto red_doc = extract_slh(eliminate_all(build_network_V(net), adjacency(net)));
  const auto red_fac = extract_slh(eliminate_all(build_network_V(factory), adjacency(factory)));
  CHECK(test::max_block_diff(red_doc, red_fac) == 0.0);
}

TEST_CASE("parse errors carry JSON-pointer-style paths") {
  SUBCASE("malformed JSON") {
    const auto res = parse_netlist("{ not json");
    REQUIRE(!res.ok());
    CHECK(res.errors[0].message == "malformed JSON");
  }

  SUBCASE("unknown component kind") {
    const auto res = parse_netlist(R"({
      "format_version": "1",
      "components": [{"name": "x", "kind": "squeezer"}]
    })");
    REQUIRE(!res.ok());
    CHECK(res.errors[0].path == "/components/0/kind");
    CHECK(res.errors[0].message.find("unknown component kind") != std::string::npos);
  }

  SUBCASE("version mismatch") {
    const auto res = parse_netlist(R"({
      "format_version": "2",
      "components": [{"name": "c", "kind": "cavity", "dim": 2, "gamma": 1.0}]
    })");
    REQUIRE(!res.ok());
    CHECK(res.errors[0].path == "/format_version");
  }

  SUBCASE("output-to-output edge is a dangling port reference") {
    const auto res = parse_netlist(R"({
      "format_version": "1",
      "components": [
        {"name": "plant", "kind": "passthrough", "dim": 1, "channels": 2}
      ],
      "edges": [{"from": "plant.out1", "to": "plant.out1"}]
    })");
    REQUIRE(!res.ok());
    REQUIRE(res.errors.size() == 1);
    CHECK(res.errors[0].path == "/edges/0/to");
    CHECK(res.errors[0].message.find("dangling port reference") != std::string::npos);
  }

  SUBCASE("bad complex entry names the matrix cell") {
    const auto res = parse_netlist(R"({
      "format_version": "1",
      "components": [{
        "name": "x", "kind": "custom", "dim_h": 1,
        "in_ports": [{"label": "in1"}], "out_ports": [{"label": "out1"}],
        "S": [[1.0]], "L": [[[0.0, 0.0]]], "H": [[[0.0, 0.0]]]
      }]
    })");
    REQUIRE(!res.ok());
    CHECK(res.errors[0].path == "/components/0/S/0/0");
  }
}

TEST_CASE("netlist serialization round-trips") {
  for (const char* name : {"figure2.json", "figure6.json", "figure7.json",
                           "single_cavity.json", "perfect_mirror.json", "series_network.json"}) {
    CAPTURE(name);
    const auto res = parse_netlist(read_fixture(name));
    REQUIRE(res.ok());
    const std::string once = serialize_netlist(*res.doc);
    const auto back = parse_netlist(once);
    REQUIRE(back.ok());
    CHECK(serialize_netlist(*back.doc) == once);
    // and the reparsed document builds the identical network matrix
    CHECK((build_network_V(to_network(*back.doc)).mat -
           build_network_V(to_network(*res.doc)).mat)
              .max_abs() == 0.0);
  }
}

TEST_CASE("delays are kept as annotations") {
  const auto res = parse_netlist(R"({
    "format_version": "1",
    "components": [
      {"name": "a", "kind": "passthrough", "dim": 1, "channels": 2}
    ],
    "edges": [{"from": "a.out2", "to": "a.in2", "delay": 0.5}]
  })");
  REQUIRE(res.ok());
  REQUIRE(res.doc->edges.size() == 1);
  CHECK(res.doc->edges[0].delay == 0.5);
  const std::string text = serialize_netlist(*res.doc);
  CHECK(text.find("\"delay\"") != std::string::npos);
}

TEST_CASE("report serialization") {
  const auto parsed = parse_netlist(read_fixture("figure6.json"));
  REQUIRE(parsed.ok());
  const auto net = to_network(*parsed.doc);
  const auto v = build_network_V(net);
  const auto eta = adjacency(net);
  InverseDiagnostics diag;
  const auto red = reduced_params(extract_slh(v), eta, 1e-10, &diag);

  ReductionReport rep;
  rep.reduced = red;
  rep.residuals = triple_residuals(red);
  rep.eliminated_edges = net.internal_edges;
  rep.loop_sigma_min = diag.sigma_min;
  rep.tol = 1e-10;

  SUBCASE("json mode is deterministic and recovers S exactly") {
    const std::string a = serialize_report(rep, ReportMode::json);
    const std::string b = serialize_report(rep, ReportMode::json);
    CHECK(a == b);

    const auto j = nlohmann::json::parse(a);
    const auto& s = j["reduced"]["S"];
    REQUIRE(s.size() == static_cast<size_t>(red.S.rows()));
    for (Eigen::Index i = 0; i < red.S.rows(); ++i)
      for (Eigen::Index k = 0; k < red.S.cols(); ++k) {
        CHECK(s[i][k][0].get<double>() == red.S(i, k).real());
        CHECK(s[i][k][1].get<double>() == red.S(i, k).imag());
      }
    CHECK(j["tol"].get<double>() == 1e-10);
    CHECK(j["eliminated_edges"].size() == 2);
    CHECK(j["diagnostics"]["loop_sigma_min"].get<double>() > 0);
  }

  SUBCASE("text mode prints one PASS/FAIL line per residual") {
    const std::string text = serialize_report(rep, ReportMode::text);
    size_t lines = 0;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
      if (line.find("PASS") != std::string::npos || line.find("FAIL") != std::string::npos)
        ++lines;
    CHECK(lines == rep.residuals.size());
    CHECK(text.find("s_unitarity") != std::string::npos);
  }
}

TEST_CASE("17-significant-digit floats round-trip doubles exactly") {
  test::Rng rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = rng.gauss_real() * std::pow(10.0, rng.uniform_int(-20, 20));
    const std::string s = detail::fmt_double(x);
    CHECK(std::stod(s) == x);
  }
}
