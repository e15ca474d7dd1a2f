#include "qnet/netlist.hpp"

#include <map>
#include <sstream>

#include <json.hpp>

#include "json_fmt.hpp"

namespace qnet {

namespace {

using nlohmann::json;

struct Parser {
  std::vector<ParseError>& errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back({path, msg}); }

  double number(const json& j, const std::string& path, double fallback = 0.0) {
    if (!j.is_number()) {
      fail(path, "expected a number");
      return fallback;
    }
    return j.get<double>();
  }

  int integer(const json& j, const std::string& path, int fallback = 0) {
    if (!j.is_number_integer()) {
      fail(path, "expected an integer");
      return fallback;
    }
    return j.get<int>();
  }

  std::string str(const json& j, const std::string& path) {
    if (!j.is_string()) {
      fail(path, "expected a string");
      return {};
    }
    return j.get<std::string>();
  }

  Complex complex_entry(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
      fail(path, "complex scalar must be a two-element array [re, im]");
      return {};
    }
    return {j[0].get<double>(), j[1].get<double>()};
  }

  Op matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
      fail(path, "matrix must be a non-empty array of rows");
      return {};
    }
    std::vector<std::vector<Complex>> rows;
    size_t width = 0;
    for (size_t i = 0; i < j.size(); ++i) {
      const auto& row = j[i];
      const std::string rp = path + "/" + std::to_string(i);
      if (!row.is_array() || row.empty()) {
        fail(rp, "matrix row must be a non-empty array");
        return {};
      }
      if (i == 0) width = row.size();
      if (row.size() != width) {
        fail(rp, "matrix rows must all have the same length");
        return {};
      }
      std::vector<Complex> entries;
      for (size_t k = 0; k < row.size(); ++k)
        entries.push_back(complex_entry(row[k], rp + "/" + std::to_string(k)));
      rows.push_back(std::move(entries));
    }
    try {
      return Op::from_rows(rows);
    } catch (const std::exception& e) {
      fail(path, e.what());
      return {};
    }
  }

  std::vector<PortSpec> ports(const json& j, const std::string& path) {
    std::vector<PortSpec> out;
    if (!j.is_array() || j.empty()) {
      fail(path, "expected a non-empty array of ports");
      return out;
    }
    for (size_t i = 0; i < j.size(); ++i) {
      const std::string pp = path + "/" + std::to_string(i);
      const auto& p = j[i];
      if (!p.is_object() || !p.contains("label")) {
        fail(pp, "port must be an object with a 'label'");
        continue;
      }
      PortSpec spec;
      spec.label = str(p["label"], pp + "/label");
      spec.mult = p.contains("mult") ? integer(p["mult"], pp + "/mult", 1) : 1;
      if (spec.mult < 1) fail(pp + "/mult", "multiplicity must be >= 1");
      out.push_back(std::move(spec));
    }
    return out;
  }

  ComponentSpec component(const json& j, const std::string& path) {
    ComponentSpec spec;
    const std::string kind = j.contains("kind") ? str(j["kind"], path + "/kind") : "";
    if (kind == "cavity") {
      spec.kind = ComponentSpec::Kind::cavity;
      spec.dim = j.contains("dim") ? integer(j["dim"], path + "/dim", 2) : 2;
      spec.gamma = j.contains("gamma") ? number(j["gamma"], path + "/gamma") : 0.0;
      if (j.contains("h0")) spec.h0 = matrix(j["h0"], path + "/h0");
    } else if (kind == "beam_splitter") {
      spec.kind = ComponentSpec::Kind::beam_splitter;
      spec.dim = j.contains("dim") ? integer(j["dim"], path + "/dim", 1) : 1;
      if (!j.contains("T"))
        fail(path, "beam_splitter requires a 2x2 matrix 'T'");
      else
        spec.t = matrix(j["T"], path + "/T");
    } else if (kind == "passthrough") {
      spec.kind = ComponentSpec::Kind::passthrough;
      spec.dim = j.contains("dim") ? integer(j["dim"], path + "/dim", 1) : 1;
      spec.channels = j.contains("channels") ? integer(j["channels"], path + "/channels", 1) : 1;
    } else if (kind == "static_hamiltonian") {
      spec.kind = ComponentSpec::Kind::static_hamiltonian;
      if (!j.contains("H"))
        fail(path, "static_hamiltonian requires a matrix 'H'");
      else
        spec.h0 = matrix(j["H"], path + "/H");
    } else if (kind == "custom") {
      spec.kind = ComponentSpec::Kind::custom;
      SLHTriple t;
      t.dim_h = j.contains("dim_h") ? integer(j["dim_h"], path + "/dim_h", 1) : 1;
      if (j.contains("in_ports")) t.in_ports = ports(j["in_ports"], path + "/in_ports");
      else fail(path, "custom component requires 'in_ports'");
      if (j.contains("out_ports")) t.out_ports = ports(j["out_ports"], path + "/out_ports");
      else fail(path, "custom component requires 'out_ports'");
      for (const char* key : {"S", "L", "H"})
        if (!j.contains(key)) fail(path, std::string("custom component requires matrix '") + key + "'");
      if (j.contains("S")) t.S = matrix(j["S"], path + "/S");
      if (j.contains("L")) t.L = matrix(j["L"], path + "/L");
      if (j.contains("H")) t.H = matrix(j["H"], path + "/H");
      spec.custom = std::move(t);
    } else {
      fail(path + "/kind", "unknown component kind '" + kind + "'");
    }
    return spec;
  }
};

}  // namespace

ParseResult parse_netlist(const std::string& text) {
  ParseResult result;
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    result.errors.push_back({"", "malformed JSON"});
    return result;
  }
  if (!root.is_object()) {
    result.errors.push_back({"", "top level must be an object"});
    return result;
  }

  Parser p{result.errors};
  NetlistDocument doc;

  if (!root.contains("format_version")) {
    p.fail("/format_version", "missing");
  } else {
    doc.format_version = p.str(root["format_version"], "/format_version");
    if (doc.format_version != "1")
      p.fail("/format_version", "unsupported version '" + doc.format_version + "' (expected \"1\")");
  }

  if (!root.contains("components") || !root["components"].is_array() ||
      root["components"].empty()) {
    p.fail("/components", "expected a non-empty array of components");
  } else {
    const auto& comps = root["components"];
    for (size_t i = 0; i < comps.size(); ++i) {
      const std::string path = "/components/" + std::to_string(i);
      if (!comps[i].is_object()) {
        p.fail(path, "component must be an object");
        continue;
      }
      NetlistComponent c;
      if (!comps[i].contains("name")) {
        p.fail(path, "component requires a 'name'");
        continue;
      }
      c.name = p.str(comps[i]["name"], path + "/name");
      for (const auto& prev : doc.components)
        if (prev.name == c.name) p.fail(path + "/name", "duplicate component name '" + c.name + "'");
      c.spec = p.component(comps[i], path);
      doc.components.push_back(std::move(c));
    }
  }

  if (root.contains("edges")) {
    if (!root["edges"].is_array()) {
      p.fail("/edges", "expected an array");
    } else {
      const auto& edges = root["edges"];
      for (size_t i = 0; i < edges.size(); ++i) {
        const std::string path = "/edges/" + std::to_string(i);
        if (!edges[i].is_object() || !edges[i].contains("from") || !edges[i].contains("to")) {
          p.fail(path, "edge must be an object with 'from' and 'to'");
          continue;
        }
        EdgeSpec e;
        e.source = p.str(edges[i]["from"], path + "/from");
        e.range = p.str(edges[i]["to"], path + "/to");
        if (edges[i].contains("delay"))
          e.delay = p.number(edges[i]["delay"], path + "/delay");
        doc.edges.push_back(std::move(e));
      }
    }
  }

  if (root.contains("options")) {
    if (!root["options"].is_object())
      p.fail("/options", "expected an object");
    else if (root["options"].contains("tol"))
      doc.tol = p.number(root["options"]["tol"], "/options/tol", 1e-10);
  }

  // Components must be constructible before edges can be resolved.
  if (result.errors.empty()) {
    for (size_t i = 0; i < doc.components.size(); ++i) {
      try {
        build_component(doc.components[i].spec);
      } catch (const std::exception& e) {
        p.fail("/components/" + std::to_string(i), e.what());
      }
    }
  }

  // Resolve edge references against the declared components: the source
  // must name an output port, the range an input port.
  if (result.errors.empty()) {
    auto has_port = [&doc](const std::string& ref, bool output) {
      const auto dot = ref.find('.');
      if (dot == std::string::npos) return false;
      const std::string comp = ref.substr(0, dot);
      const std::string port = ref.substr(dot + 1);
      for (const auto& c : doc.components) {
        if (c.name != comp) continue;
        try {
          const SLHTriple t = build_component(c.spec);
          const auto& ports = output ? t.out_ports : t.in_ports;
          for (const auto& ps : ports)
            if (ps.label == port) return true;
        } catch (const std::exception&) {
          return false;
        }
      }
      return false;
    };
    for (size_t i = 0; i < doc.edges.size(); ++i) {
      const std::string path = "/edges/" + std::to_string(i);
      if (!has_port(doc.edges[i].source, true))
        p.fail(path + "/from", "dangling port reference '" + doc.edges[i].source +
                                   "' (must name an existing output port)");
      if (!has_port(doc.edges[i].range, false))
        p.fail(path + "/to", "dangling port reference '" + doc.edges[i].range +
                                 "' (must name an existing input port)");
    }
  }

  if (result.errors.empty()) result.doc = std::move(doc);
  return result;
}

Network to_network(const NetlistDocument& doc) {
  Network net;
  for (const auto& c : doc.components)
    net.components.push_back({c.name, with_qualified_ports(build_component(c.spec), c.name)});
  net.internal_edges = doc.edges;
  return net;
}

namespace {

void write_ports(std::ostream& os, const std::vector<PortSpec>& ports) {
  os << '[';
  for (size_t i = 0; i < ports.size(); ++i) {
    if (i) os << ',';
    os << "{\"label\":";
    detail::write_json_string(os, ports[i].label);
    os << ",\"mult\":" << ports[i].mult << '}';
  }
  os << ']';
}

}  // namespace

std::string serialize_netlist(const NetlistDocument& doc) {
  std::ostringstream os;
  os << "{\"components\":[";
  for (size_t i = 0; i < doc.components.size(); ++i) {
    if (i) os << ',';
    const auto& c = doc.components[i];
    os << '{';
    switch (c.spec.kind) {
      case ComponentSpec::Kind::cavity:
        os << "\"dim\":" << c.spec.dim << ",\"gamma\":" << detail::fmt_double(c.spec.gamma);
        if (!c.spec.h0.empty()) {
          os << ",\"h0\":";
          detail::write_matrix(os, c.spec.h0);
        }
        os << ",\"kind\":\"cavity\"";
        break;
      case ComponentSpec::Kind::beam_splitter:
        os << "\"T\":";
        detail::write_matrix(os, c.spec.t);
        os << ",\"dim\":" << c.spec.dim << ",\"kind\":\"beam_splitter\"";
        break;
      case ComponentSpec::Kind::passthrough:
        os << "\"channels\":" << c.spec.channels << ",\"dim\":" << c.spec.dim
           << ",\"kind\":\"passthrough\"";
        break;
      case ComponentSpec::Kind::static_hamiltonian:
        os << "\"H\":";
        detail::write_matrix(os, c.spec.h0);
        os << ",\"kind\":\"static_hamiltonian\"";
        break;
      case ComponentSpec::Kind::custom:
        os << "\"H\":";
        detail::write_matrix(os, c.spec.custom.H);
        os << ",\"L\":";
        detail::write_matrix(os, c.spec.custom.L);
        os << ",\"S\":";
        detail::write_matrix(os, c.spec.custom.S);
        os << ",\"dim_h\":" << c.spec.custom.dim_h << ",\"in_ports\":";
        write_ports(os, c.spec.custom.in_ports);
        os << ",\"kind\":\"custom\",\"name\":";
        detail::write_json_string(os, c.name);
        os << ",\"out_ports\":";
        write_ports(os, c.spec.custom.out_ports);
        os << '}';
        continue;
    }
    os << ",\"name\":";
    detail::write_json_string(os, c.name);
    os << '}';
  }
  os << "],\"edges\":[";
  for (size_t i = 0; i < doc.edges.size(); ++i) {
    if (i) os << ',';
    const auto& e = doc.edges[i];
    os << '{';
    if (e.delay) os << "\"delay\":" << detail::fmt_double(*e.delay) << ',';
    os << "\"from\":";
    detail::write_json_string(os, e.source);
    os << ",\"to\":";
    detail::write_json_string(os, e.range);
    os << '}';
  }
  os << "],\"format_version\":\"" << doc.format_version << "\",\"options\":{\"tol\":"
     << detail::fmt_double(doc.tol) << "}}";
  return os.str();
}

}  // namespace qnet
