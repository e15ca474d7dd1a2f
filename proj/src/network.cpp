#include "qnet/network.hpp"

#include <set>

namespace qnet {

namespace {

template <class Select>
std::optional<PortLocation> find_port_impl(const Network& net, const std::string& label,
                                           Select select) {
  for (size_t c = 0; c < net.components.size(); ++c) {
    const auto& ports = select(net.components[c].triple);
    for (size_t p = 0; p < ports.size(); ++p)
      if (ports[p].label == label)
        return PortLocation{c, static_cast<Eigen::Index>(p), ports[p]};
  }
  return std::nullopt;
}

}  // namespace

std::optional<PortLocation> find_output_port(const Network& net, const std::string& label) {
  return find_port_impl(net, label, [](const SLHTriple& t) -> const std::vector<PortSpec>& {
    return t.out_ports;
  });
}

std::optional<PortLocation> find_input_port(const Network& net, const std::string& label) {
  return find_port_impl(net, label, [](const SLHTriple& t) -> const std::vector<PortSpec>& {
    return t.in_ports;
  });
}

namespace {

std::set<std::string> edge_sources(const Network& net) {
  std::set<std::string> s;
  for (const auto& e : net.internal_edges) s.insert(e.source);
  return s;
}

std::set<std::string> edge_ranges(const Network& net) {
  std::set<std::string> s;
  for (const auto& e : net.internal_edges) s.insert(e.range);
  return s;
}

std::vector<PortSpec> select_ports(const Network& net, bool outputs, bool internal) {
  const auto connected = outputs ? edge_sources(net) : edge_ranges(net);
  std::vector<PortSpec> out;
  for (const auto& c : net.components) {
    const auto& ports = outputs ? c.triple.out_ports : c.triple.in_ports;
    for (const auto& p : ports)
      if (connected.count(p.label) == static_cast<size_t>(internal ? 1 : 0)) out.push_back(p);
  }
  return out;
}

}  // namespace

std::vector<PortSpec> internal_output_ports(const Network& net) {
  return select_ports(net, true, true);
}
std::vector<PortSpec> internal_input_ports(const Network& net) {
  return select_ports(net, false, true);
}
std::vector<PortSpec> external_input_ports(const Network& net) {
  return select_ports(net, false, false);
}
std::vector<PortSpec> external_output_ports(const Network& net) {
  return select_ports(net, true, false);
}

std::vector<std::string> validate(const Network& net) {
  std::vector<std::string> v;
  if (net.components.empty()) {
    v.push_back("network has no components");
    return v;
  }

  const int d = net.components.front().triple.dim_h;
  std::set<std::string> seen_in, seen_out;
  for (const auto& c : net.components) {
    if (c.triple.dim_h != d)
      v.push_back("component '" + c.name + "': dim_h " + std::to_string(c.triple.dim_h) +
                  " differs from network dim_h " + std::to_string(d));
    for (const auto& p : c.triple.in_ports)
      if (!seen_in.insert(p.label).second)
        v.push_back("input port label '" + p.label + "' used by more than one component");
    for (const auto& p : c.triple.out_ports)
      if (!seen_out.insert(p.label).second)
        v.push_back("output port label '" + p.label + "' used by more than one component");
  }

  std::set<std::string> used_sources, used_ranges;
  for (const auto& e : net.internal_edges) {
    const std::string tag = "edge " + e.source + " -> " + e.range;
    const auto src = find_output_port(net, e.source);
    const auto rng = find_input_port(net, e.range);
    if (!src) v.push_back(tag + ": source is not an output port of any component");
    if (!rng) v.push_back(tag + ": range is not an input port of any component");
    if (src && !used_sources.insert(e.source).second)
      v.push_back(tag + ": output port '" + e.source + "' connected to more than one channel");
    if (rng && !used_ranges.insert(e.range).second)
      v.push_back(tag + ": input port '" + e.range + "' connected to more than one channel");
    if (src && rng && src->spec.mult != rng->spec.mult)
      v.push_back(tag + ": multiplicity " + std::to_string(src->spec.mult) + " vs " +
                  std::to_string(rng->spec.mult) + " must agree");
  }

  Eigen::Index qin = 0, qout = 0;
  for (const auto& p : external_input_ports(net)) qin += p.mult;
  for (const auto& p : external_output_ports(net)) qout += p.mult;
  if (qin != qout)
    v.push_back("total external input multiplicity " + std::to_string(qin) +
                " != total external output multiplicity " + std::to_string(qout));
  return v;
}

ModelMatrix build_network_V(const Network& net) {
  if (net.components.empty()) throw std::invalid_argument("network has no components");
  std::set<std::string> seen;
  for (const auto& c : net.components) {
    for (const auto& p : c.triple.in_ports)
      if (!seen.insert("i:" + p.label).second)
        throw std::invalid_argument("duplicate input port label '" + p.label + "'");
    for (const auto& p : c.triple.out_ports)
      if (!seen.insert("o:" + p.label).second)
        throw std::invalid_argument("duplicate output port label '" + p.label + "'");
  }
  ModelMatrix v = build_V(net.components.front().triple);
  for (size_t i = 1; i < net.components.size(); ++i)
    v = concat(v, build_V(net.components[i].triple));
  return v;
}

AdjacencyMatrix adjacency(const Network& net) {
  AdjacencyMatrix eta;
  eta.dim_h = net.components.empty() ? 0 : net.components.front().triple.dim_h;
  eta.out_ports = internal_output_ports(net);
  eta.in_ports = internal_input_ports(net);

  std::vector<Eigen::Index> row_off(eta.out_ports.size() + 1, 0);
  for (size_t i = 0; i < eta.out_ports.size(); ++i)
    row_off[i + 1] = row_off[i] + eta.dim_h * eta.out_ports[i].mult;
  std::vector<Eigen::Index> col_off(eta.in_ports.size() + 1, 0);
  for (size_t i = 0; i < eta.in_ports.size(); ++i)
    col_off[i + 1] = col_off[i] + eta.dim_h * eta.in_ports[i].mult;

  eta.mat = Op(row_off.back(), col_off.back());
  for (const auto& e : net.internal_edges) {
    Eigen::Index ri = -1, ci = -1;
    for (size_t i = 0; i < eta.out_ports.size(); ++i)
      if (eta.out_ports[i].label == e.source) ri = static_cast<Eigen::Index>(i);
    for (size_t i = 0; i < eta.in_ports.size(); ++i)
      if (eta.in_ports[i].label == e.range) ci = static_cast<Eigen::Index>(i);
    if (ri < 0 || ci < 0)
      throw std::invalid_argument("edge " + e.source + " -> " + e.range +
                                  " references an unknown port");
    eta.mat.set_block(row_off[static_cast<size_t>(ri)], col_off[static_cast<size_t>(ci)],
                      Op::identity(eta.dim_h * eta.out_ports[static_cast<size_t>(ri)].mult));
  }
  return eta;
}

}  // namespace qnet
