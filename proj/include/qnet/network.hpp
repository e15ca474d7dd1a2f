#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnet/slh.hpp"

namespace qnet {

// Directed internal channel from an output port to an input port.
// The delay is geometric annotation only; every computation here lives in
// the zero time-delay limit.
struct EdgeSpec {
  std::string source;  // output port label
  std::string range;   // input port label
  std::optional<double> delay;
};

struct Component {
  std::string name;
  SLHTriple triple;
};

// A quantum network: components with SLH triples over a common system
// space, plus the bijection between internal output and input ports.
// External ports are the complements of the connected ones.
struct Network {
  std::vector<Component> components;
  std::vector<EdgeSpec> internal_edges;
};

struct PortLocation {
  size_t component = 0;
  Eigen::Index port = 0;
  PortSpec spec;
};

std::optional<PortLocation> find_output_port(const Network& net, const std::string& label);
std::optional<PortLocation> find_input_port(const Network& net, const std::string& label);

// Internal port lists in declaration order (component order, then port
// order within the component).
std::vector<PortSpec> internal_output_ports(const Network& net);
std::vector<PortSpec> internal_input_ports(const Network& net);
std::vector<PortSpec> external_input_ports(const Network& net);
std::vector<PortSpec> external_output_ports(const Network& net);

// Structural validation; empty result iff the network invariants hold.
// Each violation names the offending port or edge and the violated rule.
std::vector<std::string> validate(const Network& net);

// Network model matrix: left-fold of concatenation over the components in
// declaration order. Throws on dim_h mismatch or duplicate port labels.
ModelMatrix build_network_V(const Network& net);

// Unitary 0/1 block matrix recording which internal output feeds which
// internal input; rows are internal output ports, columns internal input
// ports, both in declaration order. Blocks are sized dim_h * mult.
struct AdjacencyMatrix {
  int dim_h = 0;
  std::vector<PortSpec> out_ports;  // internal outputs (rows)
  std::vector<PortSpec> in_ports;   // internal inputs (columns)
  Op mat;
};

AdjacencyMatrix adjacency(const Network& net);

}  // namespace qnet
