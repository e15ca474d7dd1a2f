#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qnet/components.hpp"
#include "qnet/network.hpp"

namespace qnet {

// One problem found while parsing, with a JSON-pointer-style location.
struct ParseError {
  std::string path;
  std::string message;
};

struct NetlistComponent {
  std::string name;
  ComponentSpec spec;
};

// The netlist file format (format_version "1"): components, edges between
// "component.port" references, and options. Complex scalars are [re, im]
// pairs; matrices are row-major nested arrays. Edge delays are stored as
// annotations and ignored by every computation.
struct NetlistDocument {
  std::string format_version = "1";
  std::vector<NetlistComponent> components;
  std::vector<EdgeSpec> edges;
  double tol = 1e-10;
};

struct ParseResult {
  std::optional<NetlistDocument> doc;
  std::vector<ParseError> errors;
  bool ok() const { return doc.has_value() && errors.empty(); }
};

ParseResult parse_netlist(const std::string& text);

// Builds the Network, qualifying every port label as "name.port".
Network to_network(const NetlistDocument& doc);

// Byte-stable serialization (sorted keys, fixed float formatting);
// parse_netlist(serialize_netlist(d)) reproduces d exactly.
std::string serialize_netlist(const NetlistDocument& doc);

}  // namespace qnet
