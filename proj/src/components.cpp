#include "qnet/components.hpp"

namespace qnet {

SLHTriple cavity(double gamma, int d, const Op& h0) {
  if (gamma < 0) throw std::invalid_argument("cavity: decay rate must be non-negative");
  if (d < 2) throw std::invalid_argument("cavity: truncation dimension must be >= 2");
  if (h0.rows() != d || h0.cols() != d)
    throw DimensionMismatch("cavity: h0 must be d x d");
  if (!is_hermitian(h0, 1e-12))
    throw std::invalid_argument("cavity: h0 must be self-adjoint");
  SLHTriple t;
  t.dim_h = d;
  t.in_ports = {{"in1", 1}};
  t.out_ports = {{"out1", 1}};
  t.S = Op::identity(d);
  t.L = std::sqrt(gamma) * annihilator(d);
  t.H = h0;
  return t;
}

SLHTriple cavity(double gamma, int d) { return cavity(gamma, d, Op(d, d)); }

SLHTriple beam_splitter(const Op& t, int d) {
  if (t.rows() != 2 || t.cols() != 2) throw DimensionMismatch("beam splitter: T must be 2x2");
  if (!is_unitary(t, 1e-10))
    throw std::invalid_argument("beam splitter: T must be unitary");
  if (d < 1) throw std::invalid_argument("beam splitter: system dimension must be >= 1");
  SLHTriple out;
  out.dim_h = d;
  out.in_ports = {{"in1", 1}, {"in2", 1}};
  out.out_ports = {{"out1", 1}, {"out2", 1}};
  out.S = kron(t, Op::identity(d));
  out.L = Op(2 * d, d);
  out.H = Op(d, d);
  return out;
}

SLHTriple passthrough(int d, int channels) {
  if (d < 1 || channels < 1)
    throw std::invalid_argument("passthrough: dimension and channel count must be >= 1");
  SLHTriple t;
  t.dim_h = d;
  for (int c = 1; c <= channels; ++c) {
    t.in_ports.push_back({"in" + std::to_string(c), 1});
    t.out_ports.push_back({"out" + std::to_string(c), 1});
  }
  t.S = Op::identity(d * channels);
  t.L = Op(d * channels, d);
  t.H = Op(d, d);
  return t;
}

SLHTriple static_hamiltonian(const Op& h) {
  if (!h.square() || h.rows() < 1)
    throw DimensionMismatch("static_hamiltonian: H must be square");
  if (!is_hermitian(h, 1e-12))
    throw std::invalid_argument("static_hamiltonian: H must be self-adjoint");
  SLHTriple t;
  t.dim_h = static_cast<int>(h.rows());
  t.in_ports = {{"in1", 1}};
  t.out_ports = {{"out1", 1}};
  t.S = Op::identity(t.dim_h);
  t.L = Op(t.dim_h, t.dim_h);
  t.H = h;
  return t;
}

SLHTriple build_component(const ComponentSpec& spec) {
  switch (spec.kind) {
    case ComponentSpec::Kind::cavity:
      return spec.h0.empty() ? cavity(spec.gamma, spec.dim) : cavity(spec.gamma, spec.dim, spec.h0);
    case ComponentSpec::Kind::beam_splitter:
      return beam_splitter(spec.t, spec.dim);
    case ComponentSpec::Kind::passthrough:
      return passthrough(spec.dim, spec.channels);
    case ComponentSpec::Kind::static_hamiltonian:
      return static_hamiltonian(spec.h0);
    case ComponentSpec::Kind::custom:
      check_triple_structure(spec.custom);
      return spec.custom;
  }
  throw std::invalid_argument("unknown component kind");
}

SLHTriple with_qualified_ports(const SLHTriple& t, const std::string& name) {
  SLHTriple out = t;
  for (auto& p : out.in_ports) p.label = name + "." + p.label;
  for (auto& p : out.out_ports) p.label = name + "." + p.label;
  return out;
}

Network figure6_network(const SLHTriple& plant, const Op& t) {
  check_triple_structure(plant);
  if (plant.in_ports.size() != 1 || plant.out_ports.size() != 1)
    throw std::invalid_argument("figure6: plant must have a single input and output port");
  const SLHTriple bs = beam_splitter(t, plant.dim_h);
  Network net;
  net.components.push_back({"bs", with_qualified_ports(bs, "bs")});
  net.components.push_back({"plant", with_qualified_ports(plant, "plant")});
  const std::string plant_in = net.components[1].triple.in_ports[0].label;
  const std::string plant_out = net.components[1].triple.out_ports[0].label;
  net.internal_edges.push_back({"bs.out2", plant_in, std::nullopt});
  net.internal_edges.push_back({plant_out, "bs.in2", std::nullopt});
  return net;
}

Network figure7_network(const SLHTriple& a, const SLHTriple& b) {
  check_triple_structure(a);
  check_triple_structure(b);
  if (a.in_ports.size() != 2 || a.out_ports.size() != 2 || b.in_ports.size() != 2 ||
      b.out_ports.size() != 2)
    throw std::invalid_argument("figure7: both components must be two-input/two-output");
  if (a.out_ports[1].mult != b.in_ports[0].mult || b.out_ports[0].mult != a.in_ports[1].mult)
    throw std::invalid_argument("figure7: internal channel multiplicities must agree");
  Network net;
  net.components.push_back({"A", with_qualified_ports(a, "A")});
  net.components.push_back({"B", with_qualified_ports(b, "B")});
  const auto& at = net.components[0].triple;
  const auto& bt = net.components[1].triple;
  net.internal_edges.push_back({at.out_ports[1].label, bt.in_ports[0].label, std::nullopt});
  net.internal_edges.push_back({bt.out_ports[0].label, at.in_ports[1].label, std::nullopt});
  return net;
}

}  // namespace qnet
