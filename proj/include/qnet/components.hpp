#pragma once

#include "qnet/network.hpp"
#include "qnet/slh.hpp"

namespace qnet {

// Single-mode cavity truncated to d Fock levels: S = I, L = sqrt(gamma) a,
// H = h0. One input and one output port of multiplicity 1.
SLHTriple cavity(double gamma, int d, const Op& h0);
SLHTriple cavity(double gamma, int d);

// Static beam splitter T in U(2), carried over a d-dimensional system
// factor: S = kron(T, I_d), L = 0, H = 0. Two inputs, two outputs.
SLHTriple beam_splitter(const Op& t, int d);

// Identity component: S = I, L = 0, H = 0 over the given channel count.
SLHTriple passthrough(int d, int channels = 1);

// Hamiltonian-only component with a single passthrough port.
SLHTriple static_hamiltonian(const Op& h);

// Netlist-level component description; build_component turns it into a
// triple with canonical port labels (in1, in2, ... / out1, out2, ...).
struct ComponentSpec {
  enum class Kind { cavity, beam_splitter, passthrough, static_hamiltonian, custom };
  Kind kind = Kind::custom;
  int dim = 1;         // system dimension for factory kinds
  double gamma = 0;    // cavity
  int channels = 1;    // passthrough
  Op t;                // beam splitter
  Op h0;               // cavity detuning / static Hamiltonian (optional)
  SLHTriple custom;    // custom kind carries the full triple
};

SLHTriple build_component(const ComponentSpec& spec);

// Copy of the triple with every port label prefixed "name.".
SLHTriple with_qualified_ports(const SLHTriple& t, const std::string& name);

// Beam-splitter feedback loop: plant in-loop behind a splitter, internal
// channels bs.out2 -> plant-in and plant-out -> bs.in2.
Network figure6_network(const SLHTriple& plant, const Op& t);

// Crossed feedback of two 2-in/2-out components:
// A.out2 -> B.in1 and B.out1 -> A.in2; eliminating both channels gives the
// Redheffer star product.
Network figure7_network(const SLHTriple& a, const SLHTriple& b);

}  // namespace qnet
