#include "qnet/reduction.hpp"

#include <algorithm>
#include <set>

namespace qnet {

namespace {

std::vector<PortSpec> keep_ports(const std::vector<PortSpec>& ports,
                                 const std::set<std::string>& removed) {
  std::vector<PortSpec> out;
  for (const auto& p : ports)
    if (!removed.count(p.label)) out.push_back(p);
  return out;
}

// Shared assembly of every Mobius-type reduction: given the loop factor W
// and the internal block rows/columns in W's ordering, returns the model
// matrix over the surviving ports with blocks
// V[a,b] + V[a, int_in] W V[int_out, b].
ModelMatrix reduce_with_loop_factor(const ModelMatrix& v,
                                    const std::vector<Eigen::Index>& int_rows,
                                    const std::vector<Eigen::Index>& int_cols, const Op& w) {
  const std::set<Eigen::Index> row_set(int_rows.begin(), int_rows.end());
  const std::set<Eigen::Index> col_set(int_cols.begin(), int_cols.end());

  std::vector<Eigen::Index> rows{0}, cols{0};
  ModelMatrix out;
  out.dim_h = v.dim_h;
  for (Eigen::Index i = 1; i <= v.n_out(); ++i)
    if (!row_set.count(i)) {
      rows.push_back(i);
      out.out_ports.push_back(v.out_ports[static_cast<size_t>(i - 1)]);
    }
  for (Eigen::Index i = 1; i <= v.n_in(); ++i)
    if (!col_set.count(i)) {
      cols.push_back(i);
      out.in_ports.push_back(v.in_ports[static_cast<size_t>(i - 1)]);
    }
  out.mat = v.gather(rows, cols) + v.gather(rows, int_cols) * w * v.gather(int_rows, cols);
  return out;
}

Op loop_inverse(const Op& loop, double tol, const std::string& what, InverseDiagnostics* diag) {
  InverseDiagnostics local;
  try {
    Op w = inv_checked(loop, tol, &local);
    if (diag) *diag = local;
    return w;
  } catch (const SingularMatrix& e) {
    throw SingularLoop(what + ": " + e.what(), e.sigma_min);
  }
}

}  // namespace

ModelMatrix eliminate_edge(const ModelMatrix& v, const EdgeRef& e, double tol) {
  const Eigen::Index s0 = v.out_index(e.source);
  const Eigen::Index r0 = v.in_index(e.range);
  const Op vsr = v.block(s0, r0);
  if (vsr.rows() != vsr.cols())
    throw DimensionMismatch("edge " + e.source + " -> " + e.range +
                            " connects ports of different multiplicity");
  const Op w = loop_inverse(Op::identity(vsr.rows()) - vsr, tol,
                            "eliminating edge " + e.source + " -> " + e.range, nullptr);
  return reduce_with_loop_factor(v, {s0}, {r0}, w);
}

ModelMatrix feedback_reduce(const ModelMatrix& v, const EdgeRef& e, const Gain& x, double tol) {
  const Eigen::Index s0 = v.out_index(e.source);
  const Eigen::Index r0 = v.in_index(e.range);
  const Op vsr = v.block(s0, r0);
  if (x.x.rows() != vsr.cols() || x.x.cols() != vsr.rows())
    throw DimensionMismatch("gain must act on the edge space");
  const Op w = x.x * loop_inverse(Op::identity(vsr.rows()) - vsr * x.x, tol,
                                  "feedback through " + e.source + " -> " + e.range, nullptr);
  return reduce_with_loop_factor(v, {s0}, {r0}, w);
}

ModelMatrix eliminate_all(const ModelMatrix& v, const AdjacencyMatrix& eta, double tol,
                          InverseDiagnostics* diag) {
  if (eta.out_ports.empty()) {
    if (diag) *diag = InverseDiagnostics{};
    return v;
  }
  // internal blocks gathered in eta's port order, so eta.mat lines up
  std::vector<Eigen::Index> int_rows, int_cols;
  for (const auto& p : eta.out_ports) int_rows.push_back(v.out_index(p.label));
  for (const auto& p : eta.in_ports) int_cols.push_back(v.in_index(p.label));

  const Op vii = v.gather(int_rows, int_cols);
  if (eta.mat.rows() != vii.rows() || eta.mat.cols() != vii.cols())
    throw DimensionMismatch("adjacency matrix does not match the internal port dimensions");
  const Op w = loop_inverse(eta.mat - vii, tol, "eliminating all internal channels", diag);
  return reduce_with_loop_factor(v, int_rows, int_cols, w);
}

SLHTriple reduced_params(const SLHTriple& t, const AdjacencyMatrix& eta, double tol,
                         InverseDiagnostics* diag) {
  check_triple_structure(t);
  if (eta.out_ports.empty()) {
    if (diag) *diag = InverseDiagnostics{};
    return t;
  }
  std::set<std::string> int_out, int_in;
  for (const auto& p : eta.out_ports) int_out.insert(p.label);
  for (const auto& p : eta.in_ports) int_in.insert(p.label);

  const auto oshape = t.out_shape();
  const auto ishape = t.in_shape();
  auto gather_s = [&](const std::vector<Eigen::Index>& rows, const std::vector<Eigen::Index>& cols) {
    Eigen::Index nr = 0, nc = 0;
    for (auto r : rows) nr += oshape.dim(r);
    for (auto c : cols) nc += ishape.dim(c);
    Op out(nr, nc);
    Eigen::Index ro = 0;
    for (auto r : rows) {
      Eigen::Index co = 0;
      for (auto c : cols) {
        out.set_block(ro, co, t.S.block(oshape.offset(r), ishape.offset(c), oshape.dim(r), ishape.dim(c)));
        co += ishape.dim(c);
      }
      ro += oshape.dim(r);
    }
    return out;
  };
  auto gather_l = [&](const std::vector<Eigen::Index>& rows) {
    Eigen::Index nr = 0;
    for (auto r : rows) nr += oshape.dim(r);
    Op out(nr, t.dim_h);
    Eigen::Index ro = 0;
    for (auto r : rows) {
      out.set_block(ro, 0, t.L.block(oshape.offset(r), 0, oshape.dim(r), t.dim_h));
      ro += oshape.dim(r);
    }
    return out;
  };

  // internal ports in eta's order so eta.mat lines up; external in t's order
  std::vector<Eigen::Index> io, ii, eo, ei;
  for (const auto& p : eta.out_ports) io.push_back(t.out_index(p.label));
  for (const auto& p : eta.in_ports) ii.push_back(t.in_index(p.label));
  for (size_t i = 0; i < t.out_ports.size(); ++i)
    if (!int_out.count(t.out_ports[i].label)) eo.push_back(static_cast<Eigen::Index>(i));
  for (size_t i = 0; i < t.in_ports.size(); ++i)
    if (!int_in.count(t.in_ports[i].label)) ei.push_back(static_cast<Eigen::Index>(i));

  const Op s_ii = gather_s(io, ii);
  const Op s_ie = gather_s(io, ei);
  const Op s_ei = gather_s(eo, ii);
  const Op s_ee = gather_s(eo, ei);
  const Op l_i = gather_l(io);
  const Op l_e = gather_l(eo);

  if (eta.mat.rows() != s_ii.rows() || eta.mat.cols() != s_ii.cols())
    throw DimensionMismatch("adjacency matrix does not match the internal port dimensions");
  const Op w = loop_inverse(eta.mat - s_ii, tol, "reducing all internal channels", diag);

  SLHTriple r;
  r.dim_h = t.dim_h;
  r.in_ports = keep_ports(t.in_ports, int_in);
  r.out_ports = keep_ports(t.out_ports, int_out);
  r.S = s_ee + s_ei * w * s_ie;
  r.L = l_e + s_ei * w * l_i;
  r.H = t.H + im_op((dagger(l_i) * s_ii + dagger(l_e) * s_ei) * w * l_i);
  return r;
}

SLHTriple redheffer_star(const SLHTriple& a, const SLHTriple& b, double tol) {
  check_triple_structure(a);
  check_triple_structure(b);
  if (a.dim_h != b.dim_h)
    throw DimensionMismatch("star product requires a common system space");
  if (a.in_ports.size() != 2 || a.out_ports.size() != 2 || b.in_ports.size() != 2 ||
      b.out_ports.size() != 2)
    throw DimensionMismatch("star product expects two-input/two-output components");
  if (a.out_ports[1].mult != b.in_ports[0].mult || b.out_ports[0].mult != a.in_ports[1].mult)
    throw DimensionMismatch("star product: internal channel multiplicities must agree");

  // A's ports are (r1,r2|s1,s2), B's (r3,r4|s3,s4); channels s2->r3, s3->r2.
  const Op a11 = a.s_block(0, 0), a12 = a.s_block(0, 1), a21 = a.s_block(1, 0),
           a22 = a.s_block(1, 1);
  const Op b33 = b.s_block(0, 0), b34 = b.s_block(0, 1), b43 = b.s_block(1, 0),
           b44 = b.s_block(1, 1);
  const Op l1 = a.l_block(0), l2 = a.l_block(1), l3 = b.l_block(0), l4 = b.l_block(1);

  const Op id = Op::identity(a22.rows());
  Op w1, w2;  // (1 - S22A S33B)^{-1} and (1 - S33B S22A)^{-1}
  try {
    w1 = inv_checked(id - a22 * b33, tol);
    w2 = inv_checked(Op::identity(b33.rows()) - b33 * a22, tol);
  } catch (const SingularMatrix& e) {
    throw SingularLoop(std::string("star product loop is singular: ") + e.what(), e.sigma_min);
  }

  SLHTriple r;
  r.dim_h = a.dim_h;
  r.in_ports = {a.in_ports[0], b.in_ports[1]};
  r.out_ports = {a.out_ports[0], b.out_ports[1]};

  const Eigen::Index d = a.dim_h;
  const Eigen::Index m1o = d * a.out_ports[0].mult, m2o = d * b.out_ports[1].mult;
  const Eigen::Index m1i = d * a.in_ports[0].mult, m2i = d * b.in_ports[1].mult;

  r.S = Op(m1o + m2o, m1i + m2i);
  r.S.set_block(0, 0, a11 + a12 * b33 * w1 * a21);
  r.S.set_block(0, m1i, a12 * w1 * b34);
  r.S.set_block(m1o, 0, b43 * w1 * a21);
  r.S.set_block(m1o, m1i, b44 + b43 * w1 * a22 * b34);

  r.L = Op(m1o + m2o, d);
  r.L.set_block(0, 0, l1 + a12 * b33 * w1 * l2 + a12 * w1 * l3);
  r.L.set_block(m1o, 0, l4 + b43 * w1 * l2 + b43 * a22 * w1 * l3);

  r.H = a.H + b.H +
        im_op(dagger(l3) * w2 * l3 + dagger(l3) * w2 * b33 * l2 + dagger(l2) * w1 * a22 * l3 +
              dagger(l2) * w1 * l2 + dagger(l1) * a12 * w2 * l3 +
              dagger(l1) * a12 * w2 * b33 * l2 + dagger(l4) * b43 * w1 * a22 * l3 +
              dagger(l4) * b43 * w1 * l2);
  return r;
}

Op mobius(const Op& s, const Op& x, double tol) {
  const Eigen::Index n1 = x.rows();
  if (!x.square() || n1 > s.rows() || n1 > s.cols())
    throw DimensionMismatch("mobius: X must be square and fit the upper-left block of S");
  const Op a = s.block(0, 0, n1, n1);
  const Op b = s.block(0, n1, n1, s.cols() - n1);
  const Op c = s.block(n1, 0, s.rows() - n1, n1);
  const Op d = s.block(n1, n1, s.rows() - n1, s.cols() - n1);
  Op w;
  try {
    w = inv_checked(Op::identity(n1) - a * x, tol);
  } catch (const SingularMatrix& e) {
    throw SingularLoop(std::string("mobius: 1 - AX singular: ") + e.what(), e.sigma_min);
  }
  return d + c * x * w * b;
}

SiegelResiduals siegel_check(const Op& s, const Op& x, const Op& y, double tol) {
  const Eigen::Index n1 = x.rows();
  if (y.rows() != n1 || !x.square() || !y.square())
    throw DimensionMismatch("siegel_check: X and Y must be square of equal size");
  const Op a = s.block(0, 0, n1, n1);
  const Op b = s.block(0, n1, n1, s.cols() - n1);
  const Op c = s.block(n1, 0, s.rows() - n1, n1);
  const Op id1 = Op::identity(n1);
  const Op id2 = Op::identity(s.rows() - n1);

  const Op px = mobius(s, x, tol);
  const Op py = mobius(s, y, tol);

  Op wxa, way, wxa2, wady;
  try {
    wxa = inv_checked(id1 - dagger(x) * dagger(a), tol);
    way = inv_checked(id1 - a * y, tol);
    wxa2 = inv_checked(id1 - x * a, tol);
    wady = inv_checked(id1 - dagger(a) * dagger(y), tol);
  } catch (const SingularMatrix& e) {
    throw SingularLoop(std::string("siegel_check: loop factor singular: ") + e.what(),
                       e.sigma_min);
  }

  SiegelResiduals r;
  r.isometry = (dagger(px) * py - id2 - dagger(b) * wxa * (dagger(x) * y - id1) * way * b).max_abs();
  r.coisometry =
      (px * dagger(py) - id2 - c * wxa2 * (x * dagger(y) - id1) * wady * dagger(c)).max_abs();
  return r;
}

PathSumResult path_sum_reduce(const Network& net, int max_path_len, double tol) {
  const ModelMatrix v = build_network_V(net);
  const SLHTriple t = extract_slh(v);
  const AdjacencyMatrix eta = adjacency(net);

  PathSumResult result;
  if (eta.out_ports.empty()) {
    result.triple = t;
    result.loop_radius = 0;
    return result;
  }

  std::set<std::string> int_out, int_in;
  for (const auto& p : eta.out_ports) int_out.insert(p.label);
  for (const auto& p : eta.in_ports) int_in.insert(p.label);

  const auto oshape = t.out_shape();
  const auto ishape = t.in_shape();
  std::vector<Eigen::Index> io, ii, eo, ei;
  for (const auto& p : eta.out_ports) io.push_back(t.out_index(p.label));
  for (const auto& p : eta.in_ports) ii.push_back(t.in_index(p.label));
  for (size_t i = 0; i < t.out_ports.size(); ++i)
    if (!int_out.count(t.out_ports[i].label)) eo.push_back(static_cast<Eigen::Index>(i));
  for (size_t i = 0; i < t.in_ports.size(); ++i)
    if (!int_in.count(t.in_ports[i].label)) ei.push_back(static_cast<Eigen::Index>(i));

  auto gather = [&](const Op& m, const std::vector<Eigen::Index>& rows,
                    const std::vector<Eigen::Index>& cols, bool l_shape) {
    Eigen::Index nr = 0, nc = l_shape ? t.dim_h : 0;
    for (auto r : rows) nr += oshape.dim(r);
    if (!l_shape)
      for (auto c : cols) nc += ishape.dim(c);
    Op out(nr, nc);
    Eigen::Index ro = 0;
    for (auto r : rows) {
      if (l_shape) {
        out.set_block(ro, 0, m.block(oshape.offset(r), 0, oshape.dim(r), t.dim_h));
      } else {
        Eigen::Index co = 0;
        for (auto c : cols) {
          out.set_block(ro, co, m.block(oshape.offset(r), ishape.offset(c), oshape.dim(r), ishape.dim(c)));
          co += ishape.dim(c);
        }
      }
      ro += oshape.dim(r);
    }
    return out;
  };

  const Op s_ii = gather(t.S, io, ii, false);
  const Op s_ie = gather(t.S, io, ei, false);
  const Op s_ei = gather(t.S, eo, ii, false);
  const Op s_ee = gather(t.S, eo, ei, false);
  const Op l_i = gather(t.L, io, {}, true);
  const Op l_e = gather(t.L, eo, {}, true);

  // eta is a block permutation with 0/1 entries, so its inverse is the
  // exact transpose; no solve is involved anywhere in this route.
  const Op eta_inv = dagger(eta.mat);
  const Op loop = s_ii * eta_inv;

  const double rho = spectral_radius(loop);
  result.loop_radius = rho;
  if (rho >= 1.0 - tol)
    throw DivergentPathSum("loop spectral radius " + std::to_string(rho) +
                               " >= 1; the path series diverges (use the exact reduction)",
                           rho);

  // W = (eta - S_ii)^{-1} expanded as eta^{-1} sum_k (S_ii eta^{-1})^k.
  Op term = Op::identity(loop.rows());
  Op acc = term;
  int k = 0;
  double inc = term.max_abs();
  while (true) {
    term = loop * term;
    inc = term.max_abs();
    ++k;
    if (inc <= tol) break;
    if (k >= max_path_len)
      throw NonConvergent("path series did not reach tolerance " + std::to_string(tol) +
                              " within " + std::to_string(max_path_len) + " terms",
                          max_path_len, inc);
    acc = acc + term;
  }
  const Op w = eta_inv * acc;
  result.terms = k;
  result.last_increment = inc;

  SLHTriple r;
  r.dim_h = t.dim_h;
  r.in_ports = keep_ports(t.in_ports, int_in);
  r.out_ports = keep_ports(t.out_ports, int_out);
  r.S = s_ee + s_ei * w * s_ie;
  r.L = l_e + s_ei * w * l_i;
  r.H = t.H + im_op((dagger(l_i) * s_ii + dagger(l_e) * s_ei) * w * l_i);
  result.triple = r;
  return result;
}

std::vector<PathEntry> enumerate_paths(const Network& net, int max_len) {
  std::vector<PathEntry> out;
  std::set<std::string> int_out, int_in;
  for (const auto& e : net.internal_edges) {
    int_out.insert(e.source);
    int_in.insert(e.range);
  }
  auto edge_target = [&](const std::string& source) -> const std::string* {
    for (const auto& e : net.internal_edges)
      if (e.source == source) return &e.range;
    return nullptr;
  };

  struct Frame {
    std::string in_port;
    std::vector<std::string> ports;
    int length;
  };

  for (const auto& comp : net.components) {
    for (const auto& start : comp.triple.in_ports) {
      if (int_in.count(start.label)) continue;  // external inputs only
      std::vector<Frame> stack{{start.label, {start.label}, 0}};
      while (!stack.empty()) {
        Frame f = stack.back();
        stack.pop_back();
        // locate the component holding this input port
        const Component* owner = nullptr;
        for (const auto& c : net.components)
          for (const auto& p : c.triple.in_ports)
            if (p.label == f.in_port) owner = &c;
        if (!owner) continue;
        for (const auto& s : owner->triple.out_ports) {
          Frame g = f;
          g.ports.push_back(s.label);
          g.length = f.length + 1;
          if (!int_out.count(s.label)) {
            out.push_back({start.label, s.label, g.ports, g.length});
          } else if (g.length < max_len) {
            const std::string* next = edge_target(s.label);
            if (next) {
              g.ports.push_back(*next);
              g.in_port = *next;
              stack.push_back(std::move(g));
            }
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const PathEntry& a, const PathEntry& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    if (a.length != b.length) return a.length < b.length;
    return a.ports < b.ports;
  });
  return out;
}

}  // namespace qnet
