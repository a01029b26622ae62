#include "clb/oracles.hpp"

#include <cmath>
#include <sstream>

namespace clb {

namespace {

std::vector<Control> join(std::vector<Control> a, const std::vector<Control>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

void check_encodable(const LatticeModel& model) {
  if (model.id == ModelId::D3Q27)
    throw Unsupported("circuits are available for D1Q3 and D2Q9 only; D3Q27 supports "
                      "analytic success probabilities");
}

}  // namespace

std::vector<int> register_qubits(const RegisterLayout& layout, const std::string& name) {
  const Register& r = layout.reg(name);
  std::vector<int> q(r.width);
  for (int i = 0; i < r.width; ++i) q[i] = r.offset + i;
  return q;
}

EncodingData make_encoding(const LatticeModel& model, double omega, const Grid& grid) {
  check_encodable(model);
  require(std::isfinite(omega) && omega >= 0 && omega < 2,
          "encoding: omega must lie in [0, 2)");
  EncodingData d{model, grid, omega, collision_matrices(model, omega), 1.0,
                 carleman_layout(model, grid)};
  d.gamma = relaxation_gamma(d.collision);
  const Index b = model.velocity_count();
  const Index mm = Index{1} << d.layout.reg("m").width;
  const Index ww = Index{1} << d.layout.reg("v1").width;
  require(b * b <= mm - ww && b + b * b <= mm, "encoding: m register too narrow");
  return d;
}

EncodingData make_encoding(const CarlemanSystem& system) {
  return make_encoding(system.model, system.omega, system.grid);
}

void append_increment(Circuit& c, const std::vector<int>& reg, const std::vector<Control>& extra) {
  for (int i = static_cast<int>(reg.size()) - 1; i >= 0; --i) {
    std::vector<Control> ctl;
    for (int j = 0; j < i; ++j) ctl.push_back({reg[j], 1});
    c.add({GateKind::X, {reg[i]}, join(ctl, extra), 0});
  }
}

void append_decrement(Circuit& c, const std::vector<int>& reg, const std::vector<Control>& extra) {
  for (int i = 0; i < static_cast<int>(reg.size()); ++i) {
    std::vector<Control> ctl;
    for (int j = 0; j < i; ++j) ctl.push_back({reg[j], 1});
    c.add({GateKind::X, {reg[i]}, join(ctl, extra), 0});
  }
}

void append_add(Circuit& c, const std::vector<int>& reg, std::uint64_t n,
                const std::vector<Control>& extra) {
  for (std::size_t j = 0; j < reg.size(); ++j)
    if ((n >> j) & 1) append_increment(c, std::vector<int>(reg.begin() + j, reg.end()), extra);
}

void append_comparator(Circuit& c, const std::vector<int>& x, const std::vector<int>& y, int eq,
                       const std::vector<Control>& extra) {
  require(x.size() == y.size(), "comparator: registers differ in width");
  for (std::size_t k = 0; k < x.size(); ++k) c.add({GateKind::X, {y[k]}, {{x[k], 1}}, 0});
  std::vector<Control> ctl;
  for (int q : y) ctl.push_back({q, 0});
  c.add({GateKind::X, {eq}, join(ctl, extra), 0});
  for (std::size_t k = 0; k < x.size(); ++k) c.add({GateKind::X, {y[k]}, {{x[k], 1}}, 0});
}

void append_transposition(Circuit& c, const std::vector<int>& reg, std::uint64_t a,
                          std::uint64_t b, const std::vector<Control>& extra) {
  if (a == b) return;
  const std::uint64_t diff = a ^ b;
  int k = 0;
  while (!((diff >> k) & 1)) ++k;
  const int bk = static_cast<int>((b >> k) & 1);
  auto fold = [&] {
    for (std::size_t j = 0; j < reg.size(); ++j)
      if (static_cast<int>(j) != k && ((diff >> j) & 1))
        c.add({GateKind::X, {reg[j]}, {{reg[k], bk}}, 0});
  };
  fold();
  std::vector<Control> ctl;
  for (std::size_t j = 0; j < reg.size(); ++j)
    if (static_cast<int>(j) != k) ctl.push_back({reg[j], static_cast<int>((a >> j) & 1)});
  c.add({GateKind::X, {reg[k]}, join(ctl, extra), 0});
  fold();
}

void append_permutation(Circuit& c, const std::vector<int>& reg,
                        const std::vector<std::uint64_t>& perm,
                        const std::vector<Control>& extra) {
  const std::size_t dim = std::size_t{1} << reg.size();
  require(perm.size() == dim, "permutation: size must be 2^width");
  std::vector<bool> seen(dim, false);
  for (auto v : perm) {
    require(v < dim && !seen[v], "permutation: not a bijection");
    seen[v] = true;
  }
  std::fill(seen.begin(), seen.end(), false);
  for (std::size_t s = 0; s < dim; ++s) {
    if (seen[s]) continue;
    std::vector<std::uint64_t> cycle;
    for (std::uint64_t k = s; !seen[k]; k = perm[k]) {
      seen[k] = true;
      cycle.push_back(k);
    }
    for (std::size_t i = cycle.size(); i-- > 1;)
      append_transposition(c, reg, cycle[i - 1], cycle[i], extra);
  }
}

Circuit shift_operator(int width, std::uint64_t n) {
  require(width >= 1, "shift_operator: width must be positive");
  require(width >= 64 || n < (std::uint64_t{1} << width), "shift_operator: n must be < 2^width");
  Circuit c{RegisterLayout({{"k", width}}), {}, "shift", {{"n", std::to_string(n)}}};
  append_add(c, register_qubits(c.layout, "k"), n, {});
  return c;
}

Circuit comparator(int width) {
  require(width >= 0, "comparator: width must be non-negative");
  Circuit c{RegisterLayout({{"x", width}, {"y", width}, {"eq", 1}}), {}, "comparator", {}};
  append_comparator(c, register_qubits(c.layout, "x"), register_qubits(c.layout, "y"),
                    c.layout.qubit("eq", 0), {});
  return c;
}

namespace {

Circuit empty_circuit(const EncodingData& d, const std::string& name) {
  Circuit c{d.layout, {}, name, {}};
  c.parameters["model"] = std::string(to_string(d.model.id));
  c.parameters["omega"] = fmt(d.omega);
  c.parameters["sites"] = std::to_string(d.grid.sites());
  c.parameters["gamma"] = fmt(d.gamma);
  return c;
}

struct Widths {
  int b, m, w;
  std::uint64_t b_first;  // first m-value of the coupling branch
};

Widths widths(const EncodingData& d) {
  const int m = d.layout.reg("m").width;
  const int w = d.layout.reg("v1").width;
  return {d.model.velocity_count(), m, w, (std::uint64_t{1} << m) - (std::uint64_t{1} << w)};
}

std::vector<std::uint64_t> cyclic_shift(int b, int w, int n) {
  std::vector<std::uint64_t> perm(std::size_t{1} << w);
  for (std::size_t k = 0; k < perm.size(); ++k)
    perm[k] = k < static_cast<std::size_t>(b) ? (k + n) % b : k;
  return perm;
}

}  // namespace

Circuit value_oracle(const EncodingData& d) {
  Circuit c = empty_circuit(d, "value_oracle");
  const auto [b, m, w, b_first] = widths(d);
  const auto& A = d.collision.linear;
  const auto& B = d.collision.quadratic;
  const int a = d.layout.qubit("a", 0);
  const auto& L = d.layout;
  c.add({GateKind::X, {a}, {}, 0});
  auto rotate = [&](double v, std::vector<Control> ctl) {
    const double x = v / d.gamma;
    if (std::abs(x) > 1.0 + 1e-12)
      throw InvalidInput("value_oracle: entry " + fmt(v) + " exceeds gamma " + fmt(d.gamma));
    if (v == 0) return;
    c.add({GateKind::RY, {a}, std::move(ctl), -2.0 * std::asin(std::clamp(x, -1.0, 1.0))});
  };
  for (int n = 0; n < b; ++n)
    for (int q = 0; q < b; ++q)
      rotate(A((q + n) % b, q),
             join(join(controls_for(L, "m", n), controls_for(L, "tau", 0)), controls_for(L, "v1", q)));
  for (int n = 0; n < b * b; ++n) {
    const int n1 = n / b, n2 = n % b;
    for (int q = 0; q < b; ++q)
      for (int r = 0; r < b; ++r)
        rotate(A((q + n1) % b, q) * A((r + n2) % b, r),
               join(join(join(controls_for(L, "m", n), controls_for(L, "tau", 1)),
                         controls_for(L, "v1", q)),
                    controls_for(L, "v2", r)));
  }
  for (int t = 0; t < b; ++t)
    for (int q = 0; q < b; ++q)
      for (int r = 0; r < b; ++r)
        rotate(B(t, q * b + r),
               join(join(join(join(controls_for(L, "m", b_first + t), controls_for(L, "tau", 1)),
                              controls_for(L, "v1", q)),
                         controls_for(L, "v2", r)),
                    controls_for(L, "eq", 1)));
  return c;
}

Circuit position_oracle(const EncodingData& d) {
  Circuit c = empty_circuit(d, "position_oracle");
  const auto [b, m, w, b_first] = widths(d);
  const auto& L = d.layout;
  const auto v1 = register_qubits(L, "v1");
  const auto v2 = register_qubits(L, "v2");
  const auto x = register_qubits(L, "x");
  const auto y = register_qubits(L, "y");
  const auto mq = register_qubits(L, "m");
  const int tau = L.qubit("tau", 0);
  const int eq = L.qubit("eq", 0);

  // Column (q) -> row (q + n) mod b for the diagonal blocks.
  for (int n = 1; n < b; ++n)
    append_permutation(c, v1, cyclic_shift(b, w, n),
                       join(controls_for(L, "m", n), controls_for(L, "tau", 0)));
  for (int n = 1; n < b * b; ++n) {
    const auto ctl = join(controls_for(L, "m", n), controls_for(L, "tau", 1));
    if (n / b) append_permutation(c, v1, cyclic_shift(b, w, n / b), ctl);
    if (n % b) append_permutation(c, v2, cyclic_shift(b, w, n % b), ctl);
  }

  // Coupling branch: clear y (= x there), then rewire (m, tau, v1, v2, eq).
  std::vector<Control> top;
  for (int i = w; i < m; ++i) top.push_back({mq[i], 1});
  for (std::size_t k = 0; k < y.size(); ++k)
    c.add({GateKind::X, {y[k]}, join({{x[k], 1}, {tau, 1}, {eq, 1}}, top), 0});

  std::vector<int> set_reg = mq;
  set_reg.push_back(tau);
  set_reg.insert(set_reg.end(), v1.begin(), v1.end());
  set_reg.insert(set_reg.end(), v2.begin(), v2.end());
  set_reg.push_back(eq);
  auto pack = [&](std::uint64_t mv, std::uint64_t t, std::uint64_t p, std::uint64_t q,
                  std::uint64_t e) {
    return mv | t << m | p << (m + 1) | q << (m + 1 + w) | e << (m + 1 + 2 * w);
  };
  for (int t = 0; t < b; ++t)
    for (int q = 0; q < b; ++q)
      for (int r = 0; r < b; ++r)
        if (d.collision.quadratic(t, q * b + r) != 0)
          append_transposition(c, set_reg, pack(b_first + t, 1, q, r, 1),
                               pack(b + q * b + r, 0, t, 0, 0), {});

  append_comparator(c, x, y, eq, {{tau, 1}});
  return c;
}

Circuit assemble_block_encoding(const EncodingData& d) {
  Circuit c = empty_circuit(d, "block_encoding");
  const auto mq = register_qubits(d.layout, "m");
  for (int q : mq) c.add({GateKind::H, {q}, {}, 0});
  append_comparator(c, register_qubits(d.layout, "x"), register_qubits(d.layout, "y"),
                    d.layout.qubit("eq", 0), {{d.layout.qubit("tau", 0), 1}});
  c.append(value_oracle(d));
  c.append(position_oracle(d));
  for (int q : mq) c.add({GateKind::H, {q}, {}, 0});
  return c;
}

Circuit streaming_circuit(const LatticeModel& model, const Grid& grid, bool allow_padding) {
  check_encodable(model);
  require(grid.dimension() == model.dimension, "streaming_circuit: grid/model dimension mismatch");
  const auto q = axis_qubits(grid);
  for (std::size_t a = 0; a < q.size(); ++a)
    if ((1 << q[a]) != grid.dims()[a] && !allow_padding)
      throw InvalidInput("streaming_circuit: axis length " + std::to_string(grid.dims()[a]) +
                         " is not a power of two (enable padding to embed it)");
  Circuit c{carleman_layout(model, grid), {}, "streaming", {}};
  c.parameters["model"] = std::string(to_string(model.id));
  c.parameters["sites"] = std::to_string(grid.sites());
  const auto& L = c.layout;
  const auto x = register_qubits(L, "x");
  const auto y = register_qubits(L, "y");
  for (int p = 0; p < model.velocity_count(); ++p) {
    int offset = 0;
    for (int a = 0; a < model.dimension; ++a) {
      const int cp = model.velocities(p, a);
      if (cp != 0 && q[a] > 0) {
        const std::vector<int> xs(x.begin() + offset, x.begin() + offset + q[a]);
        const std::vector<int> ys(y.begin() + offset, y.begin() + offset + q[a]);
        const auto cx = controls_for(L, "v1", p);
        const auto cy = join(controls_for(L, "tau", 1), controls_for(L, "v2", p));
        if (cp > 0) {
          append_increment(c, xs, cx);
          append_increment(c, ys, cy);
        } else {
          append_decrement(c, xs, cx);
          append_decrement(c, ys, cy);
        }
      }
      offset += q[a];
    }
  }
  return c;
}

}  // namespace clb
