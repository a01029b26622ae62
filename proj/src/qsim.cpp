#include "clb/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <unordered_set>

namespace clb {

StateVector StateVector::basis(int qubits, std::uint64_t index) {
  require(qubits >= 0 && qubits <= kMaxStateQubits,
          "state vector: " + std::to_string(qubits) + " qubits exceeds the cap of " +
              std::to_string(kMaxStateQubits));
  require(index < (std::uint64_t{1} << qubits), "state vector: basis index out of range");
  StateVector s{qubits, Eigen::VectorXcd::Zero(Index{1} << qubits)};
  s.amplitudes(static_cast<Index>(index)) = 1.0;
  return s;
}

namespace {

// Spreads the bits of `i` over the positions not in `fixed` (sorted ascending).
inline std::uint64_t deposit(std::uint64_t i, const std::vector<int>& fixed) {
  for (int p : fixed) {
    const std::uint64_t low = i & ((std::uint64_t{1} << p) - 1);
    i = ((i >> p) << (p + 1)) | low;
  }
  return i;
}

}  // namespace

void apply_gate(const Gate& g, StateVector& s) {
  std::vector<int> fixed;
  std::uint64_t set_bits = 0;
  for (int t : g.targets) {
    require(t >= 0 && t < s.qubits, "apply: target qubit out of range");
    fixed.push_back(t);
  }
  for (const auto& c : g.controls) {
    require(c.qubit >= 0 && c.qubit < s.qubits, "apply: control qubit out of range");
    fixed.push_back(c.qubit);
    if (c.value) set_bits |= std::uint64_t{1} << c.qubit;
  }
  std::sort(fixed.begin(), fixed.end());
  require(std::adjacent_find(fixed.begin(), fixed.end()) == fixed.end(),
          "apply: gate touches a qubit twice");
  const std::uint64_t count = std::uint64_t{1} << (s.qubits - static_cast<int>(fixed.size()));
  Amplitude* amp = s.amplitudes.data();
  const std::uint64_t t0 = std::uint64_t{1} << g.targets[0];
  switch (g.kind) {
    case GateKind::X:
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t b = deposit(i, fixed) | set_bits;
        std::swap(amp[b], amp[b | t0]);
      }
      break;
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t b = deposit(i, fixed) | set_bits;
        const Amplitude u = amp[b], v = amp[b | t0];
        amp[b] = r * (u + v);
        amp[b | t0] = r * (u - v);
      }
      break;
    }
    case GateKind::RY: {
      const double c = std::cos(0.5 * g.theta), sn = std::sin(0.5 * g.theta);
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t b = deposit(i, fixed) | set_bits;
        const Amplitude u = amp[b], v = amp[b | t0];
        amp[b] = c * u - sn * v;
        amp[b | t0] = sn * u + c * v;
      }
      break;
    }
    case GateKind::SWAP: {
      const std::uint64_t t1 = std::uint64_t{1} << g.targets[1];
      for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t b = deposit(i, fixed) | set_bits;
        std::swap(amp[b | t0], amp[b | t1]);
      }
      break;
    }
  }
}

void apply(const Circuit& c, StateVector& s) {
  require(c.layout.qubits() == s.qubits, "apply: circuit has " +
                                             std::to_string(c.layout.qubits()) +
                                             " qubits, state has " + std::to_string(s.qubits));
  for (const auto& g : c.gates) apply_gate(g, s);
}

StateVector apply(const Circuit& c, const StateVector& s) {
  StateVector out = s;
  apply(c, out);
  return out;
}

PostSelectResult post_select(const StateVector& s, const std::vector<Control>& outcome) {
  std::vector<int> fixed;
  std::uint64_t set_bits = 0;
  for (const auto& c : outcome) {
    require(c.qubit >= 0 && c.qubit < s.qubits, "post_select: qubit out of range");
    fixed.push_back(c.qubit);
    if (c.value) set_bits |= std::uint64_t{1} << c.qubit;
  }
  std::sort(fixed.begin(), fixed.end());
  require(std::adjacent_find(fixed.begin(), fixed.end()) == fixed.end(),
          "post_select: qubit listed twice");
  const int kept = s.qubits - static_cast<int>(fixed.size());
  PostSelectResult r;
  r.conditional_state = StateVector{kept, Eigen::VectorXcd::Zero(Index{1} << kept)};
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << kept); ++i) {
    const Amplitude a = s.amplitudes(static_cast<Index>(deposit(i, fixed) | set_bits));
    r.conditional_state.amplitudes(static_cast<Index>(i)) = a;
    r.probability += std::norm(a);
  }
  if (r.probability > 0) r.conditional_state.amplitudes /= std::sqrt(r.probability);
  return r;
}

std::vector<std::uint64_t> encoded_indices(const RegisterLayout& layout,
                                           const LatticeModel& model, const Grid& grid) {
  const int b = model.velocity_count();
  const Index n = grid.sites();
  const CarlemanLayout cl{b, n};
  require(layout.reg("v1").width >= 1 && (Index{1} << layout.reg("v1").width) >= b,
          "encoding: velocity register too narrow");
  std::vector<std::uint64_t> code(n);
  for (Index x = 0; x < n; ++x) code[x] = site_code(grid, x);
  const int tau = layout.reg("tau").offset, v1 = layout.reg("v1").offset,
            v2 = layout.reg("v2").offset, xo = layout.reg("x").offset,
            yo = layout.reg("y").offset;
  std::vector<std::uint64_t> idx(cl.size());
  for (int p = 0; p < b; ++p)
    for (Index x = 0; x < n; ++x)
      idx[cl.first(p, x)] = std::uint64_t(p) << v1 | code[x] << xo;
  for (int p = 0; p < b; ++p)
    for (int q = 0; q < b; ++q)
      for (Index x = 0; x < n; ++x)
        for (Index y = 0; y < n; ++y)
          idx[cl.second(p, q, x, y)] = std::uint64_t{1} << tau | std::uint64_t(p) << v1 |
                                       std::uint64_t(q) << v2 | code[x] << xo | code[y] << yo;
  return idx;
}

EncodedState encode_carleman_state(const CarlemanState& f, const RegisterLayout& layout,
                                   const LatticeModel& model, const Grid& grid) {
  const Eigen::VectorXd v = f.stacked();
  const auto idx = encoded_indices(layout, model, grid);
  require(static_cast<Index>(idx.size()) == v.size(),
          "encode: state size does not match the layout");
  const double norm = v.norm();
  require(norm > 0 && std::isfinite(norm), "encode: state has zero or non-finite norm");
  EncodedState e{StateVector::basis(layout.qubits(), 0), norm};
  e.state.amplitudes.setZero();
  for (std::size_t i = 0; i < idx.size(); ++i)
    e.state.amplitudes(static_cast<Index>(idx[i])) = v(static_cast<Index>(i)) / norm;
  return e;
}

CarlemanState decode_carleman_state(const EncodedState& e, const RegisterLayout& layout,
                                    const LatticeModel& model, const Grid& grid) {
  const auto idx = encoded_indices(layout, model, grid);
  const CarlemanLayout cl{model.velocity_count(), grid.sites()};
  Eigen::VectorXd v(cl.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    v(static_cast<Index>(i)) = e.state.amplitudes(static_cast<Index>(idx[i])).real() * e.norm;
  CarlemanState s;
  s.first_order = v.head(cl.first_order_size());
  s.second_order = v.tail(cl.second_order_size());
  return s;
}

BlockExtraction extract_block(const Circuit& c, const std::vector<std::uint64_t>& basis,
                              const std::vector<Control>& post_selected) {
  const int n = c.layout.qubits();
  if (n > kMaxBlockQubits)
    throw ResourceLimit("extract_block: " + std::to_string(n) + " qubits needs " +
                        std::to_string((std::uint64_t{16} << n) >> 20) +
                        " MiB per column; the cap is " + std::to_string(kMaxBlockQubits) +
                        " qubits");
  std::uint64_t mask = 0, want = 0;
  for (const auto& p : post_selected) {
    mask |= std::uint64_t{1} << p.qubit;
    if (p.value) want |= std::uint64_t{1} << p.qubit;
  }
  const Index k = static_cast<Index>(basis.size());
  BlockExtraction out{Eigen::MatrixXcd::Zero(k, k), 0.0};
  for (Index j = 0; j < k; ++j) {
    StateVector s = StateVector::basis(n, basis[j]);
    apply(c, s);
    double kept = 0, inside = 0;
    for (Index i = 0; i < k; ++i) {
      out.block(i, j) = s.amplitudes(static_cast<Index>(basis[i]));
      inside += std::norm(out.block(i, j));
    }
    for (Index i = 0; i < s.amplitudes.size(); ++i)
      if ((std::uint64_t(i) & mask) == want) kept += std::norm(s.amplitudes(i));
    out.max_leakage = std::max(out.max_leakage, kept - inside);
  }
  return out;
}

int index_register_width(const LatticeModel& model) {
  const Index s = Index(model.velocity_count()) * model.velocity_count();
  int m = 0;
  while ((Index{1} << m) < s) ++m;
  return m;
}

double success_probability_sim(const Circuit& block_encoding, const DistributionField& input) {
  const RegisterLayout& L = block_encoding.layout;
  const EncodedState e = encode_carleman_state(lift(input), L, input.model, input.grid);
  StateVector s = e.state;
  apply(block_encoding, s);
  std::vector<Control> sel = controls_for(L, "a", 0);
  const auto m = controls_for(L, "m", 0);
  sel.insert(sel.end(), m.begin(), m.end());
  return post_select(s, sel).probability;
}

double success_probability_analytic(const CarlemanSystem& system, const DistributionField& input) {
  const Eigen::VectorXd psi = lift(input).stacked();
  const double norm = psi.norm();
  require(norm > 0, "success probability: zero input");
  require(psi.size() == system.relaxation.cols(), "success probability: size mismatch");
  const Eigen::VectorXd y = system.relaxation * (psi / norm) / system.gamma;
  return y.squaredNorm() / std::ldexp(1.0, 2 * index_register_width(system.model));
}

double success_probability_factored(const DistributionField& input, double omega) {
  const LatticeModel& model = input.model;
  const int b = model.velocity_count();
  const CollisionMatrices cm = collision_matrices(model, omega);
  const double gamma = relaxation_gamma(cm);
  double first = 0, linear = 0, mass = 0;
  Eigen::VectorXd ff(b * b);
  for (Index x = 0; x < input.grid.sites(); ++x) {
    const Eigen::VectorXd f = input.values.row(x).transpose();
    for (int q = 0; q < b; ++q)
      for (int r = 0; r < b; ++r) ff(q * b + r) = f(q) * f(r);
    const Eigen::VectorXd af = cm.linear * f;
    first += (af + cm.quadratic * ff).squaredNorm();
    linear += af.squaredNorm();
    mass += f.squaredNorm();
  }
  require(mass > 0, "success probability: zero input");
  const double num = first + linear * linear;
  const double den = mass + mass * mass;
  return num / (gamma * gamma * den) / std::ldexp(1.0, 2 * index_register_width(model));
}

std::string_view to_string(InitKind k) {
  return k == InitKind::uniform ? "uniform" : "equilibrium";
}

InitKind parse_init_kind(std::string_view s) {
  if (s == "uniform") return InitKind::uniform;
  if (s == "equilibrium") return InitKind::equilibrium;
  throw InvalidInput("unknown init kind '" + std::string(s) + "' (uniform or equilibrium)");
}

DistributionField initial_field(const LatticeModel& model, const Grid& grid, InitKind kind) {
  const int b = model.velocity_count();
  return kind == InitKind::uniform
             ? uniform_field(model, grid, Eigen::VectorXd::Constant(b, 1.0 / b))
             : equilibrium_field(model, grid);
}

SuccessCurve sweep_omega(const LatticeModel& model, const Grid& grid, InitKind kind,
                         const std::vector<double>& omegas, const SweepOptions& options) {
  for (double w : omegas)
    require(std::isfinite(w) && w > 0 && w < 2, "sweep: every omega must lie in (0, 2)");
  SuccessCurve curve;
  curve.init_kind = kind;
  curve.sites = grid.sites();
  const DistributionField f = initial_field(model, grid, kind);
  const bool can_sim = options.simulate && model.id != ModelId::D3Q27 &&
                       carleman_layout(model, grid).qubits() <= options.max_sim_qubits;
  for (double w : omegas) {
    curve.omegas.push_back(w);
    if (can_sim) {
      curve.probabilities.push_back(
          success_probability_sim(assemble_block_encoding(make_encoding(model, w, grid)), f));
      curve.methods.emplace_back("simulated");
    } else {
      curve.probabilities.push_back(success_probability_factored(f, w));
      curve.methods.emplace_back("analytic");
    }
  }
  return curve;
}

void write_success_csv(std::ostream& out, const SuccessCurve& curve, bool header) {
  if (header) out << "omega,p_s,init_kind,n_sites,method\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < curve.omegas.size(); ++i)
    out << curve.omegas[i] << ',' << curve.probabilities[i] << ',' << to_string(curve.init_kind)
        << ',' << curve.sites << ',' << curve.methods[i] << '\n';
}

void write_state_csv(std::ostream& out, const StateVector& s) {
  out << "index,re,im\n" << std::setprecision(17);
  for (Index i = 0; i < s.amplitudes.size(); ++i)
    if (s.amplitudes(i) != Amplitude(0))
      out << i << ',' << s.amplitudes(i).real() << ',' << s.amplitudes(i).imag() << '\n';
}

}  // namespace clb
