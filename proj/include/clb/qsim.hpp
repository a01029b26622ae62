#ifndef CLB_QSIM_HPP_
#define CLB_QSIM_HPP_

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "clb/carleman.hpp"
#include "clb/circuit.hpp"
#include "clb/oracles.hpp"

namespace clb {

using Amplitude = std::complex<double>;

constexpr int kMaxStateQubits = 30;
constexpr int kMaxBlockQubits = 26;

struct StateVector {
  int qubits = 0;
  Eigen::VectorXcd amplitudes;

  static StateVector basis(int qubits, std::uint64_t index);
  double norm() const { return amplitudes.norm(); }
};

void apply_gate(const Gate& g, StateVector& s);
// Applies the gates in order, in place.
void apply(const Circuit& c, StateVector& s);
StateVector apply(const Circuit& c, const StateVector& s);

struct PostSelectResult {
  double probability = 0;
  StateVector conditional_state;  // on the qubits that were not selected
};

// Projects the listed qubits onto the listed values.
PostSelectResult post_select(const StateVector& s, const std::vector<Control>& outcome);

// Basis index of every Carleman-vector component, in Carleman order; ancillas,
// m and eq are zero.
std::vector<std::uint64_t> encoded_indices(const RegisterLayout& layout,
                                           const LatticeModel& model, const Grid& grid);

struct EncodedState {
  StateVector state;
  double norm = 0;  // |F|_2; amplitudes hold F / norm
};

EncodedState encode_carleman_state(const CarlemanState& f, const RegisterLayout& layout,
                                   const LatticeModel& model, const Grid& grid);
CarlemanState decode_carleman_state(const EncodedState& e, const RegisterLayout& layout,
                                    const LatticeModel& model, const Grid& grid);

struct BlockExtraction {
  Eigen::MatrixXcd block;
  // Largest squared amplitude a column leaves on non-listed states that still
  // pass post-selection.
  double max_leakage = 0;
};

// block(i, j) = <basis[i]| U |basis[j]>. Post-selected registers are those
// fixed to zero in every listed basis state.
BlockExtraction extract_block(const Circuit& c, const std::vector<std::uint64_t>& basis,
                              const std::vector<Control>& post_selected = {});

// Probability that a and m all read |0> after the block encoding acts on the
// normalised lifted input field.
double success_probability_sim(const Circuit& block_encoding, const DistributionField& input);
// |(R_N / gamma) psi|^2 / 2^(2m) for psi the normalised lifted input.
double success_probability_analytic(const CarlemanSystem& system, const DistributionField& input);
// Same quantity from single-site data, without forming R_N (any N).
double success_probability_factored(const DistributionField& input, double omega);

// Width of the m register for a model: ceil(log2 b^2).
int index_register_width(const LatticeModel& model);

enum class InitKind { uniform, equilibrium };
std::string_view to_string(InitKind k);
InitKind parse_init_kind(std::string_view s);
// f_i = 1/b (uniform) or f_i = w_i (equilibrium) on every site.
DistributionField initial_field(const LatticeModel& model, const Grid& grid, InitKind kind);

struct SuccessCurve {
  std::vector<double> omegas;
  std::vector<double> probabilities;
  std::vector<std::string> methods;  // "analytic" or "simulated"
  InitKind init_kind = InitKind::uniform;
  Index sites = 0;
};

struct SweepOptions {
  bool simulate = false;       // statevector where the budget permits
  int max_sim_qubits = 22;
};

SuccessCurve sweep_omega(const LatticeModel& model, const Grid& grid, InitKind kind,
                         const std::vector<double>& omegas, const SweepOptions& options = {});

// `omega,p_s,init_kind,n_sites,method`
void write_success_csv(std::ostream& out, const SuccessCurve& curve, bool header = true);
// `index,re,im`
void write_state_csv(std::ostream& out, const StateVector& s);

}  // namespace clb

#endif  // CLB_QSIM_HPP_
