#ifndef CLB_ORACLES_HPP_
#define CLB_ORACLES_HPP_

#include <cstdint>
#include <vector>

#include "clb/carleman.hpp"
#include "clb/circuit.hpp"

namespace clb {

// Everything the relaxation circuit needs; independent of the size of R_N.
struct EncodingData {
  LatticeModel model;
  Grid grid;
  double omega = 0;
  CollisionMatrices collision;
  double gamma = 1;
  RegisterLayout layout;
};

// Rejects models without circuit support (D3Q27).
EncodingData make_encoding(const LatticeModel& model, double omega, const Grid& grid);
EncodingData make_encoding(const CarlemanSystem& system);

// Gate-level building blocks acting on explicit qubit lists (LSB first).
// `extra` controls are added to every gate that needs them.
void append_increment(Circuit& c, const std::vector<int>& reg, const std::vector<Control>& extra);
void append_decrement(Circuit& c, const std::vector<int>& reg, const std::vector<Control>& extra);
// reg <- reg + n mod 2^width.
void append_add(Circuit& c, const std::vector<int>& reg, std::uint64_t n,
                const std::vector<Control>& extra);
// eq ^= [x == y] (and all `extra` controls hold).
void append_comparator(Circuit& c, const std::vector<int>& x, const std::vector<int>& y, int eq,
                       const std::vector<Control>& extra);
// Exchanges basis values a and b of `reg`; every other value is fixed.
void append_transposition(Circuit& c, const std::vector<int>& reg, std::uint64_t a,
                          std::uint64_t b, const std::vector<Control>& extra);
// Basis permutation k -> perm[k] of `reg`, perm.size() == 2^width.
void append_permutation(Circuit& c, const std::vector<int>& reg,
                        const std::vector<std::uint64_t>& perm,
                        const std::vector<Control>& extra);

std::vector<int> register_qubits(const RegisterLayout& layout, const std::string& name);

// Standalone circuits on their own layouts.
Circuit shift_operator(int width, std::uint64_t n);  // register "k"
Circuit comparator(int width);                       // registers x, y, eq

// Register a starts at |0>. For every stored value v of column j, the branch
// with m = n leaves a in (v/gamma)|0> + sqrt(1 - (v/gamma)^2)|1>; every other
// branch ends in |1>.
Circuit value_oracle(const EncodingData& data);
// Permutation sending (m = n, column j) to a basis state whose non-ancilla
// registers hold the row of the n-th stored entry of column j. Ends by
// uncomputing eq; expects eq = [tau = 1 and x = y] on entry.
Circuit position_oracle(const EncodingData& data);
// H^m, eq marking, O_v, O_x, H^m. With a, m and eq projected on |0>, the
// block on the encoded subspace is R_N / (gamma 2^m).
Circuit assemble_block_encoding(const EncodingData& data);

// x <- x + c_p for v1 = p; y <- y + c_q for tau = 1 and v2 = q.
// Non power-of-two axes are rejected unless `allow_padding`, in which case the
// shift wraps at 2^q_N.
Circuit streaming_circuit(const LatticeModel& model, const Grid& grid, bool allow_padding = false);

}  // namespace clb

#endif  // CLB_ORACLES_HPP_
