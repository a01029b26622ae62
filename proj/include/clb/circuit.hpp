#ifndef CLB_CIRCUIT_HPP_
#define CLB_CIRCUIT_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "clb/lattice.hpp"

namespace clb {

struct Register {
  std::string name;
  int offset = 0;  // qubit index of the least significant bit
  int width = 0;
};

// Qubit 0 is the least significant bit of a basis-state index. Registers are
// laid out in the order they are added; a register's value is read with its
// first qubit as the least significant bit.
class RegisterLayout {
 public:
  RegisterLayout() = default;
  explicit RegisterLayout(const std::vector<std::pair<std::string, int>>& widths);

  const std::vector<Register>& registers() const { return registers_; }
  int qubits() const { return qubits_; }
  bool has(const std::string& name) const;
  const Register& reg(const std::string& name) const;
  int qubit(const std::string& name, int bit) const { return reg(name).offset + bit; }

  // Basis index with the named registers set; unnamed registers are zero.
  std::uint64_t index(const std::map<std::string, std::uint64_t>& values) const;
  std::uint64_t value(std::uint64_t index, const std::string& name) const;

 private:
  std::vector<Register> registers_;
  int qubits_ = 0;
};

// Bits per grid axis, ceil(log2 N_axis) (0 for an axis of length 1).
std::vector<int> axis_qubits(const Grid& grid);
// Register code of a site: sum_a i_a << (bits of the axes before a).
std::uint64_t site_code(const Grid& grid, Index site);

// a, m, tau, v1, v2, x, y, eq.
RegisterLayout carleman_layout(const LatticeModel& model, const Grid& grid);

enum class GateKind { H, X, RY, SWAP };

std::string_view to_string(GateKind kind);

struct Control {
  int qubit = 0;
  int value = 1;
  bool operator==(const Control&) const = default;
};

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::vector<Control> controls;
  double theta = 0;  // RY only

  bool operator==(const Gate&) const = default;
};

// Controls fixing register `name` to `value`.
std::vector<Control> controls_for(const RegisterLayout& layout, const std::string& name,
                                  std::uint64_t value);
std::vector<Control> controls_for(const std::vector<int>& qubits, std::uint64_t value);

struct Circuit {
  RegisterLayout layout;
  std::vector<Gate> gates;
  std::string name;
  std::map<std::string, std::string> parameters;

  // Appends after validating qubit ranges and target/control overlap.
  void add(Gate g);
  void append(const Circuit& other);
  Circuit inverse() const;
};

struct GateCountReport {
  std::map<std::string, Index> by_kind;    // "H", "X", "RY", "SWAP"
  std::map<std::string, Index> two_qubit_by_kind;
  std::map<int, Index> by_control_arity;  // number of controls -> gates
  Index total = 0;
  Index two_qubit_estimate = 0;
  Index depth = 0;
  int work_qubits = 0;  // needed by the largest multi-controlled gate
};

// Cost model: a gate with k controls costs max(0, 2k - 1) two-qubit gates
// (k = 1 is a single CNOT/CRY); SWAP costs 2 + the cost of a (k+1)-controlled X.
// A k-controlled gate with k >= 3 borrows k - 2 work qubits. Depth is the
// number of ASAP layers when every gate occupies all of its qubits.
Index two_qubit_cost(const Gate& g);
GateCountReport gate_report(const Circuit& c);

// One gate per line: `KIND t[,t] [ctrl=q:v;q:v] [theta=<radians>]`, preceded
// by `# name`, `# param key=value` and `# register name offset width` lines.
void write_circuit_text(std::ostream& out, const Circuit& c);
Circuit read_circuit_text(std::istream& in);
void write_circuit_json(std::ostream& out, const Circuit& c);
Circuit read_circuit_json(std::istream& in);

}  // namespace clb

#endif  // CLB_CIRCUIT_HPP_
