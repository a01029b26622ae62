#include "clb/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace clb {

RegisterLayout::RegisterLayout(const std::vector<std::pair<std::string, int>>& widths) {
  for (const auto& [name, width] : widths) {
    require(width >= 0, "register '" + name + "' has negative width");
    require(!has(name), "duplicate register '" + name + "'");
    registers_.push_back({name, qubits_, width});
    qubits_ += width;
  }
}

bool RegisterLayout::has(const std::string& name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register& r) { return r.name == name; });
}

const Register& RegisterLayout::reg(const std::string& name) const {
  for (const auto& r : registers_)
    if (r.name == name) return r;
  throw InvalidInput("no register named '" + name + "'");
}

std::uint64_t RegisterLayout::index(const std::map<std::string, std::uint64_t>& values) const {
  std::uint64_t i = 0;
  for (const auto& [name, v] : values) {
    const Register& r = reg(name);
    require(r.width >= 64 || v < (std::uint64_t{1} << r.width),
            "value does not fit register '" + name + "'");
    i |= v << r.offset;
  }
  return i;
}

std::uint64_t RegisterLayout::value(std::uint64_t index, const std::string& name) const {
  const Register& r = reg(name);
  return (index >> r.offset) & ((std::uint64_t{1} << r.width) - 1);
}

namespace {
int ceil_log2(Index n) {
  int k = 0;
  while ((Index{1} << k) < n) ++k;
  return k;
}
}  // namespace

std::vector<int> axis_qubits(const Grid& grid) {
  std::vector<int> q;
  for (int n : grid.dims()) q.push_back(ceil_log2(n));
  return q;
}

std::uint64_t site_code(const Grid& grid, Index site) {
  const auto c = grid.coordinates(site);
  const auto q = axis_qubits(grid);
  std::uint64_t code = 0;
  int shift = 0;
  for (std::size_t a = 0; a < c.size(); ++a) {
    code |= std::uint64_t(c[a]) << shift;
    shift += q[a];
  }
  return code;
}

RegisterLayout carleman_layout(const LatticeModel& model, const Grid& grid) {
  require(grid.dimension() == model.dimension, "layout: grid/model dimension mismatch");
  const int b = model.velocity_count();
  int site_bits = 0;
  for (int q : axis_qubits(grid)) site_bits += q;
  return RegisterLayout({{"a", 1},
                         {"m", ceil_log2(Index(b) * b)},
                         {"tau", 1},
                         {"v1", ceil_log2(b)},
                         {"v2", ceil_log2(b)},
                         {"x", site_bits},
                         {"y", site_bits},
                         {"eq", 1}});
}

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::RY: return "RY";
    case GateKind::SWAP: return "SWAP";
  }
  return "?";
}

namespace {
GateKind parse_kind(const std::string& s) {
  if (s == "H") return GateKind::H;
  if (s == "X") return GateKind::X;
  if (s == "RY") return GateKind::RY;
  if (s == "SWAP") return GateKind::SWAP;
  throw InvalidInput("unknown gate kind '" + s + "'");
}
}  // namespace

std::vector<Control> controls_for(const std::vector<int>& qubits, std::uint64_t value) {
  std::vector<Control> c;
  for (std::size_t i = 0; i < qubits.size(); ++i)
    c.push_back({qubits[i], static_cast<int>((value >> i) & 1)});
  return c;
}

std::vector<Control> controls_for(const RegisterLayout& layout, const std::string& name,
                                  std::uint64_t value) {
  const Register& r = layout.reg(name);
  require(r.width >= 64 || value < (std::uint64_t{1} << r.width),
          "control value does not fit register '" + name + "'");
  std::vector<int> q(r.width);
  for (int i = 0; i < r.width; ++i) q[i] = r.offset + i;
  return controls_for(q, value);
}

void Circuit::add(Gate g) {
  const std::size_t want = g.kind == GateKind::SWAP ? 2 : 1;
  require(g.targets.size() == want, "gate " + std::string(to_string(g.kind)) +
                                        " expects " + std::to_string(want) + " target(s)");
  require(std::isfinite(g.theta), "gate angle must be finite");
  std::set<int> used;
  for (int t : g.targets) {
    require(t >= 0 && t < layout.qubits(), "gate target out of range");
    require(used.insert(t).second, "gate touches a qubit twice");
  }
  for (const auto& c : g.controls) {
    require(c.qubit >= 0 && c.qubit < layout.qubits(), "gate control out of range");
    require(c.value == 0 || c.value == 1, "control value must be 0 or 1");
    require(used.insert(c.qubit).second, "gate touches a qubit twice");
  }
  gates.push_back(std::move(g));
}

void Circuit::append(const Circuit& other) {
  require(other.layout.qubits() <= layout.qubits(), "append: circuit is wider than the target");
  for (const auto& g : other.gates) add(g);
}

Circuit Circuit::inverse() const {
  Circuit inv{layout, {}, name + "^-1", parameters};
  inv.gates.assign(gates.rbegin(), gates.rend());
  for (auto& g : inv.gates)
    if (g.kind == GateKind::RY) g.theta = -g.theta;
  return inv;
}

Index two_qubit_cost(const Gate& g) {
  const Index k = static_cast<Index>(g.controls.size());
  auto controlled = [](Index n) { return std::max<Index>(0, 2 * n - 1); };
  if (g.kind == GateKind::SWAP) return 2 + controlled(k + 1);
  return controlled(k);
}

GateCountReport gate_report(const Circuit& c) {
  GateCountReport r;
  std::vector<Index> level(c.layout.qubits(), 0);
  for (const auto& g : c.gates) {
    ++r.total;
    ++r.by_kind[std::string(to_string(g.kind))];
    const int k = static_cast<int>(g.controls.size());
    ++r.by_control_arity[k];
    r.two_qubit_estimate += two_qubit_cost(g);
    r.two_qubit_by_kind[std::string(to_string(g.kind))] += two_qubit_cost(g);
    const int arity = g.kind == GateKind::SWAP ? k + 1 : k;
    r.work_qubits = std::max(r.work_qubits, arity - 2);
    Index l = 0;
    for (int t : g.targets) l = std::max(l, level[t]);
    for (const auto& ct : g.controls) l = std::max(l, level[ct.qubit]);
    ++l;
    for (int t : g.targets) level[t] = l;
    for (const auto& ct : g.controls) level[ct.qubit] = l;
    r.depth = std::max(r.depth, l);
  }
  return r;
}

void write_circuit_text(std::ostream& out, const Circuit& c) {
  out << "# name " << c.name << '\n';
  for (const auto& [k, v] : c.parameters) out << "# param " << k << '=' << v << '\n';
  for (const auto& r : c.layout.registers())
    out << "# register " << r.name << ' ' << r.offset << ' ' << r.width << '\n';
  out << std::setprecision(17);
  for (const auto& g : c.gates) {
    out << to_string(g.kind) << ' ';
    for (std::size_t i = 0; i < g.targets.size(); ++i) out << (i ? "," : "") << g.targets[i];
    if (!g.controls.empty()) {
      out << " ctrl=";
      for (std::size_t i = 0; i < g.controls.size(); ++i)
        out << (i ? ";" : "") << g.controls[i].qubit << ':' << g.controls[i].value;
    }
    if (g.kind == GateKind::RY) out << " theta=" << g.theta;
    out << '\n';
  }
}

Circuit read_circuit_text(std::istream& in) {
  Circuit c;
  std::vector<std::pair<std::string, int>> regs;
  std::vector<Gate> gates;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, tag;
      ls >> hash >> tag;
      if (tag == "name") {
        std::getline(ls >> std::ws, c.name);
      } else if (tag == "param") {
        std::string kv;
        ls >> kv;
        const auto eq = kv.find('=');
        require(eq != std::string::npos, "circuit text: malformed param line");
        c.parameters[kv.substr(0, eq)] = kv.substr(eq + 1);
      } else if (tag == "register") {
        std::string name;
        int offset = 0, width = 0;
        ls >> name >> offset >> width;
        regs.emplace_back(name, width);
      }
      continue;
    }
    Gate g;
    std::string kind, targets, field;
    ls >> kind >> targets;
    g.kind = parse_kind(kind);
    std::istringstream ts(targets);
    for (std::string t; std::getline(ts, t, ',');) g.targets.push_back(std::stoi(t));
    while (ls >> field) {
      if (field.rfind("ctrl=", 0) == 0) {
        std::istringstream cs(field.substr(5));
        for (std::string item; std::getline(cs, item, ';');) {
          const auto colon = item.find(':');
          require(colon != std::string::npos, "circuit text: malformed control");
          g.controls.push_back({std::stoi(item.substr(0, colon)), std::stoi(item.substr(colon + 1))});
        }
      } else if (field.rfind("theta=", 0) == 0) {
        g.theta = std::stod(field.substr(6));
      } else {
        throw InvalidInput("circuit text: unknown field '" + field + "'");
      }
    }
    gates.push_back(std::move(g));
  }
  c.layout = RegisterLayout(regs);
  for (auto& g : gates) c.add(std::move(g));
  return c;
}

void write_circuit_json(std::ostream& out, const Circuit& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["parameters"] = c.parameters;
  j["registers"] = nlohmann::json::array();
  for (const auto& r : c.layout.registers())
    j["registers"].push_back({{"name", r.name}, {"offset", r.offset}, {"width", r.width}});
  j["qubits"] = c.layout.qubits();
  j["gates"] = nlohmann::json::array();
  for (const auto& g : c.gates) {
    nlohmann::json jg;
    jg["kind"] = to_string(g.kind);
    jg["targets"] = g.targets;
    jg["controls"] = nlohmann::json::array();
    for (const auto& ct : g.controls) jg["controls"].push_back({ct.qubit, ct.value});
    if (g.kind == GateKind::RY) jg["theta"] = g.theta;
    j["gates"].push_back(std::move(jg));
  }
  out << j.dump() << '\n';
}

Circuit read_circuit_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("circuit json: ") + e.what());
  }
  Circuit c;
  c.name = j.value("name", "");
  if (j.contains("parameters"))
    c.parameters = j["parameters"].get<std::map<std::string, std::string>>();
  std::vector<std::pair<std::string, int>> regs;
  for (const auto& r : j.at("registers")) regs.emplace_back(r.at("name"), r.at("width"));
  c.layout = RegisterLayout(regs);
  for (const auto& jg : j.at("gates")) {
    Gate g;
    g.kind = parse_kind(jg.at("kind"));
    g.targets = jg.at("targets").get<std::vector<int>>();
    for (const auto& ct : jg.at("controls")) g.controls.push_back({ct.at(0), ct.at(1)});
    g.theta = jg.value("theta", 0.0);
    c.add(std::move(g));
  }
  return c;
}

}  // namespace clb
