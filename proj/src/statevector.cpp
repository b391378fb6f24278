#include "qcongest/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace qcongest {

namespace {

constexpr double kPi = std::numbers::pi;

void check_width(int width) {
  if (width <= 0) throw ParameterError("register width must be positive");
}

}  // namespace

StateVector StateVector::make(
    const std::vector<std::pair<std::string, int>>& registers) {
  StateVector st;
  for (const auto& [name, width] : registers) st.allocate(name, width);
  if (st.total_ == 0) throw ParameterError("state needs at least one qubit");
  return st;
}

int StateVector::find(const std::string& name) const {
  for (std::size_t i = 0; i < regs_.size(); ++i)
    if (regs_[i].name == name) return static_cast<int>(i);
  throw AddressError("unknown register: " + name);
}

bool StateVector::has_register(const std::string& name) const {
  for (const auto& r : regs_)
    if (r.name == name) return true;
  return false;
}

int StateVector::register_width(const std::string& name) const {
  return regs_[find(name)].width;
}

std::vector<std::string> StateVector::register_names() const {
  std::vector<std::string> out;
  out.reserve(regs_.size());
  for (const auto& r : regs_) out.push_back(r.name);
  return out;
}

void StateVector::allocate(const std::string& name, int width) {
  check_width(width);
  if (has_register(name)) throw AddressError("duplicate register: " + name);
  if (total_ + width > kMaxQubits)
    throw CapacityError("state would need " + std::to_string(total_ + width) +
                        " qubits, cap is " + std::to_string(kMaxQubits));
  const std::int64_t old_dim = total_ == 0 ? 1 : dim();
  Eigen::VectorXcd next = Eigen::VectorXcd::Zero(old_dim << width);
  if (total_ == 0) {
    next(0) = 1.0;
  } else {
    for (std::int64_t i = 0; i < old_dim; ++i) next(i << width) = amps_(i);
  }
  amps_ = std::move(next);
  regs_.push_back({name, width});
  total_ += width;
}

void StateVector::release(const std::string& name) {
  const int r = find(name);
  const int low = low_bit(name);
  const int w = regs_[r].width;
  const std::uint64_t mask = reg_mask(name);
  double outside = 0.0;
  for (std::int64_t i = 0; i < dim(); ++i)
    if ((static_cast<std::uint64_t>(i) >> low) & mask)
      outside += std::norm(amps_(i));
  if (std::sqrt(outside) > kNormTol)
    throw StateError("register " + name + " is not |0>, cannot release");
  const std::int64_t low_count = std::int64_t{1} << low;
  Eigen::VectorXcd next = Eigen::VectorXcd::Zero(dim() >> w);
  for (std::int64_t i = 0; i < next.size(); ++i) {
    const std::int64_t high = i >> low;
    const std::int64_t lo = i & (low_count - 1);
    next(i) = amps_((high << (low + w)) | lo);
  }
  amps_ = std::move(next);
  regs_.erase(regs_.begin() + r);
  total_ -= w;
  const double n = amps_.norm();
  if (n > 0) amps_ /= n;
}

int StateVector::low_bit(const std::string& name) const {
  const int r = find(name);
  int low = 0;
  for (std::size_t i = r + 1; i < regs_.size(); ++i) low += regs_[i].width;
  return low;
}

std::uint64_t StateVector::reg_mask(const std::string& name) const {
  return (std::uint64_t{1} << regs_[find(name)].width) - 1;
}

std::uint64_t StateVector::reg_value(const std::string& name,
                                     std::int64_t index) const {
  return (static_cast<std::uint64_t>(index) >> low_bit(name)) &
         reg_mask(name);
}

int StateVector::qubit_pos(const QubitRef& q) const {
  const int r = find(q.reg);
  if (q.bit < 0 || q.bit >= regs_[r].width)
    throw AddressError("bit " + std::to_string(q.bit) + " out of range for " +
                       q.reg);
  return low_bit(q.reg) + (regs_[r].width - 1 - q.bit);
}

double StateVector::probability(const std::string& name,
                                std::uint64_t value) const {
  const int low = low_bit(name);
  const std::uint64_t mask = reg_mask(name);
  if (value > mask) throw ParameterError("value exceeds register range");
  double p = 0.0;
  for (std::int64_t i = 0; i < dim(); ++i)
    if (((static_cast<std::uint64_t>(i) >> low) & mask) == value)
      p += std::norm(amps_(i));
  return p;
}

void StateVector::check_norm() const {
  if (std::abs(amps_.norm() - 1.0) > kNormTol)
    throw StateError("state norm drifted from 1");
}

// ---- primitive applications -------------------------------------------

void apply_single_qubit(StateVector& st, const QubitRef& q,
                        const Eigen::Matrix2cd& u) {
  if ((u.adjoint() * u - Eigen::Matrix2cd::Identity()).norm() > 1e-9)
    throw ContractError("single-qubit matrix is not unitary");
  const int pos = st.qubit_pos(q);
  const std::int64_t step = std::int64_t{1} << pos;
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i) {
    if (i & step) continue;
    const Complex a0 = a(i), a1 = a(i | step);
    a(i) = u(0, 0) * a0 + u(0, 1) * a1;
    a(i | step) = u(1, 0) * a0 + u(1, 1) * a1;
  }
  st.check_norm();
}

void apply_hadamard(StateVector& st, const QubitRef& q) {
  static const Eigen::Matrix2cd h = [] {
    Eigen::Matrix2cd m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
  }();
  apply_single_qubit(st, q, h);
}

void apply_pauli_x(StateVector& st, const QubitRef& q) {
  const int pos = st.qubit_pos(q);
  const std::int64_t step = std::int64_t{1} << pos;
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i)
    if (!(i & step)) std::swap(a(i), a(i | step));
}

void apply_pauli_z(StateVector& st, const QubitRef& q) {
  const int pos = st.qubit_pos(q);
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i)
    if (i & (std::int64_t{1} << pos)) a(i) = -a(i);
}

void apply_controlled_phase(StateVector& st, const QubitRef& control,
                            const QubitRef& target, double angle) {
  const int cp = st.qubit_pos(control);
  const int tp = st.qubit_pos(target);
  if (cp == tp) throw AddressError("control equals target");
  const std::int64_t both =
      (std::int64_t{1} << cp) | (std::int64_t{1} << tp);
  const Complex phase = std::polar(1.0, angle);
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i)
    if ((i & both) == both) a(i) *= phase;
}

void apply_hadamard_all(StateVector& st, const std::string& reg) {
  const int w = st.register_width(reg);
  for (int b = 0; b < w; ++b) apply_hadamard(st, {reg, b});
}

namespace {

void swap_positions(StateVector& st, int pa, int pb) {
  if (pa == pb) return;
  const std::int64_t ma = std::int64_t{1} << pa;
  const std::int64_t mb = std::int64_t{1} << pb;
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i)
    if ((i & ma) && !(i & mb)) std::swap(a(i), a((i ^ ma) | mb));
}

// sign=+1 forward transform, sign=-1 inverse.
void qft_impl(StateVector& st, const std::string& reg, int sign) {
  const int w = st.register_width(reg);
  auto rotate = [&](int target, int control, int k) {
    apply_controlled_phase(st, {reg, control}, {reg, target},
                           sign * 2.0 * kPi / static_cast<double>(1ULL << k));
  };
  if (sign > 0) {
    for (int j = 0; j < w; ++j) {
      apply_hadamard(st, {reg, j});
      for (int m = j + 1; m < w; ++m) rotate(j, m, m - j + 1);
    }
    for (int j = 0; j < w / 2; ++j)
      swap_positions(st, st.qubit_pos({reg, j}), st.qubit_pos({reg, w - 1 - j}));
  } else {
    for (int j = 0; j < w / 2; ++j)
      swap_positions(st, st.qubit_pos({reg, j}), st.qubit_pos({reg, w - 1 - j}));
    for (int j = w - 1; j >= 0; --j) {
      for (int m = w - 1; m > j; --m) rotate(j, m, m - j + 1);
      apply_hadamard(st, {reg, j});
    }
  }
}

}  // namespace

void apply_qft(StateVector& st, const std::string& reg) {
  qft_impl(st, reg, +1);
}

void apply_inverse_qft(StateVector& st, const std::string& reg) {
  qft_impl(st, reg, -1);
}

void apply_diffusion(StateVector& st, const std::string& reg,
                     std::uint64_t count) {
  const int w = st.register_width(reg);
  const std::uint64_t space = std::uint64_t{1} << w;
  if (count == 0 || count > space)
    throw ParameterError("diffusion subset size out of range");
  const int low = st.low_bit(reg);
  const std::int64_t low_count = std::int64_t{1} << low;
  const std::int64_t high_count = st.dim() >> (low + w);
  auto& a = st.amplitudes();
  for (std::int64_t hi = 0; hi < high_count; ++hi) {
    for (std::int64_t lo = 0; lo < low_count; ++lo) {
      const std::int64_t base = (hi << (low + w)) | lo;
      Complex sum = 0.0;
      for (std::uint64_t v = 0; v < count; ++v)
        sum += a(base | (static_cast<std::int64_t>(v) << low));
      const Complex shift = 2.0 * sum / static_cast<double>(count);
      for (std::uint64_t v = 0; v < space; ++v) {
        const std::int64_t idx = base | (static_cast<std::int64_t>(v) << low);
        a(idx) = (v < count ? shift - a(idx) : -a(idx));
      }
    }
  }
  st.check_norm();
}

void apply_phase_where(StateVector& st, const std::string& reg,
                       const std::function<bool(std::uint64_t)>& pred,
                       double angle) {
  const int low = st.low_bit(reg);
  const std::uint64_t mask = st.reg_mask(reg);
  // pi lands on exactly -1 so that interference cancels without residue
  const Complex phase =
      angle == kPi ? Complex(-1.0, 0.0) : std::polar(1.0, angle);
  std::vector<char> hit(mask + 1);
  for (std::uint64_t v = 0; v <= mask; ++v) hit[v] = pred(v) ? 1 : 0;
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i)
    if (hit[(static_cast<std::uint64_t>(i) >> low) & mask]) a(i) *= phase;
}

void apply_oracle_reflection(StateVector& st, const std::string& reg,
                             const std::function<bool(std::uint64_t)>& pred) {
  apply_phase_where(st, reg, pred, kPi);
}

void apply_permutation(StateVector& st, const std::vector<std::string>& regs,
                       const std::function<std::uint64_t(std::uint64_t)>& map,
                       bool inverted) {
  if (regs.empty()) throw ParameterError("permutation needs registers");
  struct Part {
    int low;
    int width;
  };
  std::vector<Part> parts;
  int joint_width = 0;
  for (const auto& name : regs) {
    parts.push_back({st.low_bit(name), st.register_width(name)});
    joint_width += parts.back().width;
  }
  const std::uint64_t space = std::uint64_t{1} << joint_width;
  std::vector<std::uint64_t> image(space);
  std::vector<char> seen(space, 0);
  for (std::uint64_t v = 0; v < space; ++v) {
    const std::uint64_t m = map(v);
    if (m >= space || seen[m])
      throw ContractError("mapping is not a permutation of the joint range");
    seen[m] = 1;
    image[v] = m;
  }
  auto joint_of = [&](std::int64_t idx) {
    std::uint64_t j = 0;
    for (const auto& p : parts)
      j = (j << p.width) |
          ((static_cast<std::uint64_t>(idx) >> p.low) &
           ((std::uint64_t{1} << p.width) - 1));
    return j;
  };
  auto with_joint = [&](std::int64_t idx, std::uint64_t j) {
    std::uint64_t out = static_cast<std::uint64_t>(idx);
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      const std::uint64_t m = (std::uint64_t{1} << it->width) - 1;
      out = (out & ~(m << it->low)) | ((j & m) << it->low);
      j >>= it->width;
    }
    return static_cast<std::int64_t>(out);
  };
  const auto& a = st.amplitudes();
  Eigen::VectorXcd next = Eigen::VectorXcd::Zero(a.size());
  if (inverted) {
    for (std::int64_t i = 0; i < a.size(); ++i)
      next(i) = a(with_joint(i, image[joint_of(i)]));
  } else {
    for (std::int64_t i = 0; i < a.size(); ++i)
      next(with_joint(i, image[joint_of(i)])) = a(i);
  }
  st.amplitudes() = std::move(next);
}

void apply_global_phase(StateVector& st, double angle) {
  st.amplitudes() *= std::polar(1.0, angle);
}

void apply_cnot(StateVector& st, const QubitRef& control,
                const QubitRef& target) {
  const int cp = st.qubit_pos(control);
  const int tp = st.qubit_pos(target);
  if (cp == tp) throw AddressError("control equals target");
  const std::int64_t cm = std::int64_t{1} << cp;
  const std::int64_t tm = std::int64_t{1} << tp;
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i)
    if ((i & cm) && !(i & tm)) std::swap(a(i), a(i | tm));
}

void apply_cnot_copy(StateVector& st, const std::string& src,
                     const std::string& dst) {
  const int w = st.register_width(src);
  if (st.register_width(dst) != w)
    throw ParameterError("cnot copy needs equal register widths");
  for (int b = 0; b < w; ++b) apply_cnot(st, {src, b}, {dst, b});
}

std::vector<std::uint64_t> measure(StateVector& st,
                                   const std::vector<std::string>& regs,
                                   Rng& rng) {
  if (regs.empty()) throw ParameterError("measure needs registers");
  struct Part {
    int low;
    int width;
  };
  std::vector<Part> parts;
  int joint_width = 0;
  for (const auto& name : regs) {
    parts.push_back({st.low_bit(name), st.register_width(name)});
    joint_width += parts.back().width;
  }
  if (joint_width > 30) throw CapacityError("measurement outcome space too large");
  auto joint_of = [&](std::int64_t idx) {
    std::uint64_t j = 0;
    for (const auto& p : parts)
      j = (j << p.width) |
          ((static_cast<std::uint64_t>(idx) >> p.low) &
           ((std::uint64_t{1} << p.width) - 1));
    return j;
  };
  const std::uint64_t outcomes = std::uint64_t{1} << joint_width;
  std::vector<double> prob(outcomes, 0.0);
  auto& a = st.amplitudes();
  for (std::int64_t i = 0; i < a.size(); ++i)
    prob[joint_of(i)] += std::norm(a(i));
  const double u = rng.u01();
  double acc = 0.0;
  std::uint64_t picked = outcomes;
  std::uint64_t last_nonzero = outcomes;
  for (std::uint64_t o = 0; o < outcomes; ++o) {
    if (prob[o] <= 0.0) continue;
    last_nonzero = o;
    acc += prob[o];
    if (u < acc) {
      picked = o;
      break;
    }
  }
  if (picked == outcomes) picked = last_nonzero;
  if (picked == outcomes) throw StateError("state has no probability mass");
  for (std::int64_t i = 0; i < a.size(); ++i)
    if (joint_of(i) != picked) a(i) = 0.0;
  a /= std::sqrt(prob[picked]);
  std::vector<std::uint64_t> values(parts.size());
  std::uint64_t rest = picked;
  for (std::size_t k = parts.size(); k-- > 0;) {
    values[k] = rest & ((std::uint64_t{1} << parts[k].width) - 1);
    rest >>= parts[k].width;
  }
  return values;
}

// ---- GateOp dispatch --------------------------------------------------

GateOp make_hadamard(QubitRef q) {
  GateOp op;
  op.kind = GateKind::Hadamard;
  op.qubit = std::move(q);
  return op;
}

GateOp make_pauli_x(QubitRef q) {
  GateOp op;
  op.kind = GateKind::PauliX;
  op.qubit = std::move(q);
  return op;
}

GateOp make_pauli_z(QubitRef q) {
  GateOp op;
  op.kind = GateKind::PauliZ;
  op.qubit = std::move(q);
  return op;
}

GateOp make_single_qubit(QubitRef q, const Eigen::Matrix2cd& u) {
  GateOp op;
  op.kind = GateKind::SingleQubit;
  op.qubit = std::move(q);
  op.mat = u;
  return op;
}

GateOp make_controlled_phase(QubitRef control, QubitRef target, double angle) {
  GateOp op;
  op.kind = GateKind::ControlledPhase;
  op.control = std::move(control);
  op.qubit = std::move(target);
  op.angle = angle;
  return op;
}

GateOp make_qft(std::string reg) {
  GateOp op;
  op.kind = GateKind::Qft;
  op.reg = std::move(reg);
  return op;
}

GateOp make_inverse_qft(std::string reg) {
  GateOp op;
  op.kind = GateKind::InverseQft;
  op.reg = std::move(reg);
  return op;
}

GateOp make_diffusion(std::string reg, std::uint64_t count) {
  GateOp op;
  op.kind = GateKind::DiffusionOverSubset;
  op.reg = std::move(reg);
  op.count = count;
  return op;
}

GateOp make_oracle_reflection(std::string reg,
                              std::function<bool(std::uint64_t)> pred) {
  GateOp op;
  op.kind = GateKind::OracleReflection;
  op.reg = std::move(reg);
  op.pred = std::move(pred);
  return op;
}

GateOp make_permutation(std::vector<std::string> regs,
                        std::function<std::uint64_t(std::uint64_t)> mapping) {
  GateOp op;
  op.kind = GateKind::PermutationUnitary;
  op.regs = std::move(regs);
  op.mapping = std::move(mapping);
  return op;
}

GateOp make_global_phase(double angle) {
  GateOp op;
  op.kind = GateKind::GlobalPhase;
  op.angle = angle;
  return op;
}

void apply(StateVector& st, const GateOp& op) {
  switch (op.kind) {
    case GateKind::Hadamard:
      apply_hadamard(st, op.qubit);
      break;
    case GateKind::PauliX:
      apply_pauli_x(st, op.qubit);
      break;
    case GateKind::PauliZ:
      apply_pauli_z(st, op.qubit);
      break;
    case GateKind::SingleQubit:
      apply_single_qubit(st, op.qubit, op.mat);
      break;
    case GateKind::ControlledPhase:
      apply_controlled_phase(st, op.control, op.qubit, op.angle);
      break;
    case GateKind::Qft:
      apply_qft(st, op.reg);
      break;
    case GateKind::InverseQft:
      apply_inverse_qft(st, op.reg);
      break;
    case GateKind::DiffusionOverSubset:
      apply_diffusion(st, op.reg, op.count);
      break;
    case GateKind::OracleReflection:
      apply_oracle_reflection(st, op.reg, op.pred);
      break;
    case GateKind::PermutationUnitary:
      apply_permutation(st, op.regs, op.mapping, op.inverted);
      break;
    case GateKind::GlobalPhase:
      apply_global_phase(st, op.angle);
      break;
  }
  st.check_norm();
}

GateOp inverse(const GateOp& op) {
  GateOp inv = op;
  switch (op.kind) {
    case GateKind::Hadamard:
    case GateKind::PauliX:
    case GateKind::PauliZ:
    case GateKind::DiffusionOverSubset:
    case GateKind::OracleReflection:
      break;
    case GateKind::SingleQubit:
      inv.mat = op.mat.adjoint();
      break;
    case GateKind::ControlledPhase:
    case GateKind::GlobalPhase:
      inv.angle = -op.angle;
      break;
    case GateKind::Qft:
      inv.kind = GateKind::InverseQft;
      break;
    case GateKind::InverseQft:
      inv.kind = GateKind::Qft;
      break;
    case GateKind::PermutationUnitary:
      inv.inverted = !op.inverted;
      break;
  }
  return inv;
}

}  // namespace qcongest
