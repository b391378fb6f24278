#pragma once

// Dense statevector simulator over named quantum registers.
//
// Registers are concatenated in allocation order, first register occupying
// the most significant bits of the basis index: a state with registers
// (a, 2 qubits) then (b, 1 qubit) indexes basis state |a=2,b=1> at 2*2+1.
// Within a register, bit 0 is its most significant bit, so a register value
// reads left to right as |b0 b1 ...>.
//
// Capacity is capped at kMaxQubits total; every apply checks norm
// preservation to 1e-9.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qcongest/common.hpp"

namespace qcongest {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 24;
inline constexpr double kNormTol = 1e-9;

struct QubitRef {
  std::string reg;
  int bit = 0;  // 0 = most significant bit of the register
};

class StateVector {
 public:
  // Builds |0...0> over the given (name, width) registers.
  static StateVector make(
      const std::vector<std::pair<std::string, int>>& registers);

  int total_qubits() const { return total_; }
  std::int64_t dim() const { return std::int64_t{1} << total_; }
  bool has_register(const std::string& name) const;
  int register_width(const std::string& name) const;
  std::vector<std::string> register_names() const;

  // Appends a fresh |0> register at the least significant end.
  void allocate(const std::string& name, int width);
  // Removes a register whose qubits are all |0> (to 1e-9); state error
  // otherwise. Remaining registers keep their relative order.
  void release(const std::string& name);

  Complex amp(std::int64_t index) const { return amps_(index); }
  void set_amp(std::int64_t index, Complex v) { amps_(index) = v; }
  Eigen::VectorXcd& amplitudes() { return amps_; }
  const Eigen::VectorXcd& amplitudes() const { return amps_; }

  double norm() const { return amps_.norm(); }
  void check_norm() const;

  // Number of index positions the register's least significant bit is
  // shifted left by, and a mask for extracting its value.
  int low_bit(const std::string& name) const;
  std::uint64_t reg_mask(const std::string& name) const;
  std::uint64_t reg_value(const std::string& name, std::int64_t index) const;
  // Global position (from the least significant end) of a qubit.
  int qubit_pos(const QubitRef& q) const;

  // Probability that a register reads the given value.
  double probability(const std::string& name, std::uint64_t value) const;

 private:
  struct Reg {
    std::string name;
    int width;
  };
  int find(const std::string& name) const;

  std::vector<Reg> regs_;
  int total_ = 0;
  Eigen::VectorXcd amps_;
};

// ---- Gate operations --------------------------------------------------

enum class GateKind {
  Hadamard,
  PauliX,
  PauliZ,
  SingleQubit,      // arbitrary 2x2 unitary
  ControlledPhase,  // e^{i angle} on |11> of (control, target)
  Qft,
  InverseQft,
  DiffusionOverSubset,  // 2|u><u| - I, u uniform over first `count` values
  OracleReflection,     // phase -1 where pred(register value)
  PermutationUnitary,   // |v> -> |map(v)> over listed registers
  GlobalPhase,
};

struct GateOp {
  GateKind kind;
  QubitRef qubit;                   // single-qubit kinds
  QubitRef control;                 // ControlledPhase
  double angle = 0.0;               // ControlledPhase / GlobalPhase
  Eigen::Matrix2cd mat;             // SingleQubit
  std::string reg;                  // register-wide kinds
  std::vector<std::string> regs;    // PermutationUnitary (joint value order:
                                    // first listed = most significant)
  std::uint64_t count = 0;          // DiffusionOverSubset
  bool inverted = false;            // PermutationUnitary: apply the inverse
  std::function<bool(std::uint64_t)> pred;              // OracleReflection
  std::function<std::uint64_t(std::uint64_t)> mapping;  // PermutationUnitary
};

GateOp make_hadamard(QubitRef q);
GateOp make_pauli_x(QubitRef q);
GateOp make_pauli_z(QubitRef q);
GateOp make_single_qubit(QubitRef q, const Eigen::Matrix2cd& u);
GateOp make_controlled_phase(QubitRef control, QubitRef target, double angle);
GateOp make_qft(std::string reg);
GateOp make_inverse_qft(std::string reg);
GateOp make_diffusion(std::string reg, std::uint64_t count);
GateOp make_oracle_reflection(std::string reg,
                              std::function<bool(std::uint64_t)> pred);
GateOp make_permutation(std::vector<std::string> regs,
                        std::function<std::uint64_t(std::uint64_t)> mapping);
GateOp make_global_phase(double angle);

void apply(StateVector& st, const GateOp& op);
GateOp inverse(const GateOp& op);

// Direct forms used throughout the library.
void apply_hadamard(StateVector& st, const QubitRef& q);
void apply_pauli_x(StateVector& st, const QubitRef& q);
void apply_pauli_z(StateVector& st, const QubitRef& q);
void apply_single_qubit(StateVector& st, const QubitRef& q,
                        const Eigen::Matrix2cd& u);
void apply_controlled_phase(StateVector& st, const QubitRef& control,
                            const QubitRef& target, double angle);
void apply_hadamard_all(StateVector& st, const std::string& reg);
void apply_qft(StateVector& st, const std::string& reg);
void apply_inverse_qft(StateVector& st, const std::string& reg);
void apply_diffusion(StateVector& st, const std::string& reg,
                     std::uint64_t count);
void apply_oracle_reflection(StateVector& st, const std::string& reg,
                             const std::function<bool(std::uint64_t)>& pred);
void apply_phase_where(StateVector& st, const std::string& reg,
                       const std::function<bool(std::uint64_t)>& pred,
                       double angle);
void apply_permutation(StateVector& st, const std::vector<std::string>& regs,
                       const std::function<std::uint64_t(std::uint64_t)>& map,
                       bool inverted = false);
void apply_global_phase(StateVector& st, double angle);

// Copies the source register's value into the target with CNOTs
// (|v>|t> -> |v>|t xor v>); registers must have equal width.
void apply_cnot_copy(StateVector& st, const std::string& src,
                     const std::string& dst);
// Same restricted to one bit pair.
void apply_cnot(StateVector& st, const QubitRef& control,
                const QubitRef& target);

// Born-samples the listed registers jointly, collapses the state, and
// returns the measured values in the given order.
std::vector<std::uint64_t> measure(StateVector& st,
                                   const std::vector<std::string>& regs,
                                   Rng& rng);

}  // namespace qcongest
