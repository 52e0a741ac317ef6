#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "util.hpp"

namespace kgm {

// Dense state vector, qubit 0 = least significant bit of the amplitude index.
// Bit 0 encodes |down>, bit 1 encodes |up>.
class StateVector {
 public:
  static constexpr int kDefaultMaxQubits = 24;

  explicit StateVector(int n_qubits, int max_qubits = kDefaultMaxQubits);

  // |bits> with the string read as a binary number (msb first), e.g.
  // basis_state(3, "101") puts amplitude 1 at index 5.
  static StateVector basis_state(int n_qubits, const std::string& bits);

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  cplx* data() { return amp_.data(); }
  const cplx* data() const { return amp_.data(); }
  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }

  double norm() const;
  void normalize();

 private:
  int n_;
  std::vector<cplx> amp_;
};

// exp(-i angle (XX+YY+ZZ)) on the qubit pair (k,l).
void apply_heisenberg(StateVector& s, int k, int l, double angle);

void apply_hadamard(StateVector& s, int q);
void apply_sdg(StateVector& s, int q);
void apply_pauli_x(StateVector& s, int q);
void apply_pauli_z(StateVector& s, int q);
void apply_cnot(StateVector& s, int control, int target);
void apply_swap(StateVector& s, int k, int l);

// Z_k X_l CNOT_{kl} H_k: maps |down,down> on (k,l) to the singlet
// (|down,up> - |up,down>)/sqrt(2). Unprep is the exact inverse circuit.
void apply_singlet_prep(StateVector& s, int k, int l);
void apply_singlet_unprep(StateVector& s, int k, int l);

cplx overlap(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& a, const StateVector& b);  // |<a|b>|^2

// Total spin in Pauli units with the physical sign convention: an up spin
// (bit 1) contributes +1 along z. For x and y the state is rotated into the
// computational basis first.
double total_spin(const StateVector& s, char axis);

struct SectorCheck {
  double mean = 0, variance = 0;
  bool is_eigenstate = false;
  bool matches = false;
};
SectorCheck sector_check(const StateVector& s, char axis, double value, double tol);

struct ShotBatch {
  char basis = 'Z';
  int n_qubits = 0;
  std::vector<std::uint64_t> shots;  // kept outcomes, one bitmask per shot
  bool post_selected = false;
  long kept = 0, discarded = 0;
  int sector = 0;  // expected sector value used when post-selecting

  std::string to_csv() const;  // one msb-first bitstring per row
};

// X basis: Hadamard on every qubit, then sample bits. Y: S-dagger then
// Hadamard. Post-selection keeps shots whose summed single-qubit outcomes
// equal the state's (rounded) sector value for that axis.
ShotBatch sample(const StateVector& s, char basis, long shots, std::uint64_t seed,
                 bool post_select);

// Raw little-endian doubles, interleaved re/im. Debug aid.
void dump_amplitudes(const StateVector& s, const std::string& path);

// Reproducible uniform double in [0,1), independent of the standard library's
// distribution implementation.
inline double canonical_double(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * 0x1.0p-53;
}

// Per-qubit outcome value of a sampled bit for the given axis; up = +1 for z,
// |+> (bit 0 after rotation) = +1 for x and y.
inline int outcome_value(char axis, int n, std::uint64_t mask) {
  int pop = __builtin_popcountll(mask);
  return axis == 'z' || axis == 'Z' ? 2 * pop - n : n - 2 * pop;
}

}  // namespace kgm
