#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "exactdiag.hpp"
#include "vqe.hpp"

namespace kgm {

// Exact <Z_i Z_j> per pair, Pauli units (spin-1/2 value = /4).
std::vector<double> spin_spin(const StateVector& s, const std::vector<Edge>& pairs);

// Connected dimer-dimer correlator
//   <(S.S)_ij (S.S)_kl> - <(S.S)_ij><(S.S)_kl>,
// Pauli units (each S.S has spectrum {-3,+1}). The two edges must be disjoint.
double dimer_dimer(const StateVector& s, Edge ij, Edge kl);

// <S.S> on one edge estimated by the unprep-and-measure protocol: undo the
// singlet preparation on the pair and read the qubits; down,down means -3,
// the other outcomes mean +1.
double dimer_expectation_sampled(const StateVector& s, Edge ij, long shots,
                                 std::uint64_t seed);

// Shot-based connected dimer-dimer correlator via the same protocol applied
// to both (disjoint) edges in the same circuit.
double dimer_dimer_sampled(const StateVector& s, Edge ij, Edge kl, long shots,
                           std::uint64_t seed, double* std_error = nullptr);

struct StructureFactorGrid {
  std::vector<double> qx, qy;  // axes, length nx / ny
  std::vector<double> value;   // row-major [iy * nx + ix], Pauli units
  int nx = 0, ny = 0;
  double max_value() const;
};

// Static spin structure factor S^z(q) = (1/N) sum_ij e^{iq.(ri-rj)} <Z_i Z_j>
// over a centered square grid spanning `extent_scale` times the first
// Brillouin zone (corner at 4*pi/(3*a), a = 2 in units of the site spacing).
StructureFactorGrid structure_factor(const StateVector& s, const KagomePatch& patch,
                                     int n_points = 81, double extent_scale = 1.2);

struct SpinGapResult {
  double e_lower = 0, e_upper = 0;  // sector ground energies, Pauli units
  double gap_pauli = 0;
  double gap_spin = 0;  // /4: spin operators with eigenvalues +-1/2
  int sector_lower = 0, sector_upper = 0;
  std::string method;
  bool converged = true;
  double diag_lower = 0, diag_upper = 0;  // residual / rel-energy diagnostics
};

// Gap between the ground energies of adjacent total-S^z sectors:
// even N: E0(Sz=2 Pauli) - E0(Sz=0); odd N: E0(Sz=3) - E0(Sz=1).
SpinGapResult spin_gap_exact(const KagomePatch& patch, std::uint64_t seed = 7);
SpinGapResult spin_gap_vqe(const KagomePatch& patch, Scheme scheme, int p,
                           int restarts, std::uint64_t seed,
                           const LbfgsOptions& opt = {});

struct EnergyEstimate {
  double value = 0;
  double std_error = 0;
  long kept[3] = {0, 0, 0};       // X, Y, Z
  long discarded[3] = {0, 0, 0};
};

// <H> from one shot batch per basis; per-edge binomial variances are
// propagated by summation. Throws EstimationError if post-selection leaves
// an empty batch.
EnergyEstimate estimate_energy_from_shots(const ShotBatch& bx, const ShotBatch& by,
                                          const ShotBatch& bz,
                                          const KagomePatch& patch,
                                          bool post_select);

}  // namespace kgm
