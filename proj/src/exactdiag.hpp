#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lattice.hpp"
#include "statevec.hpp"

namespace kgm {

// Sum of XX+YY+ZZ over the listed qubit pairs, kept as a term list; the
// operator acts matrix-free.
struct SparseHamiltonian {
  int n_qubits = 0;
  std::vector<Edge> terms;
};

enum class HamSubset { All, Colour, Dimers };

SparseHamiltonian build_hamiltonian(const KagomePatch& patch, HamSubset subset,
                                    int colour = 0);

// y += (XX+YY+ZZ)_{ab} x   (y and x must be distinct, length 2^n)
void add_pair_term(int n_qubits, int a, int b, const cplx* x, cplx* y);

// <l| (XX+YY+ZZ)_{ab} |f>
cplx pair_term_bracket(int n_qubits, int a, int b, const cplx* l, const cplx* f);

// y = H x (overwrites y)
void matvec(const SparseHamiltonian& H, const cplx* x, cplx* y);

double expectation(const SparseHamiltonian& H, const StateVector& psi);

struct LanczosOptions {
  int k = 1;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  long max_matvecs = 10000;
  int basis_cap = 200;  // thick-restart cap on stored Krylov vectors
  // Pauli-units S^z sector (sum of +-1 with up = +1). Unset = full space.
  int sector = std::numeric_limits<int>::min();
  // Use the combinatorial fixed-popcount basis instead of full 2^n vectors.
  // Requires `sector` to be set. Roughly 6x smaller at 24 qubits.
  bool sector_basis = false;
  bool want_vectors = true;

  bool has_sector() const { return sector != std::numeric_limits<int>::min(); }
};

struct EigenSolution {
  std::vector<double> eigenvalues;           // ascending, size k
  std::vector<StateVector> eigenvectors;     // empty when !want_vectors
  std::vector<double> residuals;             // ||Hv - Ev||
  long matvecs = 0;
};

EigenSolution lanczos_lowest(const SparseHamiltonian& H, const LanczosOptions& opt);

// Full spectrum (ascending) by dense diagonalisation; n_qubits <= 12.
std::vector<double> dense_diag_oracle(const SparseHamiltonian& H);

// Dense eigendecomposition returning the lowest k eigenvectors as states;
// test oracle for small systems (n_qubits <= 8).
EigenSolution dense_diag_lowest(const SparseHamiltonian& H, int k);

}  // namespace kgm
