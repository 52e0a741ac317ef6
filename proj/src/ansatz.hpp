#pragma once

#include <string>
#include <vector>

#include "lattice.hpp"
#include "statevec.hpp"

namespace kgm {

// Parametrisation schemes for the Hamiltonian-variational circuit. The
// circuit is the same for PerHamiltonian, PerEdgeColor and PerEdge; only the
// parameter tying differs. PerEdgeColorII drops the H0 factors entirely
// (its colour-1 evolution doubles as the H0 step).
enum class Scheme { PerHamiltonian, PerEdgeColor, PerEdgeColorII, PerEdge };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

struct AnsatzGate {
  int a = 0, b = 0;  // qubit pair
  int param = 0;     // index into the parameter vector
};

struct AnsatzSpec {
  std::string patch_name;
  Scheme scheme = Scheme::PerEdgeColor;
  int p = 0;
  int n_qubits = 0;
  int n_params = 0;
  bool h0_per_dimer = false;  // PerEdge variant: one parameter per H0 dimer
  std::vector<AnsatzGate> gates;   // application order, layer 1 first
  std::vector<char> param_is_h0;   // per parameter: multiplies an H0 factor
};

// Gate order within one layer: colour groups 4, 5, 1, 2, 3, then the H0
// (dimer) factor; the rightmost factor of the layer product acts first.
// Parameters are laid out layer-major with the H0 angle first within a layer.
AnsatzSpec make_spec(const KagomePatch& patch, Scheme scheme, int p,
                     bool per_edge_h0_per_dimer = false);

// Symmetry-sector product initial states built on the dimer covering.
//   Sz0        even N: singlets everywhere (S^x = S^y = S^z = 0)
//   SzPlus     even N: first dimer |up,up>, rest singlets (S^z = +2 Pauli)
//   OddDefault odd N: singlets + uncovered |down>  (S^z = -1 Pauli)
//   OddPlus    odd N: first dimer |up,up>, uncovered |up>  (S^z = +3 Pauli)
enum class Sector { Sz0, SzPlus, OddDefault, OddPlus };

StateVector initial_state(const KagomePatch& patch, Sector sector);

// Pauli-units S^z value of the initial state for the given sector.
int sector_value(const KagomePatch& patch, Sector sector);

void apply_ansatz(StateVector& s, const AnsatzSpec& spec,
                  const std::vector<double>& params);

std::string spec_to_json(const AnsatzSpec& spec);

}  // namespace kgm
