#include "ansatz.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace kgm {

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PerHamiltonian: return "per_hamiltonian";
    case Scheme::PerEdgeColor: return "per_edge_color";
    case Scheme::PerEdgeColorII: return "per_edge_color_ii";
    case Scheme::PerEdge: return "per_edge";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "per_hamiltonian") return Scheme::PerHamiltonian;
  if (name == "per_edge_color") return Scheme::PerEdgeColor;
  if (name == "per_edge_color_ii") return Scheme::PerEdgeColorII;
  if (name == "per_edge") return Scheme::PerEdge;
  throw ArgumentError("unknown ansatz scheme '" + name + "'");
}

AnsatzSpec make_spec(const KagomePatch& patch, Scheme scheme, int p,
                     bool per_edge_h0_per_dimer) {
  if (p < 0) throw ArgumentError("layer count must be >= 0");
  AnsatzSpec spec;
  spec.patch_name = patch.name;
  spec.scheme = scheme;
  spec.p = p;
  spec.n_qubits = patch.n_sites;
  spec.h0_per_dimer = scheme == Scheme::PerEdge && per_edge_h0_per_dimer;

  EdgeColouring col = colour_edges(patch, ColourScheme::Square5);
  const int E = (int)patch.edges.size();
  std::vector<Edge> dimers;
  if (scheme != Scheme::PerEdgeColorII) dimers = dimer_covering(patch).dimers;
  const int D = (int)dimers.size();

  int per_layer = 0;
  switch (scheme) {
    case Scheme::PerHamiltonian: per_layer = 2; break;
    case Scheme::PerEdgeColor: per_layer = 6; break;
    case Scheme::PerEdgeColorII: per_layer = 5; break;
    case Scheme::PerEdge: per_layer = spec.h0_per_dimer ? E + D : E + 1; break;
  }
  spec.n_params = per_layer * p;
  spec.param_is_h0.assign(spec.n_params, 0);

  static const int kColourOrder[5] = {4, 5, 1, 2, 3};
  for (int layer = 0; layer < p; ++layer) {
    const int base = layer * per_layer;
    int edge_rank = 0;
    for (int c : kColourOrder) {
      for (const Edge& e : col.colour_class(patch, c)) {
        int param = 0;
        switch (scheme) {
          case Scheme::PerHamiltonian: param = base + 1; break;
          case Scheme::PerEdgeColor: param = base + c; break;
          case Scheme::PerEdgeColorII: param = base + (c - 1); break;
          case Scheme::PerEdge:
            param = base + (spec.h0_per_dimer ? D : 1) + edge_rank;
            break;
        }
        spec.gates.push_back({e.a, e.b, param});
        ++edge_rank;
      }
    }
    // H0 factor (leftmost in the layer product, applied last)
    int dimer_rank = 0;
    for (const Edge& d : dimers) {
      int param = 0;
      switch (scheme) {
        case Scheme::PerHamiltonian: param = base; break;
        case Scheme::PerEdgeColor: param = base; break;
        case Scheme::PerEdgeColorII: param = 0; break;  // unreachable
        case Scheme::PerEdge:
          param = base + (spec.h0_per_dimer ? dimer_rank : 0);
          break;
      }
      spec.gates.push_back({d.a, d.b, param});
      spec.param_is_h0[param] = 1;
      ++dimer_rank;
    }
  }
  return spec;
}

int sector_value(const KagomePatch& patch, Sector sector) {
  const bool even = patch.n_sites % 2 == 0;
  switch (sector) {
    case Sector::Sz0: return 0;
    case Sector::SzPlus: return 2;
    case Sector::OddDefault: return -1;
    case Sector::OddPlus: return 3;
  }
  (void)even;
  return 0;
}

StateVector initial_state(const KagomePatch& patch, Sector sector) {
  const bool even = patch.n_sites % 2 == 0;
  if ((sector == Sector::Sz0 || sector == Sector::SzPlus) && !even)
    throw ArgumentError("sector requires an even number of sites");
  if ((sector == Sector::OddDefault || sector == Sector::OddPlus) && even)
    throw ArgumentError("sector requires an odd number of sites");

  DimerCovering cover = dimer_covering(patch);
  StateVector s(patch.n_sites);
  bool first = true;
  for (const Edge& d : cover.dimers) {
    const bool triplet =
        first && (sector == Sector::SzPlus || sector == Sector::OddPlus);
    if (triplet) {
      apply_pauli_x(s, d.a);
      apply_pauli_x(s, d.b);
    } else {
      apply_singlet_prep(s, d.a, d.b);
    }
    first = false;
  }
  if (sector == Sector::OddPlus) apply_pauli_x(s, cover.uncovered);
  return s;
}

void apply_ansatz(StateVector& s, const AnsatzSpec& spec,
                  const std::vector<double>& params) {
  if ((int)params.size() != spec.n_params)
    throw DimError("parameter vector length != ansatz parameter count");
  if (s.n_qubits() != spec.n_qubits)
    throw DimError("state size != ansatz qubit count");
  for (const AnsatzGate& g : spec.gates)
    apply_heisenberg(s, g.a, g.b, params[g.param]);
}

std::string spec_to_json(const AnsatzSpec& spec) {
  nlohmann::ordered_json j;
  j["scheme"] = scheme_name(spec.scheme);
  j["p"] = spec.p;
  j["patch"] = spec.patch_name;
  j["n_params"] = spec.n_params;
  return j.dump(2);
}

}  // namespace kgm
