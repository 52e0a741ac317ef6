#include "kagomevqe.h"

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "ansatz.hpp"
#include "embed.hpp"
#include "exactdiag.hpp"
#include "experiments.hpp"
#include "lattice.hpp"
#include "observables.hpp"
#include "statevec.hpp"
#include "vqe.hpp"

using namespace kgm;

namespace {

thread_local std::string g_last_error;

kgm_status status_of(const Error& e) { return (kgm_status)(int)e.code(); }

template <typename Fn>
kgm_status guarded(Fn&& fn) {
  try {
    fn();
    return KGM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KGM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return KGM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Sector sector_from_name(const std::string& name) {
  if (name == "sz0") return Sector::Sz0;
  if (name == "sz_plus") return Sector::SzPlus;
  if (name == "odd_default") return Sector::OddDefault;
  if (name == "odd_plus") return Sector::OddPlus;
  throw ArgumentError("unknown sector '" + name + "'");
}

}  // namespace

struct kgm_patch {
  KagomePatch v;
};
struct kgm_schedule {
  RoundSchedule v;
};
struct kgm_state {
  StateVector v;
};
struct kgm_hamiltonian {
  SparseHamiltonian v;
};
struct kgm_ansatz {
  AnsatzSpec v;
};
struct kgm_eigensolution {
  EigenSolution v;
};

extern "C" {

const char* kgm_version(void) { return "0.1.0"; }
const char* kgm_last_error(void) { return g_last_error.c_str(); }
void kgm_string_free(char* s) { delete[] s; }

kgm_status kgm_patch_build(const char* name, kgm_patch** out) {
  return guarded([&] {
    if (!name || !out) throw ArgumentError("null argument");
    *out = new kgm_patch{build_patch(name)};
  });
}
void kgm_patch_free(kgm_patch* p) { delete p; }
int kgm_patch_n_sites(const kgm_patch* p) { return p ? p->v.n_sites : 0; }
int kgm_patch_n_edges(const kgm_patch* p) { return p ? (int)p->v.edges.size() : 0; }

kgm_status kgm_patch_to_json(const kgm_patch* p, char** json_out) {
  return guarded([&] {
    if (!p || !json_out) throw ArgumentError("null argument");
    *json_out = dup_string(patch_to_json(p->v));
  });
}

kgm_status kgm_patch_dimers_json(const kgm_patch* p, char** json_out) {
  return guarded([&] {
    if (!p || !json_out) throw ArgumentError("null argument");
    DimerCovering cover = dimer_covering(p->v);
    nlohmann::ordered_json j;
    j["dimers"] = nlohmann::ordered_json::array();
    for (const Edge& d : cover.dimers) j["dimers"].push_back({d.a, d.b});
    j["uncovered"] = cover.uncovered;
    *json_out = dup_string(j.dump(2));
  });
}

kgm_status kgm_patch_colouring_json(const kgm_patch* p, const char* scheme,
                                    char** json_out) {
  return guarded([&] {
    if (!p || !scheme || !json_out) throw ArgumentError("null argument");
    const std::string s = scheme;
    ColourScheme cs;
    if (s == "square5")
      cs = ColourScheme::Square5;
    else if (s == "alltoall4")
      cs = ColourScheme::AllToAll4;
    else
      throw ArgumentError("scheme must be square5 or alltoall4");
    EdgeColouring col = colour_edges(p->v, cs);
    nlohmann::ordered_json j;
    j["scheme"] = s;
    j["n_colours"] = col.n_colours;
    j["edges"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < p->v.edges.size(); ++i)
      j["edges"].push_back(
          {p->v.edges[i].a, p->v.edges[i].b, col.colour[i]});
    *json_out = dup_string(j.dump(2));
  });
}

kgm_status kgm_schedule_build(const kgm_patch* p, const char* topology,
                              kgm_schedule** out) {
  return guarded([&] {
    if (!p || !topology || !out) throw ArgumentError("null argument");
    const std::string t = topology;
    if (t == "square")
      *out = new kgm_schedule{embed_square(p->v).rounds};
    else if (t == "alltoall")
      *out = new kgm_schedule{schedule_all_to_all(p->v)};
    else
      throw ArgumentError("topology must be square or alltoall");
  });
}
void kgm_schedule_free(kgm_schedule* s) { delete s; }
int kgm_schedule_n_layers(const kgm_schedule* s) {
  return s ? (int)s->v.layers.size() : 0;
}

kgm_status kgm_schedule_to_json(const kgm_schedule* s, char** json_out) {
  return guarded([&] {
    if (!s || !json_out) throw ArgumentError("null argument");
    *json_out = dup_string(schedule_to_json(s->v));
  });
}

kgm_status kgm_depth_report_json(const kgm_schedule* s, long rounds,
                                 char** json_out) {
  return guarded([&] {
    if (!s || !json_out) throw ArgumentError("null argument");
    *json_out = dup_string(depth_report_json(s->v, depth_report(s->v, rounds)));
  });
}

kgm_status kgm_state_create(int n_qubits, kgm_state** out) {
  return guarded([&] {
    if (!out) throw ArgumentError("null argument");
    *out = new kgm_state{StateVector(n_qubits)};
  });
}

kgm_status kgm_state_basis(int n_qubits, const char* bits, kgm_state** out) {
  return guarded([&] {
    if (!bits || !out) throw ArgumentError("null argument");
    *out = new kgm_state{StateVector::basis_state(n_qubits, bits)};
  });
}

kgm_status kgm_state_initial(const kgm_patch* p, const char* sector,
                             kgm_state** out) {
  return guarded([&] {
    if (!p || !sector || !out) throw ArgumentError("null argument");
    *out = new kgm_state{initial_state(p->v, sector_from_name(sector))};
  });
}

kgm_status kgm_state_clone(const kgm_state* s, kgm_state** out) {
  return guarded([&] {
    if (!s || !out) throw ArgumentError("null argument");
    *out = new kgm_state{s->v};
  });
}
void kgm_state_free(kgm_state* s) { delete s; }
int kgm_state_n_qubits(const kgm_state* s) { return s ? s->v.n_qubits() : 0; }

kgm_status kgm_state_apply_heisenberg(kgm_state* s, int k, int l, double angle) {
  return guarded([&] {
    if (!s) throw ArgumentError("null argument");
    apply_heisenberg(s->v, k, l, angle);
  });
}

kgm_status kgm_state_total_spin(const kgm_state* s, char axis, double* out) {
  return guarded([&] {
    if (!s || !out) throw ArgumentError("null argument");
    *out = total_spin(s->v, axis);
  });
}

kgm_status kgm_state_fidelity(const kgm_state* a, const kgm_state* b,
                              double* out) {
  return guarded([&] {
    if (!a || !b || !out) throw ArgumentError("null argument");
    *out = fidelity(a->v, b->v);
  });
}

kgm_status kgm_state_sample_csv(const kgm_state* s, char basis, long shots,
                                uint64_t seed, int post_select, char** csv_out) {
  return guarded([&] {
    if (!s || !csv_out) throw ArgumentError("null argument");
    *csv_out = dup_string(sample(s->v, basis, shots, seed, post_select != 0).to_csv());
  });
}

kgm_status kgm_state_dump(const kgm_state* s, const char* path) {
  return guarded([&] {
    if (!s || !path) throw ArgumentError("null argument");
    dump_amplitudes(s->v, path);
  });
}

kgm_status kgm_hamiltonian_build(const kgm_patch* p, const char* subset,
                                 int colour, kgm_hamiltonian** out) {
  return guarded([&] {
    if (!p || !subset || !out) throw ArgumentError("null argument");
    const std::string s = subset;
    HamSubset hs;
    if (s == "all")
      hs = HamSubset::All;
    else if (s == "colour")
      hs = HamSubset::Colour;
    else if (s == "dimers")
      hs = HamSubset::Dimers;
    else
      throw ArgumentError("subset must be all, colour or dimers");
    *out = new kgm_hamiltonian{build_hamiltonian(p->v, hs, colour)};
  });
}
void kgm_hamiltonian_free(kgm_hamiltonian* h) { delete h; }

kgm_status kgm_expectation(const kgm_hamiltonian* h, const kgm_state* s,
                           double* out) {
  return guarded([&] {
    if (!h || !s || !out) throw ArgumentError("null argument");
    *out = expectation(h->v, s->v);
  });
}

kgm_status kgm_lanczos(const kgm_hamiltonian* h, int k, uint64_t seed,
                       kgm_eigensolution** out) {
  return guarded([&] {
    if (!h || !out) throw ArgumentError("null argument");
    LanczosOptions lo;
    lo.k = k;
    lo.seed = seed;
    if (h->v.n_qubits > 20) {
      lo.sector_basis = true;
      lo.sector = h->v.n_qubits % 2 == 0 ? 0 : 1;
      lo.basis_cap = 100;
    } else {
      lo.basis_cap = std::min<long>(200, (1L << h->v.n_qubits) - 2);
    }
    *out = new kgm_eigensolution{lanczos_lowest(h->v, lo)};
  });
}
void kgm_eigensolution_free(kgm_eigensolution* e) { delete e; }
int kgm_eigensolution_k(const kgm_eigensolution* e) {
  return e ? (int)e->v.eigenvalues.size() : 0;
}
double kgm_eigensolution_energy(const kgm_eigensolution* e, int i) {
  return e && i >= 0 && i < (int)e->v.eigenvalues.size() ? e->v.eigenvalues[i] : 0.0;
}
double kgm_eigensolution_residual(const kgm_eigensolution* e, int i) {
  return e && i >= 0 && i < (int)e->v.residuals.size() ? e->v.residuals[i] : -1.0;
}
kgm_status kgm_eigensolution_state(const kgm_eigensolution* e, int i,
                                   kgm_state** out) {
  return guarded([&] {
    if (!e || !out) throw ArgumentError("null argument");
    if (i < 0 || i >= (int)e->v.eigenvectors.size())
      throw ArgumentError("eigenvector index out of range");
    *out = new kgm_state{e->v.eigenvectors[i]};
  });
}

kgm_status kgm_ansatz_create(const kgm_patch* p, const char* scheme, int layers,
                             kgm_ansatz** out) {
  return guarded([&] {
    if (!p || !scheme || !out) throw ArgumentError("null argument");
    *out = new kgm_ansatz{make_spec(p->v, scheme_from_name(scheme), layers)};
  });
}
void kgm_ansatz_free(kgm_ansatz* a) { delete a; }
int kgm_ansatz_n_params(const kgm_ansatz* a) { return a ? a->v.n_params : 0; }

kgm_status kgm_ansatz_to_json(const kgm_ansatz* a, char** json_out) {
  return guarded([&] {
    if (!a || !json_out) throw ArgumentError("null argument");
    *json_out = dup_string(spec_to_json(a->v));
  });
}

kgm_status kgm_ansatz_apply(const kgm_ansatz* a, kgm_state* s,
                            const double* theta, int n_theta) {
  return guarded([&] {
    if (!a || !s || !theta) throw ArgumentError("null argument");
    apply_ansatz(s->v, a->v, std::vector<double>(theta, theta + n_theta));
  });
}

kgm_status kgm_init_params(const kgm_ansatz* a, const char* strategy,
                           uint64_t seed, double ramp_delta, double* theta_out,
                           int n_theta) {
  return guarded([&] {
    if (!a || !strategy || !theta_out) throw ArgumentError("null argument");
    if (n_theta != a->v.n_params) throw DimError("theta buffer length mismatch");
    std::vector<double> theta =
        init_params(a->v, init_from_name(strategy), seed, ramp_delta);
    std::copy(theta.begin(), theta.end(), theta_out);
  });
}

kgm_status kgm_objective(const kgm_hamiltonian* h, const kgm_ansatz* a,
                         const kgm_state* psi_init, const double* theta,
                         int n_theta, double* out) {
  return guarded([&] {
    if (!h || !a || !psi_init || !theta || !out) throw ArgumentError("null argument");
    *out = objective(a->v, std::vector<double>(theta, theta + n_theta),
                     psi_init->v, h->v);
  });
}

kgm_status kgm_gradient(const kgm_hamiltonian* h, const kgm_ansatz* a,
                        const kgm_state* psi_init, const double* theta,
                        int n_theta, double* grad_out, double* f_out) {
  return guarded([&] {
    if (!h || !a || !psi_init || !theta || !grad_out)
      throw ArgumentError("null argument");
    std::vector<double> grad;
    const double f = objective_gradient(
        a->v, std::vector<double>(theta, theta + n_theta), psi_init->v, h->v, grad);
    if ((int)grad.size() != n_theta) throw DimError("gradient length mismatch");
    std::copy(grad.begin(), grad.end(), grad_out);
    if (f_out) *f_out = f;
  });
}

kgm_status kgm_experiment_run(const char* config_json, const char* out_dir,
                              char** manifest_json_out) {
  return guarded([&] {
    if (!config_json || !out_dir) throw ArgumentError("null argument");
    nlohmann::json cfg = nlohmann::json::parse(config_json);
    nlohmann::json manifest = run_experiment(cfg, out_dir);
    if (manifest_json_out) *manifest_json_out = dup_string(manifest.dump(2));
  });
}

kgm_status kgm_plot(const char* kind, const char* csv_path, const char* out_path) {
  return guarded([&] {
    if (!kind || !csv_path || !out_path) throw ArgumentError("null argument");
    plot_csv(kind, csv_path, out_path);
  });
}

}  // extern "C"
