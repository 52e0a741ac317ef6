/* kagomevqe: exact state-vector VQE engine for the spin-1/2 Heisenberg
 * antiferromagnet on finite kagome patches, with a hardware-schedule compiler
 * for square-grid and all-to-all topologies.
 *
 * C interface of the shared library. All functions return kgm_status; on
 * failure kgm_last_error() carries a thread-local message. Strings returned
 * through char** are heap-allocated; release them with kgm_string_free.
 */
#ifndef KAGOMEVQE_H
#define KAGOMEVQE_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kgm_status {
  KGM_OK = 0,
  KGM_ERR_NAME = 1,        /* unknown patch name */
  KGM_ERR_SPEC = 2,        /* invalid or degenerate specification */
  KGM_ERR_COVERING = 3,    /* no valid dimer covering */
  KGM_ERR_EMBED = 4,       /* patch not embeddable in the square pattern */
  KGM_ERR_DIM = 5,         /* dimension mismatch */
  KGM_ERR_ARGUMENT = 6,    /* bad argument */
  KGM_ERR_CONVERGENCE = 7, /* solver did not converge */
  KGM_ERR_ESTIMATION = 8,  /* estimator has no usable samples */
  KGM_ERR_IO = 9,          /* file or format problem */
  KGM_ERR_INTERNAL = 10
} kgm_status;

typedef struct kgm_patch kgm_patch;
typedef struct kgm_schedule kgm_schedule;
typedef struct kgm_state kgm_state;
typedef struct kgm_hamiltonian kgm_hamiltonian;
typedef struct kgm_ansatz kgm_ansatz;
typedef struct kgm_eigensolution kgm_eigensolution;

const char* kgm_version(void);
const char* kgm_last_error(void);
void kgm_string_free(char* s);

/* ---- lattice -------------------------------------------------------- */

/* Named patches: 2x4 2x6 2x8 3x6 2x10 3x8 tri1 tri2 tri3, plus generated
 * 2xC strips. */
kgm_status kgm_patch_build(const char* name, kgm_patch** out);
void kgm_patch_free(kgm_patch* p);
int kgm_patch_n_sites(const kgm_patch* p);
int kgm_patch_n_edges(const kgm_patch* p);
kgm_status kgm_patch_to_json(const kgm_patch* p, char** json_out);
/* dimer covering as JSON {dimers: [[a,b]...], uncovered: id or -1} */
kgm_status kgm_patch_dimers_json(const kgm_patch* p, char** json_out);
/* scheme: "square5" or "alltoall4"; JSON {scheme, colours:[...per edge]} */
kgm_status kgm_patch_colouring_json(const kgm_patch* p, const char* scheme,
                                    char** json_out);

/* ---- hardware schedules --------------------------------------------- */

/* topology: "square" (7-layer round with swaps) or "alltoall" (<=4 layers) */
kgm_status kgm_schedule_build(const kgm_patch* p, const char* topology,
                              kgm_schedule** out);
void kgm_schedule_free(kgm_schedule* s);
int kgm_schedule_n_layers(const kgm_schedule* s);
kgm_status kgm_schedule_to_json(const kgm_schedule* s, char** json_out);
kgm_status kgm_depth_report_json(const kgm_schedule* s, long rounds,
                                 char** json_out);

/* ---- state vectors --------------------------------------------------- */

kgm_status kgm_state_create(int n_qubits, kgm_state** out); /* |0...0> */
/* bits: msb-first 0/1 string of length n_qubits; bit 0 encodes |down> */
kgm_status kgm_state_basis(int n_qubits, const char* bits, kgm_state** out);
/* sector: "sz0", "sz_plus", "odd_default" or "odd_plus" */
kgm_status kgm_state_initial(const kgm_patch* p, const char* sector,
                             kgm_state** out);
kgm_status kgm_state_clone(const kgm_state* s, kgm_state** out);
void kgm_state_free(kgm_state* s);
int kgm_state_n_qubits(const kgm_state* s);
/* exp(-i angle (XX+YY+ZZ)) on qubits (k,l) */
kgm_status kgm_state_apply_heisenberg(kgm_state* s, int k, int l, double angle);
/* axis: 'x','y' or 'z'; Pauli units, an up spin counts +1 along z */
kgm_status kgm_state_total_spin(const kgm_state* s, char axis, double* out);
kgm_status kgm_state_fidelity(const kgm_state* a, const kgm_state* b,
                              double* out);
/* basis: 'X','Y','Z'. CSV: one msb-first bitstring per kept shot. */
kgm_status kgm_state_sample_csv(const kgm_state* s, char basis, long shots,
                                uint64_t seed, int post_select, char** csv_out);
/* little-endian interleaved re/im doubles */
kgm_status kgm_state_dump(const kgm_state* s, const char* path);

/* ---- Hamiltonian and diagonalisation --------------------------------- */

/* subset: "all", "colour" (with colour label 1..5) or "dimers" */
kgm_status kgm_hamiltonian_build(const kgm_patch* p, const char* subset,
                                 int colour, kgm_hamiltonian** out);
void kgm_hamiltonian_free(kgm_hamiltonian* h);
kgm_status kgm_expectation(const kgm_hamiltonian* h, const kgm_state* s,
                           double* out);
/* k lowest eigenpairs by Lanczos (full reorthogonalisation, thick restart) */
kgm_status kgm_lanczos(const kgm_hamiltonian* h, int k, uint64_t seed,
                       kgm_eigensolution** out);
void kgm_eigensolution_free(kgm_eigensolution* e);
int kgm_eigensolution_k(const kgm_eigensolution* e);
double kgm_eigensolution_energy(const kgm_eigensolution* e, int i);
double kgm_eigensolution_residual(const kgm_eigensolution* e, int i);
kgm_status kgm_eigensolution_state(const kgm_eigensolution* e, int i,
                                   kgm_state** out);

/* ---- ansatz and VQE --------------------------------------------------- */

/* scheme: per_hamiltonian | per_edge_color | per_edge_color_ii | per_edge */
kgm_status kgm_ansatz_create(const kgm_patch* p, const char* scheme, int layers,
                             kgm_ansatz** out);
void kgm_ansatz_free(kgm_ansatz* a);
int kgm_ansatz_n_params(const kgm_ansatz* a);
kgm_status kgm_ansatz_to_json(const kgm_ansatz* a, char** json_out);
kgm_status kgm_ansatz_apply(const kgm_ansatz* a, kgm_state* s,
                            const double* theta, int n_theta);
/* strategy: "random_uniform" or "linear_ramp"; ramp_delta <= 0 -> 1/p */
kgm_status kgm_init_params(const kgm_ansatz* a, const char* strategy,
                           uint64_t seed, double ramp_delta, double* theta_out,
                           int n_theta);
kgm_status kgm_objective(const kgm_hamiltonian* h, const kgm_ansatz* a,
                         const kgm_state* psi_init, const double* theta,
                         int n_theta, double* out);
/* exact reverse-sweep gradient; f_out may be NULL */
kgm_status kgm_gradient(const kgm_hamiltonian* h, const kgm_ansatz* a,
                        const kgm_state* psi_init, const double* theta,
                        int n_theta, double* grad_out, double* f_out);

/* ---- experiments ------------------------------------------------------ */

/* config: JSON text (same keys as the CLI flags); artifacts are written
 * under out_dir; the manifest JSON is returned. A failing task is recorded
 * in the manifest rather than reported as an error status. */
kgm_status kgm_experiment_run(const char* config_json, const char* out_dir,
                              char** manifest_json_out);
/* kind: sweep | thresholds | gradients | correlations | heatmap */
kgm_status kgm_plot(const char* kind, const char* csv_path,
                    const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* KAGOMEVQE_H */
