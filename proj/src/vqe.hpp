#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "exactdiag.hpp"

namespace kgm {

// f(theta) = <psi(theta)| H |psi(theta)> from the full wave function.
double objective(const AnsatzSpec& spec, const std::vector<double>& theta,
                 const StateVector& psi_init, const SparseHamiltonian& H);

// Exact gradient by one forward and one reverse sweep (costate method); tied
// parameters accumulate per-gate contributions. Returns f, fills grad.
double objective_gradient(const AnsatzSpec& spec, const std::vector<double>& theta,
                          const StateVector& psi_init, const SparseHamiltonian& H,
                          std::vector<double>& grad);

enum class InitStrategy { RandomUniform, LinearRamp };
const char* init_name(InitStrategy s);
InitStrategy init_from_name(const std::string& name);

// random_uniform: i.i.d. U[0, 1/p]. linear_ramp: layer i gets
// theta_{i,0} = delta*(1 - i/(p+1)) and all H-side angles delta*(i/(p+1));
// delta <= 0 selects the default 1/p.
std::vector<double> init_params(const AnsatzSpec& spec, InitStrategy strategy,
                                std::uint64_t seed, double ramp_delta = 0.0);

struct LbfgsOptions {
  int memory = 10;
  double c1 = 1e-4, c2 = 0.9;
  double gtol = 1e-9;   // on the gradient 2-norm
  double ftol = 1e-14;  // relative decrease between accepted steps
  long max_iters = 5000;
  long max_evals = 200000;
};

struct LbfgsResult {
  std::vector<double> x;
  double f = 0;
  long iters = 0, evals = 0;
  std::string status;
  std::vector<double> trace;  // f at accepted iterates, starting with f(x0)
  std::vector<std::vector<double>> first_gradients;  // first <= 5 evaluations
};

using ObjGrad = std::function<double(const std::vector<double>&, std::vector<double>&)>;

// Limited-memory BFGS with a strong-Wolfe line search. A line-search failure
// terminates with the best point seen, reported through `status`.
LbfgsResult lbfgs_minimize(const ObjGrad& fg, std::vector<double> x0,
                           const LbfgsOptions& opt);

// Per-patch shared context: Hamiltonian and the k=2 Lanczos reference.
struct PatchContext {
  KagomePatch patch;
  SparseHamiltonian H;
  EigenSolution refs;
  PatchContext(const std::string& name, std::uint64_t lanczos_seed = 7);
};

struct VqeRunRecord {
  std::string patch;
  Scheme scheme = Scheme::PerEdge;
  int p = 0;
  int restart = 0;
  std::uint64_t seed = 0;
  std::string init;
  double e_final = 0, e0 = 0, e1 = 0;
  double rel_energy_err = 0;
  double infidelity = 1, subspace_infidelity = 1;
  long iters = 0, evals = 0;
  double wall_s = 0;
  std::string status;
  std::vector<double> energy_trace;
  std::vector<std::vector<double>> gradient_snapshots;
  std::vector<double> final_theta;
};

struct VqeConfig {
  std::string patch = "2x4";
  Scheme scheme = Scheme::PerEdge;
  int p = 1;
  InitStrategy init = InitStrategy::RandomUniform;
  double ramp_delta = 0.0;
  std::uint64_t seed = 1;
  int restarts = 1;
  LbfgsOptions opt;
};

std::uint64_t derive_seed(std::uint64_t base, const std::string& patch,
                          Scheme scheme, int p, int restart);

VqeRunRecord run_vqe_once(const PatchContext& ctx, const AnsatzSpec& spec,
                          InitStrategy init, double ramp_delta,
                          std::uint64_t run_seed, const LbfgsOptions& opt,
                          Sector sector, int restart_index);

std::vector<VqeRunRecord> run_vqe(const VqeConfig& cfg);

struct SweepOptions {
  std::vector<std::string> patches;
  std::vector<Scheme> schemes;
  std::vector<int> ps;
  int restarts = 10;
  std::uint64_t seed = 1;
  InitStrategy init = InitStrategy::RandomUniform;
  double ramp_delta = 0.0;
  LbfgsOptions opt;
};

// Runs every (patch, scheme, p, restart) cell; the sink fires after each
// record in deterministic task order (used for incremental persistence).
std::vector<VqeRunRecord> sweep(const SweepOptions& opt,
                                const std::function<void(const VqeRunRecord&)>& sink = {});

struct ThresholdRow {
  std::string patch;
  Scheme scheme = Scheme::PerEdge;
  double threshold = 0;
  bool reached = false;
  double p_needed = 0;  // linear interpolation on log-infidelity vs p
};
std::vector<ThresholdRow> threshold_table(const std::vector<VqeRunRecord>& records,
                                          const std::vector<double>& thresholds);

struct GradientStats {
  std::string patch;
  Scheme scheme = Scheme::PerEdge;
  int p = 0, n_qubits = 0, samples = 0;
  double var_first = 0, var_first_scaled = 0;    // scaled: / n_qb^2
  double mean_norm = 0, mean_norm_scaled = 0;    // scaled: / (n_qb * p)
};
std::vector<GradientStats> gradient_study(const std::vector<std::string>& patches,
                                          const std::vector<Scheme>& schemes,
                                          const std::vector<int>& ps, int samples,
                                          std::uint64_t seed);

}  // namespace kgm
