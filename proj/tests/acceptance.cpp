// Acceptance suite: runs the release criteria end to end and prints one
// PASS/FAIL line per criterion. The 24-qubit near-degeneracy check (4) is
// long-running; it is skipped unless --large is passed or KGM_ACCEPT_LARGE=1.
//
// Usage: acceptance [--large] [--only N]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "embed.hpp"
#include "observables.hpp"
#include "vqe.hpp"

using namespace kgm;

namespace {

struct Shared {
  // sweep results reused across criteria 1-3 and 10
  std::map<Scheme, std::map<int, double>> best26;  // scheme -> p -> best infid
  std::map<int, double> best24;                    // per_edge on 2x4
  std::vector<double> best26_p8_theta;             // best per_edge p=8 run
  double best24_p5 = 1.0;
  bool sweeps_done = false;
};

Shared g;

double linear_fit_r2(const std::vector<double>& xs, const std::vector<double>& ys,
                     double* slope_out) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  if (slope_out) *slope_out = slope;
  return syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
}

void run_sweeps(std::ostream& log) {
  if (g.sweeps_done) return;
  const std::uint64_t seed = 2026;
  LbfgsOptions opt;  // spec defaults: m=10, c1=1e-4, c2=0.9, gtol=1e-9, ftol=1e-14

  {  // 2x4 per-edge, p = 1..8, 10 restarts
    PatchContext ctx("2x4");
    for (int p = 1; p <= 8; ++p) {
      AnsatzSpec spec = make_spec(ctx.patch, Scheme::PerEdge, p);
      double best = 1.0;
      for (int r = 0; r < 10; ++r) {
        auto rec = run_vqe_once(ctx, spec, InitStrategy::RandomUniform, 0.0,
                                derive_seed(seed, "2x4", Scheme::PerEdge, p, r),
                                opt, Sector::Sz0, r);
        best = std::min(best, rec.infidelity);
      }
      g.best24[p] = best;
      log << "  [sweep] 2x4 per_edge p=" << p << " best infid " << best << "\n";
    }
    g.best24_p5 = g.best24[5];
  }
  {  // 2x6, all four schemes, p = 1..8, 10 restarts
    PatchContext ctx("2x6");
    for (Scheme scheme : {Scheme::PerEdge, Scheme::PerEdgeColor,
                          Scheme::PerHamiltonian, Scheme::PerEdgeColorII}) {
      for (int p = 1; p <= 8; ++p) {
        AnsatzSpec spec = make_spec(ctx.patch, scheme, p);
        double best = 1.0;
        for (int r = 0; r < 10; ++r) {
          auto rec = run_vqe_once(ctx, spec, InitStrategy::RandomUniform, 0.0,
                                  derive_seed(seed, "2x6", scheme, p, r), opt,
                                  Sector::Sz0, r);
          if (rec.infidelity < best) {
            best = rec.infidelity;
            if (scheme == Scheme::PerEdge && p == 8)
              g.best26_p8_theta = rec.final_theta;
          }
        }
        g.best26[scheme][p] = best;
        log << "  [sweep] 2x6 " << scheme_name(scheme) << " p=" << p
            << " best infid " << best << "\n";
      }
    }
  }
  g.sweeps_done = true;
}

// --------------------------------------------------------------- criteria ---

bool criterion1(std::ostream& log) {
  run_sweeps(log);
  log << "  2x4 per_edge p=5 best-of-10 infidelity = " << g.best24_p5 << "\n";
  return g.best24_p5 <= 1e-12;
}

bool criterion2(std::ostream& log) {
  run_sweeps(log);
  bool ok = true;
  for (const char* which : {"2x4", "2x6"}) {
    const auto& curve =
        std::strcmp(which, "2x4") == 0 ? g.best24 : g.best26[Scheme::PerEdge];
    std::vector<double> xs, ys;
    for (const auto& [p, inf] : curve) {
      xs.push_back(p);
      ys.push_back(std::log10(std::max(inf, 1e-16)));
    }
    double slope = 0;
    const double r2 = linear_fit_r2(xs, ys, &slope);
    log << "  " << which << ": slope " << slope << ", R^2 " << r2 << "\n";
    ok = ok && slope < 0 && r2 >= 0.9;
  }
  return ok;
}

bool criterion3(std::ostream& log) {
  run_sweeps(log);
  bool ok = true;
  for (int p = 1; p <= 8; ++p) {
    const double pe = g.best26[Scheme::PerEdge][p];
    const double pec = g.best26[Scheme::PerEdgeColor][p];
    const double ph = g.best26[Scheme::PerHamiltonian][p];
    const double cii = g.best26[Scheme::PerEdgeColorII][p];
    const bool row_ok =
        pe <= 2 * pec && pec <= 2 * ph && 2 * cii >= std::max({pe, pec, ph});
    log << "  p=" << p << ": per_edge " << pe << "  per_edge_color " << pec
        << "  per_hamiltonian " << ph << "  colour_ii " << cii
        << (row_ok ? "" : "   <-- violates ordering") << "\n";
    ok = ok && row_ok;
  }
  return ok;
}

bool criterion4(std::ostream& log) {
  KagomePatch patch = build_patch("3x8");
  SparseHamiltonian H = build_hamiltonian(patch, HamSubset::All);
  LanczosOptions lo;
  lo.k = 2;
  lo.seed = 7;
  lo.tol = 1e-10;
  lo.sector = 0;
  lo.sector_basis = true;
  lo.basis_cap = 100;
  lo.max_matvecs = 40000;
  lo.want_vectors = false;
  EigenSolution sol = lanczos_lowest(H, lo);
  const double rel = (sol.eigenvalues[1] - sol.eigenvalues[0]) /
                     std::abs(sol.eigenvalues[0]);
  log << "  E0 = " << sol.eigenvalues[0] << ", E1 = " << sol.eigenvalues[1]
      << ", relative gap = " << rel << " (matvecs " << sol.matvecs << ")\n";
  return rel >= 0.0008 * 0.8 && rel <= 0.0008 * 1.2;
}

bool criterion5(std::ostream& log) {
  std::mt19937_64 gen(404);
  double worst = 0;
  for (const char* name : {"2x4", "2x6"}) {
    KagomePatch patch = build_patch(name);
    SparseHamiltonian H = build_hamiltonian(patch, HamSubset::All);
    StateVector psi = initial_state(patch, Sector::Sz0);
    for (Scheme scheme : {Scheme::PerHamiltonian, Scheme::PerEdgeColor,
                          Scheme::PerEdgeColorII, Scheme::PerEdge}) {
      for (int p : {1, 2, 3}) {
        AnsatzSpec spec = make_spec(patch, scheme, p);
        // split the 20 points over the three depths to keep the budget flat
        for (int t = 0; t < 7; ++t) {
          std::vector<double> theta =
              init_params(spec, InitStrategy::RandomUniform, gen());
          std::vector<double> grad;
          objective_gradient(spec, theta, psi, H, grad);
          const double h = 1e-5;
          for (int i = 0; i < spec.n_params; ++i) {
            theta[i] += h;
            const double fp = objective(spec, theta, psi, H);
            theta[i] -= 2 * h;
            const double fm = objective(spec, theta, psi, H);
            theta[i] += h;
            const double fd = (fp - fm) / (2 * h);
            worst = std::max(worst,
                             std::abs(grad[i] - fd) / std::max(1.0, std::abs(fd)));
          }
        }
      }
    }
  }
  log << "  max gradient error vs central differences: " << worst << "\n";
  return worst < 1e-6;
}

bool criterion6(std::ostream& log) {
  bool ok = true;
  for (const char* name : {"2x4", "2x6"}) {
    KagomePatch patch = build_patch(name);
    SparseHamiltonian H = build_hamiltonian(patch, HamSubset::All);
    std::vector<double> dense = dense_diag_oracle(H);
    LanczosOptions lo;
    lo.k = 4;
    lo.seed = 31;
    EigenSolution sol = lanczos_lowest(H, lo);
    double worst = 0;
    for (int i = 0; i < 4; ++i)
      worst = std::max(worst, std::abs(sol.eigenvalues[i] - dense[i]));
    log << "  " << name << ": max |lanczos - dense| over k<=4 = " << worst << "\n";
    ok = ok && worst < 1e-10;
  }
  KagomePatch tri = make_patch(
      "triangle", {{0, 0}, {1, 0}, {0.5, 0.8660254037844386}}, {{0, 1}, {0, 2}, {1, 2}});
  std::vector<double> ev = dense_diag_oracle(build_hamiltonian(tri, HamSubset::All));
  const bool tri_ok = std::abs(ev[0] + 3) < 1e-12 && std::abs(ev[3] + 3) < 1e-12 &&
                      std::abs(ev[4] - 3) < 1e-12;
  log << "  triangle ground space: 4-fold degenerate at -3: "
      << (tri_ok ? "yes" : "no") << "\n";
  return ok && tri_ok;
}

bool criterion7(std::ostream& log) {
  std::mt19937_64 gen(777);
  double worst_drift = 0;
  long discarded = 0;
  for (const char* name : {"2x4", "2x6"}) {
    KagomePatch patch = build_patch(name);
    for (int rep = 0; rep < 200; ++rep) {
      const Scheme scheme = static_cast<Scheme>(gen() % 4);
      const int p = 1 + (int)(gen() % 3);
      AnsatzSpec spec = make_spec(patch, scheme, p);
      StateVector s = initial_state(patch, Sector::Sz0);
      std::vector<double> theta(spec.n_params);
      for (double& t : theta) t = canonical_double(gen()) / p;
      apply_ansatz(s, spec, theta);
      for (char axis : {'x', 'y', 'z'}) {
        SectorCheck sc = sector_check(s, axis, 0.0, 1e-10);
        worst_drift = std::max({worst_drift, std::abs(sc.mean), sc.variance});
      }
      if (rep % 50 == 0) {
        ShotBatch b = sample(s, 'Z', 256, gen(), true);
        discarded += b.discarded;
      }
    }
  }
  log << "  worst sector drift (mean or variance): " << worst_drift
      << ", post-selection discards on noiseless states: " << discarded << "\n";
  return worst_drift < 1e-10 && discarded == 0;
}

bool criterion8(std::ostream& log) {
  bool ok = true;
  const std::vector<double> angles = {0.21, -0.37, 0.143, 0.55, -0.31};
  for (const char* name : {"2x4", "2x6", "2x8", "3x6", "2x10", "3x8"}) {
    KagomePatch patch = build_patch(name);
    SquareEmbedding emb = embed_square(patch);
    bool structural = emb.rounds.layers.size() <= 7;
    std::vector<int> net;
    std::vector<Edge> logical = schedule_logical_edges(emb.rounds, &net);
    std::vector<Edge> want = patch.edges;
    std::sort(want.begin(), want.end());
    structural = structural && logical == want;
    for (int i = 0; i < patch.n_sites; ++i) structural = structural && net[i] == i;
    for (const ScheduleLayer& l : emb.rounds.layers) {
      std::vector<int> seen;
      for (const Edge& e : l.pairs) {
        seen.push_back(e.a);
        seen.push_back(e.b);
      }
      std::sort(seen.begin(), seen.end());
      structural =
          structural && std::adjacent_find(seen.begin(), seen.end()) == seen.end();
    }
    RoundSchedule aa = schedule_all_to_all(patch);
    structural = structural && aa.layers.size() <= 4;

    StateVector direct = initial_state(patch, Sector::Sz0);
    StateVector sim = direct;
    apply_round_direct(direct, patch, colour_edges(patch, ColourScheme::Square5),
                       angles);
    simulate_round(sim, emb.rounds, angles);
    const double infid = 1.0 - fidelity(direct, sim);
    log << "  " << name << ": layers " << emb.rounds.layers.size()
        << ", all-to-all " << aa.layers.size() << ", schedule-vs-direct infid "
        << infid << (structural ? "" : "  <-- structural violation") << "\n";
    ok = ok && structural && infid < 1e-12;
  }
  return ok;
}

bool criterion9(std::ostream& log) {
  PatchContext ctx("2x4");
  const StateVector& gs = ctx.refs.eigenvectors[0];
  const double e0 = ctx.refs.eigenvalues[0];
  int within = 0;
  for (int rep = 0; rep < 100; ++rep) {
    ShotBatch bx = sample(gs, 'X', 100000, 1000 + 3 * rep, true);
    ShotBatch by = sample(gs, 'Y', 100000, 1001 + 3 * rep, true);
    ShotBatch bz = sample(gs, 'Z', 100000, 1002 + 3 * rep, true);
    EnergyEstimate est = estimate_energy_from_shots(bx, by, bz, ctx.patch, true);
    if (std::abs(est.value - e0) <= 3 * est.std_error) ++within;
  }
  log << "  estimates within 3 sigma of E0: " << within << "/100\n";

  StateVector singlet(2);
  apply_singlet_prep(singlet, 0, 1);
  StateVector t = singlet;
  apply_singlet_unprep(t, 0, 1);
  ShotBatch b = sample(t, 'Z', 2000, 5, false);
  bool all_dd = true;
  for (std::uint64_t m : b.shots) all_dd = all_dd && m == 0;
  log << "  dimer protocol on a singlet returns down,down with probability 1: "
      << (all_dd ? "yes" : "no") << "\n";
  return within >= 95 && all_dd;
}

bool criterion10(std::ostream& log) {
  run_sweeps(log);
  PatchContext ctx("2x6");
  AnsatzSpec spec = make_spec(ctx.patch, Scheme::PerEdge, 8);
  if ((int)g.best26_p8_theta.size() != spec.n_params) {
    log << "  missing p=8 sweep state\n";
    return false;
  }
  StateVector vqe_state = initial_state(ctx.patch, Sector::Sz0);
  apply_ansatz(vqe_state, spec, g.best26_p8_theta);
  const StateVector& exact = ctx.refs.eigenvectors[0];

  const std::vector<int>& path = ctx.patch.marked_path;
  std::vector<Edge> pairs;
  for (std::size_t j = 1; j < path.size(); ++j)
    pairs.push_back({std::min(path[0], path[j]), std::max(path[0], path[j])});
  std::vector<double> vqe_corr = spin_spin(vqe_state, pairs);
  std::vector<double> exact_corr = spin_spin(exact, pairs);
  double worst = 0;
  for (std::size_t j = 0; j < pairs.size(); ++j)
    worst = std::max(worst, std::abs(vqe_corr[j] - exact_corr[j]));
  log << "  max spin-spin deviation along the marked path: " << worst << "\n";

  StructureFactorGrid gv = structure_factor(vqe_state, ctx.patch, 41);
  StructureFactorGrid ge = structure_factor(exact, ctx.patch, 41);
  double dev = 0;
  for (std::size_t i = 0; i < gv.value.size(); ++i)
    dev = std::max(dev, std::abs(gv.value[i] - ge.value[i]));
  const double peak = ge.max_value();
  log << "  structure-factor max deviation " << dev << " vs peak " << peak << "\n";
  return worst < 0.01 && dev < 0.05 * peak;
}

}  // namespace

int main(int argc, char** argv) {
  bool large = std::getenv("KGM_ACCEPT_LARGE") &&
               std::string(std::getenv("KGM_ACCEPT_LARGE")) == "1";
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--large") == 0) large = true;
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::ostream&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "2x4 exact representation: per_edge p=5 best-of-10 infidelity <= 1e-12",
       criterion1},
      {2, "exponential infidelity decay on 2x4 and 2x6 (R^2 >= 0.9)", criterion2},
      {3, "scheme ordering on 2x6 (per_edge <= per_edge_color <= per_hamiltonian; "
          "colour-ii worst)",
       criterion3},
      {4, "3x8 near-degeneracy: relative gap 0.0008 +- 20%", criterion4},
      {5, "analytic gradients vs central differences (< 1e-6)", criterion5},
      {6, "lanczos vs dense diagonalisation (1e-10); triangle degeneracy", criterion6},
      {7, "symmetry sectors preserved by 200 random circuits per patch", criterion7},
      {8, "round schedules: layering, coverage, swap transparency", criterion8},
      {9, "shot estimator within 3 sigma in >= 95/100 runs; dimer protocol",
       criterion9},
      {10, "2x6 observables from the p=8 VQE state match exact values", criterion10},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    if (c.id == 4 && !large) {
      std::cout << "SKIP criterion 4: " << c.name
                << " (long-running; enable with --large or KGM_ACCEPT_LARGE=1)\n";
      continue;
    }
    std::ostringstream log;
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn(log);
    } catch (const std::exception& e) {
      log << "  exception: " << e.what() << "\n";
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name
              << "  [" << secs << " s]\n"
              << log.str();
    if (!ok) ++failures;
  }
  if (failures) std::cout << failures << " criterion(s) failed\n";
  return failures == 0 ? 0 : 1;
}
