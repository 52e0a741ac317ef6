#include "observables.hpp"

#include <algorithm>
#include <cmath>

namespace kgm {

namespace {

// correlation matrix C[i][j] = <Z_i Z_j> in one pass over the amplitudes,
// summed over fixed blocks for thread-count independence
std::vector<double> zz_matrix(const StateVector& s) {
  const int n = s.n_qubits();
  const std::size_t dim = s.dim();
  constexpr std::size_t kBlock = 4096;
  const std::size_t nblocks = (dim + kBlock - 1) / kBlock;
  std::vector<double> partial(nblocks * n * n, 0.0);
  parallel_for(nblocks, [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      double* C = &partial[b * n * n];
      const std::size_t hi = std::min(dim, (b + 1) * kBlock);
      for (std::size_t idx = b * kBlock; idx < hi; ++idx) {
        const double w = std::norm(s.data()[idx]);
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) {
          const double zi = (idx >> i) & 1 ? 1.0 : -1.0;
          for (int j = i; j < n; ++j) {
            const double zj = (idx >> j) & 1 ? 1.0 : -1.0;
            C[i * n + j] += w * zi * zj;
          }
        }
      }
    }
  });
  std::vector<double> C(n * n, 0.0);
  for (std::size_t b = 0; b < nblocks; ++b)
    for (int ij = 0; ij < n * n; ++ij) C[ij] += partial[b * n * n + ij];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) C[i * n + j] = C[j * n + i];
  return C;
}

double pair_expectation(const StateVector& s, Edge e) {
  return pair_term_bracket(s.n_qubits(), e.a, e.b, s.data(), s.data()).real();
}

void check_disjoint(Edge ij, Edge kl) {
  if (ij.a == kl.a || ij.a == kl.b || ij.b == kl.a || ij.b == kl.b)
    throw ArgumentError("dimer-dimer correlator requires disjoint edges");
}

int dimer_outcome(std::uint64_t mask, Edge e) {
  const bool da = (mask >> e.a) & 1, db = (mask >> e.b) & 1;
  return (!da && !db) ? -3 : 1;  // |down,down> means S.S = -3
}

}  // namespace

std::vector<double> spin_spin(const StateVector& s, const std::vector<Edge>& pairs) {
  const int n = s.n_qubits();
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const Edge& e : pairs) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n)
      throw ArgumentError("spin_spin: site out of range");
    if (e.a == e.b) {
      out.push_back(1.0);
      continue;
    }
    const double v = parallel_sum(s.dim(), [&](std::size_t i0, std::size_t i1) {
      double acc = 0;
      for (std::size_t i = i0; i < i1; ++i) {
        const double w = std::norm(s.data()[i]);
        const double zi = (i >> e.a) & 1 ? 1.0 : -1.0;
        const double zj = (i >> e.b) & 1 ? 1.0 : -1.0;
        acc += w * zi * zj;
      }
      return acc;
    });
    out.push_back(v);
  }
  return out;
}

double dimer_dimer(const StateVector& s, Edge ij, Edge kl) {
  check_disjoint(ij, kl);
  const int n = s.n_qubits();
  std::vector<cplx> u(s.dim(), cplx(0, 0)), v(s.dim(), cplx(0, 0));
  add_pair_term(n, ij.a, ij.b, s.data(), u.data());
  add_pair_term(n, kl.a, kl.b, s.data(), v.data());
  const cplx joint = parallel_sum_c(s.dim(), [&](std::size_t i0, std::size_t i1) {
    cplx acc(0, 0);
    for (std::size_t i = i0; i < i1; ++i) acc += std::conj(u[i]) * v[i];
    return acc;
  });
  return joint.real() - pair_expectation(s, ij) * pair_expectation(s, kl);
}

double dimer_expectation_sampled(const StateVector& s, Edge ij, long shots,
                                 std::uint64_t seed) {
  StateVector t = s;
  apply_singlet_unprep(t, ij.a, ij.b);
  ShotBatch batch = sample(t, 'Z', shots, seed, false);
  double acc = 0;
  for (std::uint64_t m : batch.shots) acc += dimer_outcome(m, ij);
  return acc / batch.kept;
}

double dimer_dimer_sampled(const StateVector& s, Edge ij, Edge kl, long shots,
                           std::uint64_t seed, double* std_error) {
  check_disjoint(ij, kl);
  StateVector t = s;
  apply_singlet_unprep(t, ij.a, ij.b);
  apply_singlet_unprep(t, kl.a, kl.b);
  ShotBatch batch = sample(t, 'Z', shots, seed, false);
  double sx = 0, sy = 0, sxy = 0, sxy2 = 0;
  for (std::uint64_t m : batch.shots) {
    const double x = dimer_outcome(m, ij), y = dimer_outcome(m, kl);
    sx += x;
    sy += y;
    sxy += x * y;
    sxy2 += x * y * x * y;
  }
  const double nshots = (double)batch.kept;
  const double mean_xy = sxy / nshots, mean_x = sx / nshots, mean_y = sy / nshots;
  if (std_error) {
    const double var_xy = std::max(0.0, sxy2 / nshots - mean_xy * mean_xy);
    *std_error = std::sqrt(var_xy / nshots);
  }
  return mean_xy - mean_x * mean_y;
}

double StructureFactorGrid::max_value() const {
  double m = 0;
  for (double v : value) m = std::max(m, v);
  return m;
}

StructureFactorGrid structure_factor(const StateVector& s, const KagomePatch& patch,
                                     int n_points, double extent_scale) {
  if (n_points < 2) throw ArgumentError("structure factor grid needs >= 2 points");
  if (s.n_qubits() != patch.n_sites) throw DimError("state does not match patch");
  const int n = patch.n_sites;
  const std::vector<double> C = zz_matrix(s);
  // Brillouin-zone corner of the kagome Bravais lattice (lattice constant 2)
  const double k_corner = 4.0 * M_PI / (3.0 * 2.0);
  const double qmax = extent_scale * k_corner;
  StructureFactorGrid g;
  g.nx = g.ny = n_points;
  g.qx.resize(n_points);
  g.qy.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double t = n_points == 1 ? 0.0 : (double)i / (n_points - 1);
    g.qx[i] = -qmax + 2 * qmax * t;
    g.qy[i] = -qmax + 2 * qmax * t;
  }
  g.value.assign((std::size_t)n_points * n_points, 0.0);
  parallel_for((std::size_t)n_points * n_points, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t q = i0; q < i1; ++q) {
      const double qx = g.qx[q % n_points], qy = g.qy[q / n_points];
      // (1/N) |sum_i e^{iq.ri} Z_i|^2 expectation = (1/N) z^H C z
      double re = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double dx = patch.pos[i][0] - patch.pos[j][0];
          const double dy = patch.pos[i][1] - patch.pos[j][1];
          re += std::cos(qx * dx + qy * dy) * C[i * n + j];
        }
      g.value[q] = re / n;
    }
  });
  return g;
}

namespace {

double sector_ground_energy(const KagomePatch& patch, const SparseHamiltonian& H,
                            int sector, std::uint64_t seed, double* residual) {
  LanczosOptions lo;
  lo.k = 1;
  lo.seed = seed;
  lo.tol = 1e-10;
  lo.sector = sector;
  lo.want_vectors = false;
  if (patch.n_sites > 20) {
    lo.sector_basis = true;
    lo.basis_cap = 100;
  } else {
    lo.basis_cap = std::min<long>(200, (1L << patch.n_sites) - 2);
  }
  EigenSolution sol = lanczos_lowest(H, lo);
  if (residual) *residual = sol.residuals.at(0);
  return sol.eigenvalues.at(0);
}

}  // namespace

SpinGapResult spin_gap_exact(const KagomePatch& patch, std::uint64_t seed) {
  SparseHamiltonian H = build_hamiltonian(patch, HamSubset::All);
  SpinGapResult out;
  out.method = "exact";
  const bool even = patch.n_sites % 2 == 0;
  out.sector_lower = even ? 0 : 1;
  out.sector_upper = even ? 2 : 3;
  out.e_lower = sector_ground_energy(patch, H, out.sector_lower, seed, &out.diag_lower);
  out.e_upper = sector_ground_energy(patch, H, out.sector_upper, seed, &out.diag_upper);
  out.gap_pauli = out.e_upper - out.e_lower;
  out.gap_spin = out.gap_pauli / 4.0;
  return out;
}

SpinGapResult spin_gap_vqe(const KagomePatch& patch, Scheme scheme, int p,
                           int restarts, std::uint64_t seed,
                           const LbfgsOptions& opt) {
  if (restarts < 1) throw ArgumentError("restarts must be >= 1");
  SparseHamiltonian H = build_hamiltonian(patch, HamSubset::All);
  AnsatzSpec spec = make_spec(patch, scheme, p);
  const bool even = patch.n_sites % 2 == 0;
  SpinGapResult out;
  out.method = "vqe";
  out.sector_lower = even ? 0 : 1;
  out.sector_upper = even ? 2 : 3;

  auto best_energy = [&](Sector sector, double* status_diag) {
    StateVector psi_init = initial_state(patch, sector);
    double best = 1e300;
    bool any_converged = false;
    for (int r = 0; r < restarts; ++r) {
      const std::uint64_t rs =
          derive_seed(seed + (sector == Sector::Sz0 || sector == Sector::OddDefault
                                  ? 0
                                  : 101),
                      patch.name, scheme, p, r);
      std::vector<double> theta0 =
          init_params(spec, InitStrategy::RandomUniform, rs);
      ObjGrad fg = [&](const std::vector<double>& x, std::vector<double>& g) {
        return objective_gradient(spec, x, psi_init, H, g);
      };
      LbfgsResult lr = lbfgs_minimize(fg, std::move(theta0), opt);
      best = std::min(best, lr.f);
      any_converged |= lr.status.rfind("converged", 0) == 0;
    }
    if (status_diag) *status_diag = any_converged ? 0.0 : 1.0;
    return best;
  };

  double diag_l = 0, diag_u = 0;
  out.e_lower =
      best_energy(even ? Sector::Sz0 : Sector::OddDefault, &diag_l);
  out.e_upper = best_energy(even ? Sector::SzPlus : Sector::OddPlus, &diag_u);
  out.diag_lower = diag_l;
  out.diag_upper = diag_u;
  out.converged = diag_l == 0.0 && diag_u == 0.0;
  out.gap_pauli = out.e_upper - out.e_lower;
  out.gap_spin = out.gap_pauli / 4.0;
  return out;
}

EnergyEstimate estimate_energy_from_shots(const ShotBatch& bx, const ShotBatch& by,
                                          const ShotBatch& bz,
                                          const KagomePatch& patch,
                                          bool post_select) {
  const ShotBatch* batches[3] = {&bx, &by, &bz};
  const char want[3] = {'X', 'Y', 'Z'};
  EnergyEstimate out;
  double var_sum = 0;
  for (int b = 0; b < 3; ++b) {
    const ShotBatch& batch = *batches[b];
    if (std::toupper(batch.basis) != want[b])
      throw ArgumentError("batches must be passed in X, Y, Z order");
    std::vector<std::uint64_t> kept;
    kept.reserve(batch.shots.size());
    long discarded = batch.discarded;
    if (post_select && !batch.post_selected) {
      for (std::uint64_t m : batch.shots) {
        if (outcome_value(batch.basis, batch.n_qubits, m) == batch.sector)
          kept.push_back(m);
        else
          ++discarded;
      }
    } else {
      kept = batch.shots;
    }
    if (kept.empty())
      throw EstimationError("all shots discarded in the " +
                            std::string(1, want[b]) + " basis");
    out.kept[b] = (long)kept.size();
    out.discarded[b] = discarded;
    for (const Edge& e : patch.edges) {
      double acc = 0;
      for (std::uint64_t m : kept) {
        const int sa = (m >> e.a) & 1 ? 1 : -1;
        const int sb = (m >> e.b) & 1 ? 1 : -1;
        acc += sa * sb;
      }
      const double mean = acc / (double)kept.size();
      out.value += mean;
      var_sum += std::max(0.0, 1.0 - mean * mean) / (double)kept.size();
    }
  }
  out.std_error = std::sqrt(var_sum);
  return out;
}

}  // namespace kgm
