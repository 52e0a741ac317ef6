#include "exactdiag.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

namespace kgm {

SparseHamiltonian build_hamiltonian(const KagomePatch& patch, HamSubset subset,
                                    int colour) {
  SparseHamiltonian H;
  H.n_qubits = patch.n_sites;
  switch (subset) {
    case HamSubset::All:
      H.terms = patch.edges;
      break;
    case HamSubset::Colour: {
      EdgeColouring col = colour_edges(patch, ColourScheme::Square5);
      H.terms = col.colour_class(patch, colour);
      break;
    }
    case HamSubset::Dimers: {
      DimerCovering cover = dimer_covering(patch);
      H.terms = cover.dimers;
      break;
    }
  }
  if (H.terms.empty())
    throw EmptyOperatorError("hamiltonian subset contains no edges");
  for (const Edge& e : H.terms)
    if (e.a < 0 || e.b >= patch.n_sites || e.a == e.b)
      throw ArgumentError("hamiltonian term outside the patch");
  return H;
}

void add_pair_term(int n_qubits, int a, int b, const cplx* x, cplx* y) {
  const std::size_t ma = std::size_t(1) << a, mb = std::size_t(1) << b;
  const std::size_t dim = std::size_t(1) << n_qubits;
  parallel_for(dim, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const bool ba = i & ma, bb = i & mb;
      if (ba == bb)
        y[i] += x[i];
      else
        y[i] += 2.0 * x[i ^ ma ^ mb] - x[i];
    }
  });
}

cplx pair_term_bracket(int n_qubits, int a, int b, const cplx* l, const cplx* f) {
  const std::size_t ma = std::size_t(1) << a, mb = std::size_t(1) << b;
  const std::size_t dim = std::size_t(1) << n_qubits;
  return parallel_sum_c(dim, [&](std::size_t i0, std::size_t i1) {
    cplx acc(0, 0);
    for (std::size_t i = i0; i < i1; ++i) {
      const bool ba = i & ma, bb = i & mb;
      const cplx hf = (ba == bb) ? f[i] : 2.0 * f[i ^ ma ^ mb] - f[i];
      acc += std::conj(l[i]) * hf;
    }
    return acc;
  });
}

void matvec(const SparseHamiltonian& H, const cplx* x, cplx* y) {
  const std::size_t dim = std::size_t(1) << H.n_qubits;
  const int nt = (int)H.terms.size();
  parallel_for(dim, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      cplx acc(0, 0);
      for (int t = 0; t < nt; ++t) {
        const std::size_t ma = std::size_t(1) << H.terms[t].a;
        const std::size_t mb = std::size_t(1) << H.terms[t].b;
        const bool ba = i & ma, bb = i & mb;
        if (ba == bb)
          acc += x[i];
        else
          acc += 2.0 * x[i ^ ma ^ mb] - x[i];
      }
      y[i] = acc;
    }
  });
}

double expectation(const SparseHamiltonian& H, const StateVector& psi) {
  if (psi.n_qubits() != H.n_qubits) throw DimError("expectation: size mismatch");
  double e = 0;
  for (const Edge& t : H.terms)
    e += pair_term_bracket(H.n_qubits, t.a, t.b, psi.data(), psi.data()).real();
  return e;
}

// ---------------------------------------------------------------------------
// Lanczos with full reorthogonalisation, thick restart and explicit locking.
// The small projected matrix T = V^H H V is kept dense; its column j comes for
// free from the first Gram-Schmidt pass, which keeps the restart bookkeeping
// trivial and suppresses ghost eigenvalues.
// ---------------------------------------------------------------------------

namespace {

// n-choose-k table for the fixed-popcount basis.
struct Binom {
  double c[65][32];
  Binom() {
    for (int n = 0; n < 65; ++n)
      for (int k = 0; k < 32; ++k) {
        if (k == 0)
          c[n][k] = 1;
        else if (k > n)
          c[n][k] = 0;
        else
          c[n][k] = c[n - 1][k - 1] + (n - 1 >= 0 ? c[n - 1][k] : 0);
      }
  }
};
const Binom kBinom;

std::size_t rank_mask(std::uint64_t mask) {
  std::size_t r = 0;
  int i = 1;
  while (mask) {
    const int p = __builtin_ctzll(mask);
    r += (std::size_t)kBinom.c[p][i];
    ++i;
    mask &= mask - 1;
  }
  return r;
}

std::uint64_t unrank_mask(std::size_t r, int n, int k) {
  std::uint64_t mask = 0;
  for (int i = k; i >= 1; --i) {
    int p = i - 1;
    while (p + 1 <= n - 1 && (std::size_t)kBinom.c[p + 1][i] <= r) ++p;
    mask |= std::uint64_t(1) << p;
    r -= (std::size_t)kBinom.c[p][i];
  }
  return mask;
}

std::uint64_t next_combination(std::uint64_t v) {  // Gosper's hack
  const std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (__builtin_ctzll(v) + 1));
}

struct FullBackend {
  using Vec = std::vector<cplx>;
  const SparseHamiltonian& H;
  int n;
  std::size_t dim_;
  bool has_sector;
  int n_up;  // popcount of the sector when has_sector

  FullBackend(const SparseHamiltonian& h, const LanczosOptions& opt)
      : H(h), n(h.n_qubits), dim_(std::size_t(1) << h.n_qubits) {
    has_sector = opt.has_sector();
    n_up = has_sector ? (n + opt.sector) / 2 : 0;
    if (has_sector && ((n + opt.sector) % 2 != 0 || n_up < 0 || n_up > n))
      throw ArgumentError("sector incompatible with qubit count");
  }
  std::size_t dim() const { return dim_; }
  void apply(const Vec& x, Vec& y) {
    matvec(H, x.data(), y.data());
    if (has_sector) project(y);
  }
  void project(Vec& v) const {
    if (!has_sector) return;
    parallel_for(dim_, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i)
        if (__builtin_popcountll(i) != n_up) v[i] = 0;
    });
  }
  cplx dot(const Vec& a, const Vec& b) const {
    return parallel_sum_c(dim_, [&](std::size_t i0, std::size_t i1) {
      cplx acc(0, 0);
      for (std::size_t i = i0; i < i1; ++i) acc += std::conj(a[i]) * b[i];
      return acc;
    });
  }
  void axpy(cplx alpha, const Vec& x, Vec& y) const {
    parallel_for(dim_, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) y[i] += alpha * x[i];
    });
  }
  void scale(Vec& v, double s) const {
    parallel_for(dim_, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) v[i] *= s;
    });
  }
  void randomize(Vec& v, std::mt19937_64& gen) const {
    for (std::size_t i = 0; i < dim_; ++i)
      v[i] = canonical_double(gen()) - 0.5;  // real start keeps Krylov real
    project(v);
  }
  StateVector materialize(const Vec& v) const {
    StateVector s(n);
    std::memcpy(s.data(), v.data(), dim_ * sizeof(cplx));
    return s;
  }
};

struct SectorBackend {
  using Vec = std::vector<double>;
  const SparseHamiltonian& H;
  int n, n_up;
  std::size_t dim_;
  std::vector<std::int16_t> diag;
  std::vector<std::int32_t> nbr;  // dim x n_terms, -1 for diagonal slots

  SectorBackend(const SparseHamiltonian& h, const LanczosOptions& opt)
      : H(h), n(h.n_qubits) {
    if (!opt.has_sector()) throw ArgumentError("sector basis requires a sector");
    if ((n + opt.sector) % 2 != 0) throw ArgumentError("sector parity mismatch");
    n_up = (n + opt.sector) / 2;
    if (n_up < 0 || n_up > n) throw ArgumentError("sector out of range");
    dim_ = (std::size_t)kBinom.c[n][std::min(n_up, 31)];
    const int nt = (int)H.terms.size();
    diag.resize(dim_);
    nbr.resize(dim_ * nt);
    parallel_for(dim_, [&](std::size_t r0, std::size_t r1) {
      std::uint64_t mask = unrank_mask(r0, n, n_up);
      for (std::size_t r = r0; r < r1; ++r) {
        int d = 0;
        for (int t = 0; t < nt; ++t) {
          const std::uint64_t ma = std::uint64_t(1) << H.terms[t].a;
          const std::uint64_t mb = std::uint64_t(1) << H.terms[t].b;
          const bool ba = mask & ma, bb = mask & mb;
          if (ba == bb) {
            ++d;
            nbr[r * nt + t] = -1;
          } else {
            --d;
            nbr[r * nt + t] = (std::int32_t)rank_mask(mask ^ ma ^ mb);
          }
        }
        diag[r] = (std::int16_t)d;
        if (r + 1 < r1) mask = next_combination(mask);
      }
    });
  }
  std::size_t dim() const { return dim_; }
  void apply(const Vec& x, Vec& y) const {
    const int nt = (int)H.terms.size();
    parallel_for(dim_, [&](std::size_t r0, std::size_t r1) {
      for (std::size_t r = r0; r < r1; ++r) {
        double acc = diag[r] * x[r];
        const std::int32_t* row = &nbr[r * nt];
        for (int t = 0; t < nt; ++t)
          if (row[t] >= 0) acc += 2.0 * x[row[t]];
        y[r] = acc;
      }
    });
  }
  void project(Vec&) const {}
  cplx dot(const Vec& a, const Vec& b) const {
    return parallel_sum(dim_, [&](std::size_t i0, std::size_t i1) {
      double acc = 0;
      for (std::size_t i = i0; i < i1; ++i) acc += a[i] * b[i];
      return acc;
    });
  }
  void axpy(cplx alpha, const Vec& x, Vec& y) const {
    const double al = alpha.real();
    parallel_for(dim_, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) y[i] += al * x[i];
    });
  }
  void scale(Vec& v, double s) const {
    parallel_for(dim_, [&](std::size_t i0, std::size_t i1) {
      for (std::size_t i = i0; i < i1; ++i) v[i] *= s;
    });
  }
  void randomize(Vec& v, std::mt19937_64& gen) const {
    for (std::size_t i = 0; i < dim_; ++i) v[i] = canonical_double(gen()) - 0.5;
  }
  StateVector materialize(const Vec& v) const {
    StateVector s(n);
    s.data()[0] = 0;
    std::uint64_t mask = (std::uint64_t(1) << n_up) - 1;
    if (n_up == 0) mask = 0;
    for (std::size_t r = 0; r < dim_; ++r) {
      s.data()[mask] = v[r];
      if (r + 1 < dim_) mask = next_combination(mask);
    }
    return s;
  }
};

template <typename Backend>
EigenSolution lanczos_impl(Backend& be, const LanczosOptions& opt) {
  using Vec = typename Backend::Vec;
  const std::size_t dim = be.dim();
  const int k = opt.k;
  if (k < 1 || (std::size_t)k >= dim)
    throw ArgumentError("lanczos: k out of range");
  const int cap = std::max(opt.basis_cap, k + 6);

  std::vector<Vec> V;           // Krylov / Ritz basis
  std::vector<Vec> locked;      // converged eigenvectors
  std::vector<double> locked_val, locked_res;
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(cap, cap);
  long matvecs = 0;
  std::mt19937_64 gen(opt.seed);

  Vec w(dim), scratch(dim);

  auto orth_against_locked = [&](Vec& v) {
    for (const Vec& d : locked) be.axpy(-be.dot(d, v), d, v);
  };
  auto normalize = [&](Vec& v) -> double {
    const double nv = std::sqrt(std::abs(be.dot(v, v).real()));
    if (nv > 0) be.scale(v, 1.0 / nv);
    return nv;
  };
  auto fresh_start = [&]() {
    Vec v(dim);
    be.randomize(v, gen);
    orth_against_locked(v);
    for (const Vec& u : V) be.axpy(-be.dot(u, v), u, v);
    if (normalize(v) < 1e-8) {  // pathological; try again with new randomness
      be.randomize(v, gen);
      orth_against_locked(v);
      normalize(v);
    }
    return v;
  };

  V.push_back(fresh_start());

  while ((int)locked.size() < k) {
    if (matvecs >= opt.max_matvecs) {
      std::ostringstream os;
      os << "lanczos did not converge after " << matvecs << " matvecs; locked "
         << locked.size() << "/" << k << " pairs; residuals:";
      for (double r : locked_res) os << " " << r;
      throw ConvergenceError(os.str());
    }
    const int j = (int)V.size() - 1;
    be.apply(V[j], w);
    ++matvecs;
    orth_against_locked(w);
    for (int i = 0; i <= j; ++i) {
      const cplx c = be.dot(V[i], w);
      be.axpy(-c, V[i], w);
      T(i, j) = c;
      T(j, i) = std::conj(c);
    }
    // second orthogonalisation pass
    orth_against_locked(w);
    for (int i = 0; i <= j; ++i) be.axpy(-be.dot(V[i], w), V[i], w);
    const double beta = normalize(w);

    // Ritz decomposition of the projected matrix
    const int m = j + 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(T.topLeftCorner(m, m));
    const auto& theta = es.eigenvalues();
    const auto& S = es.eigenvectors();

    // Lock converged pairs in ascending order.
    int locked_now = 0;
    while ((int)locked.size() < k && locked_now < m) {
      const int idx = locked_now;
      const double est = beta * std::abs(S(m - 1, idx));
      if (est > opt.tol * 10) break;
      Vec y(dim, typename Vec::value_type(0));
      for (int i = 0; i < m; ++i) be.axpy(S(i, idx), V[i], y);
      orth_against_locked(y);
      normalize(y);
      be.apply(y, scratch);
      ++matvecs;
      const double th = be.dot(y, scratch).real();
      be.axpy(-th, y, scratch);
      const double res = std::sqrt(std::abs(be.dot(scratch, scratch).real()));
      if (res > opt.tol) break;  // estimate was optimistic; keep iterating
      locked.push_back(std::move(y));
      locked_val.push_back(th);
      locked_res.push_back(res);
      ++locked_now;
    }
    if ((int)locked.size() >= k) break;

    const bool breakdown = beta < 1e-10;
    if (locked_now > 0 || m == cap || breakdown) {
      // Thick restart: keep the lowest unconverged Ritz vectors. Their mutual
      // T entries are exactly diag(theta): couplings vanish because every
      // kept Ritz vector is orthogonal to the residual direction.
      const int keep =
          std::min(m - locked_now, std::max(k - (int)locked.size() + 4, 4));
      std::vector<Vec> newV;
      newV.reserve(keep + 1);
      Eigen::MatrixXcd Tn = Eigen::MatrixXcd::Zero(cap, cap);
      for (int t = 0; t < keep; ++t) {
        const int idx = locked_now + t;
        if (idx >= m) break;
        Vec y(dim, typename Vec::value_type(0));
        for (int i = 0; i < m; ++i) be.axpy(S(i, idx), V[i], y);
        orth_against_locked(y);
        for (const Vec& u : newV) be.axpy(-be.dot(u, y), u, y);
        if (normalize(y) < 1e-8) break;  // degenerate collapse; stop keeping
        Tn((int)newV.size(), (int)newV.size()) = theta(idx);
        newV.push_back(std::move(y));
      }
      V = std::move(newV);
      T = std::move(Tn);
      // Continue from the residual direction on a plain cap restart; after a
      // lock (or breakdown) inject fresh randomness instead, so remaining
      // degenerate copies outside the current Krylov space are re-seeded.
      // The new vector's T column is computed at its processing step.
      if (locked_now == 0 && !breakdown) {
        orth_against_locked(w);
        for (const Vec& u : V) be.axpy(-be.dot(u, w), u, w);
        if (normalize(w) > 1e-8)
          V.push_back(w);
        else
          V.push_back(fresh_start());
      } else {
        V.push_back(fresh_start());
      }
    } else {
      V.push_back(w);
    }
  }

  // assemble ascending
  std::vector<int> order(locked.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return locked_val[a] < locked_val[b]; });
  EigenSolution out;
  out.matvecs = matvecs;
  for (int i = 0; i < k; ++i) {
    out.eigenvalues.push_back(locked_val[order[i]]);
    out.residuals.push_back(locked_res[order[i]]);
    if (opt.want_vectors) out.eigenvectors.push_back(be.materialize(locked[order[i]]));
  }
  return out;
}

}  // namespace

EigenSolution lanczos_lowest(const SparseHamiltonian& H, const LanczosOptions& opt) {
  if (opt.sector_basis) {
    SectorBackend be(H, opt);
    return lanczos_impl(be, opt);
  }
  FullBackend be(H, opt);
  return lanczos_impl(be, opt);
}

namespace {

Eigen::MatrixXd dense_matrix(const SparseHamiltonian& H) {
  if (H.n_qubits > 12) throw ArgumentError("dense oracle limited to 12 qubits");
  const std::size_t dim = std::size_t(1) << H.n_qubits;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  for (const Edge& t : H.terms) {
    const std::size_t ma = std::size_t(1) << t.a, mb = std::size_t(1) << t.b;
    for (std::size_t i = 0; i < dim; ++i) {
      const bool ba = i & ma, bb = i & mb;
      if (ba == bb) {
        M(i, i) += 1;
      } else {
        M(i, i) -= 1;
        M(i ^ ma ^ mb, i) += 2;
      }
    }
  }
  return M;
}

}  // namespace

std::vector<double> dense_diag_oracle(const SparseHamiltonian& H) {
  Eigen::MatrixXd M = dense_matrix(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::vector<double>(ev.data(), ev.data() + ev.size());
}

EigenSolution dense_diag_lowest(const SparseHamiltonian& H, int k) {
  if (H.n_qubits > 8) throw ArgumentError("dense eigenvectors limited to 8 qubits");
  Eigen::MatrixXd M = dense_matrix(H);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  EigenSolution out;
  const std::size_t dim = std::size_t(1) << H.n_qubits;
  for (int i = 0; i < k; ++i) {
    out.eigenvalues.push_back(es.eigenvalues()(i));
    StateVector v(H.n_qubits);
    for (std::size_t j = 0; j < dim; ++j) v.data()[j] = es.eigenvectors()(j, i);
    out.eigenvectors.push_back(std::move(v));
    out.residuals.push_back(0.0);
  }
  out.matvecs = 0;
  return out;
}

}  // namespace kgm
