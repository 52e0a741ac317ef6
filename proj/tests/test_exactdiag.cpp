#include <doctest.h>

#include <cmath>
#include <random>

#include "exactdiag.hpp"
#include "oracles.hpp"

using namespace kgm;

namespace {

KagomePatch single_edge() { return make_patch("edge", {{0, 0}, {1, 0}}, {{0, 1}}); }

KagomePatch triangle() {
  return make_patch("triangle", {{0, 0}, {1, 0}, {0.5, 0.8660254037844386}},
                    {{0, 1}, {0, 2}, {1, 2}});
}

StateVector random_state(int n, std::uint64_t seed) {
  StateVector s(n);
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < s.dim(); ++i)
    s.data()[i] = cplx(canonical_double(gen()) - 0.5, canonical_double(gen()) - 0.5);
  s.normalize();
  return s;
}

}  // namespace

TEST_CASE("single edge spectrum is {-3, 1, 1, 1}") {
  SparseHamiltonian H = build_hamiltonian(single_edge(), HamSubset::All);
  std::vector<double> ev = dense_diag_oracle(H);
  REQUIRE(ev.size() == 4);
  CHECK(ev[0] == doctest::Approx(-3.0));
  CHECK(ev[1] == doctest::Approx(1.0));
  CHECK(ev[3] == doctest::Approx(1.0));
}

TEST_CASE("two disjoint edges: tensor-additive spectrum") {
  KagomePatch p = make_patch("pair", {{0, 0}, {1, 0}, {3, 0}, {4, 0}},
                             {{0, 1}, {2, 3}});
  SparseHamiltonian H = build_hamiltonian(p, HamSubset::All);
  std::vector<double> ev = dense_diag_oracle(H);
  CHECK(ev.front() == doctest::Approx(-6.0));
  CHECK(ev[1] == doctest::Approx(-2.0));
}

TEST_CASE("triangle ground energy -3 with degeneracy 4") {
  SparseHamiltonian H = build_hamiltonian(triangle(), HamSubset::All);
  std::vector<double> ev = dense_diag_oracle(H);
  for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(-3.0));
  CHECK(ev[4] == doctest::Approx(3.0));
}

TEST_CASE("matvec agrees with the Pauli-kronecker oracle") {
  KagomePatch p = build_patch("2x4");
  SparseHamiltonian H = build_hamiltonian(p, HamSubset::All);
  Eigen::MatrixXcd D = oracle::dense_hamiltonian(p.n_sites, p.edges);
  StateVector x = random_state(p.n_sites, 3);
  std::vector<cplx> y(x.dim());
  matvec(H, x.data(), y.data());
  Eigen::VectorXcd xe(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) xe(i) = x.data()[i];
  Eigen::VectorXcd ye = D * xe;
  for (std::size_t i = 0; i < x.dim(); ++i) CHECK(std::abs(y[i] - ye(i)) < 1e-11);
  // hermiticity on random vectors: <u|Hv> == <Hu|v>
  StateVector u = random_state(p.n_sites, 4);
  std::vector<cplx> hu(x.dim());
  matvec(H, u.data(), hu.data());
  cplx lhs(0, 0), rhs(0, 0);
  for (std::size_t i = 0; i < x.dim(); ++i) {
    lhs += std::conj(u.data()[i]) * y[i];
    rhs += std::conj(hu[i]) * x.data()[i];
  }
  CHECK(std::abs(lhs - rhs) < 1e-11);
}

TEST_CASE("H commutes with the total-spin sector: [H, S^z] ~ 0") {
  KagomePatch p = build_patch("2x4");
  SparseHamiltonian H = build_hamiltonian(p, HamSubset::All);
  StateVector v = random_state(p.n_sites, 17);
  const int n = p.n_sites;
  std::vector<cplx> hv(v.dim()), sv(v.dim()), hsv(v.dim()), shv(v.dim());
  matvec(H, v.data(), hv.data());
  auto apply_sz = [n](const cplx* in, cplx* out, std::size_t dim) {
    for (std::size_t i = 0; i < dim; ++i)
      out[i] = in[i] * (double)(2 * __builtin_popcountll(i) - n);
  };
  apply_sz(v.data(), sv.data(), v.dim());
  matvec(H, sv.data(), hsv.data());
  apply_sz(hv.data(), shv.data(), v.dim());
  double err = 0;
  for (std::size_t i = 0; i < v.dim(); ++i) err += std::norm(hsv[i] - shv[i]);
  CHECK(std::sqrt(err) < 1e-10);
}

TEST_CASE("H0 on 2x6 has the decoupled-dimer ground energy -18") {
  KagomePatch p = build_patch("2x6");
  SparseHamiltonian H0 = build_hamiltonian(p, HamSubset::Dimers);
  LanczosOptions lo;
  lo.k = 1;
  lo.seed = 5;
  EigenSolution sol = lanczos_lowest(H0, lo);
  CHECK(sol.eigenvalues[0] == doctest::Approx(-18.0).epsilon(1e-10));
}

TEST_CASE("empty subsets are rejected") {
  KagomePatch edge = single_edge();
  CHECK_THROWS_AS(build_hamiltonian(edge, HamSubset::Colour, 5), Error);
}

TEST_CASE("lanczos matches dense diagonalisation on 2x4, k=4") {
  KagomePatch p = build_patch("2x4");
  SparseHamiltonian H = build_hamiltonian(p, HamSubset::All);
  std::vector<double> dense = dense_diag_oracle(H);
  LanczosOptions lo;
  lo.k = 4;
  lo.seed = 12;
  EigenSolution sol = lanczos_lowest(H, lo);
  REQUIRE(sol.eigenvalues.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(sol.eigenvalues[i] == doctest::Approx(dense[i]).epsilon(1e-10));
    CHECK(sol.residuals[i] < 1e-8);
  }
  // eigenvectors orthonormal
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) {
      const double want = i == j ? 1.0 : 0.0;
      CHECK(std::abs(std::abs(overlap(sol.eigenvectors[i], sol.eigenvectors[j])) - want) <
            1e-8);
    }
  // determinism given the seed
  EigenSolution again = lanczos_lowest(H, lo);
  for (int i = 0; i < 4; ++i)
    CHECK(sol.eigenvalues[i] == doctest::Approx(again.eigenvalues[i]).epsilon(1e-14));
}

TEST_CASE("lanczos resolves the 4-fold degenerate triangle ground space") {
  SparseHamiltonian H = build_hamiltonian(triangle(), HamSubset::All);
  LanczosOptions lo;
  lo.k = 4;
  lo.seed = 2;
  lo.basis_cap = 6;
  EigenSolution sol = lanczos_lowest(H, lo);
  for (int i = 0; i < 4; ++i) CHECK(sol.eigenvalues[i] == doctest::Approx(-3.0));
  // projector onto the returned span matches the oracle ground space
  EigenSolution dense = dense_diag_lowest(H, 4);
  Eigen::MatrixXcd P1 = Eigen::MatrixXcd::Zero(8, 8), P2 = P1;
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXcd v1(8), v2(8);
    for (int j = 0; j < 8; ++j) {
      v1(j) = sol.eigenvectors[i].data()[j];
      v2(j) = dense.eigenvectors[i].data()[j];
    }
    P1 += v1 * v1.adjoint();
    P2 += v2 * v2.adjoint();
  }
  CHECK((P1 - P2).norm() < 1e-8);
}

TEST_CASE("sector-restricted basis agrees with the full-space solver") {
  KagomePatch p = build_patch("2x6");
  SparseHamiltonian H = build_hamiltonian(p, HamSubset::All);
  LanczosOptions full;
  full.k = 2;
  full.seed = 3;
  full.sector = 0;
  EigenSolution a = lanczos_lowest(H, full);
  LanczosOptions sector = full;
  sector.sector_basis = true;
  EigenSolution b = lanczos_lowest(H, sector);
  CHECK(a.eigenvalues[0] == doctest::Approx(b.eigenvalues[0]).epsilon(1e-10));
  CHECK(a.eigenvalues[1] == doctest::Approx(b.eigenvalues[1]).epsilon(1e-10));
  CHECK(fidelity(a.eigenvectors[0], b.eigenvectors[0]) ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("variational bound: random states sit above E0") {
  KagomePatch p = build_patch("2x4");
  SparseHamiltonian H = build_hamiltonian(p, HamSubset::All);
  LanczosOptions lo;
  lo.k = 1;
  lo.seed = 8;
  const double e0 = lanczos_lowest(H, lo).eigenvalues[0];
  for (int t = 0; t < 20; ++t) {
    StateVector v = random_state(p.n_sites, 100 + t);
    CHECK(expectation(H, v) >= e0 - 1e-9);
  }
}

TEST_CASE("non-convergence raises with diagnostics") {
  KagomePatch p = build_patch("2x6");
  SparseHamiltonian H = build_hamiltonian(p, HamSubset::All);
  LanczosOptions lo;
  lo.k = 2;
  lo.max_matvecs = 3;
  CHECK_THROWS_AS(lanczos_lowest(H, lo), ConvergenceError);
}
