#include <doctest.h>

#include <cmath>
#include <random>

#include "ansatz.hpp"
#include "exactdiag.hpp"
#include "vqe.hpp"

using namespace kgm;

namespace {

std::vector<double> random_theta(int n, std::uint64_t seed, double hi) {
  std::mt19937_64 gen(seed);
  std::vector<double> out(n);
  for (double& v : out) v = canonical_double(gen()) * hi;
  return out;
}

}  // namespace

TEST_CASE("parameter counts per scheme") {
  KagomePatch p = build_patch("2x4");
  const int E = (int)p.edges.size();
  CHECK(make_spec(p, Scheme::PerEdgeColor, 3).n_params == 18);
  CHECK(make_spec(p, Scheme::PerHamiltonian, 5).n_params == 10);
  CHECK(make_spec(p, Scheme::PerEdgeColorII, 4).n_params == 20);
  CHECK(make_spec(p, Scheme::PerEdge, 2).n_params == 2 * (E + 1));
  CHECK(make_spec(p, Scheme::PerEdge, 2, true).n_params == 2 * (E + 4));
  CHECK(make_spec(p, Scheme::PerEdge, 0).n_params == 0);
  CHECK_THROWS_AS(make_spec(p, Scheme::PerEdge, -1), ArgumentError);
}

TEST_CASE("the circuit is identical across tying schemes") {
  KagomePatch p = build_patch("2x4");
  AnsatzSpec pe = make_spec(p, Scheme::PerEdge, 2);
  AnsatzSpec pec = make_spec(p, Scheme::PerEdgeColor, 2);
  AnsatzSpec ph = make_spec(p, Scheme::PerHamiltonian, 2);
  REQUIRE(pe.gates.size() == pec.gates.size());
  REQUIRE(pe.gates.size() == ph.gates.size());
  for (std::size_t i = 0; i < pe.gates.size(); ++i) {
    CHECK(pe.gates[i].a == pec.gates[i].a);
    CHECK(pe.gates[i].b == pec.gates[i].b);
    CHECK(pe.gates[i].a == ph.gates[i].a);
  }
  // PerEdgeColorII drops the H0 gates
  AnsatzSpec ii = make_spec(p, Scheme::PerEdgeColorII, 2);
  CHECK(ii.gates.size() == pe.gates.size() - 2 * dimer_covering(p).dimers.size());
}

TEST_CASE("tied parameter expansion gives identical states") {
  KagomePatch p = build_patch("2x4");
  AnsatzSpec pec = make_spec(p, Scheme::PerEdgeColor, 2);
  AnsatzSpec pe = make_spec(p, Scheme::PerEdge, 2);
  std::vector<double> tied = random_theta(pec.n_params, 5, 0.4);
  // copy tied values through the gate maps
  std::vector<double> expanded(pe.n_params, 0.0);
  REQUIRE(pec.gates.size() == pe.gates.size());
  for (std::size_t i = 0; i < pe.gates.size(); ++i)
    expanded[pe.gates[i].param] = tied[pec.gates[i].param];

  StateVector a = initial_state(p, Sector::Sz0);
  StateVector b = a;
  apply_ansatz(a, pec, tied);
  apply_ansatz(b, pe, expanded);
  CHECK(fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("per-hamiltonian equals per-edge-color with equal colour angles") {
  KagomePatch p = build_patch("2x6");
  AnsatzSpec ph = make_spec(p, Scheme::PerHamiltonian, 3);
  AnsatzSpec pec = make_spec(p, Scheme::PerEdgeColor, 3);
  std::vector<double> theta_ph = random_theta(ph.n_params, 11, 0.3);
  std::vector<double> theta_pec(pec.n_params);
  for (int i = 0; i < 3; ++i) {
    theta_pec[6 * i] = theta_ph[2 * i];  // H0 angle a_i
    for (int c = 1; c <= 5; ++c) theta_pec[6 * i + c] = theta_ph[2 * i + 1];
  }
  StateVector a = initial_state(p, Sector::Sz0);
  StateVector b = a;
  apply_ansatz(a, ph, theta_ph);
  apply_ansatz(b, pec, theta_pec);
  CHECK(fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("zero angles give the identity circuit") {
  KagomePatch p = build_patch("2x4");
  AnsatzSpec spec = make_spec(p, Scheme::PerEdge, 3);
  StateVector a = initial_state(p, Sector::Sz0);
  StateVector b = a;
  apply_ansatz(b, spec, std::vector<double>(spec.n_params, 0.0));
  CHECK(fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(apply_ansatz(b, spec, std::vector<double>(3, 0.0)), DimError);
}

TEST_CASE("initial states live in the right symmetry sectors") {
  KagomePatch p = build_patch("2x4");
  StateVector sz0 = initial_state(p, Sector::Sz0);
  for (char axis : {'x', 'y', 'z'})
    CHECK(sector_check(sz0, axis, 0.0, 1e-10).matches);
  SparseHamiltonian H0 = build_hamiltonian(p, HamSubset::Dimers);
  CHECK(expectation(H0, sz0) == doctest::Approx(-12.0).epsilon(1e-12));
  // ... and it is the exact H0 ground state
  LanczosOptions lo;
  lo.k = 1;
  lo.seed = 2;
  EigenSolution sol = lanczos_lowest(H0, lo);
  CHECK(fidelity(sol.eigenvectors[0], sz0) == doctest::Approx(1.0).epsilon(1e-10));

  StateVector plus = initial_state(p, Sector::SzPlus);
  SectorCheck sc = sector_check(plus, 'z', 2.0, 1e-10);
  CHECK(sc.matches);

  KagomePatch t1 = build_patch("tri1");
  StateVector odd = initial_state(t1, Sector::OddDefault);
  CHECK(sector_check(odd, 'z', -1.0, 1e-10).matches);
  StateVector odd3 = initial_state(t1, Sector::OddPlus);
  CHECK(sector_check(odd3, 'z', 3.0, 1e-10).matches);

  CHECK_THROWS_AS(initial_state(p, Sector::OddDefault), ArgumentError);
  CHECK_THROWS_AS(initial_state(t1, Sector::Sz0), ArgumentError);
}

TEST_CASE("ansatz circuits preserve the spin sectors") {
  std::mt19937_64 gen(99);
  for (const auto& name : {"2x4", "2x6"}) {
    KagomePatch p = build_patch(name);
    for (Scheme scheme : {Scheme::PerHamiltonian, Scheme::PerEdgeColor,
                          Scheme::PerEdgeColorII, Scheme::PerEdge}) {
      for (int rep = 0; rep < 4; ++rep) {
        const int layers = 1 + (int)(gen() % 4);
        AnsatzSpec spec = make_spec(p, scheme, layers);
        StateVector s = initial_state(p, Sector::Sz0);
        apply_ansatz(s, spec, random_theta(spec.n_params, gen(), 1.0 / layers));
        for (char axis : {'x', 'y', 'z'}) {
          SectorCheck sc = sector_check(s, axis, 0.0, 1e-10);
          CHECK(sc.is_eigenstate);
          CHECK(std::abs(sc.mean) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("heisenberg factor is pi/2-periodic up to global phase") {
  StateVector a(4);
  apply_hadamard(a, 0);
  apply_cnot(a, 0, 2);
  apply_hadamard(a, 3);
  StateVector b = a;
  apply_heisenberg(a, 1, 2, 0.37);
  apply_heisenberg(b, 1, 2, 0.37 + M_PI / 2);
  CHECK(fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("spec json records the tying metadata") {
  KagomePatch p = build_patch("2x4");
  const std::string j = spec_to_json(make_spec(p, Scheme::PerEdge, 2));
  CHECK(j.find("\"scheme\": \"per_edge\"") != std::string::npos);
  CHECK(j.find("\"n_params\": 22") != std::string::npos);
}
