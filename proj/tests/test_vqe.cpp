#include <doctest.h>

#include <cmath>
#include <random>

#include "vqe.hpp"

using namespace kgm;

namespace {

std::vector<double> fd_gradient(const AnsatzSpec& spec, std::vector<double> theta,
                                const StateVector& psi, const SparseHamiltonian& H,
                                double h = 1e-5) {
  std::vector<double> g(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    theta[i] += h;
    const double fp = objective(spec, theta, psi, H);
    theta[i] -= 2 * h;
    const double fm = objective(spec, theta, psi, H);
    theta[i] += h;
    g[i] = (fp - fm) / (2 * h);
  }
  return g;
}

double max_mixed_error(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  return worst;
}

}  // namespace

TEST_CASE("objective at theta=0 equals the dimer-product energy") {
  PatchContext ctx("2x4");
  AnsatzSpec spec = make_spec(ctx.patch, Scheme::PerEdge, 2);
  StateVector psi = initial_state(ctx.patch, Sector::Sz0);
  const double f0 =
      objective(spec, std::vector<double>(spec.n_params, 0.0), psi, ctx.H);
  // -3 per dimer; cross-dimer Heisenberg terms have zero expectation in the
  // singlet product (single-site Pauli expectations vanish)
  CHECK(f0 == doctest::Approx(-12.0).epsilon(1e-12));
  // restricted to the dimer covering the energy is exactly -3 N/2
  SparseHamiltonian H0 = build_hamiltonian(ctx.patch, HamSubset::Dimers);
  CHECK(objective(spec, std::vector<double>(spec.n_params, 0.0), psi, H0) ==
        doctest::Approx(-12.0).epsilon(1e-12));
  // variational bound against the Lanczos reference
  CHECK(f0 >= ctx.refs.eigenvalues[0] - 1e-9);
}

TEST_CASE("analytic gradient matches central finite differences") {
  std::mt19937_64 gen(31);
  for (const auto& name : {"2x4", "2x6"}) {
    PatchContext ctx(name);
    StateVector psi = initial_state(ctx.patch, Sector::Sz0);
    for (Scheme scheme : {Scheme::PerHamiltonian, Scheme::PerEdgeColor,
                          Scheme::PerEdgeColorII, Scheme::PerEdge}) {
      for (int p : {1, 2, 3}) {
        AnsatzSpec spec = make_spec(ctx.patch, scheme, p);
        std::vector<double> theta =
            init_params(spec, InitStrategy::RandomUniform, gen());
        std::vector<double> grad;
        objective_gradient(spec, theta, psi, ctx.H, grad);
        std::vector<double> fd = fd_gradient(spec, theta, psi, ctx.H);
        CHECK(max_mixed_error(grad, fd) < 1e-6);
      }
    }
  }
}

TEST_CASE("gradient of the H0 angle vanishes at theta = 0") {
  PatchContext ctx("2x4");
  AnsatzSpec spec = make_spec(ctx.patch, Scheme::PerEdgeColor, 2);
  StateVector psi = initial_state(ctx.patch, Sector::Sz0);
  std::vector<double> grad;
  objective_gradient(spec, std::vector<double>(spec.n_params, 0.0), psi, ctx.H, grad);
  CHECK(std::abs(grad[0]) < 1e-12);  // theta_{1,0}: psi_i is an H0 eigenstate
  CHECK(std::abs(grad[6]) < 1e-12);  // theta_{2,0}
}

TEST_CASE("tied gradients are sums of the untied components") {
  PatchContext ctx("2x4");
  AnsatzSpec pec = make_spec(ctx.patch, Scheme::PerEdgeColor, 2);
  AnsatzSpec pe = make_spec(ctx.patch, Scheme::PerEdge, 2);
  StateVector psi = initial_state(ctx.patch, Sector::Sz0);
  std::vector<double> tied = init_params(pec, InitStrategy::RandomUniform, 77);
  std::vector<double> expanded(pe.n_params, 0.0);
  for (std::size_t i = 0; i < pe.gates.size(); ++i)
    expanded[pe.gates[i].param] = tied[pec.gates[i].param];
  std::vector<double> g_tied, g_untied;
  objective_gradient(pec, tied, psi, ctx.H, g_tied);
  objective_gradient(pe, expanded, psi, ctx.H, g_untied);
  // chain rule: sum the per-edge gradient over the edges tied to each colour
  std::vector<double> summed(pec.n_params, 0.0);
  std::vector<char> counted(pe.n_params, 0);
  for (std::size_t i = 0; i < pe.gates.size(); ++i) {
    if (!counted[pe.gates[i].param]) {
      summed[pec.gates[i].param] += g_untied[pe.gates[i].param];
      counted[pe.gates[i].param] = 1;
    }
  }
  for (int i = 0; i < pec.n_params; ++i)
    CHECK(g_tied[i] == doctest::Approx(summed[i]).epsilon(1e-9));
}

TEST_CASE("init_params: ranges, ramp and determinism") {
  KagomePatch p = build_patch("2x4");
  AnsatzSpec spec = make_spec(p, Scheme::PerEdge, 4);
  std::vector<double> r = init_params(spec, InitStrategy::RandomUniform, 3);
  for (double v : r) {
    CHECK(v >= 0.0);
    CHECK(v <= 0.25);
  }
  CHECK(init_params(spec, InitStrategy::RandomUniform, 3) == r);
  CHECK(init_params(spec, InitStrategy::RandomUniform, 4) != r);

  AnsatzSpec one = make_spec(p, Scheme::PerEdgeColor, 1);
  std::vector<double> ramp = init_params(one, InitStrategy::LinearRamp, 0, 1.0);
  CHECK(ramp[0] == doctest::Approx(0.5));  // theta_{1,0}
  for (int c = 1; c <= 5; ++c) CHECK(ramp[c] == doctest::Approx(0.5));

  AnsatzSpec two = make_spec(p, Scheme::PerEdgeColor, 2);
  std::vector<double> ramp2 = init_params(two, InitStrategy::LinearRamp, 0, 1.0);
  CHECK(ramp2[0] == doctest::Approx(2.0 / 3));   // early layer favours H0
  CHECK(ramp2[1] == doctest::Approx(1.0 / 3));
  CHECK(ramp2[6] == doctest::Approx(1.0 / 3));
  CHECK(ramp2[7] == doctest::Approx(2.0 / 3));
}

TEST_CASE("lbfgs minimises a quadratic and reports the trace") {
  // f(x) = sum (x_i - i)^2
  ObjGrad fg = [](const std::vector<double>& x, std::vector<double>& g) {
    g.resize(x.size());
    double f = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - (double)i;
      f += d * d;
      g[i] = 2 * d;
    }
    return f;
  };
  LbfgsOptions opt;
  LbfgsResult res = lbfgs_minimize(fg, std::vector<double>(6, 5.0), opt);
  CHECK(res.f < 1e-16);
  for (std::size_t i = 0; i < res.x.size(); ++i)
    CHECK(res.x[i] == doctest::Approx((double)i).epsilon(1e-7));
  CHECK(res.status == "converged_gtol");
  // trace is non-increasing at accepted steps
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i] <= res.trace[i - 1] + 1e-12);
  CHECK(res.first_gradients.size() <= 5);
  CHECK(res.first_gradients.size() >= 1);
}

TEST_CASE("lbfgs handles the Rosenbrock valley") {
  ObjGrad fg = [](const std::vector<double>& x, std::vector<double>& g) {
    const double a = 1 - x[0], b = x[1] - x[0] * x[0];
    g = {-2 * a - 400 * x[0] * b, 200 * b};
    return a * a + 100 * b * b;
  };
  LbfgsResult res = lbfgs_minimize(fg, {-1.2, 1.0}, {});
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.x[1] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("run_vqe descends and respects the variational bound") {
  VqeConfig cfg;
  cfg.patch = "2x4";
  cfg.scheme = Scheme::PerEdgeColor;
  cfg.p = 1;
  cfg.seed = 5;
  cfg.restarts = 2;
  std::vector<VqeRunRecord> recs = run_vqe(cfg);
  REQUIRE(recs.size() == 2);
  for (const VqeRunRecord& r : recs) {
    CHECK(r.e_final <= r.energy_trace.front());
    CHECK(r.e_final >= r.e0 - 1e-9);
    CHECK(r.rel_energy_err >= -1e-12);
    CHECK(r.infidelity >= -1e-12);
    CHECK(r.gradient_snapshots.size() <= 5);
    for (std::size_t i = 1; i < r.energy_trace.size(); ++i)
      CHECK(r.energy_trace[i] <= r.energy_trace[i - 1] + 1e-12);
  }
  CHECK(recs[0].seed != recs[1].seed);
  // identical config reproduces identical records
  std::vector<VqeRunRecord> again = run_vqe(cfg);
  CHECK(again[0].e_final == recs[0].e_final);
  CHECK(again[0].final_theta == recs[0].final_theta);
}

TEST_CASE("2x4 per-edge p=5: best of a few restarts reaches tiny infidelity") {
  VqeConfig cfg;
  cfg.patch = "2x4";
  cfg.scheme = Scheme::PerEdge;
  cfg.p = 5;
  cfg.seed = 1;
  cfg.restarts = 3;
  std::vector<VqeRunRecord> recs = run_vqe(cfg);
  double best = 1;
  for (const auto& r : recs) best = std::min(best, r.infidelity);
  CHECK(best < 1e-10);
}

TEST_CASE("threshold table interpolates on log-infidelity") {
  std::vector<VqeRunRecord> recs;
  auto rec = [](int p, double inf) {
    VqeRunRecord r;
    r.patch = "2x4";
    r.scheme = Scheme::PerEdge;
    r.p = p;
    r.infidelity = inf;
    return r;
  };
  recs.push_back(rec(1, 1e-1));
  recs.push_back(rec(2, 1e-3));
  recs.push_back(rec(3, 1e-5));
  std::vector<ThresholdRow> rows = threshold_table(recs, {0.99, 0.999, 0.9999999});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].reached);
  CHECK(rows[0].p_needed == doctest::Approx(1.5));   // 1e-2 between 1e-1 and 1e-3
  CHECK(rows[1].reached);
  CHECK(rows[1].p_needed == doctest::Approx(2.0));
  CHECK(!rows[2].reached);
  // monotone: stricter thresholds need at least as many layers
  CHECK(rows[0].p_needed <= rows[1].p_needed);
}

TEST_CASE("gradient study is seeded and reports scaled statistics") {
  auto stats = gradient_study({"2x4"}, {Scheme::PerEdgeColor, Scheme::PerEdge},
                              {1, 2}, 4, 9);
  REQUIRE(stats.size() == 4);
  for (const GradientStats& s : stats) {
    CHECK(s.samples == 4);
    CHECK(s.var_first >= 0);
    CHECK(s.mean_norm > 0);
    CHECK(s.var_first_scaled == doctest::Approx(s.var_first / 64.0));
    CHECK(s.mean_norm_scaled == doctest::Approx(s.mean_norm / (8.0 * s.p)));
  }
  auto again = gradient_study({"2x4"}, {Scheme::PerEdgeColor, Scheme::PerEdge},
                              {1, 2}, 4, 9);
  CHECK(again[0].var_first == stats[0].var_first);
  CHECK_THROWS_AS(gradient_study({"2x4"}, {Scheme::PerEdge}, {1}, 1, 9),
                  ArgumentError);
}
