#include "vqe.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <random>

namespace kgm {

double objective(const AnsatzSpec& spec, const std::vector<double>& theta,
                 const StateVector& psi_init, const SparseHamiltonian& H) {
  StateVector phi = psi_init;
  apply_ansatz(phi, spec, theta);
  return expectation(H, phi);
}

double objective_gradient(const AnsatzSpec& spec, const std::vector<double>& theta,
                          const StateVector& psi_init, const SparseHamiltonian& H,
                          std::vector<double>& grad) {
  if ((int)theta.size() != spec.n_params) throw DimError("theta length mismatch");
  StateVector phi = psi_init;
  apply_ansatz(phi, spec, theta);
  StateVector lambda(std::max(spec.n_qubits, 1));
  matvec(H, phi.data(), lambda.data());
  const double f = overlap(phi, lambda).real();

  grad.assign(spec.n_params, 0.0);
  for (auto it = spec.gates.rbegin(); it != spec.gates.rend(); ++it) {
    const AnsatzGate& g = *it;
    grad[g.param] +=
        2.0 * pair_term_bracket(spec.n_qubits, g.a, g.b, lambda.data(), phi.data()).imag();
    apply_heisenberg(phi, g.a, g.b, -theta[g.param]);
    apply_heisenberg(lambda, g.a, g.b, -theta[g.param]);
  }
  return f;
}

const char* init_name(InitStrategy s) {
  return s == InitStrategy::RandomUniform ? "random_uniform" : "linear_ramp";
}

InitStrategy init_from_name(const std::string& name) {
  if (name == "random_uniform") return InitStrategy::RandomUniform;
  if (name == "linear_ramp") return InitStrategy::LinearRamp;
  throw ArgumentError("unknown init strategy '" + name + "'");
}

std::vector<double> init_params(const AnsatzSpec& spec, InitStrategy strategy,
                                std::uint64_t seed, double ramp_delta) {
  std::vector<double> theta(spec.n_params, 0.0);
  if (spec.p == 0) return theta;
  if (strategy == InitStrategy::RandomUniform) {
    std::mt19937_64 gen(seed);
    const double hi = 1.0 / spec.p;
    for (double& t : theta) t = canonical_double(gen()) * hi;
    return theta;
  }
  const double delta = ramp_delta > 0 ? ramp_delta : 1.0 / spec.p;
  const int per_layer = spec.n_params / spec.p;
  for (int i = 0; i < spec.n_params; ++i) {
    const int layer = i / per_layer + 1;
    const double frac = (double)layer / (spec.p + 1);
    theta[i] = spec.param_is_h0[i] ? delta * (1.0 - frac) : delta * frac;
  }
  return theta;
}

// ---------------------------------------------------------------------------
// L-BFGS
// ---------------------------------------------------------------------------

namespace {

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double vnorm(const std::vector<double>& a) { return std::sqrt(vdot(a, a)); }

}  // namespace

LbfgsResult lbfgs_minimize(const ObjGrad& fg, std::vector<double> x0,
                           const LbfgsOptions& opt) {
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.status = "max_iters";

  auto eval = [&](const std::vector<double>& x, std::vector<double>& g) {
    const double f = fg(x, g);
    ++res.evals;
    if (res.first_gradients.size() < 5) res.first_gradients.push_back(g);
    return f;
  };

  std::vector<double> x = std::move(x0), g(n), gn(n), xn(n), d(n);
  double f = eval(x, g);
  res.trace.push_back(f);

  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;

  for (long iter = 1; iter <= opt.max_iters; ++iter) {
    res.iters = iter - 1;
    if (vnorm(g) <= opt.gtol) {
      res.status = "converged_gtol";
      break;
    }
    if (res.evals >= opt.max_evals) {
      res.status = "max_evals";
      break;
    }
    // two-loop recursion
    d = g;
    std::vector<double> alpha(S.size());
    for (int i = (int)S.size() - 1; i >= 0; --i) {
      alpha[i] = rho[i] * vdot(S[i], d);
      for (std::size_t j = 0; j < n; ++j) d[j] -= alpha[i] * Y[i][j];
    }
    if (!S.empty()) {
      const double gamma = vdot(S.back(), Y.back()) / vdot(Y.back(), Y.back());
      for (double& v : d) v *= gamma;
    }
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double beta = rho[i] * vdot(Y[i], d);
      for (std::size_t j = 0; j < n; ++j) d[j] += S[i][j] * (alpha[i] - beta);
    }
    for (double& v : d) v = -v;

    double dphi0 = vdot(g, d);
    if (!(dphi0 < 0)) {  // not a descent direction; reset to steepest descent
      S.clear();
      Y.clear();
      rho.clear();
      for (std::size_t j = 0; j < n; ++j) d[j] = -g[j];
      dphi0 = vdot(g, d);
      if (!(dphi0 < 0)) {
        res.status = "converged_gtol";
        break;
      }
    }

    // strong-Wolfe line search (bracket + zoom)
    const double phi0 = f;
    auto phi = [&](double a, double& dphi) {
      for (std::size_t j = 0; j < n; ++j) xn[j] = x[j] + a * d[j];
      const double fa = eval(xn, gn);
      dphi = vdot(gn, d);
      return fa;
    };
    auto wolfe1 = [&](double a, double fa) { return fa <= phi0 + opt.c1 * a * dphi0; };
    auto wolfe2 = [&](double dphia) { return std::abs(dphia) <= opt.c2 * std::abs(dphi0); };

    double a_lo = 0, f_lo = phi0, d_lo = dphi0;
    double a_hi = -1, f_hi = 0, d_hi = 0;
    double a = 1.0, f_a = 0, d_a = 0;
    bool accepted = false, bracketed = false;
    double a_prev = 0, f_prev = phi0, d_prev = dphi0;
    for (int ls = 0; ls < 30 && !bracketed; ++ls) {
      f_a = phi(a, d_a);
      if (!wolfe1(a, f_a) || (ls > 0 && f_a >= f_prev)) {
        a_lo = a_prev; f_lo = f_prev; d_lo = d_prev;
        a_hi = a; f_hi = f_a; d_hi = d_a;
        bracketed = true;
        break;
      }
      if (wolfe2(d_a)) {
        accepted = true;
        break;
      }
      if (d_a >= 0) {
        a_lo = a; f_lo = f_a; d_lo = d_a;
        a_hi = a_prev; f_hi = f_prev; d_hi = d_prev;
        bracketed = true;
        break;
      }
      a_prev = a; f_prev = f_a; d_prev = d_a;
      a = std::min(a * 2.0, 1e8);
    }
    if (bracketed && !accepted) {
      for (int z = 0; z < 40; ++z) {
        // cubic-interpolation trial, safeguarded by bisection
        double at;
        {
          const double d1 = d_lo + d_hi - 3 * (f_lo - f_hi) / (a_lo - a_hi);
          const double disc = d1 * d1 - d_lo * d_hi;
          if (disc > 0 && std::abs(a_hi - a_lo) > 0) {
            const double d2 = std::sqrt(disc) * (a_hi > a_lo ? 1 : -1);
            at = a_hi - (a_hi - a_lo) * (d_hi + d2 - d1) / (d_hi - d_lo + 2 * d2);
          } else {
            at = 0.5 * (a_lo + a_hi);
          }
          const double lo = std::min(a_lo, a_hi), hi = std::max(a_lo, a_hi);
          const double margin = 0.1 * (hi - lo);
          if (!(at > lo + margin && at < hi - margin)) at = 0.5 * (a_lo + a_hi);
        }
        f_a = phi(at, d_a);
        a = at;
        if (!wolfe1(a, f_a) || f_a >= f_lo) {
          a_hi = a; f_hi = f_a; d_hi = d_a;
        } else {
          if (wolfe2(d_a)) {
            accepted = true;
            break;
          }
          if (d_a * (a_hi - a_lo) >= 0) {
            a_hi = a_lo; f_hi = f_lo; d_hi = d_lo;
          }
          a_lo = a; f_lo = f_a; d_lo = d_a;
        }
        if (std::abs(a_hi - a_lo) <= 1e-16 * std::max(1.0, std::abs(a_lo))) break;
        if (res.evals >= opt.max_evals) break;
      }
    }
    if (!accepted) {
      res.status = "linesearch_failed";
      break;
    }

    // xn, gn, f_a hold the accepted point
    std::vector<double> s(n), y(n);
    for (std::size_t j = 0; j < n; ++j) {
      s[j] = xn[j] - x[j];
      y[j] = gn[j] - g[j];
    }
    const double sy = vdot(s, y);
    if (sy > 1e-12 * vnorm(s) * vnorm(y)) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      rho.push_back(1.0 / sy);
      if ((int)S.size() > opt.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    const double f_old = f;
    x.swap(xn);
    g.swap(gn);
    f = f_a;
    res.trace.push_back(f);
    res.iters = iter;
    if (f_old - f >= 0 && f_old - f <= opt.ftol * std::max(1.0, std::abs(f))) {
      res.status = "converged_ftol";
      break;
    }
  }

  res.x = std::move(x);
  res.f = f;
  return res;
}

// ---------------------------------------------------------------------------
// VQE driver
// ---------------------------------------------------------------------------

PatchContext::PatchContext(const std::string& name, std::uint64_t lanczos_seed)
    : patch(build_patch(name)), H(build_hamiltonian(patch, HamSubset::All)) {
  LanczosOptions lo;
  lo.k = 2;
  lo.seed = lanczos_seed;
  lo.tol = 1e-10;
  if (patch.n_sites > 20) {
    lo.sector_basis = true;
    lo.sector = patch.n_sites % 2 == 0 ? 0 : 1;
    lo.basis_cap = 100;
  } else {
    lo.basis_cap = std::min<long>(200, (1L << patch.n_sites) - 2);
  }
  refs = lanczos_lowest(H, lo);
}

std::uint64_t derive_seed(std::uint64_t base, const std::string& patch,
                          Scheme scheme, int p, int restart) {
  std::uint64_t h = fnv1a(patch);
  h = fnv1a(scheme_name(scheme), h);
  h = fnv1a_mix(h, (std::uint64_t)p);
  h = fnv1a_mix(h, (std::uint64_t)restart);
  h = fnv1a_mix(h, base);
  return h == 0 ? 1 : h;
}

VqeRunRecord run_vqe_once(const PatchContext& ctx, const AnsatzSpec& spec,
                          InitStrategy init, double ramp_delta,
                          std::uint64_t run_seed, const LbfgsOptions& opt,
                          Sector sector, int restart_index) {
  const auto t0 = std::chrono::steady_clock::now();
  StateVector psi_init = initial_state(ctx.patch, sector);
  std::vector<double> theta0 = init_params(spec, init, run_seed, ramp_delta);

  ObjGrad fg = [&](const std::vector<double>& x, std::vector<double>& g) {
    return objective_gradient(spec, x, psi_init, ctx.H, g);
  };
  LbfgsResult lr = lbfgs_minimize(fg, std::move(theta0), opt);

  VqeRunRecord rec;
  rec.patch = ctx.patch.name;
  rec.scheme = spec.scheme;
  rec.p = spec.p;
  rec.restart = restart_index;
  rec.seed = run_seed;
  rec.init = init_name(init);
  rec.e_final = lr.f;
  rec.e0 = ctx.refs.eigenvalues.at(0);
  rec.e1 = ctx.refs.eigenvalues.size() > 1 ? ctx.refs.eigenvalues[1] : rec.e0;
  rec.rel_energy_err = (rec.e_final - rec.e0) / std::abs(rec.e0);
  rec.iters = lr.iters;
  rec.evals = lr.evals;
  rec.status = lr.status;
  rec.energy_trace = std::move(lr.trace);
  rec.gradient_snapshots = std::move(lr.first_gradients);

  StateVector psi = psi_init;
  apply_ansatz(psi, spec, lr.x);
  if (!ctx.refs.eigenvectors.empty()) {
    const double f0 = fidelity(ctx.refs.eigenvectors[0], psi);
    rec.infidelity = 1.0 - f0;
    double fsub = f0;
    if (ctx.refs.eigenvectors.size() > 1)
      fsub += fidelity(ctx.refs.eigenvectors[1], psi);
    rec.subspace_infidelity = 1.0 - fsub;
  }
  rec.final_theta = std::move(lr.x);
  rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

std::vector<VqeRunRecord> run_vqe(const VqeConfig& cfg) {
  if (cfg.restarts < 1) throw ArgumentError("restarts must be >= 1");
  if (cfg.p < 1) throw ArgumentError("p must be >= 1 for a VQE run");
  PatchContext ctx(cfg.patch);
  AnsatzSpec spec = make_spec(ctx.patch, cfg.scheme, cfg.p);
  const Sector sector =
      ctx.patch.n_sites % 2 == 0 ? Sector::Sz0 : Sector::OddDefault;
  std::vector<VqeRunRecord> out;
  for (int r = 0; r < cfg.restarts; ++r) {
    const std::uint64_t rs = derive_seed(cfg.seed, cfg.patch, cfg.scheme, cfg.p, r);
    out.push_back(run_vqe_once(ctx, spec, cfg.init, cfg.ramp_delta, rs, cfg.opt,
                               sector, r));
  }
  return out;
}

std::vector<VqeRunRecord> sweep(const SweepOptions& opt,
                                const std::function<void(const VqeRunRecord&)>& sink) {
  std::vector<VqeRunRecord> out;
  for (const std::string& pname : opt.patches) {
    PatchContext ctx(pname);
    const Sector sector =
        ctx.patch.n_sites % 2 == 0 ? Sector::Sz0 : Sector::OddDefault;
    for (Scheme scheme : opt.schemes) {
      for (int p : opt.ps) {
        AnsatzSpec spec = make_spec(ctx.patch, scheme, p);
        for (int r = 0; r < opt.restarts; ++r) {
          const std::uint64_t rs = derive_seed(opt.seed, pname, scheme, p, r);
          VqeRunRecord rec = run_vqe_once(ctx, spec, opt.init, opt.ramp_delta,
                                          rs, opt.opt, sector, r);
          if (sink) sink(rec);
          out.push_back(std::move(rec));
        }
      }
    }
  }
  return out;
}

std::vector<ThresholdRow> threshold_table(const std::vector<VqeRunRecord>& records,
                                          const std::vector<double>& thresholds) {
  // best (lowest) infidelity per (patch, scheme, p)
  struct Key {
    std::string patch;
    Scheme scheme;
    bool operator<(const Key& o) const {
      return patch != o.patch ? patch < o.patch : scheme < o.scheme;
    }
  };
  std::map<Key, std::map<int, double>> best;
  for (const VqeRunRecord& r : records) {
    auto& cell = best[{r.patch, r.scheme}];
    auto it = cell.find(r.p);
    if (it == cell.end() || r.infidelity < it->second) cell[r.p] = r.infidelity;
  }
  std::vector<ThresholdRow> rows;
  for (const auto& [key, curve] : best) {
    for (double T : thresholds) {
      ThresholdRow row;
      row.patch = key.patch;
      row.scheme = key.scheme;
      row.threshold = T;
      const double target = std::log10(std::max(1.0 - T, 1e-300));
      double prev_p = 0, prev_li = 0;
      bool have_prev = false;
      for (const auto& [p, inf] : curve) {
        const double li = std::log10(std::max(inf, 1e-16));
        if (li <= target) {
          row.reached = true;
          if (!have_prev || prev_li <= target) {
            row.p_needed = p;
          } else {
            row.p_needed = prev_p + (p - prev_p) * (prev_li - target) / (prev_li - li);
          }
          break;
        }
        prev_p = p;
        prev_li = li;
        have_prev = true;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::vector<GradientStats> gradient_study(const std::vector<std::string>& patches,
                                          const std::vector<Scheme>& schemes,
                                          const std::vector<int>& ps, int samples,
                                          std::uint64_t seed) {
  if (samples < 2) throw ArgumentError("gradient study needs samples >= 2");
  std::vector<GradientStats> out;
  for (const std::string& pname : patches) {
    KagomePatch patch = build_patch(pname);
    SparseHamiltonian H = build_hamiltonian(patch, HamSubset::All);
    const Sector sector =
        patch.n_sites % 2 == 0 ? Sector::Sz0 : Sector::OddDefault;
    StateVector psi_init = initial_state(patch, sector);
    for (Scheme scheme : schemes) {
      for (int p : ps) {
        AnsatzSpec spec = make_spec(patch, scheme, p);
        GradientStats st;
        st.patch = pname;
        st.scheme = scheme;
        st.p = p;
        st.n_qubits = patch.n_sites;
        st.samples = samples;
        std::vector<double> firsts, norms, grad;
        for (int s = 0; s < samples; ++s) {
          const std::uint64_t rs = derive_seed(seed, pname, scheme, p, s);
          std::vector<double> theta =
              init_params(spec, InitStrategy::RandomUniform, rs);
          objective_gradient(spec, theta, psi_init, H, grad);
          firsts.push_back(grad.empty() ? 0.0 : grad[0]);
          double n2 = 0;
          for (double v : grad) n2 += v * v;
          norms.push_back(std::sqrt(n2));
        }
        double mean_first = 0;
        for (double v : firsts) mean_first += v;
        mean_first /= samples;
        double var = 0;
        for (double v : firsts) var += (v - mean_first) * (v - mean_first);
        var /= (samples - 1);
        double mean_norm = 0;
        for (double v : norms) mean_norm += v;
        mean_norm /= samples;
        st.var_first = var;
        st.var_first_scaled = var / ((double)st.n_qubits * st.n_qubits);
        st.mean_norm = mean_norm;
        st.mean_norm_scaled = mean_norm / ((double)st.n_qubits * p);
        out.push_back(st);
      }
    }
  }
  return out;
}

}  // namespace kgm
