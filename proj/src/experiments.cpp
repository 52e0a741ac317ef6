#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "embed.hpp"
#include "observables.hpp"
#include "svgplot.hpp"
#include "util.hpp"
#include "vqe.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace kgm {

namespace {

// ---------------------------------------------------------------- config ---

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  auto e = s.find_last_not_of(" \t\r\n");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

json toml_value(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) throw IoError("toml: empty value");
  if (v.front() == '"' && v.back() == '"' && v.size() >= 2)
    return v.substr(1, v.size() - 2);
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '[') {
    if (v.back() != ']') throw IoError("toml: unterminated array");
    json arr = json::array();
    std::string body = v.substr(1, v.size() - 2);
    std::string item;
    int depth = 0;
    for (char c : body) {
      if (c == '[') ++depth;
      if (c == ']') --depth;
      if (c == ',' && depth == 0) {
        if (!trim(item).empty()) arr.push_back(toml_value(item));
        item.clear();
      } else {
        item.push_back(c);
      }
    }
    if (!trim(item).empty()) arr.push_back(toml_value(item));
    return arr;
  }
  try {
    if (v.find_first_of(".eE") != std::string::npos) return std::stod(v);
    return (std::int64_t)std::stoll(v);
  } catch (...) {
    throw IoError("toml: cannot parse value '" + v + "'");
  }
}

json parse_toml(std::istream& in) {
  json out = json::object();
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;  // flat keys only
    auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("toml: expected key = value: " + line);
    out[trim(line.substr(0, eq))] = toml_value(line.substr(eq + 1));
  }
  return out;
}

// ------------------------------------------------------------- utilities ---

std::vector<std::string> str_list(const json& cfg, const std::string& single,
                                  const std::string& plural) {
  std::vector<std::string> out;
  if (cfg.contains(plural))
    for (const auto& v : cfg[plural]) out.push_back(v.get<std::string>());
  else if (cfg.contains(single))
    out.push_back(cfg[single].get<std::string>());
  return out;
}

std::vector<int> parse_p_list(const json& cfg) {
  std::vector<int> out;
  if (!cfg.contains("p")) return {1};
  const json& p = cfg["p"];
  if (p.is_number_integer()) return {p.get<int>()};
  if (p.is_array()) {
    for (const auto& v : p) out.push_back(v.get<int>());
    return out;
  }
  if (p.is_string()) {
    const std::string s = p.get<std::string>();
    auto dots = s.find("..");
    if (dots != std::string::npos) {
      const int lo = std::stoi(s.substr(0, dots)), hi = std::stoi(s.substr(dots + 2));
      if (lo < 0 || hi < lo) throw ArgumentError("bad p range '" + s + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(trim(item)));
    return out;
  }
  throw ArgumentError("cannot parse p from config");
}

std::vector<Scheme> parse_schemes(const json& cfg) {
  std::vector<Scheme> out;
  for (const std::string& s : str_list(cfg, "scheme", "schemes"))
    out.push_back(scheme_from_name(s));
  if (out.empty()) out.push_back(Scheme::PerEdge);
  return out;
}

void check_size_cap(const KagomePatch& patch, const json& cfg) {
  const bool allow = cfg.value("allow_large", false);
  if (patch.n_sites > 20 && !allow)
    throw ArgumentError("patch " + patch.name + " has " +
                        std::to_string(patch.n_sites) +
                        " qubits; pass allow_large to run it");
}

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& outputs) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path.string());
  f << content;
  outputs.push_back(path.string());
}

std::string scheme_str(Scheme s) { return scheme_name(s); }

// Aggregate CSV row for one VQE run. Result fields are printed at 17
// significant digits and are byte-stable across reruns; wall_s is timing
// metadata and deliberately coarse.
std::string run_csv_row(const VqeRunRecord& r) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", r.wall_s);
  std::ostringstream os;
  os << r.patch << "," << scheme_str(r.scheme) << "," << r.p << "," << r.restart
     << "," << r.seed << "," << fmt17(r.e_final) << "," << fmt17(r.rel_energy_err)
     << "," << fmt17(r.infidelity) << "," << fmt17(r.subspace_infidelity) << ","
     << r.iters << "," << r.evals << "," << wall << "\n";
  return os.str();
}

constexpr const char* kRunsHeader =
    "patch,scheme,p,restart,seed,E_final,rel_energy_err,infidelity,"
    "subspace_infidelity,iters,evals,wall_s\n";

ojson record_json(const VqeRunRecord& r) {
  ojson j;
  j["patch"] = r.patch;
  j["scheme"] = scheme_str(r.scheme);
  j["p"] = r.p;
  j["restart"] = r.restart;
  j["seed"] = r.seed;
  j["init"] = r.init;
  j["status"] = r.status;
  j["E_final"] = r.e_final;
  j["E0"] = r.e0;
  j["E1"] = r.e1;
  j["rel_energy_err"] = r.rel_energy_err;
  j["infidelity"] = r.infidelity;
  j["subspace_infidelity"] = r.subspace_infidelity;
  j["iters"] = r.iters;
  j["evals"] = r.evals;
  j["wall_s"] = r.wall_s;
  j["energy_trace"] = r.energy_trace;
  j["gradient_snapshots"] = r.gradient_snapshots;
  j["final_theta"] = r.final_theta;
  return j;
}

std::string run_tag(const VqeRunRecord& r) {
  std::ostringstream os;
  os << r.patch << "_" << scheme_str(r.scheme) << "_p" << r.p << "_r" << r.restart;
  return os.str();
}

// ------------------------------------------------------------ experiments ---

struct TaskLog {
  ojson tasks = ojson::array();
  bool any_failed = false;
  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    ojson t;
    t["name"] = name;
    try {
      fn();
      t["status"] = "ok";
    } catch (const std::exception& e) {
      t["status"] = "failed";
      t["error"] = e.what();
      any_failed = true;
    }
    tasks.push_back(t);
  }
};

LbfgsOptions lbfgs_from_config(const json& cfg) {
  LbfgsOptions opt;
  opt.memory = cfg.value("lbfgs_memory", opt.memory);
  opt.gtol = cfg.value("gtol", opt.gtol);
  opt.ftol = cfg.value("ftol", opt.ftol);
  opt.max_iters = cfg.value("max_iters", opt.max_iters);
  return opt;
}

void experiment_ed(const json& cfg, const fs::path& out, TaskLog& log,
                   std::vector<std::string>& outputs) {
  const int k = cfg.value("k", 2);
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  for (const std::string& name : str_list(cfg, "patch", "patches")) {
    log.run("ed:" + name, [&] {
      KagomePatch patch = build_patch(name);
      check_size_cap(patch, cfg);
      SparseHamiltonian H = build_hamiltonian(patch, HamSubset::All);
      LanczosOptions lo;
      lo.k = k;
      lo.seed = seed;
      lo.want_vectors = false;
      if (patch.n_sites > 20) {
        lo.sector_basis = true;
        lo.sector = patch.n_sites % 2 == 0 ? 0 : 1;
        lo.basis_cap = 100;
      } else {
        lo.basis_cap = std::min<long>(200, (1L << patch.n_sites) - 2);
      }
      EigenSolution sol = lanczos_lowest(H, lo);
      ojson j;
      j["patch"] = name;
      j["k"] = k;
      j["energies"] = sol.eigenvalues;
      j["residuals"] = sol.residuals;
      if (k >= 2) {
        j["gap"] = sol.eigenvalues[1] - sol.eigenvalues[0];
        j["relative_gap"] =
            (sol.eigenvalues[1] - sol.eigenvalues[0]) / std::abs(sol.eigenvalues[0]);
      }
      j["matvecs"] = sol.matvecs;
      write_file(out / ("eigs_" + name + ".json"), j.dump(2) + "\n", outputs);
    });
  }
}

void experiment_vqe_like(const json& cfg, const fs::path& out, TaskLog& log,
                         std::vector<std::string>& outputs, bool full_sweep) {
  SweepOptions so;
  so.patches = str_list(cfg, "patch", "patches");
  so.schemes = parse_schemes(cfg);
  so.ps = parse_p_list(cfg);
  so.restarts = cfg.value("restarts", full_sweep ? 10 : 1);
  so.seed = cfg["seed"].get<std::uint64_t>();
  so.init = init_from_name(cfg.value("init", "random_uniform"));
  so.ramp_delta = cfg.value("ramp_delta", 0.0);
  so.opt = lbfgs_from_config(cfg);
  if (so.patches.empty()) throw ArgumentError("no patch given");
  for (const std::string& p : so.patches) check_size_cap(build_patch(p), cfg);

  const fs::path csv_path = out / "runs.csv";
  const bool fresh = !fs::exists(csv_path);
  std::ofstream csv(csv_path, std::ios::app);
  if (!csv) throw IoError("cannot write " + csv_path.string());
  if (fresh) csv << kRunsHeader;
  outputs.push_back(csv_path.string());

  std::vector<VqeRunRecord> records;
  log.run(full_sweep ? "sweep" : "vqe", [&] {
    records = sweep(so, [&](const VqeRunRecord& r) {
      csv << run_csv_row(r);
      csv.flush();
      std::ofstream rf(out / ("run_" + run_tag(r) + ".json"));
      rf << record_json(r).dump(2) << "\n";
    });
  });
  for (const VqeRunRecord& r : records)
    outputs.push_back((out / ("run_" + run_tag(r) + ".json")).string());

  if (full_sweep && !records.empty()) {
    std::vector<double> thresholds = {0.99, 0.999};
    if (cfg.contains("thresholds")) {
      thresholds.clear();
      for (const auto& t : cfg["thresholds"]) thresholds.push_back(t.get<double>());
    }
    std::ostringstream th;
    th << "patch,n_qubits,scheme,threshold,reached,p_needed\n";
    for (const ThresholdRow& row : threshold_table(records, thresholds)) {
      th << row.patch << "," << build_patch(row.patch).n_sites << ","
         << scheme_str(row.scheme) << "," << fmt17(row.threshold) << ","
         << (row.reached ? 1 : 0) << "," << fmt17(row.p_needed) << "\n";
    }
    write_file(out / "thresholds.csv", th.str(), outputs);
  }
}

void experiment_gradstudy(const json& cfg, const fs::path& out, TaskLog& log,
                          std::vector<std::string>& outputs) {
  const int samples = cfg.value("samples", 20);
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  auto patches = str_list(cfg, "patch", "patches");
  for (const std::string& p : patches) check_size_cap(build_patch(p), cfg);
  log.run("gradstudy", [&] {
    auto stats = gradient_study(patches, parse_schemes(cfg), parse_p_list(cfg),
                                samples, seed);
    std::ostringstream os;
    os << "patch,scheme,p,n_qubits,samples,var_first,var_first_scaled,"
          "mean_norm,mean_norm_scaled\n";
    for (const GradientStats& s : stats)
      os << s.patch << "," << scheme_str(s.scheme) << "," << s.p << "," << s.n_qubits
         << "," << s.samples << "," << fmt17(s.var_first) << ","
         << fmt17(s.var_first_scaled) << "," << fmt17(s.mean_norm) << ","
         << fmt17(s.mean_norm_scaled) << "\n";
    write_file(out / "gradstats.csv", os.str(), outputs);
  });
}

void experiment_observables(const json& cfg, const fs::path& out, TaskLog& log,
                            std::vector<std::string>& outputs) {
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  const int n_points = cfg.value("n_points", 81);
  for (const std::string& name : str_list(cfg, "patch", "patches")) {
    log.run("observables:" + name, [&] {
      KagomePatch patch = build_patch(name);
      check_size_cap(patch, cfg);
      PatchContext ctx(name, seed);
      if (ctx.refs.eigenvectors.empty())
        throw ConvergenceError("no reference state available");
      std::map<std::string, StateVector> states;
      states.emplace("exact", ctx.refs.eigenvectors[0]);

      if (cfg.contains("scheme") || cfg.contains("schemes")) {
        const Scheme scheme = parse_schemes(cfg)[0];
        const int p = parse_p_list(cfg).back();
        const int restarts = cfg.value("restarts", 5);
        AnsatzSpec spec = make_spec(ctx.patch, scheme, p);
        const Sector sector =
            ctx.patch.n_sites % 2 == 0 ? Sector::Sz0 : Sector::OddDefault;
        VqeRunRecord best;
        best.e_final = 1e300;
        std::vector<double> best_theta;
        for (int r = 0; r < restarts; ++r) {
          auto rec = run_vqe_once(ctx, spec, init_from_name(cfg.value("init", "random_uniform")),
                                  cfg.value("ramp_delta", 0.0),
                                  derive_seed(seed, name, scheme, p, r),
                                  lbfgs_from_config(cfg), sector, r);
          if (rec.e_final < best.e_final) best = std::move(rec);
        }
        StateVector psi = initial_state(ctx.patch, sector);
        apply_ansatz(psi, spec, best.final_theta);
        states.emplace("vqe_p" + std::to_string(p), std::move(psi));
      }

      // spin-spin correlations along the marked straight-line path
      std::vector<int> path = patch.marked_path;
      if (path.empty())
        for (int i = 0; i < std::min(patch.n_sites, 6); ++i) path.push_back(i);
      std::ostringstream ss;
      ss << "patch,source,j,site_i,site_j,dist,zz,abs_zz,abs_spin_units\n";
      for (const auto& [src, st] : states) {
        std::vector<Edge> pairs;
        for (std::size_t j = 1; j < path.size(); ++j)
          pairs.push_back({std::min(path[0], path[j]), std::max(path[0], path[j])});
        std::vector<double> vals = spin_spin(st, pairs);
        for (std::size_t j = 0; j < pairs.size(); ++j) {
          const double dx = patch.pos[pairs[j].b][0] - patch.pos[pairs[j].a][0];
          const double dy = patch.pos[pairs[j].b][1] - patch.pos[pairs[j].a][1];
          ss << name << "," << src << "," << j + 1 << "," << pairs[j].a << ","
             << pairs[j].b << "," << fmt17(std::hypot(dx, dy)) << "," << fmt17(vals[j])
             << "," << fmt17(std::abs(vals[j])) << "," << fmt17(std::abs(vals[j]) / 4.0)
             << "\n";
        }
      }
      write_file(out / ("spin_spin_" + name + ".csv"), ss.str(), outputs);

      // dimer-dimer correlations between disjoint dimers of the covering
      DimerCovering cover = dimer_covering(patch);
      std::ostringstream dd;
      dd << "patch,source,i1,j1,i2,j2,c_d\n";
      for (const auto& [src, st] : states) {
        for (std::size_t a = 0; a + 1 < cover.dimers.size() && a < 6; ++a) {
          const Edge e1 = cover.dimers[a], e2 = cover.dimers[a + 1];
          if (e1.a == e2.a || e1.a == e2.b || e1.b == e2.a || e1.b == e2.b) continue;
          dd << name << "," << src << "," << e1.a << "," << e1.b << "," << e2.a << ","
             << e2.b << "," << fmt17(dimer_dimer(st, e1, e2)) << "\n";
        }
      }
      write_file(out / ("dimer_dimer_" + name + ".csv"), dd.str(), outputs);

      // structure factor grids
      for (const auto& [src, st] : states) {
        StructureFactorGrid g = structure_factor(st, patch, n_points);
        std::ostringstream sf;
        sf << "qx,qy,szq\n";
        for (int iy = 0; iy < g.ny; ++iy)
          for (int ix = 0; ix < g.nx; ++ix)
            sf << fmt17(g.qx[ix]) << "," << fmt17(g.qy[iy]) << ","
               << fmt17(g.value[(std::size_t)iy * g.nx + ix]) << "\n";
        write_file(out / ("structure_factor_" + name + "_" + src + ".csv"), sf.str(),
                   outputs);
      }
    });
  }
}

void experiment_spin_gap(const json& cfg, const fs::path& out, TaskLog& log,
                         std::vector<std::string>& outputs) {
  const std::uint64_t seed = cfg["seed"].get<std::uint64_t>();
  const std::string method = cfg.value("method", "exact");
  for (const std::string& name : str_list(cfg, "patch", "patches")) {
    log.run("spin-gap:" + name, [&] {
      KagomePatch patch = build_patch(name);
      check_size_cap(patch, cfg);
      SpinGapResult r;
      if (method == "exact") {
        r = spin_gap_exact(patch, seed);
      } else if (method == "vqe") {
        r = spin_gap_vqe(patch, parse_schemes(cfg)[0], parse_p_list(cfg).back(),
                         cfg.value("restarts", 5), seed, lbfgs_from_config(cfg));
      } else {
        throw ArgumentError("spin-gap method must be exact or vqe");
      }
      ojson j;
      j["patch"] = name;
      j["method"] = r.method;
      j["sector_lower"] = r.sector_lower;
      j["sector_upper"] = r.sector_upper;
      j["E_lower"] = r.e_lower;
      j["E_upper"] = r.e_upper;
      j["gap_pauli"] = r.gap_pauli;
      j["gap_spin"] = r.gap_spin;
      j["converged"] = r.converged;
      j["diag_lower"] = r.diag_lower;
      j["diag_upper"] = r.diag_upper;
      write_file(out / ("spin_gap_" + name + "_" + method + ".json"), j.dump(2) + "\n",
                 outputs);
    });
  }
}

void experiment_compile(const json& cfg, const fs::path& out, TaskLog& log,
                        std::vector<std::string>& outputs) {
  const std::string topology = cfg.value("topology", "square");
  const long rounds = cfg.value("rounds", 1);
  for (const std::string& name : str_list(cfg, "patch", "patches")) {
    log.run("compile:" + name, [&] {
      KagomePatch patch = build_patch(name);
      RoundSchedule sch;
      if (topology == "square") {
        sch = embed_square(patch).rounds;
      } else if (topology == "alltoall") {
        sch = schedule_all_to_all(patch);
      } else {
        throw ArgumentError("topology must be square or alltoall");
      }
      write_file(out / ("schedule_" + name + "_" + topology + ".json"),
                 schedule_to_json(sch) + "\n", outputs);
      DepthStats st = depth_report(sch, rounds);
      write_file(out / ("depth_" + name + "_" + topology + ".json"),
                 depth_report_json(sch, st) + "\n", outputs);
    });
  }
}

}  // namespace

json parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    json j;
    in >> j;
    return j;
  }
  return parse_toml(in);
}

json run_experiment(const json& config, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!config.contains("experiment"))
    throw ArgumentError("config missing 'experiment'");
  if (!config.contains("seed") || !config["seed"].is_number())
    throw ArgumentError("config missing mandatory integer 'seed'");
  const std::string exp = config["experiment"].get<std::string>();
  fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out))
    throw ArgumentError("output directory '" + out_dir + "' is not writable");

  TaskLog log;
  std::vector<std::string> outputs;
  if (exp == "ed")
    experiment_ed(config, out, log, outputs);
  else if (exp == "vqe")
    experiment_vqe_like(config, out, log, outputs, false);
  else if (exp == "sweep")
    experiment_vqe_like(config, out, log, outputs, true);
  else if (exp == "gradstudy")
    experiment_gradstudy(config, out, log, outputs);
  else if (exp == "observables")
    experiment_observables(config, out, log, outputs);
  else if (exp == "spin-gap")
    experiment_spin_gap(config, out, log, outputs);
  else if (exp == "compile")
    experiment_compile(config, out, log, outputs);
  else
    throw ArgumentError("unknown experiment '" + exp + "'");

  // content hash over the patch literals actually referenced
  std::string patch_blob;
  for (const std::string& name :
       str_list(config, "patch", "patches"))
    try {
      patch_blob += patch_to_json(build_patch(name));
    } catch (...) {
    }

  ojson manifest;
  manifest["tool"] = "kagomevqe";
  manifest["version"] = "0.1.0";
  manifest["experiment"] = exp;
  manifest["config_hash"] = sha256_hex(config.dump());
  manifest["patch_hash"] = sha256_hex(patch_blob);
  manifest["tasks"] = log.tasks;
  manifest["outputs"] = outputs;
  manifest["ok"] = !log.any_failed;
  manifest["runtime_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ofstream mf(out / "manifest.json");
  mf << manifest.dump(2) << "\n";
  return manifest;
}

// ------------------------------------------------------------------ plots ---

namespace {

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  int col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return (int)i;
    throw IoError("csv is missing column '" + name + "'");
  }
};

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  Csv csv;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (csv.header.empty())
      csv.header = cells;
    else
      csv.rows.push_back(cells);
  }
  if (csv.header.empty() || csv.rows.empty())
    throw IoError("csv " + path + " is empty; nothing to plot");
  return csv;
}

std::string with_suffix(const std::string& out_path, const std::string& suffix) {
  std::string stem = out_path;
  if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".svg")
    stem = stem.substr(0, stem.size() - 4);
  return stem + suffix + ".svg";
}

}  // namespace

void plot_csv(const std::string& kind, const std::string& csv_path,
              const std::string& out_path) {
  Csv csv = read_csv(csv_path);
  auto num = [](const std::string& s) { return std::stod(s); };

  if (kind == "sweep") {
    const int cp = csv.col("patch"), cs = csv.col("scheme"), cpp = csv.col("p"),
              ci = csv.col("infidelity");
    std::set<std::string> patches;
    for (const auto& r : csv.rows) patches.insert(r[cp]);
    for (const std::string& patch : patches) {
      std::map<std::string, std::map<double, double>> best;  // scheme -> p -> inf
      for (const auto& r : csv.rows) {
        if (r[cp] != patch) continue;
        auto& cell = best[r[cs]];
        const double p = num(r[cpp]), inf = num(r[ci]);
        auto it = cell.find(p);
        if (it == cell.end() || inf < it->second) cell[p] = inf;
      }
      PlotSpec spec;
      spec.title = "best infidelity vs p (" + patch + ")";
      spec.xlabel = "ansatz layers p";
      spec.ylabel = "1 - F";
      spec.logy = true;
      for (const auto& [scheme, curve] : best) {
        Series s;
        s.label = scheme;
        for (const auto& [p, inf] : curve) {
          s.x.push_back(p);
          s.y.push_back(std::max(inf, 1e-16));
        }
        spec.series.push_back(std::move(s));
      }
      std::ofstream f(with_suffix(out_path, "_" + patch));
      f << render_line_plot(spec);
    }
    return;
  }
  if (kind == "thresholds") {
    const int cn = csv.col("n_qubits"), cs = csv.col("scheme"),
              ct = csv.col("threshold"), cr = csv.col("reached"),
              cpn = csv.col("p_needed");
    std::map<std::string, std::map<double, double>> series;
    for (const auto& r : csv.rows) {
      if (num(r[cr]) == 0) continue;
      series[r[cs] + " T=" + r[ct]][num(r[cn])] = num(r[cpn]);
    }
    PlotSpec spec;
    spec.title = "layers needed for threshold fidelity";
    spec.xlabel = "qubits";
    spec.ylabel = "p needed";
    for (const auto& [label, curve] : series) {
      Series s;
      s.label = label;
      for (const auto& [x, y] : curve) {
        s.x.push_back(x);
        s.y.push_back(y);
      }
      spec.series.push_back(std::move(s));
    }
    std::ofstream f(with_suffix(out_path, ""));
    f << render_line_plot(spec);
    return;
  }
  if (kind == "gradients") {
    const int cp = csv.col("patch"), cs = csv.col("scheme"), cpp = csv.col("p");
    for (const char* quantity : {"var_first_scaled", "mean_norm_scaled"}) {
      const int cq = csv.col(quantity);
      std::map<std::string, std::map<double, double>> series;
      for (const auto& r : csv.rows)
        series[r[cp] + " " + r[cs]][num(r[cpp])] = num(r[cq]);
      PlotSpec spec;
      spec.title = quantity;
      spec.xlabel = "ansatz layers p";
      spec.ylabel = quantity;
      spec.logy = true;
      for (const auto& [label, curve] : series) {
        Series s;
        s.label = label;
        for (const auto& [x, y] : curve) {
          s.x.push_back(x);
          s.y.push_back(std::max(y, 1e-16));
        }
        spec.series.push_back(std::move(s));
      }
      std::ofstream f(with_suffix(out_path, std::string("_") + quantity));
      f << render_line_plot(spec);
    }
    return;
  }
  if (kind == "correlations") {
    const int cj = csv.col("j"), cz = csv.col("abs_zz"), cs = csv.col("source");
    std::map<std::string, std::map<double, double>> series;
    for (const auto& r : csv.rows) series[r[cs]][num(r[cj])] = num(r[cz]);
    PlotSpec spec;
    spec.title = "spin-spin correlation along the marked path";
    spec.xlabel = "j";
    spec.ylabel = "|<Z_0 Z_j>|";
    spec.logy = true;
    for (const auto& [label, curve] : series) {
      Series s;
      s.label = label;
      for (const auto& [x, y] : curve) {
        s.x.push_back(x);
        s.y.push_back(std::max(y, 1e-16));
      }
      spec.series.push_back(std::move(s));
    }
    std::ofstream f(with_suffix(out_path, ""));
    f << render_line_plot(spec);
    return;
  }
  if (kind == "heatmap") {
    const int cx = csv.col("qx"), cy = csv.col("qy"), cv = csv.col("szq");
    std::set<double> xs, ys;
    for (const auto& r : csv.rows) {
      xs.insert(num(r[cx]));
      ys.insert(num(r[cy]));
    }
    HeatmapSpec spec;
    spec.title = "static structure factor S^z(q)";
    spec.xlabel = "qx";
    spec.ylabel = "qy";
    spec.xs.assign(xs.begin(), xs.end());
    spec.ys.assign(ys.begin(), ys.end());
    spec.nx = (int)spec.xs.size();
    spec.ny = (int)spec.ys.size();
    spec.values.assign((std::size_t)spec.nx * spec.ny, 0.0);
    auto xi = [&](double v) {
      return (int)(std::lower_bound(spec.xs.begin(), spec.xs.end(), v - 1e-12) -
                   spec.xs.begin());
    };
    for (const auto& r : csv.rows) {
      const int ix = xi(num(r[cx]));
      const int iy = (int)(std::lower_bound(spec.ys.begin(), spec.ys.end(),
                                            num(r[cy]) - 1e-12) -
                           spec.ys.begin());
      spec.values[(std::size_t)iy * spec.nx + ix] = num(r[cv]);
    }
    std::ofstream f(with_suffix(out_path, ""));
    f << render_heatmap(spec);
    return;
  }
  throw ArgumentError("unknown plot kind '" + kind + "'");
}

}  // namespace kgm
