// Command-line front end. Everything substantive happens behind the C API of
// libkagomevqe; this binary only marshals flags and prints summaries.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kagomevqe.h"

using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0, kExitTaskFailure = 1, kExitConfigError = 2;

std::string default_out_root() {
  if (const char* env = std::getenv("KAGOMEVQE_OUT")) return env;
  return "out";
}

struct Common {
  std::string config_path;
  std::string out_dir;
  long seed = -1;
  std::vector<std::string> patches;
  std::vector<std::string> schemes;
  std::string p_spec;
  int restarts = -1;
  bool allow_large = false;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_sub) {
  cmd->add_option("--config", c.config_path, "TOML or JSON config file");
  cmd->add_option("--out", c.out_dir, "output directory")
      ->default_val(default_out_root() + "/" + default_sub);
  cmd->add_option("--seed", c.seed, "base RNG seed (mandatory)");
  cmd->add_option("--patch", c.patches, "patch name(s)");
  cmd->add_option("--scheme", c.schemes,
                  "ansatz scheme(s): per_hamiltonian per_edge_color "
                  "per_edge_color_ii per_edge");
  cmd->add_option("--p", c.p_spec, "layer counts, e.g. 3 or 1..8 or 1,2,4");
  cmd->add_option("--restarts", c.restarts, "restarts per cell");
  cmd->add_flag("--allow-large", c.allow_large, "allow patches above 20 qubits");
}

// config file first, then flags override
json build_config(const Common& c, const std::string& experiment) {
  json cfg = json::object();
  if (!c.config_path.empty()) {
    std::ifstream in(c.config_path);
    if (!in) throw std::runtime_error("cannot read config " + c.config_path);
    if (c.config_path.size() > 5 &&
        c.config_path.substr(c.config_path.size() - 5) == ".json") {
      in >> cfg;
    } else {
      // reuse the library's TOML subset through a JSON round-trip: the CLI
      // keeps no parser of its own, so just inline a trivial key=value reader
      std::string line;
      while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
          const char* ws = " \t\r\n";
          s.erase(0, s.find_first_not_of(ws));
          s.erase(s.find_last_not_of(ws) + 1);
          return s;
        };
        const std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty()) continue;
        if (val.front() == '"') {
          cfg[key] = val.substr(1, val.size() - 2);
        } else if (val == "true" || val == "false") {
          cfg[key] = val == "true";
        } else if (val.front() == '[') {
          cfg[key] = json::parse(val);
        } else if (val.find_first_of(".eE") != std::string::npos) {
          cfg[key] = std::stod(val);
        } else {
          cfg[key] = std::stoll(val);
        }
      }
    }
  }
  cfg["experiment"] = experiment;
  if (c.seed >= 0) cfg["seed"] = c.seed;
  if (!c.patches.empty()) cfg["patches"] = c.patches;
  if (!c.schemes.empty()) cfg["schemes"] = c.schemes;
  if (!c.p_spec.empty()) cfg["p"] = c.p_spec;
  if (c.restarts > 0) cfg["restarts"] = c.restarts;
  if (c.allow_large) cfg["allow_large"] = true;
  return cfg;
}

int run_and_report(const json& cfg, const std::string& out_dir) {
  char* manifest_text = nullptr;
  const kgm_status st =
      kgm_experiment_run(cfg.dump().c_str(), out_dir.c_str(), &manifest_text);
  if (st != KGM_OK) {
    std::cerr << "error: " << kgm_last_error() << "\n";
    return st == KGM_ERR_ARGUMENT || st == KGM_ERR_NAME || st == KGM_ERR_SPEC ||
                   st == KGM_ERR_IO
               ? kExitConfigError
               : kExitTaskFailure;
  }
  json manifest = json::parse(manifest_text);
  kgm_string_free(manifest_text);
  for (const auto& task : manifest["tasks"]) {
    std::cout << (task["status"] == "ok" ? "ok     " : "FAILED ")
              << task["name"].get<std::string>();
    if (task.contains("error")) std::cout << "  (" << task["error"].get<std::string>() << ")";
    std::cout << "\n";
  }
  std::cout << "outputs under " << out_dir << " (manifest.json)\n";
  return manifest["ok"].get<bool>() ? kExitOk : kExitTaskFailure;
}

void print_depth_table(const std::string& out_dir, const json& cfg) {
  // small convenience: render the depth reports as a table
  for (const auto& patch : cfg.value("patches", std::vector<std::string>{})) {
    const std::string path = out_dir + "/depth_" + patch + "_" +
                             cfg.value("topology", std::string("square")) + ".json";
    std::ifstream in(path);
    if (!in) continue;
    json j;
    in >> j;
    std::cout << patch << "  layers/round=" << j["layers_per_round"]
              << "  2q-gates/round=" << j["two_qubit_gates_per_round"]
              << "  native/round=" << j["native_two_qubit_gates_per_round"]
              << "  rounds=" << j["rounds"] << "  total_depth=" << j["total_depth"]
              << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kagomevqe: VQE for the kagome Heisenberg antiferromagnet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kgm_version());

  Common c_ed, c_vqe, c_sweep, c_grad, c_obs, c_gap, c_compile;
  int ed_k = 2;
  int grad_samples = 20;
  long compile_rounds = 1;
  std::string gap_method = "exact", compile_topology = "square";
  std::string vqe_init = "random_uniform";
  double ramp_delta = 0.0;
  std::vector<double> thresholds;
  int obs_points = 81;

  CLI::App* ed = app.add_subcommand("ed", "Lanczos reference eigenpairs");
  add_common(ed, c_ed, "ed");
  ed->add_option("--k", ed_k, "number of eigenpairs");

  CLI::App* vqe = app.add_subcommand("vqe", "single VQE cell with restarts");
  add_common(vqe, c_vqe, "vqe");
  vqe->add_option("--init", vqe_init, "random_uniform or linear_ramp");
  vqe->add_option("--ramp-delta", ramp_delta, "linear ramp scale (default 1/p)");

  CLI::App* sweep = app.add_subcommand("sweep", "patch x scheme x p sweep");
  add_common(sweep, c_sweep, "sweep");
  sweep->add_option("--init", vqe_init, "random_uniform or linear_ramp");
  sweep->add_option("--ramp-delta", ramp_delta, "linear ramp scale");
  sweep->add_option("--thresholds", thresholds, "fidelity thresholds");

  CLI::App* grad = app.add_subcommand("gradstudy", "gradient statistics study");
  add_common(grad, c_grad, "gradstudy");
  grad->add_option("--samples", grad_samples, "random points per cell");

  CLI::App* obs = app.add_subcommand("observables",
                                     "correlations and structure factors");
  add_common(obs, c_obs, "observables");
  obs->add_option("--n-points", obs_points, "structure-factor grid points per axis");

  CLI::App* gap = app.add_subcommand("spin-gap", "sector ground-energy gap");
  add_common(gap, c_gap, "spin-gap");
  gap->add_option("--method", gap_method, "exact or vqe");

  CLI::App* compile = app.add_subcommand("compile", "hardware round schedule");
  add_common(compile, c_compile, "compile");
  compile->add_option("--topology", compile_topology, "square or alltoall");
  compile->add_option("--rounds", compile_rounds, "rounds for the depth report");

  std::string plot_kind, plot_in, plot_out;
  CLI::App* plot = app.add_subcommand("plot", "render CSV data to SVG");
  plot->add_option("--kind", plot_kind,
                   "sweep | thresholds | gradients | correlations | heatmap")
      ->required();
  plot->add_option("--in", plot_in, "input CSV")->required();
  plot->add_option("--out", plot_out, "output SVG path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      const kgm_status st =
          kgm_plot(plot_kind.c_str(), plot_in.c_str(), plot_out.c_str());
      if (st != KGM_OK) {
        std::cerr << "error: " << kgm_last_error() << "\n";
        return kExitConfigError;
      }
      return kExitOk;
    }

    Common* c = nullptr;
    std::string experiment;
    if (ed->parsed()) { c = &c_ed; experiment = "ed"; }
    else if (vqe->parsed()) { c = &c_vqe; experiment = "vqe"; }
    else if (sweep->parsed()) { c = &c_sweep; experiment = "sweep"; }
    else if (grad->parsed()) { c = &c_grad; experiment = "gradstudy"; }
    else if (obs->parsed()) { c = &c_obs; experiment = "observables"; }
    else if (gap->parsed()) { c = &c_gap; experiment = "spin-gap"; }
    else if (compile->parsed()) { c = &c_compile; experiment = "compile"; }
    else { std::cerr << "no subcommand\n"; return kExitConfigError; }

    json cfg = build_config(*c, experiment);
    if (ed->parsed()) cfg["k"] = ed_k;
    if (grad->parsed()) cfg["samples"] = grad_samples;
    if (obs->parsed()) cfg["n_points"] = obs_points;
    if (gap->parsed()) cfg["method"] = gap_method;
    if (compile->parsed()) {
      cfg["topology"] = compile_topology;
      cfg["rounds"] = compile_rounds;
    }
    if ((vqe->parsed() || sweep->parsed() || obs->parsed())) {
      cfg["init"] = vqe_init;
      if (ramp_delta > 0) cfg["ramp_delta"] = ramp_delta;
    }
    if (sweep->parsed() && !thresholds.empty()) cfg["thresholds"] = thresholds;
    if (!cfg.contains("seed")) {
      std::cerr << "error: --seed is mandatory\n";
      return kExitConfigError;
    }

    const int rc = run_and_report(cfg, c->out_dir);
    if (compile->parsed() && rc == kExitOk) print_depth_table(c->out_dir, cfg);
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
