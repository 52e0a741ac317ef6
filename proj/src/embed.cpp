#include "embed.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

namespace kgm {

SquareEmbedding embed_square(const KagomePatch& patch) {
  if (!patch.is_grid())
    throw EmbedError("patch " + patch.name + " has no square-grid embedding");
  const int rows = patch.rows, cols = patch.cols;
  SquareEmbedding out;
  out.placement.resize(patch.n_sites);
  for (int id = 0; id < patch.n_sites; ++id)
    out.placement[id] = {patch.grid_x(id), patch.grid_y(id)};

  // swap pairs: all horizontal (apex, chain-left) pairs, role(x,y) == 2
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x + 1 < cols; ++x)
      if (grid_role(x, y) == 2)
        out.swap_pairs.push_back({patch.grid_id(x, y), patch.grid_id(x + 1, y)});

  EdgeColouring col = colour_edges(patch, ColourScheme::Square5);

  RoundSchedule& sch = out.rounds;
  sch.patch = patch.name;
  sch.topology = "square";
  sch.n_qubits = patch.n_sites;

  auto push_interact = [&](int colour, std::vector<Edge> pairs) {
    if (pairs.empty()) return;
    std::sort(pairs.begin(), pairs.end());
    sch.layers.push_back({LayerKind::Interact, colour, std::move(pairs)});
  };

  for (int c = 1; c <= 3; ++c) push_interact(c, col.colour_class(patch, c));

  ScheduleLayer swap_layer{LayerKind::Swap, 0, out.swap_pairs};
  const bool have_late = !col.colour_class(patch, 4).empty() ||
                         !col.colour_class(patch, 5).empty();
  if (have_late && !out.swap_pairs.empty()) sch.layers.push_back(swap_layer);

  // colour 4: diagonal B-C edges, realised on the vertical above B after the
  // apex was swapped one cell to the right
  std::vector<Edge> c4;
  for (const Edge& e : col.colour_class(patch, 4)) {
    // endpoints: B at (x+1, y), C at (x, y+1) with role(x,y) == 0
    int xb = patch.grid_x(std::min(e.a, e.b)), yb = patch.grid_y(std::min(e.a, e.b));
    // min id is B (row y) because C sits one row up -> larger id
    c4.push_back({patch.grid_id(xb, yb), patch.grid_id(xb, yb + 1)});
  }
  push_interact(4, std::move(c4));

  // colour 5: chain bonds (x,y)-(x+2,y), realised on (x, x+1) after the swap
  std::vector<Edge> c5;
  for (const Edge& e : col.colour_class(patch, 5)) {
    int xa = patch.grid_x(e.a), ya = patch.grid_y(e.a);
    c5.push_back({patch.grid_id(xa, ya), patch.grid_id(xa + 1, ya)});
  }
  push_interact(5, std::move(c5));

  if (have_late && !out.swap_pairs.empty()) sch.layers.push_back(swap_layer);
  return out;
}

RoundSchedule schedule_all_to_all(const KagomePatch& patch) {
  EdgeColouring col = colour_edges(patch, ColourScheme::AllToAll4);
  RoundSchedule sch;
  sch.patch = patch.name;
  sch.topology = "alltoall";
  sch.n_qubits = patch.n_sites;
  for (int c = 1; c <= col.n_colours; ++c) {
    std::vector<Edge> cls = col.colour_class(patch, c);
    if (cls.empty()) continue;
    sch.layers.push_back({LayerKind::Interact, c, std::move(cls)});
  }
  return sch;
}

DepthStats depth_report(const RoundSchedule& schedule, long rounds) {
  if (rounds < 0) throw ArgumentError("rounds must be >= 0");
  DepthStats st;
  st.layers_per_round = (int)schedule.layers.size();
  for (const ScheduleLayer& l : schedule.layers) {
    st.two_qubit_gates_per_round += (long)l.pairs.size();
    st.native_two_qubit_gates_per_round +=
        (long)l.pairs.size() * (l.kind == LayerKind::Swap ? 3 : 2);
  }
  st.rounds = rounds;
  st.total_depth = rounds * st.layers_per_round;
  return st;
}

std::string schedule_to_json(const RoundSchedule& schedule) {
  nlohmann::ordered_json j;
  j["patch"] = schedule.patch;
  j["topology"] = schedule.topology;
  j["n_qubits"] = schedule.n_qubits;
  j["layers"] = nlohmann::ordered_json::array();
  for (const ScheduleLayer& l : schedule.layers) {
    nlohmann::ordered_json jl;
    jl["kind"] = l.kind == LayerKind::Swap ? "swap" : "interact";
    if (l.kind == LayerKind::Interact) jl["colour"] = l.colour;
    jl["pairs"] = nlohmann::ordered_json::array();
    for (const Edge& e : l.pairs) jl["pairs"].push_back({e.a, e.b});
    j["layers"].push_back(jl);
  }
  return j.dump(2);
}

std::string depth_report_json(const RoundSchedule& schedule, const DepthStats& st) {
  nlohmann::ordered_json j;
  j["patch"] = schedule.patch;
  j["topology"] = schedule.topology;
  j["layers_per_round"] = st.layers_per_round;
  j["two_qubit_gates_per_round"] = st.two_qubit_gates_per_round;
  j["native_two_qubit_gates_per_round"] = st.native_two_qubit_gates_per_round;
  j["rounds"] = st.rounds;
  j["total_depth"] = st.total_depth;
  return j.dump(2);
}

std::vector<Edge> schedule_logical_edges(const RoundSchedule& schedule,
                                         std::vector<int>* net_perm) {
  std::vector<int> site_at(schedule.n_qubits);  // position -> logical site
  std::iota(site_at.begin(), site_at.end(), 0);
  std::vector<Edge> logical;
  for (const ScheduleLayer& l : schedule.layers) {
    if (l.kind == LayerKind::Swap) {
      for (const Edge& e : l.pairs) std::swap(site_at[e.a], site_at[e.b]);
    } else {
      for (const Edge& e : l.pairs) {
        int a = site_at[e.a], b = site_at[e.b];
        if (a > b) std::swap(a, b);
        logical.push_back({a, b});
      }
    }
  }
  if (net_perm) *net_perm = site_at;
  std::sort(logical.begin(), logical.end());
  return logical;
}

void simulate_round(StateVector& s, const RoundSchedule& schedule,
                    const std::vector<double>& colour_angles) {
  for (const ScheduleLayer& l : schedule.layers) {
    if (l.kind == LayerKind::Swap) {
      for (const Edge& e : l.pairs) apply_swap(s, e.a, e.b);
    } else {
      if (l.colour < 1 || l.colour > (int)colour_angles.size())
        throw ArgumentError("missing angle for colour " + std::to_string(l.colour));
      const double th = colour_angles[l.colour - 1];
      for (const Edge& e : l.pairs) apply_heisenberg(s, e.a, e.b, th);
    }
  }
}

void apply_round_direct(StateVector& s, const KagomePatch& patch,
                        const EdgeColouring& colouring,
                        const std::vector<double>& colour_angles) {
  for (int c = 1; c <= colouring.n_colours; ++c) {
    if (c > (int)colour_angles.size()) break;
    for (const Edge& e : colouring.colour_class(patch, c))
      apply_heisenberg(s, e.a, e.b, colour_angles[c - 1]);
  }
}

}  // namespace kgm
