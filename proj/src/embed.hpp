#pragma once

#include <array>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "statevec.hpp"

namespace kgm {

enum class LayerKind { Interact, Swap };

struct ScheduleLayer {
  LayerKind kind = LayerKind::Interact;
  int colour = 0;           // colour label for interact layers
  std::vector<Edge> pairs;  // physical qubit ids (grid cells / site ids)
};

struct RoundSchedule {
  std::string patch;
  std::string topology;  // "square" or "alltoall"
  int n_qubits = 0;
  std::vector<ScheduleLayer> layers;
};

struct SquareEmbedding {
  std::vector<std::array<int, 2>> placement;  // site id -> (x, y)
  std::vector<Edge> swap_pairs;
  RoundSchedule rounds;
};

// Square-grid compilation of a grid-mapped patch. Steps: interact colour 1,
// colour 2, colour 3, SWAP, colour 4 (via verticals), colour 5 (via
// horizontals), SWAP back. Non-grid patches are not embeddable here.
SquareEmbedding embed_square(const KagomePatch& patch);

// One layer per allToAll4 colour class, no swaps.
RoundSchedule schedule_all_to_all(const KagomePatch& patch);

struct DepthStats {
  int layers_per_round = 0;
  long two_qubit_gates_per_round = 0;       // SWAP counted as one gate
  long native_two_qubit_gates_per_round = 0;  // interaction = 2, SWAP = 3
  long rounds = 0;
  long total_depth = 0;  // rounds * layers_per_round
};
DepthStats depth_report(const RoundSchedule& schedule, long rounds);

std::string schedule_to_json(const RoundSchedule& schedule);
std::string depth_report_json(const RoundSchedule& schedule, const DepthStats& stats);

// Logical kagome edges interacted during one round, obtained by tracking the
// swap permutation. Optionally returns the net position->site permutation
// after the round (identity iff the swaps undo).
std::vector<Edge> schedule_logical_edges(const RoundSchedule& schedule,
                                         std::vector<int>* net_perm = nullptr);

// Run one round on a state, physical pairs and swaps included.
// colour_angles[c-1] is the evolution angle for interact layers of colour c.
void simulate_round(StateVector& s, const RoundSchedule& schedule,
                    const std::vector<double>& colour_angles);

// Reference path: apply the colour-class evolutions directly on the logical
// edges, in the same colour order as the schedule.
void apply_round_direct(StateVector& s, const KagomePatch& patch,
                        const EdgeColouring& colouring,
                        const std::vector<double>& colour_angles);

}  // namespace kgm
