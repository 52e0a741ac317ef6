#pragma once

#include <array>
#include <string>
#include <vector>

#include "errors.hpp"

namespace kgm {

struct Edge {
  int a, b;  // a < b
  friend bool operator==(const Edge& l, const Edge& r) { return l.a == r.a && l.b == r.b; }
  friend bool operator<(const Edge& l, const Edge& r) {
    return l.a != r.a ? l.a < r.a : l.b < r.b;
  }
};

// A finite kagome patch. Site ids are 0-based; for grid-mapped patches the id
// is row-major over the square-lattice window (id = y*cols + x). Positions are
// true kagome geometry with unit inter-site spacing.
struct KagomePatch {
  std::string name;
  int n_sites = 0;
  std::vector<std::array<double, 2>> pos;
  std::vector<Edge> edges;  // sorted lexicographically
  int rows = 0, cols = 0;   // square-grid window dims; 0 for non-grid patches
  std::vector<int> marked_path;  // straight-line sites used for correlations

  bool is_grid() const { return rows > 0; }
  int grid_x(int id) const { return id % cols; }
  int grid_y(int id) const { return id / cols; }
  int grid_id(int x, int y) const { return y * cols + x; }
  bool in_grid(int x, int y) const { return x >= 0 && x < cols && y >= 0 && y < rows; }
  int edge_index(int a, int b) const;  // -1 if no such edge
  int degree(int site) const;
};

enum class ColourScheme { Square5, AllToAll4 };

struct EdgeColouring {
  ColourScheme scheme;
  std::vector<int> colour;  // per edge index in KagomePatch::edges, labels 1..n
  int n_colours = 0;

  std::vector<Edge> colour_class(const KagomePatch& patch, int c) const;
};

struct DimerCovering {
  std::vector<Edge> dimers;
  int uncovered = -1;  // -1 when every site is covered
};

// Named patches: 2x4 2x6 2x8 3x6 2x10 3x8 (square-grid windows, stored as
// frozen literal tables) and tri1 tri2 tri3 (15/19/23 sites, odd). Generic
// "2xC" strips are generated on the fly.
KagomePatch build_patch(const std::string& name);

// Custom patch from explicit data; validates the kagome invariants.
KagomePatch make_patch(std::string name, std::vector<std::array<double, 2>> pos,
                       std::vector<Edge> edges);

DimerCovering dimer_covering(const KagomePatch& patch);
EdgeColouring colour_edges(const KagomePatch& patch, ColourScheme scheme);

std::string patch_to_json(const KagomePatch& patch);

// Kagome role of a grid cell: 0 chain-left, 1 chain-right, 2 apex.
inline int grid_role(int x, int y) { return ((x - y) % 3 + 3) % 3; }

// Number of triangles whose three corners all have degree 4 (used to pin the
// tri-patch literals down in tests).
int enclosed_triangle_count(const KagomePatch& patch);

}  // namespace kgm
