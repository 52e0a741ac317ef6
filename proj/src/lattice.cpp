#include "lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

namespace kgm {

#include "lattice_data.inc"

namespace {

constexpr double kRowHeight = 0.86602540378443864676;  // sqrt(3)/2

void validate(const KagomePatch& p) {
  if (p.n_sites < 1) throw SpecError("patch has no sites");
  std::set<std::pair<int, int>> seen;
  std::vector<int> deg(p.n_sites, 0);
  for (const Edge& e : p.edges) {
    if (e.a < 0 || e.b >= p.n_sites || e.a >= e.b)
      throw SpecError("edge endpoints invalid in patch " + p.name);
    if (!seen.insert({e.a, e.b}).second)
      throw SpecError("duplicate edge in patch " + p.name);
    ++deg[e.a];
    ++deg[e.b];
  }
  for (int d : deg)
    if (d > 4) throw SpecError("site degree > 4 in patch " + p.name);
  // connectivity
  std::vector<int> stack{0}, col(p.n_sites, 0);
  col[0] = 1;
  int reached = 1;
  std::vector<std::vector<int>> adj(p.n_sites);
  for (const Edge& e : p.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (int t : adj[s])
      if (!col[t]) {
        col[t] = 1;
        ++reached;
        stack.push_back(t);
      }
  }
  if (reached != p.n_sites) throw SpecError("patch " + p.name + " is disconnected");
}

KagomePatch from_literal(const PatchLit& lit) {
  KagomePatch p;
  p.name = lit.name;
  p.n_sites = lit.n_sites;
  p.rows = lit.rows;
  p.cols = lit.cols;
  p.pos.resize(lit.n_sites);
  for (int i = 0; i < lit.n_sites; ++i)
    p.pos[i] = {0.5 * lit.xy2[2 * i], kRowHeight * lit.xy2[2 * i + 1]};
  p.edges.resize(lit.n_edges);
  for (int i = 0; i < lit.n_edges; ++i)
    p.edges[i] = {lit.edges[2 * i], lit.edges[2 * i + 1]};
  p.marked_path.assign(lit.path, lit.path + lit.path_len);
  validate(p);
  return p;
}

const PatchLit* find_literal(const std::string& name) {
  for (const PatchLit& lit : k_patches)
    if (name == lit.name) return &lit;
  return nullptr;
}

// Grid window construction (same rules the literal tables were generated
// from). Kagome roles per cell: (x - y) mod 3 = 0 chain-left A, 1 chain-right
// B, 2 apex C. Every horizontal grid edge is a kagome edge; verticals above A
// are kagome; B has a diagonal bond to the apex above-left and a distance-2
// chain bond bridging the apex to its right.
struct GridEdge {
  Edge e;
  int colour;  // square5 label
};

std::vector<GridEdge> grid_edges(int rows, int cols) {
  std::vector<GridEdge> out;
  auto id = [cols](int x, int y) { return y * cols + x; };
  auto in = [rows, cols](int x, int y) { return x >= 0 && x < cols && y >= 0 && y < rows; };
  auto put = [&](int x1, int y1, int x2, int y2, int colour) {
    if (!in(x1, y1) || !in(x2, y2)) return;
    int a = id(x1, y1), b = id(x2, y2);
    if (a > b) std::swap(a, b);
    out.push_back({{a, b}, colour});
  };
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      put(x, y, x + 1, y, x % 2 == 0 ? 1 : 2);  // all horizontals are kagome
      if (grid_role(x, y) == 0) {
        put(x, y, x, y + 1, 3);      // A-C up-left leg
        put(x + 1, y, x, y + 1, 4);  // B-C up-right leg (needs a swap)
      }
      if (grid_role(x, y) == 1) put(x, y, x + 2, y, 5);  // chain bond over the apex
    }
  std::sort(out.begin(), out.end(),
            [](const GridEdge& l, const GridEdge& r) { return l.e < r.e; });
  return out;
}

KagomePatch from_grid(const std::string& name, int rows, int cols) {
  KagomePatch p;
  p.name = name;
  p.rows = rows;
  p.cols = cols;
  p.n_sites = rows * cols;
  p.pos.resize(p.n_sites);
  for (int y = 0; y < rows; ++y)
    for (int x = 0; x < cols; ++x) {
      double gx, gy;
      int r = grid_role(x, y);
      if (r == 0) {  // A(m, y), m = (x-y)/3
        int m = (x - y) / 3;
        gx = 2 * m + y;
        gy = y;
      } else if (r == 1) {
        int m = (x - y - 1) / 3;
        gx = 2 * m + y + 1;
        gy = y;
      } else {  // C(m, y-1), m = (x-y+1)/3
        int m = (x - y + 1) / 3;
        gx = 2 * m + (y - 1) + 0.5;
        gy = y - 0.5;
      }
      p.pos[p.grid_id(x, y)] = {gx, gy * 2 * kRowHeight};
    }
  for (const GridEdge& ge : grid_edges(rows, cols)) p.edges.push_back(ge.e);
  for (int x = 0; x < cols; ++x)
    if (grid_role(x, 0) != 2) p.marked_path.push_back(p.grid_id(x, 0));
  validate(p);
  return p;
}

// Exact search for a perfect matching that skips `skip` (or nothing);
// lexicographically smallest in the site/neighbour order. Patch sizes here
// are <= a few dozen sites, where this terminates instantly.
bool lex_matching(const std::vector<std::vector<int>>& adj, int n, int skip,
                  std::vector<Edge>& out) {
  std::vector<char> used(n, 0);
  if (skip >= 0) used[skip] = 1;
  out.clear();
  const int target = (n - (skip >= 0 ? 1 : 0)) / 2;
  std::function<bool(int)> bt = [&](int i) -> bool {
    if ((int)out.size() == target) return true;
    if (i >= n) return false;
    if (used[i]) return bt(i + 1);
    for (int j : adj[i]) {
      if (j > i && !used[j]) {
        used[i] = used[j] = 1;
        out.push_back({i, j});
        if (bt(i + 1)) return true;
        out.pop_back();
        used[i] = used[j] = 0;
      }
    }
    return false;
  };
  return bt(0);
}

// Deterministic backtracking proper edge colouring with `max_colours`.
bool backtrack_colouring(const KagomePatch& p, const std::vector<int>& edge_order,
                         int max_colours, std::vector<int>& colour) {
  const int E = (int)edge_order.size();
  std::vector<std::vector<int>> incident(p.n_sites);
  for (int k = 0; k < E; ++k) {
    const Edge& e = p.edges[edge_order[k]];
    incident[e.a].push_back(k);
    incident[e.b].push_back(k);
  }
  std::vector<int> c(E, 0);
  std::function<bool(int)> bt = [&](int k) -> bool {
    if (k == E) return true;
    const Edge& e = p.edges[edge_order[k]];
    for (int trial = 1; trial <= max_colours; ++trial) {
      bool ok = true;
      for (int v : {e.a, e.b}) {
        for (int other : incident[v])
          if (other != k && c[other] == trial) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok) {
        c[k] = trial;
        if (bt(k + 1)) return true;
        c[k] = 0;
      }
    }
    return false;
  };
  if (!bt(0)) return false;
  for (int k = 0; k < E; ++k) colour[edge_order[k]] = c[k];
  return true;
}

}  // namespace

int KagomePatch::edge_index(int a, int b) const {
  if (a > b) std::swap(a, b);
  Edge want{a, b};
  auto it = std::lower_bound(edges.begin(), edges.end(), want);
  if (it != edges.end() && *it == want) return (int)(it - edges.begin());
  return -1;
}

int KagomePatch::degree(int site) const {
  int d = 0;
  for (const Edge& e : edges) d += (e.a == site) + (e.b == site);
  return d;
}

std::vector<Edge> EdgeColouring::colour_class(const KagomePatch& patch, int c) const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < colour.size(); ++i)
    if (colour[i] == c) out.push_back(patch.edges[i]);
  return out;
}

KagomePatch build_patch(const std::string& name) {
  if (const PatchLit* lit = find_literal(name)) return from_literal(*lit);
  // generic strip spec "2xC"
  auto xpos = name.find('x');
  if (xpos != std::string::npos && xpos > 0) {
    const std::string rs = name.substr(0, xpos), cs = name.substr(xpos + 1);
    auto numeric = [](const std::string& s) {
      return !s.empty() && s.find_first_not_of("0123456789-") == std::string::npos;
    };
    if (numeric(rs) && numeric(cs)) {
      long rows = std::strtol(rs.c_str(), nullptr, 10);
      long cols = std::strtol(cs.c_str(), nullptr, 10);
      if (rows < 1 || cols < 1)
        throw SpecError("degenerate strip spec '" + name + "'");
      if (rows == 2) return from_grid(name, 2, (int)cols);
      throw NameError("only 2xC strips are generated; unknown patch '" + name + "'");
    }
  }
  throw NameError("unknown patch '" + name + "'");
}

KagomePatch make_patch(std::string name, std::vector<std::array<double, 2>> pos,
                       std::vector<Edge> edges) {
  KagomePatch p;
  p.name = std::move(name);
  p.n_sites = (int)pos.size();
  p.pos = std::move(pos);
  for (Edge& e : edges)
    if (e.a > e.b) std::swap(e.a, e.b);
  std::sort(edges.begin(), edges.end());
  p.edges = std::move(edges);
  validate(p);
  return p;
}

DimerCovering dimer_covering(const KagomePatch& patch) {
  DimerCovering out;
  if (patch.is_grid()) {
    // dimers = the colour-1 class (horizontal even pairs)
    if (patch.cols % 2 != 0)
      throw CoveringError("strip " + patch.name +
                          " has odd columns; colour-1 edges cannot cover every site");
    for (int y = 0; y < patch.rows; ++y)
      for (int x = 0; x + 1 < patch.cols; x += 2)
        out.dimers.push_back({patch.grid_id(x, y), patch.grid_id(x + 1, y)});
    return out;
  }
  std::vector<std::vector<int>> adj(patch.n_sites);
  for (const Edge& e : patch.edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  for (auto& l : adj) std::sort(l.begin(), l.end());
  if (patch.n_sites % 2 == 0) {
    if (!lex_matching(adj, patch.n_sites, -1, out.dimers))
      throw CoveringError("no perfect matching for patch " + patch.name);
    return out;
  }
  for (int skip = 0; skip < patch.n_sites; ++skip) {
    if (lex_matching(adj, patch.n_sites, skip, out.dimers)) {
      out.uncovered = skip;
      return out;
    }
  }
  throw CoveringError("no near-perfect matching for patch " + patch.name);
}

EdgeColouring colour_edges(const KagomePatch& patch, ColourScheme scheme) {
  EdgeColouring col;
  col.scheme = scheme;
  col.colour.assign(patch.edges.size(), 0);
  if (scheme == ColourScheme::AllToAll4) {
    std::vector<int> order(patch.edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = (int)i;
    if (!backtrack_colouring(patch, order, 4, col.colour))
      throw SpecError("patch " + patch.name + " is not 4-edge-colourable");
    col.n_colours = *std::max_element(col.colour.begin(), col.colour.end());
    return col;
  }
  if (patch.is_grid()) {
    for (const GridEdge& ge : grid_edges(patch.rows, patch.cols)) {
      int idx = patch.edge_index(ge.e.a, ge.e.b);
      col.colour[idx] = ge.colour;
    }
  } else {
    // Colour 1 carries the dimer covering; the remaining edges are coloured
    // 2..5 by backtracking.
    DimerCovering cover = dimer_covering(patch);
    std::vector<int> rest;
    std::vector<char> is_dimer(patch.edges.size(), 0);
    for (const Edge& d : cover.dimers) {
      int idx = patch.edge_index(d.a, d.b);
      col.colour[idx] = 1;
      is_dimer[idx] = 1;
    }
    for (std::size_t i = 0; i < patch.edges.size(); ++i)
      if (!is_dimer[i]) rest.push_back((int)i);
    std::vector<int> sub(patch.edges.size(), 0);
    if (!backtrack_colouring(patch, rest, 4, sub))
      throw SpecError("square5 completion failed for patch " + patch.name);
    for (int idx : rest) col.colour[idx] = sub[idx] + 1;
  }
  col.n_colours = 5;
  return col;
}

std::string patch_to_json(const KagomePatch& patch) {
  nlohmann::ordered_json j;
  j["name"] = patch.name;
  j["sites"] = nlohmann::ordered_json::array();
  for (int i = 0; i < patch.n_sites; ++i)
    j["sites"].push_back({{"id", i}, {"x", patch.pos[i][0]}, {"y", patch.pos[i][1]}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const Edge& e : patch.edges) j["edges"].push_back({e.a, e.b});
  return j.dump(2);
}

int enclosed_triangle_count(const KagomePatch& p) {
  std::vector<int> deg(p.n_sites, 0);
  for (const Edge& e : p.edges) {
    ++deg[e.a];
    ++deg[e.b];
  }
  int count = 0;
  for (std::size_t i = 0; i < p.edges.size(); ++i)
    for (int v = 0; v < p.n_sites; ++v) {
      const Edge& e = p.edges[i];
      if (v <= e.b) continue;  // count each clique once: a < b < v
      if (p.edge_index(e.a, v) >= 0 && p.edge_index(e.b, v) >= 0)
        if (deg[e.a] == 4 && deg[e.b] == 4 && deg[v] == 4) ++count;
    }
  return count;
}

}  // namespace kgm
