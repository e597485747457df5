#pragma once

#include <optional>
#include <vector>

#include "sforge/fatgraph.hpp"
#include "sforge/ratlp.hpp"

namespace sforge {

// Exact feasibility / optimization over rectangle+triangle gluings of a
// chain track, with lazily generated matching rows and triangle columns.
// Supports the side conditions needed by the f-folded search and the
// reservoir gluing: turns whose vertex must stay a bigon (f-vertices, tag
// vertices), and turns that may never share a vertex (minus boundary).
struct GluingProblem {
  const ChainTrack* ct = nullptr;
  std::vector<char> turn_bigon_only;   // per turn; empty = none
  std::vector<char> turn_exclusive;    // per turn; no two of these at a vertex
  bool forbid_exclusive_pair_rects = false;  // no rect glues two exclusive circles
  std::vector<char> circle_exclusive;  // per circle, for the rect filter
  std::optional<Rat> pinned_triangle_mass;
  bool minimize_triangles = false;
  unsigned long perturb_seed = 0;  // nonzero: tiny deterministic objective noise
  int max_rounds = 400;
};

struct GluingSolution {
  bool feasible = false;
  std::string reason;
  PolygonSet pieces;  // active pieces; indices of `weight` refer to these
  std::vector<std::pair<int, Rat>> weight;
  Rat triangle_mass;
};

GluingSolution solve_gluing(const GluingProblem& gp);

}  // namespace sforge
