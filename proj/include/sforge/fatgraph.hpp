#pragma once

#include <string>
#include <vector>

#include "sforge/traintrack.hpp"

namespace sforge {

// Graph over R with a cyclic order of half-edges at every vertex. Half-edge
// 2e is the tail end of edge e, 2e+1 the head end; the edge read from tail to
// head spells its (positive) label.
struct Fatgraph {
  struct Edge {
    int label = 0;  // generator index >= 1
  };
  int nv = 0;
  std::vector<Edge> edges;
  std::vector<std::vector<int>> order;  // cyclic half-edge lists per vertex

  int add_vertex();
  int add_edge(int label);  // endpoints fixed by placing half-edges in orders

  static int half_tail(int e) { return 2 * e; }
  static int half_head(int e) { return 2 * e + 1; }
  // vertex of each half-edge, derived from `order`
  std::vector<int> half_vertex() const;
  LabeledGraph skeleton() const;
  void validate() const;
};

// Boundary of the fattened surface: each edge side is traversed exactly once.
struct SurfaceData {
  std::vector<std::vector<int>> boundary_oes;  // cycles of oriented edges
  std::vector<CyclicWord> boundary_words;
  int chi = 0;  // V - E
  int components = 0;
  std::vector<int> component_of_vertex;
  std::vector<int> chi_of_component;
  std::vector<int> component_of_boundary;
};

// Boundary trace: arriving at a vertex through half-edge h, the boundary
// leaves through the next half-edge in the vertex's cyclic order.
SurfaceData fatten(const Fatgraph& x);

// True iff every boundary word is cyclically reduced.
bool is_reduced_fatgraph(const Fatgraph& x);
bool is_immersed_fatgraph(const Fatgraph& x);

// ---------------------------------------------------------------------------
// Polygons over a traintrack: rectangles and triangles, the pieces a fattened
// carried surface decomposes into.

struct Rectangle {
  // side A traverses oriented edge ea between turns (pre_a -> ea -> post_a);
  // side B traverses eb, of inverse label. Turn ids index T.turns.
  int ea = -1, eb = -1;
  int pre_a = -1, post_a = -1, pre_b = -1, post_b = -1;
  auto operator<=>(const Rectangle&) const = default;
};

struct Triangle {
  // cyclically ordered turn ids; canonical form = least rotation
  int t0 = -1, t1 = -1, t2 = -1;
  auto operator<=>(const Triangle&) const = default;
};

struct PolygonSet {
  std::vector<Rectangle> rectangles;
  std::vector<Triangle> triangles;
  size_t size() const { return rectangles.size() + triangles.size(); }
};

// Internal edges are ordered pairs of turns; a rectangle has two, a triangle
// three. Matching (s,t) against (t,s) is the polygon-weight condition.
std::vector<std::pair<int, int>> internal_edges(const Rectangle& r);
std::vector<std::pair<int, int>> internal_edges(const Triangle& t);

// All rectangles over T, plus triangles over the turns appearing in rectangle
// internal edges (or over all admissible turns when full_triangles is set).
PolygonSet enumerate_polygons(const Traintrack& t, bool full_triangles = false);
Rectangle make_rectangle(const Traintrack& t, int ea, int eb);  // forced flanks

// Nonnegative rational weight on a polygon set, sparse:
// (piece index, weight); rectangles first, then triangles.
struct PolygonWeight {
  std::vector<std::pair<int, Rat>> entries;
};

bool is_internally_balanced(const PolygonSet& ps, const PolygonWeight& p,
                            size_t nturns);

// d: rectangles contribute 1/2 at each of their four corner turns; zero on
// triangles.
WeightVector boundary_map(const Traintrack& t, const PolygonSet& ps,
                          const PolygonWeight& p);

// -chi = 1/2 per unit of triangle mass.
Rat chi_of(const PolygonSet& ps, const PolygonWeight& p);

// Carrying of the boundary of a fatgraph into T: for each boundary cycle of
// S(X), the T-oriented-edge routing aligned position by position.
struct BoundaryCarrying {
  std::vector<std::vector<int>> routes;  // per boundary component of fatten(x)
};

// Cuts S(X) into rectangles (one per edge) and fan triangles (n-2 per
// n-valent vertex, anchored at the least half-edge). X must be reduced with
// its boundary carried by T. Missing pieces are appended to ps.
PolygonWeight decompose(const Fatgraph& x, const Traintrack& t, PolygonSet& ps,
                        const BoundaryCarrying& carrying);

// Prop "every integral polygon weight is realized by a fatgraph after
// compression": glue pieces along internal edges, discard triangle-only
// components, compress triangle-only subsurfaces to disks.
struct AssembledSurface {
  Fatgraph fatgraph;
  std::vector<int> rect_edge;  // per rectangle instance, the resulting edge
  long discarded_triangles = 0;
};
AssembledSurface assemble(const Traintrack& t, const PolygonSet& ps,
                          const PolygonWeight& p);

// Aligns each boundary word of x with a circle of the chain track; throws if
// some boundary word is not a chain word up to rotation.
BoundaryCarrying carry_boundary_on_chain(const Fatgraph& x, const ChainTrack& ct);

// Fatgraph text format: graph lines, then "order <vertex> <half-edges...>"
// with half-edge h written +e / -e for the tail / head side of edge e.
std::string fatgraph_to_text(const Fatgraph& x);
Fatgraph fatgraph_from_text(const std::string& text);

// ---------------------------------------------------------------------------
// Quotient fatgraph of a total letter pairing: circles glued letter-to-letter
// along an involutive, label-inverting pairing of slots. Vertices are the
// induced junction cycles; the boundary of the result is exactly the input
// circle collection.
struct PairingQuotient {
  Fatgraph fatgraph;
  std::vector<int> slot_offset;     // start slot id of each circle
  std::vector<int> edge_of_slot;    // slot -> edge of the fatgraph
  std::vector<int> vertex_of_gap;   // gap after slot i -> vertex
  int slot(int circle, int pos) const { return slot_offset[circle] + pos; }
};
PairingQuotient fatgraph_from_pairing(const std::vector<Word>& circles,
                                      const std::vector<int>& partner);

}  // namespace sforge
