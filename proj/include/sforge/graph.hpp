#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sforge/freegroup.hpp"

namespace sforge {

// Directed labeled graph over the rose R. Each edge is stored once with a
// positive generator label; traversing it backwards reads the inverse letter.
struct LabeledGraph {
  struct Edge {
    int src = 0;
    int dst = 0;
    int label = 0;  // generator index >= 1
  };
  int nv = 0;
  std::vector<Edge> edges;

  int add_vertex() { return nv++; }
  int add_edge(int src, int dst, int label) {
    edges.push_back({src, dst, label});
    return static_cast<int>(edges.size()) - 1;
  }
};

// Oriented edge handle: 2*e for the forward direction, 2*e+1 for the reverse.
inline int oe_fwd(int e) { return 2 * e; }
inline int oe_rev(int e) { return 2 * e + 1; }
inline int oe_edge(int oe) { return oe / 2; }
inline bool oe_is_rev(int oe) { return oe & 1; }
inline int oe_opposite(int oe) { return oe ^ 1; }
inline int oe_tail(const LabeledGraph& g, int oe) {
  const auto& e = g.edges[oe_edge(oe)];
  return oe_is_rev(oe) ? e.dst : e.src;
}
inline int oe_head(const LabeledGraph& g, int oe) {
  const auto& e = g.edges[oe_edge(oe)];
  return oe_is_rev(oe) ? e.src : e.dst;
}
inline Letter oe_letter(const LabeledGraph& g, int oe) {
  return Letter(g.edges[oe_edge(oe)].label, oe_is_rev(oe) ? -1 : 1);
}

std::vector<std::vector<int>> outgoing_oriented_edges(const LabeledGraph& g);
std::vector<int> vertex_valences(const LabeledGraph& g);
int graph_components(const LabeledGraph& g);
bool graph_connected(const LabeledGraph& g);

// The rose with one loop per generator.
LabeledGraph rose(int rank);

// Label- and orientation-preserving simplicial map.
struct GraphMap {
  LabeledGraph domain;
  LabeledGraph codomain;
  std::vector<int> vmap;  // vertex -> vertex
  std::vector<int> emap;  // edge -> edge (labels match)

  void validate() const;  // throws on label/endpoint mismatch
};

GraphMap identity_map(const LabeledGraph& g);
GraphMap map_to_rose(const LabeledGraph& g, int rank);

// One loop per word, wedged at a basepoint, mapping to the rose by labels.
GraphMap wedge_of_loops(const std::vector<CyclicWord>& words, int rank);

// Quotient data of a Stallings fold X -> X'.
struct FoldingData {
  GraphMap folded;                           // X' mapping into the codomain
  std::vector<int> vertex_image;             // vertices of X -> X'
  std::vector<int> edge_image;               // edges of X -> X'
  std::vector<int> fold_edges;               // edges of X with shared image
  std::vector<std::vector<int>> tree_edges;  // fold region components (in X)
  std::vector<std::vector<int>> tree_vertices;
  std::vector<std::vector<int>> image_tree_edges;  // their images (in X')
};

// Folds g's domain until the induced map to the codomain is an immersion.
FoldingData stallings_fold(const GraphMap& g);

// True iff no vertex has two germs with the same image germ.
bool is_immersion(const GraphMap& g);

// Bounded-folding test (disjoint fold trees, each with at most one vertex of
// valence > 2 in X, connected preimages, monotone vertex fibers).
struct BoundedFolding {
  bool accepted = false;
  std::string reason;  // first failed condition when rejected
  FoldingData data;
};
BoundedFolding has_bounded_folding(const GraphMap& g);

// R_n: each petal subdivided to spell the unreduced word phi^n(generator),
// with the simplicial map to R.
GraphMap subdivided_rose(const Endomorphism& phi, int n);

// Convenience: R_1 -> R for phi, the map whose folding behaviour defines
// bounded folding of phi.
inline GraphMap rose_map(const Endomorphism& phi) { return subdivided_rose(phi, 1); }

// Free basis of H1(X) from a spanning tree; one cyclic label word per
// complementary edge. Throws on disconnected input.
std::vector<CyclicWord> cycle_basis(const LabeledGraph& g);
// Same, but also reports which edge realizes each basis element and the
// spanning tree parents for flow computations.
struct CycleBasis {
  std::vector<CyclicWord> words;
  std::vector<int> chord_edges;  // non-tree edge per basis element
  std::vector<char> in_tree;     // per edge
};
CycleBasis cycle_basis_data(const LabeledGraph& g);

// Repeatedly removes 1-valent vertices (and then isolated vertices),
// returning the core graph.
LabeledGraph trim_spikes(const LabeledGraph& g);

// Text format: "vertices N" then "edge <id> <src> <dst> <letter>" lines.
std::string graph_to_text(const LabeledGraph& g);
LabeledGraph graph_from_text(const std::string& text);

}  // namespace sforge
