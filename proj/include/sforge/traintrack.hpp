#pragma once

#include <string>
#include <vector>

#include "sforge/graph.hpp"

namespace sforge {

// Ordered pair of distinct oriented edges at a common vertex.
struct Turn {
  int in_oe = -1;
  int out_oe = -1;
  auto operator<=>(const Turn&) const = default;
};

// Graph with a distinguished set of admissible turns, immersed in the rose.
struct Traintrack {
  LabeledGraph g;
  int rank = 0;
  std::vector<Turn> turns;  // sorted, unique

  int turn_index(const Turn& t) const;  // -1 when not admissible
  // turns grouped by incoming / outgoing oriented edge
  std::vector<std::vector<int>> turns_in_by_oe() const;
  std::vector<std::vector<int>> turns_out_by_oe() const;
  void validate() const;  // turn well-formedness + traintrack immersion
};

using WeightVector = RatVec;  // one entry per admissible turn

bool is_edge_balanced(const Traintrack& t, const WeightVector& w);
bool in_weight_cone(const Traintrack& t, const WeightVector& w);
// Edge measure mu(e) per oriented edge (well-defined for balanced w).
RatVec edge_measure(const Traintrack& t, const WeightVector& w);

// Oriented 1-manifold carried by T: one routed circle per component, each a
// cyclic sequence of oriented edges whose consecutive pairs are admissible.
struct CarryingMap {
  std::vector<std::vector<int>> circles;  // oriented edge ids
};

// Disjoint union of immersed graphs with all non-backtracking turns
// admissible. Inputs must be immersed and free of 1-valent vertices.
Traintrack from_subgroup_graphs(const std::vector<LabeledGraph>& graphs, int rank);

// One circle per distinct chain word; the weight is the coefficient on every
// turn of that word's circle.
struct ChainTrack {
  Traintrack track;
  WeightVector weight;
  // bookkeeping per chain term, in chain order
  struct Circle {
    CyclicWord word;  // canonical form, for equality tests
    Word spelling;    // the rotation actually spelled by edge_ids
    Rat coeff;
    std::vector<int> edge_ids;  // position i spells spelling[i]
    std::vector<int> oes;       // oriented edges traversed
    std::vector<int> turn_ids;  // turn after position i
  };
  std::vector<Circle> circles;
};
ChainTrack from_chain(const Chain& c);
// Same construction, but one circle per entry with no merging of equal
// words (weights may repeat words, e.g. tagged loops of equal spelling).
ChainTrack track_from_words(const std::vector<std::pair<Word, Rat>>& words);

// Verbal traintrack T_l: junction vertices are reduced words of length l-2,
// abstract oriented edges the reduced words of length l-1 (realized subdivided
// so that the track maps simplicially to the rose), admissible junction turns
// the reduced words of length l.
struct VerbalTraintrack {
  Traintrack track;
  Int abstract_oriented_edges;
  Int abstract_turns;
  // The epsilon-involution sigma -> -sigma^{-1} on the abstract turn space,
  // as an index pairing over `turn_words`.
  std::vector<Word> turn_words;
  std::vector<int> epsilon;  // involution on indices (sign is implicit)
};
VerbalTraintrack verbal_traintrack(int rank, int len);

// Turn-pass counts of a carried manifold; always balanced and nonnegative.
WeightVector weight_of_carrying(const Traintrack& t, const CarryingMap& m);

// Lemma "integral weights are exactly carried manifolds", constructive
// direction: glue turn copies first-to-first per oriented edge.
CarryingMap weight_to_manifold(const Traintrack& t, const WeightVector& w);

// h: W(T) -> H_1(F), the signed edge measure pushed to generators.
HomologyVector homology_image(const Traintrack& t, const WeightVector& w);

// Refinement into H_1 of each connected component, in the coordinates of that
// component's cycle basis (signed flow through the non-tree chords).
struct ComponentHomology {
  std::vector<std::vector<int>> component_edges;
  std::vector<CycleBasis> bases;       // per component (ids local to component)
  std::vector<RatVec> coordinates;     // per component, one per basis element
};
ComponentHomology homology_refinement(const Traintrack& t, const WeightVector& w);

// Serialization: graph format plus "turn <in-oe> <out-oe>" lines.
std::string traintrack_to_text(const Traintrack& t);
Traintrack traintrack_from_text(const std::string& text, int rank);

}  // namespace sforge
