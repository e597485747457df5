#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sforge/hnn.hpp"
#include "sforge/polygon_lp.hpp"

namespace sforge {

// A cyclically reduced loop of fixed length with a single tag: the stem
// letter p satisfies p != first(u) and p != inverse(last(u)), so the
// trivalent vertex at the tag is immersed. The tag sits between the last
// and the first letter of u.
struct ShortLoopType {
  Word u;
  Letter p;
  auto operator<=>(const ShortLoopType&) const = default;
};

// Enumeration of all short loop types of the given loop length, with the
// involution iota (v -> v^{-1}, tag diametrically opposite).
class ShortLoopTable {
 public:
  ShortLoopTable(int rank, int len);
  int rank() const { return rank_; }
  int len() const { return len_; }
  const std::vector<ShortLoopType>& types() const { return types_; }
  int id_of(const ShortLoopType& t) const;
  int iota(int id) const { return iota_[id]; }
  // dimension of the homologically trivial subspace of the type span
  int kernel_dimension() const;

 private:
  int rank_, len_;
  std::vector<ShortLoopType> types_;
  std::map<ShortLoopType, int> index_;
  std::vector<int> iota_;
};

// Nonnegative rational mass per type; the reservoir.
using Reservoir = std::vector<Rat>;

Reservoir uniform_reservoir(const ShortLoopTable& table, const Rat& mass = Rat(1));
HomologyVector reservoir_homology(const ShortLoopTable& table, const Reservoir& v);

// (T,eps)-pseudorandomness of a word: block statistics over all T offsets.
struct PseudorandomReport {
  bool passed = false;
  double worst_ratio = 0.0;  // worst multiplicative deviation from 1
};
PseudorandomReport pseudorandom_check(const Word& w, int T, double eps);

// Uniformly random endomorphism of the stated length; deterministic per rng.
Endomorphism random_endomorphism(int rank, int length, std::mt19937_64& rng);

// Folding off short loops from a linear segment: finds 11-letter windows
// v1 P u p v2 (|u| = 7) with the three admissibility conditions and a given
// stride discipline; returns the shortened tagged word and the loops.
struct TaggedWord {
  Word letters;
  // tag after position i, with the stem letter; positions index `letters`
  std::vector<std::pair<int, Letter>> tags;
};
struct FoldOffResult {
  TaggedWord remainder;
  std::vector<ShortLoopType> loops;
};
FoldOffResult fold_off_short_loops(const Word& w, int loop_len = 7, int stride = 2);

// iota on a short loop type (table lookup) and the annulus bounding
// t + iota(t): a trivalent fatgraph built from the aligned inverse pairing.
Fatgraph iota_annulus(const ShortLoopTable& table, int type_id);

// Feasibility of a reservoir vector: true iff some positive multiple of v
// bounds an immersed fatgraph respecting tags (tag vertices stay bigons in
// the gluing). The witness gluing is returned on success.
struct FeasibleResult {
  bool feasible = false;
  std::string reason;
  GluingSolution gluing;
  std::vector<std::pair<Word, Rat>> circles;  // the tagged-loop circles used
};
FeasibleResult feasible(const ShortLoopTable& table, const Reservoir& v);

// Spanning set of feasible vectors for the homologically trivial subspace.
struct SpanningSet {
  std::vector<RatVec> vectors;  // each homologically trivial and feasible
  int rank = 0;
  bool complete = false;  // rank reached the kernel dimension
};
SpanningSet build_spanning_set(const ShortLoopTable& table, unsigned long seed,
                               int budget);
// Checkpoint I/O: "<index> <mass>" lines per vector, blank-line separated.
std::string spanning_set_to_text(const SpanningSet& s);
SpanningSet spanning_set_from_text(const std::string& text, const ShortLoopTable& table);

// 1 in the interior of the cone on V, via the exact cone certificate.
struct UniformInteriorResult {
  bool accepted = false;
  std::string reason;
  ConeCertificate certificate;
};
UniformInteriorResult uniform_interior(const ShortLoopTable& table,
                                       const std::vector<RatVec>& vectors);

// Builds a trivalent partial fatgraph whose unglued boundary spells the
// target word, consuming short loops (at most max(m-6, 3) of them).
struct LoopAssembly {
  bool ok = false;
  std::string reason;
  std::vector<ShortLoopType> consumed;
};
LoopAssembly loop_of_length(const ShortLoopTable& table, const Word& target);

// One abcx-move of the rank-2 reduction; emits rank<=2 loops, a shorter
// continuation loop, and the trivalent witness fatgraph.
struct Rank2Step {
  std::vector<Word> emitted;  // loops with at most two generators
  Word continuation;
  Fatgraph witness;
};
std::optional<Rank2Step> rank2_step(const Word& loop);
// Full reduction: repeated moves until every loop has at most 2 generators.
struct Rank2Reduction {
  std::vector<Word> loops;
  std::vector<Fatgraph> witnesses;
};
Rank2Reduction rank2_reduction(const Word& loop);

// ---------------------------------------------------------------------------
// The end-to-end pipeline.

struct PipelineConfig {
  int rank = 2;
  int length = 1000;     // endomorphism length n
  unsigned long seed = 0;
  int copies_budget = 4;      // allowed boundary multiplicity d
  int retries_per_stage = 3;
  int loop_len = 7;           // short-loop length for the reservoir
  int pseudorandom_T = 3;
  double pseudorandom_eps = 1.0;  // advisory check threshold
  long leftover_cap = 2000;   // final gluing LP size guard (slots)
};

struct PipelineResult {
  bool ok = false;
  std::string stage;  // failed stage when !ok
  std::string detail;
  Certificate certificate;
  int copies = 1;
  size_t reservoir_loops = 0;
  size_t leftover_letters = 0;
};

// initial stage + folding + pairing + reservoir gluing, then the bounded
// f-folding verifier; the certificate is independent of the construction.
PipelineResult random_surface(const Endomorphism& phi, const PipelineConfig& cfg);

}  // namespace sforge
