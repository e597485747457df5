#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sforge/norms.hpp"

namespace sforge {

// Fatgraph over R whose boundary splits as the minus side and its unreduced
// phi-image inverse on the plus side, glued by an orientation-reversing
// lift f' of f. Boundary components are indexed in fatten() trace order.
struct FFatgraph {
  Fatgraph x;
  Endomorphism phi;
  std::vector<int> side;  // per boundary component: -1 minus, +1 plus
  struct Match {
    int minus_comp = -1;
    int plus_comp = -1;
    int offset = 0;  // plus position where phi(invert(minus)) starts
  };
  std::vector<Match> matching;

  // Validates the f-fatgraph structure: the partition covers the boundary,
  // the matching is a bijection, and each plus word equals the unreduced
  // phi-image of the inverse minus word at the stated offset.
  // Returns an empty string when valid, else the first failure.
  std::string validate() const;
};

// trace words of the boundary components (not rotated to canonical form)
std::vector<Word> boundary_trace_words(const Fatgraph& x);
// vertex of x at the junction before position i of boundary component c
int junction_vertex(const Fatgraph& x, const SurfaceData& sd, int c, int i);

// f-vertices: positions on plus components that are images of minus
// vertices; count equals the total minus length.
struct FVertex {
  int plus_comp;
  int position;  // junction before this plus position
  int vertex;    // vertex of x
};
std::vector<FVertex> f_vertices(const FFatgraph& f);

struct CheckReport {
  bool ok = false;
  std::string reason;  // first failed condition
};

// f-folded: (1) X -> R immersion; (2) f-vertices at 2-valent vertices;
// (3) no vertex receives two f-vertices; (4) minus boundary embedded.
CheckReport is_f_folded(const FFatgraph& f);

// Y(w): the unreduced cyclic word folded to the inside; a circle labeled by
// the reduction with rooted trees at the fold sites.
struct PeripheralData {
  Fatgraph y;
  Word core;  // reduced word v; the inner boundary spells its inverse
  std::vector<std::vector<int>> tree_edges;     // per peripheral tree
  std::vector<std::vector<int>> tree_vertices;  // including the root
  std::vector<int> tree_root;                   // root vertex on the core
  // fold structure on the positions of w (in the stored rotation of w):
  std::vector<int> fold_partner;  // per position; -1 for survivors
};
PeripheralData peripheral_fatgraph(const CyclicWord& w);

// grafting: w bounds X, all 1-valent vertices of X lie inside peripheral
// trees, and tree vertices keep their Y(w) valences in X.
CheckReport is_grafting(const Fatgraph& x, int boundary_comp,
                        const PeripheralData& p);

// bounded f-folding (phi itself must have bounded folding).
CheckReport admits_bounded_f_folding(const FFatgraph& f);

// Closed-surface data of the mapping-torus gluing S*_f(X): chi is preserved
// by the circle gluings.
struct MappingTorusGluing {
  int chi = 0;
  int components = 0;
  std::vector<int> genus;  // per closed component
};
MappingTorusGluing glue_mapping_torus(const FFatgraph& f);

// Completes the matching of an FFatgraph whose sides are assigned but whose
// matching is empty: pairs each minus component with a plus component whose
// word is the phi-image of the inverse at some offset. False when impossible.
bool find_f_matching(FFatgraph& f);

// Cyclic d-fold cover (d prime) along a mod-d edge grading with prescribed
// boundary degrees (1 on minus components, 0 on plus), rebuilt as an
// FFatgraph with a freshly found matching. Empty when no grading exists.
std::optional<FFatgraph> cyclic_cover(const FFatgraph& f, int d);

// Iterated stack X_n = X u f(X) u ... u f^n(X) with tracks collapsed, as a
// labeled graph, plus the immersion report. Levels stop early at the size
// cap; `levels_built` reports how far the gluing got.
struct StackResult {
  int levels_built = 0;
  bool immersed = false;
  long edges = 0;
};
StackResult stack(const FFatgraph& f, int n, long edge_cap = 8000000);

// Self-contained certificate: endomorphism, fatgraph, partition, matching,
// mode, and the claimed genus of the glued surface.
struct Certificate {
  enum class Mode { FFolded, BoundedlyFFolded };
  Mode mode = Mode::FFolded;
  FFatgraph f;
  int genus = 0;
};

std::string certificate_to_text(const Certificate& c);
Certificate certificate_from_text(const std::string& text);

struct VerifyResult {
  bool accepted = false;
  std::string reason;
  int genus = 0;
  int components = 0;
};
// Re-checks everything from raw data: the f-fatgraph invariant, the mode's
// folding conditions, and the glued genus.
VerifyResult verify_certificate(const Certificate& c);

// LP-driven search for an f-folded surface bounding copies of the given
// words on the minus side and their unreduced phi^power-image inverses on
// the plus side. The plus words must come out cyclically reduced, which
// holds whenever the rose map of phi^power is an immersion.
struct SearchSpec {
  Endomorphism phi;   // the base endomorphism
  int power = 1;      // the certificate endomorphism is phi^power
  Chain minus_chain;  // integral coefficients
  Rat neg_chi = Rat(-1);  // required -chi(S(X)); negative means minimize
  int cover = 1;          // cyclic cover degree applied before gluing
  int expected_minus_comps = -1;  // -1: any
  int expected_plus_comps = -1;
  int vertex_budget = 64;
  long genus = -1;  // expected glued genus; -1: any
};
struct SearchResult {
  bool found = false;
  std::string reason;
  Certificate certificate;
};
SearchResult search_f_folded(const SearchSpec& spec);

// Endomorphism power with unreduced images.
Endomorphism endo_power(const Endomorphism& phi, int k);

}  // namespace sforge
