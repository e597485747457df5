#pragma once

#include <string>
#include <vector>

#include "sforge/fatgraph.hpp"
#include "sforge/ratlp.hpp"

namespace sforge {

// Result of an scl / Gromov-norm computation. The extremal surface is the
// assembled fatgraph of the rescaled optimal vertex; its boundary weight is
// `degree` times the input class.
struct NormResult {
  enum class Status { Finite, Infeasible };
  Status status = Status::Infeasible;
  Rat value;
  long degree = 0;
  Fatgraph extremal;
  // exact re-verification data: optimal pieces with weights plus row duals
  std::string certificate;
};

// scl of a weight in B+(T) = ker h within W+(T): the infimum of -chi(q)/2
// over Q(w) = P+(T) meet boundary^{-1}(w), evaluated exactly. Throws if w is
// not a nonnegative balanced weight with trivial homology image.
NormResult scl_weight(const Traintrack& t, const WeightVector& w);

// scl of a homologically trivial chain.
NormResult scl(const Chain& c);

// Folded cores R_i of a family of finitely generated subgroups, with their
// H1 bases.
struct SubgroupSystem {
  int rank = 0;
  std::vector<LabeledGraph> cores;
  std::vector<CycleBasis> bases;
};
SubgroupSystem fold_subgroups(int rank,
                              const std::vector<std::vector<Word>>& generators);

// A class in H2(F, {F_i}): per-subgroup homology vectors in the coordinates
// of the folded cores' cycle bases.
struct RelativeClass {
  std::vector<RatVec> h;
};

// The boundary map H2(F,{F_i}) -> sum H1(F_i) is injective with image the
// kernel of sum H1(F_i) -> H1(F); this checks membership.
bool kernel_condition(const SubgroupSystem& sys, const RelativeClass& cls);

// Relative Gromov norm |alpha| = inf -2chi(S)/n over admissible surfaces,
// computed as inf -2chi(p) over p in h^{-1}(alpha) within P+(T).
NormResult relative_norm(const SubgroupSystem& sys, const RelativeClass& cls);

// Norm in the double: exactly twice the relative norm; the extremal closed
// surface is the double of the relative extremal surface.
struct DoubleNormResult {
  NormResult relative;
  Rat value;
  int closed_chi = 0;  // chi of the doubled surface at the stated degree
  int components = 0;
  std::vector<int> genus;  // per closed component
};
DoubleNormResult double_norm(const SubgroupSystem& sys, const RelativeClass& cls);

// dim ker(sum H1(F_i) -> H1(F)), by exact rank.
int h2_rank_of_double(const SubgroupSystem& sys);

struct SurfaceSubgroupCertificate {
  bool accepted = false;
  std::string reason;
  DoubleNormResult result;
};
// Requires H2 of the double nontrivial and a nonzero class; produces the
// doubled extremal surface description with its injectivity claim.
SurfaceSubgroupCertificate surface_subgroup_certificate(const SubgroupSystem& sys,
                                                        const RelativeClass& cls);

}  // namespace sforge
