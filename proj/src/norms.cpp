#include "sforge/norms.hpp"

#include <map>
#include <sstream>
#include <stdexcept>

namespace sforge {

namespace {

// Shared LP scaffolding over a polygon set: matching rows plus per-piece
// sparse contributions; objective = triangle mass.
struct PolygonLPBuilder {
  const Traintrack& t;
  PolygonSet& ps;
  RationalLP lp;
  std::map<std::pair<int, int>, int> matching_row;

  explicit PolygonLPBuilder(const Traintrack& track, PolygonSet& pieces)
      : t(track), ps(pieces) {}

  void add_piece_columns() {
    for (size_t i = 0; i < ps.size(); ++i) {
      bool tri = i >= ps.rectangles.size();
      lp.add_col(tri ? Rat(1) : Rat(0));
    }
  }

  std::vector<std::pair<int, int>> piece_internal_edges(size_t i) const {
    if (i < ps.rectangles.size()) return internal_edges(ps.rectangles[i]);
    return internal_edges(ps.triangles[i - ps.rectangles.size()]);
  }

  void add_matching_rows() {
    // only ordered pairs that actually occur; (s,s) edges are self-matching
    for (size_t i = 0; i < ps.size(); ++i)
      for (auto [s, tt] : piece_internal_edges(i)) {
        if (s == tt) continue;
        auto key = std::minmax(s, tt);
        auto k = std::make_pair(key.first, key.second);
        if (!matching_row.count(k)) matching_row[k] = lp.add_row(Rat(0));
      }
    for (size_t i = 0; i < ps.size(); ++i)
      for (auto [s, tt] : piece_internal_edges(i)) {
        if (s == tt) continue;
        auto key = std::minmax(s, tt);
        int row = matching_row.at({key.first, key.second});
        lp.add_entry(row, static_cast<int>(i), s < tt ? Rat(1) : Rat(-1));
      }
  }
};

// degree for rescaling the optimal vertex to an integral weight, doubling if
// some self-paired internal edge has odd multiplicity
long integral_degree(const PolygonLPBuilder& b, const std::vector<Rat>& x) {
  RatVec nonzero;
  for (const auto& v : x)
    if (v != 0) nonzero.push_back(v);
  Int n = common_denominator(nonzero);
  // check self-pair parity at scale n
  std::map<int, Int> self_count;  // turn -> count of (s,s) edges
  for (size_t i = 0; i < b.ps.size(); ++i) {
    if (x[i] == 0) continue;
    for (auto [s, tt] : b.piece_internal_edges(i))
      if (s == tt) self_count[s] += Int(x[i].get_num() * n) / x[i].get_den();
  }
  for (auto& [s, c] : self_count)
    if (c % 2 != 0) {
      n *= 2;
      break;
    }
  if (!n.fits_slong_p()) throw std::runtime_error("degree overflow");
  return n.get_si();
}

PolygonWeight scaled_weight(const std::vector<Rat>& x, long n) {
  PolygonWeight p;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) p.entries.emplace_back(static_cast<int>(i), x[i] * n);
  return p;
}

std::string piece_name(const PolygonSet& ps, size_t i) {
  std::ostringstream s;
  if (i < ps.rectangles.size()) {
    const auto& r = ps.rectangles[i];
    s << "rect " << r.ea << " " << r.eb << " " << r.pre_a << " " << r.post_a << " "
      << r.pre_b << " " << r.post_b;
  } else {
    const auto& tr = ps.triangles[i - ps.rectangles.size()];
    s << "tri " << tr.t0 << " " << tr.t1 << " " << tr.t2;
  }
  return s.str();
}

std::string write_certificate(const PolygonLPBuilder& b, const LPSolution& sol,
                              const Rat& value, long degree) {
  std::ostringstream out;
  out << "value " << rat_to_string(value) << "\n";
  out << "degree " << degree << "\n";
  for (size_t i = 0; i < b.ps.size(); ++i)
    if (sol.x[i] != 0)
      out << piece_name(b.ps, i) << " = " << rat_to_string(sol.x[i]) << "\n";
  for (size_t r = 0; r < sol.duals.size(); ++r)
    if (sol.duals[r] != 0)
      out << "dual " << r << " " << rat_to_string(sol.duals[r]) << "\n";
  return out.str();
}

NormResult finish(PolygonLPBuilder& b, const LPSolution& sol, const Rat& value) {
  NormResult res;
  res.status = NormResult::Status::Finite;
  res.value = value;
  res.degree = integral_degree(b, sol.x);
  auto p = scaled_weight(sol.x, res.degree);
  auto as = assemble(b.t, b.ps, p);
  res.extremal = as.fatgraph;
  res.certificate = write_certificate(b, sol, value, res.degree);
  // exact consistency: -chi(S(X)) must equal the optimum at this degree
  auto sd = fatten(res.extremal);
  Rat lhs(-sd.chi);
  Rat rhs = chi_of(b.ps, p);
  if (lhs != rhs)
    throw std::logic_error("assembled surface chi does not match the LP optimum");
  return res;
}

}  // namespace

NormResult scl_weight(const Traintrack& t, const WeightVector& w) {
  if (!in_weight_cone(t, w)) throw std::invalid_argument("scl_weight: w not in W+(T)");
  for (const auto& h : homology_image(t, w))
    if (h != 0) throw std::invalid_argument("scl_weight: w not in B+(T)");

  PolygonSet ps = enumerate_polygons(t);
  PolygonLPBuilder b(t, ps);
  b.add_piece_columns();
  // boundary rows: one per turn
  Rat half(1, 2);
  for (size_t ti = 0; ti < t.turns.size(); ++ti) {
    int row = b.lp.add_row(w[ti]);
    for (size_t i = 0; i < ps.rectangles.size(); ++i) {
      const auto& r = ps.rectangles[i];
      Rat c(0);
      for (int flank : {r.pre_a, r.post_a, r.pre_b, r.post_b})
        if (flank == static_cast<int>(ti)) c += half;
      if (c != 0) b.lp.add_entry(row, static_cast<int>(i), c);
    }
  }
  b.add_matching_rows();
  auto sol = lp_solve(b.lp);
  NormResult res;
  if (sol.status != LPStatus::Optimal) {
    res.status = NormResult::Status::Infeasible;
    return res;
  }
  // scl = -chi/2 = (triangle mass)/4
  return finish(b, sol, sol.objective / 4);
}

NormResult scl(const Chain& c) {
  int rank = std::max(1, c.max_generator());
  for (const auto& h : abelianize(c, rank))
    if (h != 0) throw std::invalid_argument("scl: chain is homologically nontrivial");
  if (c.empty()) {
    NormResult res;
    res.status = NormResult::Status::Finite;
    res.value = 0;
    res.degree = 1;
    return res;
  }
  auto ct = from_chain(c);
  return scl_weight(ct.track, ct.weight);
}

SubgroupSystem fold_subgroups(int rank,
                              const std::vector<std::vector<Word>>& generators) {
  SubgroupSystem sys;
  sys.rank = rank;
  for (const auto& gens : generators) {
    std::vector<CyclicWord> loops;
    for (const auto& g : gens) {
      Word r = reduce(g);
      if (!r.empty()) loops.emplace_back(r);
    }
    if (loops.empty()) throw std::invalid_argument("trivial subgroup");
    auto fd = stallings_fold(wedge_of_loops(loops, rank));
    LabeledGraph core = trim_spikes(fd.folded.domain);
    if (core.edges.empty()) throw std::invalid_argument("trivial subgroup");
    sys.cores.push_back(core);
    sys.bases.push_back(cycle_basis_data(core));
  }
  return sys;
}

bool kernel_condition(const SubgroupSystem& sys, const RelativeClass& cls) {
  if (cls.h.size() != sys.cores.size()) return false;
  HomologyVector total(sys.rank, Rat(0));
  for (size_t i = 0; i < sys.cores.size(); ++i) {
    if (cls.h[i].size() != sys.bases[i].words.size()) return false;
    for (size_t j = 0; j < cls.h[i].size(); ++j) {
      auto hw = abelianize(sys.bases[i].words[j], sys.rank);
      for (int g = 0; g < sys.rank; ++g) total[g] += cls.h[i][j] * hw[g];
    }
  }
  for (const auto& v : total)
    if (v != 0) return false;
  return true;
}

NormResult relative_norm(const SubgroupSystem& sys, const RelativeClass& cls) {
  if (!kernel_condition(sys, cls))
    throw std::invalid_argument("relative_norm: class not in the kernel");
  Traintrack t = from_subgroup_graphs(sys.cores, sys.rank);
  PolygonSet ps = enumerate_polygons(t);
  PolygonLPBuilder b(t, ps);
  b.add_piece_columns();

  // flow rows: for each core and each basis chord, the signed edge measure
  // of the boundary must equal the class coordinate.
  // Edge offsets of each core inside the disjoint union:
  std::vector<int> edge_offset(sys.cores.size());
  {
    int off = 0;
    for (size_t i = 0; i < sys.cores.size(); ++i) {
      edge_offset[i] = off;
      off += static_cast<int>(sys.cores[i].edges.size());
    }
  }
  for (size_t i = 0; i < sys.cores.size(); ++i) {
    for (size_t j = 0; j < sys.bases[i].chord_edges.size(); ++j) {
      int chord = sys.bases[i].chord_edges[j] + edge_offset[i];
      int row = b.lp.add_row(cls.h[i][j]);
      // mu(in_oe) contribution: rectangle flank turns with in == fwd/rev
      Rat half(1, 2);
      for (size_t pi = 0; pi < ps.rectangles.size(); ++pi) {
        const auto& r = ps.rectangles[pi];
        Rat coeff(0);
        for (int flank : {r.pre_a, r.post_a, r.pre_b, r.post_b}) {
          const Turn& turn = t.turns[flank];
          if (turn.in_oe == oe_fwd(chord)) coeff += half;
          if (turn.in_oe == oe_rev(chord)) coeff -= half;
        }
        if (coeff != 0) b.lp.add_entry(row, static_cast<int>(pi), coeff);
      }
    }
  }
  b.add_matching_rows();
  auto sol = lp_solve(b.lp);
  NormResult res;
  if (sol.status != LPStatus::Optimal) {
    res.status = NormResult::Status::Infeasible;
    return res;
  }
  // |alpha| = -2chi(p) = triangle mass
  return finish(b, sol, sol.objective);
}

DoubleNormResult double_norm(const SubgroupSystem& sys, const RelativeClass& cls) {
  DoubleNormResult dn;
  dn.relative = relative_norm(sys, cls);
  if (dn.relative.status != NormResult::Status::Finite) return dn;
  dn.value = dn.relative.value * 2;
  auto sd = fatten(dn.relative.extremal);
  dn.closed_chi = 2 * sd.chi;
  dn.components = std::max(sd.components, 0);
  for (int c = 0; c < sd.components; ++c) {
    // double of a connected surface with boundary is closed connected
    int chi_c = 2 * sd.chi_of_component[c];
    dn.genus.push_back((2 - chi_c) / 2);
  }
  return dn;
}

int h2_rank_of_double(const SubgroupSystem& sys) {
  RatMat rows;
  int total = 0;
  for (size_t i = 0; i < sys.cores.size(); ++i) {
    for (const auto& w : sys.bases[i].words) {
      rows.push_back(abelianize(w, sys.rank));
      ++total;
    }
  }
  if (rows.empty()) return 0;
  return total - rat_rank(rows);
}

SurfaceSubgroupCertificate surface_subgroup_certificate(const SubgroupSystem& sys,
                                                        const RelativeClass& cls) {
  SurfaceSubgroupCertificate cert;
  if (h2_rank_of_double(sys) == 0) {
    cert.reason = "H2 of the double is trivial";
    return cert;
  }
  bool nonzero = false;
  for (const auto& v : cls.h)
    for (const auto& x : v)
      if (x != 0) nonzero = true;
  if (!nonzero) {
    cert.reason = "class is zero";
    return cert;
  }
  cert.result = double_norm(sys, cls);
  if (cert.result.relative.status != NormResult::Status::Finite) {
    cert.reason = "norm computation infeasible";
    return cert;
  }
  if (cert.result.closed_chi >= 0) {
    cert.reason = "extremal surface has nonnegative Euler characteristic";
    return cert;
  }
  cert.accepted = true;
  return cert;
}

}  // namespace sforge
