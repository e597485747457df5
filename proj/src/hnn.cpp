#include "sforge/hnn.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sforge/polygon_lp.hpp"

namespace sforge {

Endomorphism endo_power(const Endomorphism& phi, int k) {
  if (k < 1) throw std::invalid_argument("endo_power needs k >= 1");
  std::vector<Word> images;
  for (int g = 1; g <= phi.rank(); ++g)
    images.push_back(phi.apply_iterated({Letter(g, 1)}, k));
  return Endomorphism(phi.rank(), images);
}

std::vector<Word> boundary_trace_words(const Fatgraph& x) {
  auto sd = fatten(x);
  auto skel = x.skeleton();
  std::vector<Word> out;
  for (const auto& cyc : sd.boundary_oes) {
    Word w;
    for (int oe : cyc) w.push_back(oe_letter(skel, oe));
    out.push_back(std::move(w));
  }
  return out;
}

int junction_vertex(const Fatgraph& x, const SurfaceData& sd, int c, int i) {
  const auto& cyc = sd.boundary_oes[c];
  int n = static_cast<int>(cyc.size());
  int oe = cyc[(i + n - 1) % n];
  auto hv = x.half_vertex();
  int e = oe_edge(oe);
  int h = oe_is_rev(oe) ? Fatgraph::half_tail(e) : Fatgraph::half_head(e);
  return hv[h];
}

namespace {

// the unreduced phi-image of the inverted minus word, as a letter sequence
// with block boundaries (one block per minus letter)
struct PlusImage {
  Word word;
  std::vector<int> block_start;  // size = minus length; start position of
                                 // the block for minus letter (m-1-k)
};

PlusImage plus_image(const Endomorphism& phi, const Word& minus) {
  PlusImage p;
  Word inv = invert(minus);
  for (const auto& l : inv) {
    p.block_start.push_back(static_cast<int>(p.word.size()));
    Word im = phi.apply(l);
    p.word.insert(p.word.end(), im.begin(), im.end());
  }
  return p;
}

}  // namespace

std::string FFatgraph::validate() const {
  auto sd = fatten(x);
  size_t ncomps = sd.boundary_words.size();
  if (side.size() != ncomps) return "partition size mismatch";
  int minus_count = 0, plus_count = 0;
  for (int s : side) {
    if (s == -1)
      ++minus_count;
    else if (s == 1)
      ++plus_count;
    else
      return "component with no side";
  }
  if (minus_count != plus_count) return "minus/plus component counts differ";
  if (static_cast<int>(matching.size()) != minus_count)
    return "matching does not cover the boundary";
  std::set<int> used_minus, used_plus;
  auto words = boundary_trace_words(x);
  for (const auto& m : matching) {
    if (m.minus_comp < 0 || m.minus_comp >= static_cast<int>(ncomps) ||
        m.plus_comp < 0 || m.plus_comp >= static_cast<int>(ncomps))
      return "matching component out of range";
    if (side[m.minus_comp] != -1 || side[m.plus_comp] != 1)
      return "matching side mismatch";
    if (!used_minus.insert(m.minus_comp).second) return "minus matched twice";
    if (!used_plus.insert(m.plus_comp).second) return "plus matched twice";
    PlusImage img = plus_image(phi, words[m.minus_comp]);
    const Word& pw = words[m.plus_comp];
    if (img.word.size() != pw.size()) return "plus word length mismatch";
    int n = static_cast<int>(pw.size());
    for (int j = 0; j < n; ++j)
      if (!(pw[(m.offset + j) % n] == img.word[j]))
        return "plus word is not the phi-image of the inverse minus word";
  }
  return "";
}

std::vector<FVertex> f_vertices(const FFatgraph& f) {
  auto sd = fatten(f.x);
  auto words = boundary_trace_words(f.x);
  std::vector<FVertex> out;
  for (const auto& m : f.matching) {
    PlusImage img = plus_image(f.phi, words[m.minus_comp]);
    int n = static_cast<int>(words[m.plus_comp].size());
    for (int bs : img.block_start) {
      FVertex fv;
      fv.plus_comp = m.plus_comp;
      fv.position = (m.offset + bs) % n;
      fv.vertex = junction_vertex(f.x, sd, m.plus_comp, fv.position);
      out.push_back(fv);
    }
  }
  return out;
}

namespace {

// vertices visited by a boundary component, by junction
std::vector<int> component_vertices(const Fatgraph& x, const SurfaceData& sd, int c) {
  std::vector<int> vs;
  for (size_t i = 0; i < sd.boundary_oes[c].size(); ++i)
    vs.push_back(junction_vertex(x, sd, c, static_cast<int>(i)));
  return vs;
}

CheckReport minus_embedded(const FFatgraph& f, const SurfaceData& sd) {
  std::set<int> seen_vertices;
  std::set<int> seen_edges;
  for (size_t c = 0; c < sd.boundary_oes.size(); ++c) {
    if (f.side[c] != -1) continue;
    for (int v : component_vertices(f.x, sd, static_cast<int>(c)))
      if (!seen_vertices.insert(v).second)
        return {false, "minus boundary is not embedded (vertex revisited)"};
    for (int oe : sd.boundary_oes[c])
      if (!seen_edges.insert(oe_edge(oe)).second)
        return {false, "minus boundary is not embedded (edge revisited)"};
  }
  return {true, ""};
}

}  // namespace

CheckReport is_f_folded(const FFatgraph& f) {
  std::string v = f.validate();
  if (!v.empty()) return {false, "not an f-fatgraph: " + v};
  if (!is_immersed_fatgraph(f.x)) return {false, "condition (1): X -> R is not an immersion"};
  auto sd = fatten(f.x);
  auto val = vertex_valences(f.x.skeleton());
  auto fvs = f_vertices(f);
  std::set<int> fv_vertices;
  for (const auto& fv : fvs) {
    if (val[fv.vertex] != 2)
      return {false, "condition (2): f-vertex at a vertex of valence " +
                         std::to_string(val[fv.vertex])};
    if (!fv_vertices.insert(fv.vertex).second)
      return {false, "condition (3): two f-vertices share a vertex"};
  }
  auto emb = minus_embedded(f, sd);
  if (!emb.ok) return {false, "condition (4): " + emb.reason};
  return {true, ""};
}

PeripheralData peripheral_fatgraph(const CyclicWord& w) {
  if (cyclic_reduce(w).empty())
    throw std::invalid_argument("peripheral_fatgraph: word reduces to the identity");
  const Word& letters = w.letters();
  int n = static_cast<int>(letters.size());
  PeripheralData pd;
  pd.fold_partner.assign(n, -1);
  // repeatedly cancel the first alive adjacent inverse pair (cyclically)
  std::vector<char> alive(n, 1);
  auto next_alive = [&](int i) {
    int j = (i + 1) % n;
    while (!alive[j]) j = (j + 1) % n;
    return j;
  };
  bool changed = true;
  int alive_count = n;
  while (changed && alive_count >= 2) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      int j = next_alive(i);
      if (j == i) break;
      if (letters[j] == letters[i].inverse()) {
        alive[i] = alive[j] = 0;
        alive_count -= 2;
        pd.fold_partner[i] = j;
        pd.fold_partner[j] = i;
        changed = true;
        break;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (alive[i]) pd.core.push_back(letters[i]);
  // boundary circles: w itself and the reduced inverse V
  Word vcirc = invert(pd.core);
  int m = static_cast<int>(pd.core.size());
  std::vector<int> partner(n + m, -1);
  for (int i = 0; i < n; ++i)
    if (pd.fold_partner[i] >= 0) partner[i] = pd.fold_partner[i];
  {
    int k = 0;
    for (int i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      int vpos = m - 1 - k;  // V = invert(core): position of this letter
      partner[i] = n + vpos;
      partner[n + vpos] = i;
      ++k;
    }
  }
  auto q = fatgraph_from_pairing({letters, vcirc}, partner);
  pd.y = q.fatgraph;
  // peripheral trees: components of the folded-pair edges
  std::set<int> tree_edge_set;
  for (int i = 0; i < n; ++i)
    if (pd.fold_partner[i] >= 0) tree_edge_set.insert(q.edge_of_slot[i]);
  auto skel = pd.y.skeleton();
  std::map<int, std::vector<int>> vertex_edges;
  for (int e : tree_edge_set) {
    vertex_edges[skel.edges[e].src].push_back(e);
    vertex_edges[skel.edges[e].dst].push_back(e);
  }
  std::set<int> done;
  for (int e0 : tree_edge_set) {
    if (done.count(e0)) continue;
    std::vector<int> edges_here, verts_here;
    std::set<int> vset;
    std::queue<int> qq;
    qq.push(e0);
    done.insert(e0);
    while (!qq.empty()) {
      int e = qq.front();
      qq.pop();
      edges_here.push_back(e);
      for (int v : {skel.edges[e].src, skel.edges[e].dst}) {
        if (vset.insert(v).second) {
          verts_here.push_back(v);
          for (int e2 : vertex_edges[v])
            if (!done.count(e2)) {
              done.insert(e2);
              qq.push(e2);
            }
        }
      }
    }
    std::sort(edges_here.begin(), edges_here.end());
    std::sort(verts_here.begin(), verts_here.end());
    // root: the tree vertex incident to a non-tree edge
    int root = -1;
    for (int v : verts_here) {
      bool incident_outside = false;
      for (size_t e = 0; e < skel.edges.size(); ++e) {
        if (tree_edge_set.count(static_cast<int>(e))) continue;
        if (skel.edges[e].src == v || skel.edges[e].dst == v) incident_outside = true;
      }
      if (incident_outside) {
        if (root >= 0) throw std::logic_error("peripheral tree with two roots");
        root = v;
      }
    }
    pd.tree_edges.push_back(std::move(edges_here));
    pd.tree_vertices.push_back(std::move(verts_here));
    pd.tree_root.push_back(root);
  }
  return pd;
}

CheckReport is_grafting(const Fatgraph& x, int boundary_comp,
                        const PeripheralData& p) {
  auto sd = fatten(x);
  if (boundary_comp < 0 || boundary_comp >= static_cast<int>(sd.boundary_oes.size()))
    return {false, "no such boundary component"};
  // (1) the component spells w (the stored rotation of p's word)
  auto words = boundary_trace_words(x);
  const Word& tw = words[boundary_comp];
  Word pw;  // reconstruct w from p: the boundary of y restricted to circle 0
  {
    // p.fold_partner indexes the canonical rotation; rebuild that word from
    // y's boundary: it is the component of fatten(y) spelling an unreduced
    // word of length fold_partner.size()
    auto ywords = boundary_trace_words(p.y);
    for (const auto& cand : ywords)
      if (cand.size() == p.fold_partner.size() &&
          !(CyclicWord(cand) == CyclicWord(invert(p.core))) )
        pw = cand;
    if (p.fold_partner.size() == p.core.size()) {
      // no folds: w itself reduced; both components have the same length,
      // pick the one matching the outer word orientation
      for (const auto& cand : ywords)
        if (CyclicWord(cand) != CyclicWord(invert(p.core))) pw = cand;
      if (pw.empty() && !ywords.empty()) pw = ywords[0];
    }
  }
  if (!(CyclicWord(tw) == CyclicWord(pw)))
    return {false, "boundary component does not spell w"};
  int n = static_cast<int>(tw.size());
  // align the trace with the canonical rotation used by p
  Word canon = CyclicWord(pw).letters();
  int rot = -1;
  for (int r = 0; r < n && rot < 0; ++r) {
    bool ok = true;
    for (int i = 0; i < n; ++i)
      if (!(tw[(r + i) % n] == canon[i])) {
        ok = false;
        break;
      }
    if (ok) rot = r;
  }
  if (rot < 0) return {false, "boundary rotation alignment failed"};
  // fold pairs of w must be glued to each other in x
  const auto& cyc = sd.boundary_oes[boundary_comp];
  std::set<int> sigma_edges;
  std::set<int> sigma_vertices;
  for (size_t i = 0; i < p.fold_partner.size(); ++i) {
    int j = p.fold_partner[i];
    if (j < 0) continue;
    int oe_i = cyc[(rot + i) % n];
    int oe_j = cyc[(rot + j) % n];
    if (oe_edge(oe_i) != oe_edge(oe_j) || oe_i == oe_j)
      return {false, "fold pair of w is not glued in X"};
    sigma_edges.insert(oe_edge(oe_i));
  }
  auto hv = x.half_vertex();
  for (int e : sigma_edges) {
    sigma_vertices.insert(hv[Fatgraph::half_tail(e)]);
    sigma_vertices.insert(hv[Fatgraph::half_head(e)]);
  }
  // (2) 1-valent vertices confined to the trees
  auto val = vertex_valences(x.skeleton());
  for (int v = 0; v < x.nv; ++v)
    if (val[v] == 1 && !sigma_vertices.count(v))
      return {false, "1-valent vertex outside the peripheral trees"};
  // (3) tree vertices keep their Y(w) valences: compare via w positions
  auto ysd = fatten(p.y);
  // identify circle-0 component of y (the one spelling pw in trace order)
  auto yw = boundary_trace_words(p.y);
  int ycomp = -1;
  int yrot = -1;
  for (size_t c = 0; c < yw.size() && ycomp < 0; ++c) {
    if (yw[c].size() != static_cast<size_t>(n)) continue;
    for (int r = 0; r < n; ++r) {
      bool ok = true;
      for (int i = 0; i < n; ++i)
        if (!(yw[c][(r + i) % n] == canon[i])) {
          ok = false;
          break;
        }
      if (ok) {
        ycomp = static_cast<int>(c);
        yrot = r;
        break;
      }
    }
  }
  if (ycomp < 0) return {false, "cannot locate w inside Y(w)"};
  auto yval = vertex_valences(p.y.skeleton());
  std::set<std::pair<int, int>> compared;  // (y vertex, x vertex)
  for (size_t i = 0; i < p.fold_partner.size(); ++i) {
    if (p.fold_partner[i] < 0) continue;
    // junctions flanking a folded position sit on tree vertices
    for (int jpos : {static_cast<int>(i), static_cast<int>(i) + 1}) {
      int yv = junction_vertex(p.y, ysd, ycomp, (yrot + jpos) % n);
      int xv = junction_vertex(x, sd, boundary_comp, (rot + jpos) % n);
      if (!compared.insert({yv, xv}).second) continue;
      if (yval[yv] != val[xv])
        return {false, "peripheral tree vertex changes valence in X"};
    }
  }
  return {true, ""};
}

CheckReport admits_bounded_f_folding(const FFatgraph& f) {
  std::string v = f.validate();
  if (!v.empty()) return {false, "not an f-fatgraph: " + v};
  auto bf = has_bounded_folding(rose_map(f.phi));
  if (!bf.accepted)
    throw std::invalid_argument("phi does not have bounded folding: " + bf.reason);
  if (!is_immersed_fatgraph(f.x)) return {false, "X -> R is not an immersion"};

  auto sd = fatten(f.x);
  auto words = boundary_trace_words(f.x);
  auto val = vertex_valences(f.x.skeleton());

  // Sigma^+ = plus positions over fold(R_1); R_1 petal paths per generator
  const auto& r1 = bf.data.folded;  // not used directly; fold data is on R_1
  (void)r1;
  std::set<int> fold_r1_edges(bf.data.fold_edges.begin(), bf.data.fold_edges.end());
  // R_1 edge ids along the petal of generator g, in spelling order
  const LabeledGraph& R1 = subdivided_rose(f.phi, 1).domain;
  std::vector<std::vector<int>> petal_edges(f.phi.rank() + 1);
  {
    size_t e = 0;
    for (int g = 1; g <= f.phi.rank(); ++g)
      for (size_t k = 0; k < f.phi.image(g).size(); ++k)
        petal_edges[g].push_back(static_cast<int>(e++));
    if (e != R1.edges.size()) throw std::logic_error("petal edge count mismatch");
  }

  // Sigma in X: edges of X carried by plus positions lying over fold(R_1),
  // plus the peripheral tree structure; collect per plus component.
  std::set<int> sigma_edges_x;
  std::vector<std::set<int>> sigma_components;  // vertex sets, one per tree+interval
  std::set<int> fvertex_vertices;

  auto fvs = f_vertices(f);
  std::set<int> minus_vertex_set, minus_edge_set;
  for (size_t c = 0; c < words.size(); ++c) {
    if (f.side[c] != -1) continue;
    for (int vtx : component_vertices(f.x, sd, static_cast<int>(c)))
      minus_vertex_set.insert(vtx);
    for (int oe : sd.boundary_oes[c]) minus_edge_set.insert(oe_edge(oe));
  }

  for (const auto& m : f.matching) {
    const Word& mw = words[m.minus_comp];
    PlusImage img = plus_image(f.phi, mw);
    const auto& cyc = sd.boundary_oes[m.plus_comp];
    int n = static_cast<int>(cyc.size());
    // per plus position, whether it lies over fold(R_1)
    Word inv = invert(mw);
    std::vector<char> in_sigma_plus(n, 0);
    {
      int pos = 0;
      for (const auto& l : inv) {
        const auto& petal = petal_edges[l.idx];
        int len = static_cast<int>(petal.size());
        for (int k = 0; k < len; ++k) {
          // letter l traverses its petal forward (positive) or backward
          int r1_edge = l.sign > 0 ? petal[k] : petal[len - 1 - k];
          if (fold_r1_edges.count(r1_edge))
            in_sigma_plus[(m.offset + pos) % n] = 1;
          ++pos;
        }
      }
    }
    // grafting of Y(plus word)
    PeripheralData pd = peripheral_fatgraph(CyclicWord(words[m.plus_comp]));
    auto graft = is_grafting(f.x, m.plus_comp, pd);
    if (!graft.ok) return {false, "grafting: " + graft.reason};
    // Sigma component vertex sets in X from the Sigma^+ intervals
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
      if (!in_sigma_plus[i] || seen[i]) continue;
      // walk the maximal interval containing i
      int a = i;
      while (in_sigma_plus[(a + n - 1) % n] && (a + n - 1) % n != i) a = (a + n - 1) % n;
      std::set<int> comp_vertices;
      int p = a;
      while (in_sigma_plus[p]) {
        seen[p] = 1;
        sigma_edges_x.insert(oe_edge(cyc[p]));
        comp_vertices.insert(junction_vertex(f.x, sd, m.plus_comp, p));
        comp_vertices.insert(junction_vertex(f.x, sd, m.plus_comp, (p + 1) % n));
        p = (p + 1) % n;
        if (p == a) break;
      }
      sigma_components.push_back(std::move(comp_vertices));
    }
  }

  // relaxed f-folded conditions
  std::set<int> fv_vertex_set;
  std::set<int> sigma_vertices_all;
  for (const auto& sc : sigma_components)
    sigma_vertices_all.insert(sc.begin(), sc.end());
  for (const auto& fv : fvs) {
    bool two_valent = val[fv.vertex] == 2;
    bool tree_leaf = val[fv.vertex] == 1 && sigma_vertices_all.count(fv.vertex);
    if (!two_valent && !tree_leaf)
      return {false, "f-vertex neither 2-valent nor a peripheral tree leaf"};
    if (!fv_vertex_set.insert(fv.vertex).second)
      return {false, "two f-vertices share a vertex"};
    fvertex_vertices.insert(fv.vertex);
  }
  // (3) distinct f-vertices map to different components of Sigma
  std::set<int> used_sigma_comp;
  for (const auto& fv : fvs) {
    for (size_t sc = 0; sc < sigma_components.size(); ++sc)
      if (sigma_components[sc].count(fv.vertex)) {
        if (!used_sigma_comp.insert(static_cast<int>(sc)).second)
          return {false, "two f-vertices in one Sigma component"};
      }
  }
  // (4 of the f-folded set) minus boundary embedded
  auto emb = minus_embedded(f, sd);
  if (!emb.ok) return {false, emb.reason};
  // (4) minus image disjoint from Sigma
  for (int e : sigma_edges_x)
    if (minus_edge_set.count(e)) return {false, "minus boundary meets Sigma"};
  for (int vtx : sigma_vertices_all)
    if (minus_vertex_set.count(vtx)) return {false, "minus boundary meets Sigma"};
  return {true, ""};
}

bool find_f_matching(FFatgraph& f) {
  f.matching.clear();
  auto words = boundary_trace_words(f.x);
  std::vector<int> plus_pool;
  for (size_t c = 0; c < words.size(); ++c)
    if (f.side[c] == 1) plus_pool.push_back(static_cast<int>(c));
  std::vector<char> used(words.size(), 0);
  for (size_t c = 0; c < words.size(); ++c) {
    if (f.side[c] != -1) continue;
    PlusImage img = plus_image(f.phi, words[c]);
    bool matched = false;
    for (int p : plus_pool) {
      if (used[p] || words[p].size() != img.word.size()) continue;
      int n = static_cast<int>(img.word.size());
      for (int o = 0; o < n && !matched; ++o) {
        bool ok = true;
        for (int j = 0; j < n; ++j)
          if (!(words[p][(o + j) % n] == img.word[j])) {
            ok = false;
            break;
          }
        if (ok) {
          f.matching.push_back({static_cast<int>(c), p, o});
          used[p] = 1;
          matched = true;
        }
      }
      if (matched) break;
    }
    if (!matched) {
      f.matching.clear();
      return false;
    }
  }
  return f.validate().empty();
}

namespace {

// solves sum over boundary traversals of +-grade(edge) = target (mod d)
// for each boundary component; d prime
std::optional<std::vector<int>> solve_grading(const Fatgraph& x,
                                              const std::vector<int>& target,
                                              int d) {
  auto sd = fatten(x);
  int ne = static_cast<int>(x.edges.size());
  int m = static_cast<int>(sd.boundary_oes.size());
  // rows over Z/d
  std::vector<std::vector<int>> a(m, std::vector<int>(ne + 1, 0));
  for (int c = 0; c < m; ++c) {
    for (int oe : sd.boundary_oes[c]) {
      int e = oe_edge(oe);
      a[c][e] = (a[c][e] + (oe_is_rev(oe) ? d - 1 : 1)) % d;
    }
    a[c][ne] = ((target[c] % d) + d) % d;
  }
  auto inv_mod = [&](int v) {
    // d prime: Fermat
    long r = 1, b = v % d, e = d - 2;
    while (e) {
      if (e & 1) r = r * b % d;
      b = b * b % d;
      e >>= 1;
    }
    return static_cast<int>(r);
  };
  int row = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < ne && row < m; ++col) {
    int p = -1;
    for (int i = row; i < m; ++i)
      if (a[i][col] % d != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[p], a[row]);
    int inv = inv_mod(a[row][col]);
    for (int j = col; j <= ne; ++j) a[row][j] = static_cast<int>(1L * a[row][j] * inv % d);
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      int f = a[i][col];
      for (int j = col; j <= ne; ++j)
        a[i][j] = ((a[i][j] - 1L * f * a[row][j]) % d + d) % d;
    }
    pivot_col.push_back(col);
    ++row;
  }
  for (int i = row; i < m; ++i)
    if (a[i][ne] % d != 0) return std::nullopt;
  std::vector<int> g(ne, 0);
  for (int i = 0; i < row; ++i) g[pivot_col[i]] = a[i][ne];
  return g;
}

}  // namespace

std::optional<FFatgraph> cyclic_cover(const FFatgraph& f, int d) {
  auto sd = fatten(f.x);
  std::vector<int> target(sd.boundary_oes.size(), 0);
  for (size_t c = 0; c < target.size(); ++c) target[c] = f.side[c] == -1 ? 1 : 0;
  auto grading = solve_grading(f.x, target, d);
  if (!grading) return std::nullopt;
  const auto& g = *grading;
  auto hv = f.x.half_vertex();
  Fatgraph cov;
  int ne = static_cast<int>(f.x.edges.size());
  // vertices (v, i) -> v*d + i; edges (e, i) -> e*d + i
  for (int v = 0; v < f.x.nv; ++v)
    for (int i = 0; i < d; ++i) cov.add_vertex();
  for (int e = 0; e < ne; ++e)
    for (int i = 0; i < d; ++i) cov.add_edge(f.x.edges[e].label);
  for (int v = 0; v < f.x.nv; ++v) {
    for (int i = 0; i < d; ++i) {
      std::vector<int> halves;
      for (int h : f.x.order[v]) {
        int e = h / 2;
        if (h % 2 == 0) {
          // tail of (e, i) sits at (tail(e), i)
          halves.push_back(Fatgraph::half_tail(e * d + i));
        } else {
          // head of (e, j) sits at (head(e), (j + g[e]) mod d)
          int j = ((i - g[e]) % d + d) % d;
          halves.push_back(Fatgraph::half_head(e * d + j));
        }
      }
      cov.order[v * d + i] = halves;
    }
  }
  cov.validate();
  FFatgraph cf;
  cf.x = cov;
  cf.phi = f.phi;
  // sides: each cover component inherits the side of the base component it
  // covers (identified through any of its edges)
  std::map<int, int> base_comp_of_oe;
  for (size_t c = 0; c < sd.boundary_oes.size(); ++c)
    for (int oe : sd.boundary_oes[c]) base_comp_of_oe[oe] = static_cast<int>(c);
  auto csd = fatten(cov);
  for (const auto& cyc : csd.boundary_oes) {
    int cov_oe = cyc[0];
    int base_e = oe_edge(cov_oe) / d;
    int base_oe = oe_is_rev(cov_oe) ? oe_rev(base_e) : oe_fwd(base_e);
    cf.side.push_back(f.side[base_comp_of_oe.at(base_oe)]);
  }
  if (!find_f_matching(cf)) return std::nullopt;
  return cf;
}

StackResult stack(const FFatgraph& f, int nlevels, long edge_cap) {
  std::string v = f.validate();
  if (!v.empty()) throw std::invalid_argument("stack: " + v);
  auto sd = fatten(f.x);
  {
    auto emb = minus_embedded(f, sd);
    if (!emb.ok) throw std::invalid_argument("stack: " + emb.reason);
  }
  auto words = boundary_trace_words(f.x);
  int rank = f.phi.rank();
  // per-level per-generator image words
  std::vector<std::vector<Word>> w_of(nlevels + 2, std::vector<Word>(rank + 1));
  for (int g = 1; g <= rank; ++g) w_of[0][g] = {Letter(g, 1)};
  for (int i = 1; i <= nlevels + 1; ++i)
    for (int g = 1; g <= rank; ++g) w_of[i][g] = f.phi.apply(w_of[i - 1][g]);

  auto skel = f.x.skeleton();
  int nb = static_cast<int>(f.x.edges.size());

  // level sizes with the cap
  std::vector<long> level_units(1, 0);
  std::vector<std::vector<long>> unit_off;  // per level, per base edge
  long total_units = 0, total_verts = 0;
  int levels = 0;
  for (int i = 0; i <= nlevels; ++i) {
    std::vector<long> offs(nb + 1, 0);
    long count = 0;
    for (int e = 0; e < nb; ++e) {
      offs[e] = count;
      count += static_cast<long>(w_of[i][skel.edges[e].label].size());
    }
    offs[nb] = count;
    if (total_units + count > edge_cap) break;
    unit_off.push_back(offs);
    total_units += count;
    total_verts += f.x.nv + (count);  // interiors bounded by unit count
    levels = i;
  }
  StackResult res;
  res.levels_built = levels;

  // global ids
  std::vector<long> level_unit_base(levels + 1, 0), level_vert_base(levels + 1, 0);
  long ucur = 0, vcur = 0;
  for (int i = 0; i <= levels; ++i) {
    level_unit_base[i] = ucur;
    ucur += unit_off[i][nb];
    level_vert_base[i] = vcur;
    // layout: original vertices first, then one interior vertex per unit
    // (the unit's head-side interior point; the last unit of a path reuses
    // the original head vertex)
    vcur += f.x.nv + unit_off[i][nb];
  }
  auto unit_id = [&](int lvl, int e, long k) {
    return level_unit_base[lvl] + unit_off[lvl][e] + k;
  };
  auto orig_vert = [&](int lvl, int vtx) { return level_vert_base[lvl] + vtx; };
  auto interior_vert = [&](int lvl, int e, long k) {
    // interior point after unit k of edge e's path
    return level_vert_base[lvl] + f.x.nv + unit_off[lvl][e] + k;
  };
  auto unit_tail = [&](int lvl, int e, long k) {
    return k == 0 ? orig_vert(lvl, skel.edges[e].src) : interior_vert(lvl, e, k - 1);
  };
  auto unit_head = [&](int lvl, int e, long k) {
    long len = unit_off[lvl][e + 1] - unit_off[lvl][e];
    return k == len - 1 ? orig_vert(lvl, skel.edges[e].dst)
                        : interior_vert(lvl, e, k);
  };
  auto unit_letter = [&](int lvl, int e, long k) {
    return w_of[lvl][skel.edges[e].label][static_cast<size_t>(k)];
  };

  // union-find over vertices and units
  std::vector<long> vuf(vcur), euf(ucur);
  for (long i = 0; i < vcur; ++i) vuf[i] = i;
  for (long i = 0; i < ucur; ++i) euf[i] = i;
  std::function<long(std::vector<long>&, long)> find = [&](std::vector<long>& uf, long a) {
    while (uf[a] != a) a = uf[a] = uf[uf[a]];
    return a;
  };
  auto unite = [&](std::vector<long>& uf, long a, long b) {
    a = find(uf, a);
    b = find(uf, b);
    if (a != b) uf[std::max(a, b)] = std::min(a, b);
  };

  // units under a base boundary position at a level, in traversal order,
  // coupled with their oriented endpoints
  struct UnitRef {
    long id;
    long start, end;  // vertices in traversal order
    Letter letter;    // as read by the traversal
  };
  auto units_under = [&](int lvl, int base_oe) {
    std::vector<UnitRef> out;
    int e = oe_edge(base_oe);
    long len = unit_off[lvl][e + 1] - unit_off[lvl][e];
    if (!oe_is_rev(base_oe)) {
      for (long k = 0; k < len; ++k)
        out.push_back({unit_id(lvl, e, k), unit_tail(lvl, e, k), unit_head(lvl, e, k),
                       unit_letter(lvl, e, k)});
    } else {
      for (long k = len - 1; k >= 0; --k)
        out.push_back({unit_id(lvl, e, k), unit_head(lvl, e, k), unit_tail(lvl, e, k),
                       unit_letter(lvl, e, k).inverse()});
    }
    return out;
  };

  // glue level i plus side to level i+1 minus side
  for (int lvl = 0; lvl + 1 <= levels; ++lvl) {
    for (const auto& m : f.matching) {
      const Word& mw = words[m.minus_comp];
      int mlen = static_cast<int>(mw.size());
      PlusImage img = plus_image(f.phi, mw);
      int plen = static_cast<int>(img.word.size());
      for (int b = 0; b < mlen; ++b) {
        int j = mlen - 1 - b;  // minus position matched by block b
        // level-i units across the plus block b
        std::vector<UnitRef> a_seq;
        int bstart = img.block_start[b];
        int bend = (b + 1 < mlen) ? img.block_start[b + 1] : plen;
        for (int q = bstart; q < bend; ++q) {
          int pos = (m.offset + q) % plen;
          int base_oe = sd.boundary_oes[m.plus_comp][pos];
          auto us = units_under(lvl, base_oe);
          a_seq.insert(a_seq.end(), us.begin(), us.end());
        }
        // level-(i+1) units under minus position j
        int minus_oe = sd.boundary_oes[m.minus_comp][j];
        auto b_seq = units_under(lvl + 1, minus_oe);
        if (a_seq.size() != b_seq.size())
          throw std::logic_error("stack: block subdivision mismatch");
        long s = static_cast<long>(a_seq.size());
        for (long k = 0; k < s; ++k) {
          const auto& ua = a_seq[static_cast<size_t>(k)];
          const auto& ub = b_seq[static_cast<size_t>(s - 1 - k)];
          if (!(ub.letter == ua.letter.inverse()))
            throw std::logic_error("stack: gluing letters do not cancel");
          unite(euf, ua.id, ub.id);
          unite(vuf, ua.start, ub.end);
          unite(vuf, ua.end, ub.start);
        }
      }
    }
  }

  // immersion of the quotient: no two germs at a vertex with the same
  // outgoing letter
  std::vector<std::pair<long, int>> germs;
  germs.reserve(2 * ucur);
  auto letter_code = [](const Letter& l) { return l.sign > 0 ? l.idx : -l.idx; };
  std::set<long> seen_unit;
  for (int lvl = 0; lvl <= levels; ++lvl) {
    for (int e = 0; e < nb; ++e) {
      long len = unit_off[lvl][e + 1] - unit_off[lvl][e];
      for (long k = 0; k < len; ++k) {
        long u = unit_id(lvl, e, k);
        if (find(euf, u) != u) continue;  // one representative per unit class
        Letter l = unit_letter(lvl, e, k);
        germs.emplace_back(find(vuf, unit_tail(lvl, e, k)), letter_code(l));
        germs.emplace_back(find(vuf, unit_head(lvl, e, k)), letter_code(l.inverse()));
      }
    }
  }
  std::sort(germs.begin(), germs.end());
  res.immersed = std::adjacent_find(germs.begin(), germs.end()) == germs.end();
  long edge_classes = 0;
  for (long u = 0; u < ucur; ++u)
    if (find(euf, u) == u) ++edge_classes;
  res.edges = edge_classes;
  return res;
}

MappingTorusGluing glue_mapping_torus(const FFatgraph& f) {
  std::string v = f.validate();
  if (!v.empty()) throw std::invalid_argument("glue_mapping_torus: " + v);
  auto sd = fatten(f.x);
  MappingTorusGluing g;
  g.chi = sd.chi;
  // merge surface components along the matched boundary pairs
  std::vector<int> parent(sd.components);
  for (int i = 0; i < sd.components; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& m : f.matching) {
    int a = find(sd.component_of_boundary[m.minus_comp]);
    int b = find(sd.component_of_boundary[m.plus_comp]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<int, int> chi_of;
  for (int c = 0; c < sd.components; ++c) chi_of[find(c)] += sd.chi_of_component[c];
  g.components = static_cast<int>(chi_of.size());
  for (auto& [root, chi] : chi_of) {
    if (chi > 2 || chi % 2 != 0)
      throw std::logic_error("glued component with impossible Euler characteristic");
    g.genus.push_back((2 - chi) / 2);
  }
  return g;
}


// ---------------------------------------------------------------------------
// certificates

namespace {
const char* mode_name(Certificate::Mode m) {
  return m == Certificate::Mode::FFolded ? "f-folded" : "boundedly-f-folded";
}
}  // namespace

std::string certificate_to_text(const Certificate& c) {
  std::ostringstream out;
  out << "mode " << mode_name(c.mode) << "\n";
  out << "genus " << c.genus << "\n";
  out << "endomorphism\n" << c.f.phi.to_text() << "end\n";
  out << "fatgraph\n" << fatgraph_to_text(c.f.x) << "end\n";
  out << "partition\n";
  for (size_t i = 0; i < c.f.side.size(); ++i)
    out << (c.f.side[i] == -1 ? "minus " : "plus ") << i << "\n";
  out << "end\n";
  out << "matching\n";
  for (const auto& m : c.f.matching)
    out << m.minus_comp << " " << m.plus_comp << " " << m.offset << "\n";
  out << "end\n";
  return out.str();
}

Certificate certificate_from_text(const std::string& text) {
  Certificate c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::string buffer;
  std::map<int, int> sides;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (section.empty()) {
      if (kw == "mode") {
        std::string m;
        ls >> m;
        if (m == "f-folded")
          c.mode = Certificate::Mode::FFolded;
        else if (m == "boundedly-f-folded")
          c.mode = Certificate::Mode::BoundedlyFFolded;
        else
          throw std::invalid_argument("unknown certificate mode: " + m);
      } else if (kw == "genus") {
        ls >> c.genus;
      } else if (kw == "endomorphism" || kw == "fatgraph" || kw == "partition" ||
                 kw == "matching") {
        section = kw;
        buffer.clear();
      } else {
        throw std::invalid_argument("unknown certificate line: " + line);
      }
      continue;
    }
    if (kw == "end") {
      if (section == "endomorphism")
        c.f.phi = Endomorphism::parse(buffer);
      else if (section == "fatgraph")
        c.f.x = fatgraph_from_text(buffer);
      else if (section == "partition") {
        std::istringstream ps(buffer);
        std::string side_word;
        int idx;
        while (ps >> side_word >> idx) sides[idx] = side_word == "minus" ? -1 : 1;
      } else if (section == "matching") {
        std::istringstream ms(buffer);
        FFatgraph::Match m;
        while (ms >> m.minus_comp >> m.plus_comp >> m.offset)
          c.f.matching.push_back(m);
      }
      section.clear();
      continue;
    }
    buffer += line + "\n";
  }
  if (!sides.empty()) {
    int ncomp = sides.rbegin()->first + 1;
    c.f.side.assign(ncomp, 0);
    for (auto& [idx, s] : sides) c.f.side[idx] = s;
  }
  return c;
}

VerifyResult verify_certificate(const Certificate& c) {
  VerifyResult res;
  std::string v = c.f.validate();
  if (!v.empty()) {
    res.reason = "f-fatgraph invariant: " + v;
    return res;
  }
  if (c.mode == Certificate::Mode::FFolded) {
    if (!is_immersion(rose_map(c.f.phi))) {
      res.reason = "mode f-folded but the rose map of phi is not an immersion";
      return res;
    }
    auto chk = is_f_folded(c.f);
    if (!chk.ok) {
      res.reason = chk.reason;
      return res;
    }
  } else {
    auto bf = has_bounded_folding(rose_map(c.f.phi));
    if (!bf.accepted) {
      res.reason = "phi does not have bounded folding: " + bf.reason;
      return res;
    }
    auto chk = admits_bounded_f_folding(c.f);
    if (!chk.ok) {
      res.reason = chk.reason;
      return res;
    }
  }
  MappingTorusGluing g = glue_mapping_torus(c.f);
  res.components = g.components;
  if (g.components == 1) {
    res.genus = g.genus[0];
  } else {
    // report the maximum over components; a certificate normally ships one
    res.genus = *std::max_element(g.genus.begin(), g.genus.end());
  }
  if (res.genus != c.genus) {
    res.reason = "stated genus " + std::to_string(c.genus) + " but glued genus is " +
                 std::to_string(res.genus);
    return res;
  }
  res.accepted = true;
  return res;
}

// ---------------------------------------------------------------------------
// the LP-driven search

SearchResult search_f_folded(const SearchSpec& spec) {
  SearchResult out;
  Endomorphism psi = spec.power == 1 ? spec.phi : endo_power(spec.phi, spec.power);

  // chain: minus words plus their unreduced psi-image inverses
  Chain chain;
  std::vector<CyclicWord> minus_words, plus_words;
  for (const auto& term : spec.minus_chain.terms()) {
    if (!is_integral(term.coeff))
      throw std::invalid_argument("search_f_folded: integral coefficients required");
    Word u = psi.apply(invert(term.word.letters()));
    if (!is_cyclically_reduced(CyclicWord(u))) {
      out.reason = "plus word is not cyclically reduced; LP search handles the "
                   "immersed case only";
      return out;
    }
    minus_words.push_back(term.word);
    plus_words.emplace_back(u);
    chain.add(term.word, term.coeff);
    chain.add(CyclicWord(u), term.coeff);
  }
  ChainTrack ct = from_chain(chain);

  // mark minus turns/circles and f-junction turns on the plus circles
  std::vector<char> turn_minus(ct.track.turns.size(), 0);
  std::vector<char> turn_f(ct.track.turns.size(), 0);
  std::vector<char> circle_minus(ct.circles.size(), 0);
  for (size_t ci = 0; ci < ct.circles.size(); ++ci) {
    const auto& circ = ct.circles[ci];
    bool is_minus = false;
    for (const auto& mw : minus_words)
      if (circ.word == mw) is_minus = true;
    if (is_minus) {
      circle_minus[ci] = 1;
      for (int t : circ.turn_ids) turn_minus[t] = 1;
      continue;
    }
    // plus circle: locate the rotation of the raw image word and mark the
    // block-start junctions as f-turns
    for (size_t wi = 0; wi < plus_words.size(); ++wi) {
      if (!(circ.word == plus_words[wi])) continue;
      Word raw = psi.apply(invert(minus_words[wi].letters()));
      const Word& canon = circ.spelling;
      int n = static_cast<int>(canon.size());
      int rot = -1;
      for (int r = 0; r < n && rot < 0; ++r) {
        bool ok = true;
        for (int i = 0; i < n; ++i)
          if (!(canon[i] == raw[(r + i) % n])) {
            ok = false;
            break;
          }
        if (ok) rot = r;
      }
      if (rot < 0) throw std::logic_error("plus rotation lookup failed");
      // block starts in raw coordinates
      Word inv = invert(minus_words[wi].letters());
      int pos = 0;
      for (const auto& l : inv) {
        int canon_pos = ((pos - rot) % n + n) % n;
        // junction before canon_pos is the turn after position canon_pos-1
        turn_f[circ.turn_ids[(canon_pos + n - 1) % n]] = 1;
        pos += static_cast<int>(psi.apply(l).size());
      }
      break;
    }
  }

  for (int attempt = 0; attempt < spec.vertex_budget; ++attempt) {
    GluingProblem gp;
    gp.ct = &ct;
    gp.turn_bigon_only = turn_f;
    gp.turn_exclusive = turn_minus;
    gp.circle_exclusive = circle_minus;
    gp.forbid_exclusive_pair_rects = true;
    if (spec.neg_chi >= 0) gp.pinned_triangle_mass = spec.neg_chi * 2;
    else gp.minimize_triangles = true;
    gp.perturb_seed = 0x9e3779b9u * static_cast<unsigned long>(attempt + 1);
    GluingSolution gs = solve_gluing(gp);
    if (!gs.feasible) {
      out.reason = "gluing LP infeasible: " + gs.reason;
      return out;
    }
    // integral vertex required
    bool integral = true;
    for (auto& [idx, wt] : gs.weight)
      if (!is_integral(wt)) integral = false;
    if (!integral) continue;
    PolygonWeight pw;
    pw.entries = gs.weight;
    AssembledSurface as;
    try {
      as = assemble(ct.track, gs.pieces, pw);
    } catch (const std::exception&) {
      continue;
    }
    // classify boundary components
    FFatgraph f;
    f.x = as.fatgraph;
    f.phi = psi;
    auto words = boundary_trace_words(f.x);
    bool classified = true;
    int nminus = 0, nplus = 0;
    for (const auto& w : words) {
      CyclicWord cw(w);
      bool assigned = false;
      for (const auto& mw : minus_words) {
        for (int wrap = 1; wrap * mw.size() <= w.size(); ++wrap)
          if (cw == CyclicWord(word_pow(mw.letters(), wrap))) {
            f.side.push_back(-1);
            ++nminus;
            assigned = true;
            break;
          }
        if (assigned) break;
      }
      if (assigned) continue;
      for (const auto& uw : plus_words) {
        for (int wrap = 1; wrap * uw.size() <= w.size(); ++wrap)
          if (cw == CyclicWord(word_pow(uw.letters(), wrap))) {
            f.side.push_back(1);
            ++nplus;
            assigned = true;
            break;
          }
        if (assigned) break;
      }
      if (!assigned) {
        classified = false;
        break;
      }
    }
    if (!classified) continue;
    if (spec.expected_minus_comps >= 0 && nminus != spec.expected_minus_comps) continue;
    if (spec.expected_plus_comps >= 0 && nplus != spec.expected_plus_comps) continue;

    FFatgraph final_f = f;
    if (spec.cover > 1) {
      auto cov = cyclic_cover(f, spec.cover);
      if (!cov) continue;
      final_f = *cov;
    } else {
      if (!find_f_matching(final_f)) continue;
    }
    Certificate cert;
    cert.mode = is_immersion(rose_map(psi)) ? Certificate::Mode::FFolded
                                            : Certificate::Mode::BoundedlyFFolded;
    cert.f = final_f;
    CheckReport chk = cert.mode == Certificate::Mode::FFolded
                          ? is_f_folded(final_f)
                          : admits_bounded_f_folding(final_f);
    if (!chk.ok) continue;
    MappingTorusGluing g = glue_mapping_torus(final_f);
    if (g.components != 1) continue;
    cert.genus = g.genus[0];
    if (spec.genus >= 0 && cert.genus != spec.genus) continue;
    auto ver = verify_certificate(cert);
    if (!ver.accepted) continue;
    out.found = true;
    out.certificate = cert;
    return out;
  }
  if (out.reason.empty()) out.reason = "vertex budget exhausted";
  return out;
}


}  // namespace sforge
