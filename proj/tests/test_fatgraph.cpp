#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "sforge/fatgraph.hpp"

using namespace sforge;

namespace {

// once-punctured torus: rose a, b with cyclic order (a+, b+, a-, b-)
Fatgraph punctured_torus() {
  Fatgraph x;
  int v = x.add_vertex();
  int a = x.add_edge(1);
  int b = x.add_edge(2);
  x.order[v] = {Fatgraph::half_tail(a), Fatgraph::half_tail(b),
                Fatgraph::half_head(a), Fatgraph::half_head(b)};
  return x;
}

Fatgraph single_loop(int label) {
  Fatgraph x;
  int v = x.add_vertex();
  int e = x.add_edge(label);
  x.order[v] = {Fatgraph::half_tail(e), Fatgraph::half_head(e)};
  return x;
}

Chain chain_of(std::initializer_list<std::pair<const char*, Rat>> terms) {
  Chain c;
  for (auto& [w, q] : terms) c.add(CyclicWord(w), q);
  return c;
}

std::multiset<std::string> boundary_words(const Fatgraph& x) {
  std::multiset<std::string> out;
  for (const auto& w : fatten(x).boundary_words) out.insert(to_string(w));
  return out;
}

}  // namespace

TEST_CASE("fatten single loop: annulus") {
  auto x = single_loop(1);
  auto sd = fatten(x);
  CHECK(sd.chi == 0);
  CHECK(sd.boundary_words.size() == 2);
  std::multiset<std::string> words = boundary_words(x);
  CHECK(words.count("a") == 1);
  CHECK(words.count("A") == 1);
}

TEST_CASE("fatten punctured torus") {
  auto x = punctured_torus();
  auto sd = fatten(x);
  CHECK(sd.chi == -1);
  REQUIRE(sd.boundary_words.size() == 1);
  CHECK(sd.boundary_words[0] == CyclicWord("abAB"));
  CHECK(is_reduced_fatgraph(x));
  CHECK(is_immersed_fatgraph(x));
}

TEST_CASE("fatten theta graph") {
  // two vertices joined by three edges a, b, c; hand-traced boundary
  Fatgraph x;
  int u = x.add_vertex();
  int v = x.add_vertex();
  int a = x.add_edge(1);
  int b = x.add_edge(2);
  int c = x.add_edge(3);
  x.order[u] = {Fatgraph::half_tail(a), Fatgraph::half_tail(b), Fatgraph::half_tail(c)};
  x.order[v] = {Fatgraph::half_head(a), Fatgraph::half_head(b), Fatgraph::half_head(c)};
  auto sd = fatten(x);
  CHECK(sd.chi == -1);
  // planar theta: 3 boundary components; total boundary length = 2 * 3
  size_t total = 0;
  for (const auto& cyc : sd.boundary_oes) total += cyc.size();
  CHECK(total == 6);
}

TEST_CASE("unreduced fatgraph detected") {
  // 1-valent vertex forces a backtracking boundary
  Fatgraph x;
  int u = x.add_vertex();
  int v = x.add_vertex();
  int a = x.add_edge(1);
  int b = x.add_edge(2);
  x.order[u] = {Fatgraph::half_tail(a), Fatgraph::half_head(a), Fatgraph::half_tail(b)};
  x.order[v] = {Fatgraph::half_head(b)};
  CHECK_FALSE(is_reduced_fatgraph(x));
}

TEST_CASE("decompose punctured torus over its chain track") {
  auto x = punctured_torus();
  auto ct = from_chain(chain_of({{"abAB", Rat(1)}}));
  auto ps = enumerate_polygons(ct.track);
  auto bc = carry_boundary_on_chain(x, ct);
  auto p = decompose(x, ct.track, ps, bc);
  // 2 rectangles + 2 triangles, internally balanced, boundary = all-ones
  Rat rect_mass(0), tri_mass(0);
  for (auto& [idx, wt] : p.entries)
    (idx < static_cast<int>(ps.rectangles.size()) ? rect_mass : tri_mass) += wt;
  CHECK(rect_mass == 2);
  CHECK(tri_mass == 2);
  CHECK(chi_of(ps, p) == 1);  // -chi(S(X)) = 1
  CHECK(is_internally_balanced(ps, p, ct.track.turns.size()));
  auto w = boundary_map(ct.track, ps, p);
  CHECK(w == ct.weight);
}

TEST_CASE("decompose a circle fatgraph: no triangles") {
  // circle spelling ab: 2 vertices, both 2-valent
  Fatgraph x;
  int u = x.add_vertex(), v = x.add_vertex();
  int a = x.add_edge(1), b = x.add_edge(2);
  x.order[u] = {Fatgraph::half_tail(a), Fatgraph::half_head(b)};
  x.order[v] = {Fatgraph::half_head(a), Fatgraph::half_tail(b)};
  auto sd = fatten(x);
  CHECK(sd.chi == 0);
  auto ct = from_chain(chain_of({{"ab", Rat(1)}, {"BA", Rat(1)}}));
  auto ps = enumerate_polygons(ct.track);
  auto bc = carry_boundary_on_chain(x, ct);
  auto p = decompose(x, ct.track, ps, bc);
  Rat tri_mass(0);
  for (auto& [idx, wt] : p.entries)
    if (idx >= static_cast<int>(ps.rectangles.size())) tri_mass += wt;
  CHECK(tri_mass == 0);
  CHECK(chi_of(ps, p) == 0);
}

TEST_CASE("trivalent fatgraphs have exactly 2(-chi) triangles") {
  // pair of pants spine: theta graph with labels making it reduced
  Fatgraph x;
  int u = x.add_vertex();
  int v = x.add_vertex();
  int a = x.add_edge(1);
  int b = x.add_edge(2);
  int c = x.add_edge(1);
  x.order[u] = {Fatgraph::half_tail(a), Fatgraph::half_tail(b), Fatgraph::half_head(c)};
  x.order[v] = {Fatgraph::half_head(a), Fatgraph::half_head(b), Fatgraph::half_tail(c)};
  auto sd = fatten(x);
  REQUIRE(is_reduced_fatgraph(x));
  Chain ch;
  for (const auto& w : sd.boundary_words) ch.add(w, Rat(1));
  auto ct = from_chain(ch);
  auto ps = enumerate_polygons(ct.track);
  auto bc = carry_boundary_on_chain(x, ct);
  auto p = decompose(x, ct.track, ps, bc);
  // tau = sum over vertices of (valence - 2) = 2
  Rat tri_mass(0);
  for (auto& [idx, wt] : p.entries)
    if (idx >= static_cast<int>(ps.rectangles.size())) tri_mass += wt;
  CHECK(tri_mass == 2);
  CHECK(chi_of(ps, p) == Rat(-sd.chi));
}

TEST_CASE("assemble round trip from decompositions") {
  std::vector<Fatgraph> cases;
  cases.push_back(punctured_torus());
  {
    Fatgraph x;
    int u = x.add_vertex();
    int v = x.add_vertex();
    int a = x.add_edge(1);
    int b = x.add_edge(2);
    int c = x.add_edge(1);
    x.order[u] = {Fatgraph::half_tail(a), Fatgraph::half_tail(b), Fatgraph::half_head(c)};
    x.order[v] = {Fatgraph::half_head(a), Fatgraph::half_head(b), Fatgraph::half_tail(c)};
    cases.push_back(x);
  }
  for (const auto& x : cases) {
    auto sd = fatten(x);
    Chain ch;
    for (const auto& w : sd.boundary_words) ch.add(w, Rat(1));
    auto ct = from_chain(ch);
    auto ps = enumerate_polygons(ct.track);
    auto bc = carry_boundary_on_chain(x, ct);
    auto p = decompose(x, ct.track, ps, bc);
    auto as = assemble(ct.track, ps, p);
    auto sd2 = fatten(as.fatgraph);
    CHECK(sd2.chi == sd.chi);
    CHECK(boundary_words(as.fatgraph) == boundary_words(x));
    // boundary weight is preserved exactly
    auto bc2 = carry_boundary_on_chain(as.fatgraph, ct);
    auto p2 = decompose(as.fatgraph, ct.track, ps, bc2);
    CHECK(boundary_map(ct.track, ps, p2) == boundary_map(ct.track, ps, p));
  }
}

TEST_CASE("assemble: two rectangles forming an annulus") {
  auto ct = from_chain(chain_of({{"ab", Rat(1)}, {"BA", Rat(1)}}));
  auto ps = enumerate_polygons(ct.track);
  // rectangles pairing the a against A and b against B, in circle positions
  PolygonWeight p;
  // locate rectangles by their oriented edges: every rectangle over a chain
  // track has forced flanks, so the (ea, eb) pair identifies it
  const auto& c0 = ct.circles[0];
  const auto& c1 = ct.circles[1];
  // circle 0 spells ab, circle 1 spells BA (canonical rotation of BA)
  std::map<std::pair<int, int>, int> rect_by_edges;
  for (size_t i = 0; i < ps.rectangles.size(); ++i) {
    rect_by_edges[{ps.rectangles[i].ea, ps.rectangles[i].eb}] = static_cast<int>(i);
    rect_by_edges[{ps.rectangles[i].eb, ps.rectangles[i].ea}] = static_cast<int>(i);
  }
  const Word& w1 = c1.spelling;
  for (size_t i = 0; i < c0.spelling.size(); ++i) {
    Letter need = c0.spelling[i].inverse();
    for (size_t j = 0; j < w1.size(); ++j)
      if (w1[j] == need) {
        auto it = rect_by_edges.find({c0.oes[i], c1.oes[j]});
        REQUIRE(it != rect_by_edges.end());
        p.entries.emplace_back(it->second, Rat(1));
      }
  }
  REQUIRE(p.entries.size() == 2);
  CHECK(is_internally_balanced(ps, p, ct.track.turns.size()));
  auto as = assemble(ct.track, ps, p);
  auto sd = fatten(as.fatgraph);
  CHECK(sd.chi == 0);
  CHECK(boundary_words(as.fatgraph) ==
        std::multiset<std::string>{to_string(c0.word), to_string(c1.word)});
}

TEST_CASE("assemble discards pure triangle components") {
  auto ct = from_chain(chain_of({{"abAB", Rat(1)}}));
  auto ps = enumerate_polygons(ct.track);
  REQUIRE(ps.triangles.size() > 0);
  // a triangle plus its reverse forms a closed triangle-only piece
  const auto& tr = ps.triangles[0];
  Triangle rev{tr.t0, tr.t2, tr.t1};
  int rev_id = -1;
  for (size_t i = 0; i < ps.triangles.size(); ++i) {
    Triangle c = ps.triangles[i];
    if (c == rev || (Triangle{rev.t1, rev.t2, rev.t0}) == c ||
        (Triangle{rev.t2, rev.t0, rev.t1}) == c)
      rev_id = static_cast<int>(i);
  }
  REQUIRE(rev_id >= 0);
  PolygonWeight p;
  p.entries.emplace_back(static_cast<int>(ps.rectangles.size()) + 0, Rat(1));
  p.entries.emplace_back(static_cast<int>(ps.rectangles.size()) + rev_id, Rat(1));
  CHECK(is_internally_balanced(ps, p, ct.track.turns.size()));
  auto as = assemble(ct.track, ps, p);
  CHECK(as.fatgraph.edges.empty());
  CHECK(as.fatgraph.nv == 0);
  CHECK(as.discarded_triangles > 0);
}

TEST_CASE("boundary map weights rectangles by half") {
  auto ct = from_chain(chain_of({{"abAB", Rat(1)}}));
  auto ps = enumerate_polygons(ct.track);
  PolygonWeight p;
  p.entries.emplace_back(0, Rat(1));
  auto w = boundary_map(ct.track, ps, p);
  Rat total(0);
  for (auto& v : w) total += v;
  CHECK(total == 2);  // 4 corners, 1/2 each
  // triangles contribute nothing
  PolygonWeight pt;
  pt.entries.emplace_back(static_cast<int>(ps.rectangles.size()), Rat(5));
  auto wt = boundary_map(ct.track, ps, pt);
  for (auto& v : wt) CHECK(v == 0);
  CHECK(chi_of(ps, pt) == Rat(5) / 2);
}

TEST_CASE("fatgraph text round trip") {
  auto x = punctured_torus();
  auto x2 = fatgraph_from_text(fatgraph_to_text(x));
  CHECK(fatgraph_to_text(x2) == fatgraph_to_text(x));
  CHECK(boundary_words(x2) == boundary_words(x));
}
