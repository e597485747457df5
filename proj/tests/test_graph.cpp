#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "sforge/graph.hpp"

using namespace sforge;

TEST_CASE("wedge of loops") {
  auto g = wedge_of_loops({CyclicWord("a")}, 2);
  CHECK(g.domain.nv == 1);
  CHECK(g.domain.edges.size() == 1);

  auto g2 = wedge_of_loops({CyclicWord("abAB")}, 2);
  CHECK(g2.domain.nv == 4);
  CHECK(g2.domain.edges.size() == 4);

  auto g3 = wedge_of_loops({CyclicWord("ab"), CyclicWord("ba")}, 2);
  // Euler characteristic of a wedge of two 2-edge loops: 3 - 4
  CHECK(g3.domain.nv - static_cast<int>(g3.domain.edges.size()) == -1);
  CHECK_THROWS(wedge_of_loops({CyclicWord(Word{})}, 2));
}

TEST_CASE("stallings_fold identity on immersed input") {
  auto g = wedge_of_loops({CyclicWord("abAB")}, 2);
  REQUIRE(is_immersion(g));
  auto fd = stallings_fold(g);
  CHECK(fd.folded.domain.nv == g.domain.nv);
  CHECK(fd.folded.domain.edges.size() == g.domain.edges.size());
  CHECK(fd.fold_edges.empty());
}

TEST_CASE("stallings_fold on aa, ab") {
  // hand-fold: the two initial a-edges are identified
  auto g = wedge_of_loops({CyclicWord("aa"), CyclicWord("ab")}, 2);
  CHECK_FALSE(is_immersion(g));
  auto fd = stallings_fold(g);
  CHECK(is_immersion(fd.folded));
  CHECK(fd.folded.domain.edges.size() == 3);
  CHECK(fd.folded.domain.nv == 2);
  CHECK(!fd.fold_edges.empty());
}

TEST_CASE("fold of the Fig. 5 loop") {
  // f(a) = AbbaaaaBBABabAbBA is deliberately non-reduced as a loop label
  auto g = wedge_of_loops({CyclicWord("AbbaaaaBBABabAbBA")}, 2);
  auto fd = stallings_fold(g);
  CHECK(is_immersion(fd.folded));
  CHECK(!fd.fold_edges.empty());
}

TEST_CASE("is_immersion basics") {
  auto r = identity_map(rose(2));
  CHECK(is_immersion(r));
  LabeledGraph g;
  g.add_vertex();
  g.add_edge(0, 0, 1);
  g.add_edge(0, 0, 1);
  CHECK_FALSE(is_immersion(map_to_rose(g, 2)));
}

TEST_CASE("fold output immersed on random wedges") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<CyclicWord> words;
    int nw = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < nw; ++i) {
      Word w = random_reduced_word(2, 2 + static_cast<int>(rng() % 10), rng);
      if (w.empty()) continue;
      words.emplace_back(w);
    }
    if (words.empty()) continue;
    auto fd = stallings_fold(wedge_of_loops(words, 2));
    CHECK(is_immersion(fd.folded));
    // folding never raises the first Betti number
    const auto& X = fd.folded.domain;
    int b1_folded = static_cast<int>(X.edges.size()) - X.nv + graph_components(X);
    int b1_orig = 0;
    {
      const auto& D = wedge_of_loops(words, 2).domain;
      b1_orig = static_cast<int>(D.edges.size()) - D.nv + 1;
    }
    CHECK(b1_folded <= b1_orig);
  }
  // independent generators fold with rank preserved
  auto fd = stallings_fold(
      wedge_of_loops({CyclicWord("aa"), CyclicWord("bb"), CyclicWord("abab")}, 2));
  const auto& X = fd.folded.domain;
  CHECK(static_cast<int>(X.edges.size()) - X.nv + 1 == 3);
}

TEST_CASE("subdivided_rose") {
  Endomorphism id = Endomorphism::identity(2);
  auto r1 = subdivided_rose(id, 1);
  CHECK(r1.domain.nv == 1);
  CHECK(r1.domain.edges.size() == 2);

  Endomorphism sapir(2, {parse_word("ab"), parse_word("ba")});
  auto s1 = subdivided_rose(sapir, 1);
  CHECK(s1.domain.edges.size() == 4);
  CHECK(s1.domain.nv == 3);

  Endomorphism fig9(3, {parse_word("abAcbA"), parse_word("accBcAA"),
                        parse_word("acAbacA")});
  auto f1 = subdivided_rose(fig9, 1);
  CHECK(f1.domain.edges.size() == 6 + 7 + 7);
}

TEST_CASE("bounded folding accepts immersions with empty region") {
  Endomorphism sapir(2, {parse_word("ab"), parse_word("ba")});
  auto bf = has_bounded_folding(rose_map(sapir));
  CHECK(bf.accepted);
  CHECK(bf.data.fold_edges.empty());
}

TEST_CASE("bounded folding of the Fig. 9 endomorphism") {
  Endomorphism fig9(3, {parse_word("abAcbA"), parse_word("accBcAA"),
                        parse_word("acAbacA")});
  auto bf = has_bounded_folding(rose_map(fig9));
  CHECK(bf.accepted);
  REQUIRE(bf.data.tree_edges.size() == 1);
  // the single fold tree contains the rose vertex (vertex 0 of R_1)
  const auto& tv = bf.data.tree_vertices[0];
  CHECK(std::find(tv.begin(), tv.end(), 0) != tv.end());
}

TEST_CASE("random endomorphisms have bounded folding with log-size trees") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 8; ++t) {
    int rank = 2 + static_cast<int>(rng() % 3);
    int n = 200 + static_cast<int>(rng() % 1801);
    std::vector<Word> im;
    for (int g = 0; g < rank; ++g) im.push_back(random_reduced_word(rank, n, rng));
    Endomorphism phi(rank, im);
    auto bf = has_bounded_folding(rose_map(phi));
    CHECK(bf.accepted);
    double bound = 4.0 * std::log(static_cast<double>(n));  // 2C log n, C = 2
    for (const auto& te : bf.data.tree_edges)
      CHECK(static_cast<double>(te.size()) <= bound);
  }
}

TEST_CASE("cycle_basis") {
  auto loop = wedge_of_loops({CyclicWord("a")}, 2);
  auto basis = cycle_basis(loop.domain);
  REQUIRE(basis.size() == 1);
  CHECK(basis[0] == CyclicWord("a"));

  auto r = rose(2);
  auto rb = cycle_basis(r);
  REQUIRE(rb.size() == 2);
  CHECK(rb[0] == CyclicWord("a"));
  CHECK(rb[1] == CyclicWord("b"));

  auto fd = stallings_fold(wedge_of_loops({CyclicWord("aab"), CyclicWord("abb")}, 2));
  const auto& X = fd.folded.domain;
  auto xb = cycle_basis(X);
  CHECK(static_cast<int>(xb.size()) ==
        static_cast<int>(X.edges.size()) - X.nv + 1);
  CHECK(xb.size() == 2);
}

TEST_CASE("trim_spikes") {
  // wedge of abA folds to a spike plus a loop; trimming leaves the loop
  auto fd = stallings_fold(wedge_of_loops({CyclicWord(parse_word("abA"))}, 2));
  auto core = trim_spikes(fd.folded.domain);
  CHECK(core.nv == 1);
  CHECK(core.edges.size() == 1);
  CHECK(core.edges[0].label == 2);
}

TEST_CASE("graph text roundtrip") {
  auto g = wedge_of_loops({CyclicWord("abAB")}, 2).domain;
  auto g2 = graph_from_text(graph_to_text(g));
  CHECK(g2.nv == g.nv);
  CHECK(g2.edges.size() == g.edges.size());
  CHECK(graph_to_text(g2) == graph_to_text(g));
}
