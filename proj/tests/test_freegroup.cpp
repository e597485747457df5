#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "sforge/freegroup.hpp"

using namespace sforge;

namespace {

// Independent oracle: repeated full scans instead of a stack.
Word scan_reduce(Word w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i + 1] == w[i].inverse()) {
        w.erase(w.begin() + i, w.begin() + i + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

CyclicWord scan_cyclic_reduce(CyclicWord w) {
  Word r = scan_reduce(w.letters());
  while (r.size() >= 2 && r.front() == r.back().inverse()) {
    r.erase(r.begin());
    r.pop_back();
    r = scan_reduce(r);
  }
  return CyclicWord(r);
}

void enumerate_reduced(int rank, int len, Word& cur, std::set<std::string>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.insert(word_to_string(cur));
    return;
  }
  for (int g = 1; g <= rank; ++g)
    for (int s : {1, -1}) {
      Letter l(g, s);
      if (!cur.empty() && cur.back() == l.inverse()) continue;
      cur.push_back(l);
      enumerate_reduced(rank, len, cur, out);
      cur.pop_back();
    }
}

}  // namespace

TEST_CASE("reduce basics") {
  CHECK(reduce(parse_word("aA")).empty());
  CHECK(word_to_string(reduce(parse_word("abAcbA"))) == "abAcbA");
  Word fig5 = parse_word("AbbaaaaBBABabAbBA");
  CHECK(reduce(fig5) == scan_reduce(fig5));
  // idempotence and retraction
  CHECK(reduce(reduce(fig5)) == reduce(fig5));
  Word ww = concat(fig5, invert(fig5));
  CHECK(reduce(ww).empty());
}

TEST_CASE("cyclic reduce") {
  CHECK(to_string(cyclic_reduce(CyclicWord("abA"))) == "b");
  CHECK(cyclic_reduce(CyclicWord("abAB")) == CyclicWord("abAB"));
  CyclicWord w("baBAAb");
  CHECK(cyclic_reduce(w) == scan_cyclic_reduce(w));
}

TEST_CASE("invert") {
  CHECK(word_to_string(invert(parse_word("ab"))) == "BA");
  CHECK(invert(Word{}).empty());
  CHECK(word_to_string(invert(parse_word("abAcbA"))) == "aBCaBA");
  Word w = parse_word("abAcbA");
  CHECK(invert(invert(w)) == w);
  // antihomomorphism
  Word u = parse_word("abA"), v = parse_word("cbA");
  CHECK(invert(concat(u, v)) == concat(invert(v), invert(u)));
}

TEST_CASE("apply_endo") {
  Endomorphism sapir(2, {parse_word("ab"), parse_word("ba")});
  CHECK(word_to_string(sapir.apply(parse_word("abAB"))) == "abbaBAAB");
  Endomorphism id = Endomorphism::identity(3);
  Word w = parse_word("abcABC");
  CHECK(id.apply(w) == w);
  Endomorphism fig5(2, {parse_word("AbbaaaaBBABabAbBA"), parse_word("b")});
  CHECK(word_to_string(fig5.apply(parse_word("a"))) == "AbbaaaaBBABabAbBA");
  // unreduced output is preserved exactly
  CHECK(word_to_string(fig5.apply(parse_word("ab"))) == "AbbaaaaBBABabAbBAb");
  CHECK_THROWS(sapir.apply(parse_word("c")));
}

TEST_CASE("abelianize") {
  auto h = abelianize(CyclicWord("abAB"), 2);
  CHECK(h[0] == 0);
  CHECK(h[1] == 0);
  h = abelianize(parse_word("aab"), 2);
  CHECK(h[0] == 2);
  CHECK(h[1] == 1);

  Chain c;
  c.add(CyclicWord("babaBABA"), Rat(3));
  c.add(CyclicWord("abbaBAAB"), Rat(1));
  auto hc = abelianize(c, 2);
  // per-letter counting oracle
  Rat ea(0), eb(0);
  for (auto& [w, coeff] : std::map<std::string, Rat>{{"babaBABA", 3}, {"abbaBAAB", 1}})
    for (const auto& l : parse_word(w))
      (l.idx == 1 ? ea : eb) += coeff * l.sign;
  CHECK(hc[0] == ea);
  CHECK(hc[1] == eb);
}

TEST_CASE("abelianize commutes with endomorphisms") {
  Endomorphism sapir(2, {parse_word("ab"), parse_word("ba")});
  auto m = sapir.ab_matrix();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    Word w = random_reduced_word(2, 9, rng);
    auto hw = abelianize(w, 2);
    auto hphi = abelianize(sapir.apply(w), 2);
    for (int i = 0; i < 2; ++i) {
      Rat expect(0);
      for (int j = 0; j < 2; ++j) expect += Rat(m[i][j]) * hw[j];
      CHECK(hphi[i] == expect);
    }
  }
}

TEST_CASE("random_reduced_word") {
  std::mt19937_64 rng(7);
  CHECK(random_reduced_word(2, 0, rng).empty());
  // n=1: uniform over the 4 letters (chi^2 over 10^4 draws)
  std::map<std::string, int> counts;
  for (int i = 0; i < 10000; ++i)
    counts[word_to_string(random_reduced_word(2, 1, rng))]++;
  CHECK(counts.size() == 4);
  double chi2 = 0;
  for (auto& [k, v] : counts) {
    double d = v - 2500.0;
    chi2 += d * d / 2500.0;
  }
  CHECK(chi2 < 16.3);  // 3 dof, p = 0.001

  // n=3: all 36 outcomes occur, none grossly off
  std::map<std::string, int> c3;
  for (int i = 0; i < 36000; ++i)
    c3[word_to_string(random_reduced_word(2, 3, rng))]++;
  CHECK(c3.size() == 36);
  for (auto& [k, v] : c3) {
    CHECK(v > 600);
    CHECK(v < 1400);
    CHECK(is_reduced(parse_word(k)));
  }
}

TEST_CASE("count_reduced_words vs enumeration") {
  CHECK(count_reduced_words(2, 1) == 4);
  CHECK(count_reduced_words(2, 7) == 2916);
  for (int k = 2; k <= 2; ++k)
    for (int len = 1; len <= 7; ++len) {
      std::set<std::string> all;
      Word cur;
      enumerate_reduced(k, len, cur, all);
      CHECK(count_reduced_words(k, len) == Int(all.size()));
    }
  // enumeration cross-check at rank 3, short lengths
  for (int len = 1; len <= 4; ++len) {
    std::set<std::string> all;
    Word cur;
    enumerate_reduced(3, len, cur, all);
    CHECK(count_reduced_words(3, len) == Int(all.size()));
  }
}

TEST_CASE("cyclic word canonicalization") {
  CHECK(CyclicWord("abAB") == CyclicWord("ABab"));
  CHECK(CyclicWord("ab") == CyclicWord("ba"));
  CHECK(CyclicWord("abAB") != CyclicWord("baBA"));
  CHECK(to_string(invert(invert(CyclicWord("abbA")))) == to_string(CyclicWord("abbA")));
}

TEST_CASE("chain text roundtrip") {
  Chain c = Chain::parse("3 babaBABA\n1/2 ab\n");
  CHECK(c.terms().size() == 2);
  Chain c2 = Chain::parse(c.to_text());
  CHECK(c2.to_text() == c.to_text());
  CHECK_THROWS(Chain::parse("-1 ab"));
}

TEST_CASE("endomorphism text roundtrip") {
  Endomorphism e = Endomorphism::parse("a -> ab\nb -> ba\n");
  CHECK(e.rank() == 2);
  CHECK(word_to_string(e.image(1)) == "ab");
  Endomorphism e2 = Endomorphism::parse(e.to_text());
  CHECK(e2.to_text() == e.to_text());
}
