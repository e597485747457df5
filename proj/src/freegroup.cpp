#include "sforge/freegroup.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace sforge {

std::string letter_to_string(const Letter& l) {
  if (l.idx < 1 || l.sign == 0) throw std::invalid_argument("bad letter");
  if (l.idx <= 26) {
    char c = static_cast<char>('a' + l.idx - 1);
    if (l.sign < 0) c = static_cast<char>(std::toupper(c));
    return std::string(1, c);
  }
  return (l.sign > 0 ? "x" : "X") + std::to_string(l.idx);
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "";
  std::string s;
  for (const auto& l : w) s += letter_to_string(l);
  return s;
}

Word parse_word(const std::string& s) {
  Word w;
  size_t i = 0;
  if (s == "1") return w;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == 'x' || c == 'X') {
      // indexed token when followed by digits, otherwise the 24th generator
      size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      if (j > i + 1) {
        int idx = std::stoi(s.substr(i + 1, j - i - 1));
        if (idx < 1) throw std::invalid_argument("bad generator index");
        w.emplace_back(idx, c == 'x' ? 1 : -1);
        i = j;
        continue;
      }
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      bool lower = std::islower(static_cast<unsigned char>(c));
      int idx = (lower ? c - 'a' : c - 'A') + 1;
      w.emplace_back(idx, lower ? 1 : -1);
      ++i;
      continue;
    }
    throw std::invalid_argument(std::string("bad character in word: ") + c);
  }
  return w;
}

bool is_reduced(const Word& w) {
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (w[i + 1] == w[i].inverse()) return false;
  return true;
}

bool is_cyclically_reduced(const Word& w) {
  if (!is_reduced(w)) return false;
  if (w.size() >= 2 && w.front() == w.back().inverse()) return false;
  return true;
}

Word reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back() == l.inverse())
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word invert(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->inverse());
  return out;
}

Word concat(const Word& a, const Word& b) {
  Word out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

Word word_pow(const Word& w, int n) {
  Word out;
  Word base = n >= 0 ? w : invert(w);
  for (int i = 0; i < std::abs(n); ++i) out = concat(out, base);
  return out;
}

int max_generator(const Word& w) {
  int m = 0;
  for (const auto& l : w) m = std::max(m, l.idx);
  return m;
}

CyclicWord::CyclicWord(Word w) {
  if (w.empty()) return;
  // least rotation (plain quadratic scan; words here are short)
  size_t n = w.size();
  size_t best = 0;
  for (size_t r = 1; r < n; ++r) {
    for (size_t k = 0; k < n; ++k) {
      const Letter& a = w[(r + k) % n];
      const Letter& b = w[(best + k) % n];
      if (a < b) {
        best = r;
        break;
      }
      if (b < a) break;
    }
  }
  rep_.reserve(n);
  for (size_t k = 0; k < n; ++k) rep_.push_back(w[(best + k) % n]);
}

std::string to_string(const CyclicWord& w) { return word_to_string(w.letters()); }

CyclicWord cyclic_reduce(const CyclicWord& w) {
  Word r = reduce(w.letters());
  while (r.size() >= 2 && r.front() == r.back().inverse()) {
    r.erase(r.begin());
    r.pop_back();
    r = reduce(r);
  }
  return CyclicWord(r);
}

bool is_cyclically_reduced(const CyclicWord& w) {
  return is_cyclically_reduced(w.letters());
}

CyclicWord invert(const CyclicWord& w) { return CyclicWord(invert(w.letters())); }

void Chain::add(const CyclicWord& w, const Rat& c) {
  if (w.empty()) throw std::invalid_argument("trivial word in chain");
  if (c < 0) throw std::invalid_argument("negative chain coefficient");
  if (c == 0) return;
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), w,
      [](const Term& t, const CyclicWord& key) { return t.word < key; });
  if (it != terms_.end() && it->word == w)
    it->coeff += c;
  else
    terms_.insert(it, Term{w, c});
}

int Chain::max_generator() const {
  int m = 0;
  for (const auto& t : terms_) m = std::max(m, sforge::max_generator(t.word.letters()));
  return m;
}

Chain Chain::parse(const std::string& text) {
  Chain c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string coeff, word;
    if (!(ls >> coeff)) continue;
    if (coeff[0] == '#') continue;
    if (!(ls >> word)) throw std::invalid_argument("chain line missing word: " + line);
    c.add(CyclicWord(parse_word(word)), parse_rat(coeff));
  }
  return c;
}

std::string Chain::to_text() const {
  std::string out;
  for (const auto& t : terms_)
    out += rat_to_string(t.coeff) + " " + to_string(t.word) + "\n";
  return out;
}

static HomologyVector abelianize_letters(const Word& w, int rank) {
  HomologyVector h(rank, Rat(0));
  for (const auto& l : w) {
    if (l.idx > rank) throw std::invalid_argument("letter beyond rank");
    h[l.idx - 1] += l.sign;
  }
  return h;
}

HomologyVector abelianize(const Word& w, int rank) {
  return abelianize_letters(w, rank);
}

HomologyVector abelianize(const CyclicWord& w, int rank) {
  return abelianize_letters(w.letters(), rank);
}

HomologyVector abelianize(const Chain& c, int rank) {
  HomologyVector h(rank, Rat(0));
  for (const auto& t : c.terms()) {
    auto hw = abelianize(t.word, rank);
    for (int i = 0; i < rank; ++i) h[i] += t.coeff * hw[i];
  }
  return h;
}

Endomorphism::Endomorphism(int rank, std::vector<Word> images)
    : rank_(rank), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != rank)
    throw std::invalid_argument("endomorphism image count != rank");
  // Images are usually reduced but not required to be: the stacking
  // machinery deliberately works with unreduced images.
  for (const auto& w : images_) {
    if (w.empty()) throw std::invalid_argument("empty endomorphism image");
    if (sforge::max_generator(w) > rank)
      throw std::invalid_argument("image letter beyond rank");
  }
}

Word Endomorphism::apply(const Letter& l) const {
  if (l.idx > rank_) throw std::invalid_argument("letter beyond endomorphism rank");
  const Word& im = images_[l.idx - 1];
  return l.sign > 0 ? im : sforge::invert(im);
}

Word Endomorphism::apply(const Word& w) const {
  Word out;
  for (const auto& l : w) {
    Word im = apply(l);
    out.insert(out.end(), im.begin(), im.end());
  }
  return out;
}

CyclicWord Endomorphism::apply(const CyclicWord& w) const {
  return CyclicWord(apply(w.letters()));
}

Word Endomorphism::apply_iterated(const Word& w, int n) const {
  Word out = w;
  for (int i = 0; i < n; ++i) out = apply(out);
  return out;
}

std::vector<std::vector<Int>> Endomorphism::ab_matrix() const {
  std::vector<std::vector<Int>> m(rank_, std::vector<Int>(rank_, 0));
  for (int g = 1; g <= rank_; ++g)
    for (const auto& l : images_[g - 1]) m[l.idx - 1][g - 1] += l.sign;
  return m;
}

Endomorphism Endomorphism::identity(int rank) {
  std::vector<Word> im;
  for (int g = 1; g <= rank; ++g) im.push_back({Letter(g, 1)});
  return Endomorphism(rank, std::move(im));
}

Endomorphism Endomorphism::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<int, Word>> entries;
  int rank = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string lhs, arrow, rhs;
    if (!(ls >> lhs)) continue;
    if (lhs[0] == '#') continue;
    if (!(ls >> arrow >> rhs) || arrow != "->")
      throw std::invalid_argument("bad endomorphism line: " + line);
    Word g = parse_word(lhs);
    if (g.size() != 1 || g[0].sign != 1)
      throw std::invalid_argument("endomorphism lhs must be a generator: " + line);
    entries.emplace_back(g[0].idx, parse_word(rhs));
    rank = std::max({rank, g[0].idx, sforge::max_generator(entries.back().second)});
  }
  std::vector<Word> images(rank);
  std::vector<bool> seen(rank, false);
  for (auto& [idx, w] : entries) {
    if (seen[idx - 1]) throw std::invalid_argument("duplicate generator image");
    seen[idx - 1] = true;
    images[idx - 1] = std::move(w);
  }
  for (int g = 1; g <= rank; ++g)
    if (!seen[g - 1]) images[g - 1] = {Letter(g, 1)};
  return Endomorphism(rank, std::move(images));
}

std::string Endomorphism::to_text() const {
  std::string out;
  for (int g = 1; g <= rank_; ++g)
    out += letter_to_string(Letter(g, 1)) + " -> " + word_to_string(images_[g - 1]) +
           "\n";
  return out;
}

Word random_reduced_word(int rank, int length, std::mt19937_64& rng) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  Word w;
  if (length <= 0) return w;
  auto nth_letter = [&](int n) {
    // letters in a fixed order: a, A, b, B, ...
    return Letter(n / 2 + 1, n % 2 == 0 ? 1 : -1);
  };
  std::uniform_int_distribution<int> first(0, 2 * rank - 1);
  w.push_back(nth_letter(first(rng)));
  std::uniform_int_distribution<int> next(0, 2 * rank - 2);
  for (int i = 1; i < length; ++i) {
    Letter banned = w.back().inverse();
    int pick = next(rng);
    // order-preserving skip of the banned letter
    int banned_pos = (banned.idx - 1) * 2 + (banned.sign > 0 ? 0 : 1);
    if (pick >= banned_pos) ++pick;
    w.push_back(nth_letter(pick));
  }
  return w;
}

Int count_reduced_words(int rank, int length) {
  if (length < 1) throw std::invalid_argument("length must be >= 1");
  Int n = 2 * rank;
  Int base = 2 * rank - 1;
  Int p;
  mpz_pow_ui(p.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(length - 1));
  return n * p;
}

}  // namespace sforge
