#pragma once

#include <compare>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sforge/rational.hpp"

namespace sforge {

// One generator or inverse generator of a free group. Generators are indexed
// from 1; the text form is a..z for generators 1..26 (A..Z for inverses) and
// x27/X27-style tokens beyond that.
struct Letter {
  int idx = 0;   // 1..rank
  int sign = 0;  // +1 or -1

  Letter() = default;
  Letter(int i, int s) : idx(i), sign(s) {}
  Letter inverse() const { return Letter(idx, -sign); }
  auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

std::string letter_to_string(const Letter& l);
std::string word_to_string(const Word& w);
// Parses a word in the text alphabet; "" and "1" both denote the empty word.
Word parse_word(const std::string& s);

bool is_reduced(const Word& w);
bool is_cyclically_reduced(const Word& w);

// Free reduction; idempotent, may return the empty word.
Word reduce(const Word& w);
// Reverse the sequence and flip signs.
Word invert(const Word& w);
Word concat(const Word& a, const Word& b);
Word word_pow(const Word& w, int n);
int max_generator(const Word& w);

// A word up to cyclic rotation. The canonical representative (the
// lexicographically least rotation) is stored, so equality is decidable.
// No free reduction is performed: unreduced cyclic words are first-class.
class CyclicWord {
 public:
  CyclicWord() = default;
  explicit CyclicWord(Word w);
  explicit CyclicWord(const std::string& s) : CyclicWord(parse_word(s)) {}

  const Word& letters() const { return rep_; }
  size_t size() const { return rep_.size(); }
  bool empty() const { return rep_.empty(); }
  auto operator<=>(const CyclicWord&) const = default;

 private:
  Word rep_;
};

std::string to_string(const CyclicWord& w);
// Representative of the cyclically reduced conjugacy class.
CyclicWord cyclic_reduce(const CyclicWord& w);
bool is_cyclically_reduced(const CyclicWord& w);
CyclicWord invert(const CyclicWord& w);

// Formal nonnegative-rational combination of nontrivial cyclic words.
class Chain {
 public:
  struct Term {
    CyclicWord word;
    Rat coeff;
  };

  Chain() = default;
  // Merges duplicates, drops zero coefficients; throws on negative
  // coefficients or trivial words.
  void add(const CyclicWord& w, const Rat& c);
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int max_generator() const;

  // One term per line: "<coeff> <word>".
  static Chain parse(const std::string& text);
  std::string to_text() const;

 private:
  std::vector<Term> terms_;  // sorted by word
};

// Signed letter counts; entry i-1 counts generator i.
using HomologyVector = std::vector<Rat>;

HomologyVector abelianize(const Word& w, int rank);
HomologyVector abelianize(const CyclicWord& w, int rank);
HomologyVector abelianize(const Chain& c, int rank);

// Endomorphism of a rank-k free group given by the images of the generators.
class Endomorphism {
 public:
  Endomorphism() = default;
  // Each image must be nonempty and reduced.
  Endomorphism(int rank, std::vector<Word> images);

  int rank() const { return rank_; }
  const Word& image(int gen) const { return images_[gen - 1]; }

  // Letterwise substitution; output is NOT reduced.
  Word apply(const Letter& l) const;
  Word apply(const Word& w) const;
  CyclicWord apply(const CyclicWord& w) const;
  // phi^n by iterated substitution without cancellation.
  Word apply_iterated(const Word& w, int n) const;

  // Abelianization matrix, column per generator.
  std::vector<std::vector<Int>> ab_matrix() const;

  static Endomorphism identity(int rank);
  // One line per generator: "a -> ab".
  static Endomorphism parse(const std::string& text);
  std::string to_text() const;

 private:
  int rank_ = 0;
  std::vector<Word> images_;
};

// Uniform over the 2k(2k-1)^(n-1) reduced words of length n.
Word random_reduced_word(int rank, int length, std::mt19937_64& rng);
Int count_reduced_words(int rank, int length);

}  // namespace sforge
