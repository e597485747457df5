#include "sforge/rational.hpp"

#include <stdexcept>

namespace sforge {

Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

std::string rat_to_string(const Rat& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

int rat_rank(RatMat m) {
  int rank = 0;
  if (m.empty()) return 0;
  size_t cols = m[0].size();
  size_t row = 0;
  for (size_t col = 0; col < cols && row < m.size(); ++col) {
    size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    for (size_t i = row + 1; i < m.size(); ++i) {
      if (m[i][col] == 0) continue;
      Rat f = m[i][col] / m[row][col];
      for (size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
    }
    ++row;
    ++rank;
  }
  return rank;
}

std::vector<int> independent_rows(const RatMat& m) {
  std::vector<int> picked;
  RatMat basis;  // kept in echelon form
  if (m.empty()) return picked;
  for (size_t i = 0; i < m.size(); ++i) {
    RatVec v = m[i];
    // reduce v against the echelon basis
    for (const auto& b : basis) {
      size_t lead = 0;
      while (lead < b.size() && b[lead] == 0) ++lead;
      if (lead == b.size()) continue;
      if (v[lead] != 0) {
        Rat f = v[lead] / b[lead];
        for (size_t j = lead; j < v.size(); ++j) v[j] -= f * b[j];
      }
    }
    bool nonzero = false;
    for (const auto& x : v)
      if (x != 0) {
        nonzero = true;
        break;
      }
    if (nonzero) {
      picked.push_back(static_cast<int>(i));
      basis.push_back(std::move(v));
      // keep basis ordered by leading index for the reduction loop
      for (size_t a = basis.size(); a-- > 1;) {
        auto lead_of = [](const RatVec& r) {
          size_t l = 0;
          while (l < r.size() && r[l] == 0) ++l;
          return l;
        };
        if (lead_of(basis[a]) < lead_of(basis[a - 1]))
          std::swap(basis[a], basis[a - 1]);
        else
          break;
      }
    }
  }
  return picked;
}

Int common_denominator(const RatVec& v) {
  Int l = 1;
  for (const auto& r : v) {
    Int d = r.get_den();
    Int g;
    mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    l = l / g * d;
  }
  return l;
}

}  // namespace sforge
