#include "sforge/ratlp.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace sforge {

int RationalLP::add_col(const Rat& cost, const Rat& lb) {
  if (static_cast<int>(objective.size()) < ncols) objective.resize(ncols, Rat(0));
  if (static_cast<int>(lower.size()) < ncols) lower.resize(ncols, Rat(0));
  objective.push_back(cost);
  lower.push_back(lb);
  return ncols++;
}

void RationalLP::add_entry(int row, int col, const Rat& v) {
  if (v == 0) return;
  rows[row].coeffs.emplace_back(col, v);
}

int RationalLP::add_row(const Rat& rhs) {
  rows.push_back(Row{{}, rhs});
  return static_cast<int>(rows.size()) - 1;
}

std::string RationalLP::dump() const {
  std::ostringstream out;
  for (const auto& r : rows) {
    bool first = true;
    for (const auto& [c, v] : r.coeffs) {
      out << (first ? "" : " + ") << rat_to_string(v) << "*x" << c;
      first = false;
    }
    if (first) out << "0";
    out << " = " << rat_to_string(r.rhs) << "\n";
  }
  return out.str();
}

namespace {

// Dense two-phase tableau. Layout per row: structural columns, artificial
// columns (initially an identity), rhs. The artificial block always holds
// B^-1, which also yields dual values from the cost row.
class Simplex {
 public:
  explicit Simplex(const RationalLP& lp) : lp_(lp) {
    m_ = static_cast<int>(lp.rows.size());
    n_ = lp.ncols;
    width_ = n_ + m_ + 1;
    lower_ = lp.lower;
    lower_.resize(n_, Rat(0));
    obj_ = lp.objective;
    obj_.resize(n_, Rat(0));

    tab_.assign(m_, std::vector<Rat>(width_, Rat(0)));
    basis_.assign(m_, -1);
    for (int i = 0; i < m_; ++i) {
      Rat rhs = lp.rows[i].rhs;
      std::vector<Rat> dense(n_, Rat(0));
      for (const auto& [c, v] : lp.rows[i].coeffs) dense[c] += v;
      // shift out the lower bounds: x = y + lower
      for (int j = 0; j < n_; ++j)
        if (dense[j] != 0 && lower_[j] != 0) rhs -= dense[j] * lower_[j];
      int sign = rhs < 0 ? -1 : 1;
      for (int j = 0; j < n_; ++j)
        if (dense[j] != 0) tab_[i][j] = sign * dense[j];
      tab_[i][n_ + i] = 1;
      tab_[i][width_ - 1] = sign * rhs;
      basis_[i] = n_ + i;  // artificial
    }
  }

  LPSolution solve() {
    LPSolution sol;
    // Phase 1: minimize the sum of artificials. With the artificial basis,
    // reduced costs are 1 - (column sum) on artificials and -(column sum)
    // on structural columns.
    cost_.assign(width_, Rat(0));
    for (int j = n_; j < width_ - 1; ++j) cost_[j] = 1;
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < width_; ++j)
        if (tab_[i][j] != 0) cost_[j] -= tab_[i][j];
    }
    if (!iterate(sol)) return sol;  // unbounded cannot happen in phase 1
    if (-cost_[width_ - 1] != 0) {
      sol.status = LPStatus::Infeasible;
      sol.pivots = pivots_;
      return sol;
    }
    // Drive basic artificials out where possible.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      for (int j = 0; j < n_; ++j)
        if (tab_[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
    // Phase 2.
    cost_.assign(width_, Rat(0));
    for (int j = 0; j < n_; ++j) cost_[j] = obj_[j];
    for (int i = 0; i < m_; ++i) {
      int b = basis_[i];
      if (b < n_ && obj_[b] != 0) {
        Rat f = obj_[b];
        for (int j = 0; j < width_; ++j) cost_[j] -= f * tab_[i][j];
      }
    }
    degenerate_streak_ = 0;
    bland_ = false;
    if (!iterate(sol)) {
      sol.status = LPStatus::Unbounded;
      sol.pivots = pivots_;
      return sol;
    }
    sol.status = LPStatus::Optimal;
    sol.x.assign(n_, Rat(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] < n_) sol.x[basis_[i]] = tab_[i][width_ - 1];
    for (int j = 0; j < n_; ++j) sol.x[j] += lower_[j];
    sol.objective = 0;
    for (int j = 0; j < n_; ++j)
      if (sol.x[j] != 0 && obj_[j] != 0) sol.objective += obj_[j] * sol.x[j];
    sol.duals.assign(m_, Rat(0));
    for (int i = 0; i < m_; ++i) sol.duals[i] = -cost_[n_ + i];
    sol.basis.assign(m_, -1);
    for (int i = 0; i < m_; ++i) sol.basis[i] = basis_[i] < n_ ? basis_[i] : -1;
    sol.pivots = pivots_;
    return sol;
  }

 private:
  // Runs simplex iterations; returns false when the problem is unbounded.
  bool iterate(LPSolution&) {
    for (;;) {
      int enter = choose_entering();
      if (enter < 0) return true;
      int leave = choose_leaving(enter);
      if (leave < 0) return false;
      if (tab_[leave][width_ - 1] == 0)
        ++degenerate_streak_;
      else
        degenerate_streak_ = 0;
      if (degenerate_streak_ > 64) bland_ = true;
      pivot(leave, enter);
    }
  }

  // Artificials never enter a basis in either phase; only structural columns
  // are candidates.
  int choose_entering() const {
    if (bland_) {
      for (int j = 0; j < n_; ++j)
        if (cost_[j] < 0) return j;
      return -1;
    }
    int best = -1;
    for (int j = 0; j < n_; ++j)
      if (cost_[j] < 0 && (best < 0 || cost_[j] < cost_[best])) best = j;
    return best;
  }

  int choose_leaving(int enter) const {
    int best = -1;
    Rat best_ratio;
    for (int i = 0; i < m_; ++i) {
      if (tab_[i][enter] <= 0) continue;
      Rat ratio = tab_[i][width_ - 1] / tab_[i][enter];
      if (best < 0 || ratio < best_ratio ||
          (ratio == best_ratio && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  void pivot(int row, int col) {
    ++pivots_;
    Rat p = tab_[row][col];
    if (p != 1) {
      Rat inv = 1 / p;
      for (auto& v : tab_[row])
        if (v != 0) v *= inv;
    }
    for (int i = 0; i < m_; ++i) {
      if (i == row) continue;
      Rat f = tab_[i][col];
      if (f == 0) continue;
      auto& dst = tab_[i];
      const auto& src = tab_[row];
      for (int j = 0; j < width_; ++j)
        if (src[j] != 0) dst[j] -= f * src[j];
    }
    Rat f = cost_[col];
    if (f != 0) {
      const auto& src = tab_[row];
      for (int j = 0; j < width_; ++j)
        if (src[j] != 0) cost_[j] -= f * src[j];
    }
    basis_[row] = col;
  }

  const RationalLP& lp_;
  int m_ = 0, n_ = 0, width_ = 0;
  std::vector<std::vector<Rat>> tab_;
  std::vector<Rat> cost_;
  std::vector<Rat> obj_;
  std::vector<Rat> lower_;
  std::vector<int> basis_;
  long pivots_ = 0;
  int degenerate_streak_ = 0;
  bool bland_ = false;
};

}  // namespace

LPSolution lp_solve(const RationalLP& lp) {
  for (const auto& r : lp.rows)
    for (const auto& [c, v] : r.coeffs)
      if (c < 0 || c >= lp.ncols) throw std::invalid_argument("lp column out of range");
  Simplex s(lp);
  return s.solve();
}

LPSolution feasible_point(const RatMat& m, const RatVec& x, const Rat& bound) {
  RationalLP lp;
  size_t rows = m.size();
  size_t cols = rows ? m[0].size() : 0;
  for (size_t j = 0; j < cols; ++j) lp.add_col(Rat(0), bound);
  for (size_t i = 0; i < rows; ++i) {
    int r = lp.add_row(x[i]);
    for (size_t j = 0; j < cols; ++j) lp.add_entry(r, static_cast<int>(j), m[i][j]);
  }
  return lp_solve(lp);
}

ConeCertificate cone_interior_certificate(const RatMat& v_columns, const RatVec& x,
                                          int ambient_dim) {
  ConeCertificate cert;
  size_t k = v_columns.size();
  if (k == 0) {
    cert.reason = "no columns";
    return cert;
  }
  size_t dim = v_columns[0].size();
  // rank check: the columns must span the ambient subspace
  RatMat rows(k, RatVec(dim));
  for (size_t i = 0; i < k; ++i) rows[i] = v_columns[i];
  auto indep = independent_rows(rows);
  if (static_cast<int>(indep.size()) < ambient_dim) {
    cert.reason = "columns do not span (rank " + std::to_string(indep.size()) +
                  " < " + std::to_string(ambient_dim) + ")";
    return cert;
  }
  // feasibility with a retried positive lower bound: 1, 1/2, 1/4, ...
  RatMat m(dim, RatVec(k));
  for (size_t i = 0; i < dim; ++i)
    for (size_t j = 0; j < k; ++j) m[i][j] = v_columns[j][i];
  Rat bound(1);
  for (int attempt = 0; attempt < 7; ++attempt) {
    LPSolution s = feasible_point(m, x, bound);
    if (s.status == LPStatus::Optimal) {
      cert.accepted = true;
      cert.bound = bound;
      cert.coeffs = s.x;
      cert.spanning = indep;
      return cert;
    }
    bound /= 2;
  }
  cert.reason = "no feasible expression with positive coefficients";
  return cert;
}

bool verify_cone_certificate(const RatMat& v_columns, const RatVec& x,
                             int ambient_dim, const ConeCertificate& cert) {
  if (!cert.accepted) return false;
  if (cert.bound <= 0) return false;
  size_t k = v_columns.size();
  if (cert.coeffs.size() != k) return false;
  size_t dim = k ? v_columns[0].size() : x.size();
  for (const auto& t : cert.coeffs)
    if (t < cert.bound) return false;
  RatVec sum(dim, Rat(0));
  for (size_t j = 0; j < k; ++j)
    for (size_t i = 0; i < dim; ++i)
      if (v_columns[j][i] != 0) sum[i] += cert.coeffs[j] * v_columns[j][i];
  for (size_t i = 0; i < dim; ++i)
    if (sum[i] != x[i]) return false;
  RatMat rows;
  for (int idx : cert.spanning) rows.push_back(v_columns[idx]);
  return rat_rank(rows) >= ambient_dim;
}

}  // namespace sforge
