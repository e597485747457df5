#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sforge/ratlp.hpp"

using namespace sforge;

namespace {

// Exhaustive vertex oracle for small LPs: enumerate all square subsystems of
// {rows} over column subsets, keep feasible basic solutions, take the best.
struct OracleResult {
  bool feasible = false;
  Rat best;
};

OracleResult vertex_oracle(const RationalLP& lp) {
  OracleResult res;
  int n = lp.ncols;
  int m = static_cast<int>(lp.rows.size());
  RatMat a(m, RatVec(n, Rat(0)));
  RatVec b(m);
  for (int i = 0; i < m; ++i) {
    b[i] = lp.rows[i].rhs;
    for (auto& [c, v] : lp.rows[i].coeffs) a[i][c] += v;
  }
  RatVec lower(n, Rat(0));
  for (int j = 0; j < n && j < static_cast<int>(lp.lower.size()); ++j)
    lower[j] = lp.lower[j];
  // adjust to y >= 0
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) b[i] -= a[i][j] * lower[j];

  // iterate over all subsets of columns of size <= m as candidate supports
  std::vector<int> idx;
  std::function<void(int, int)> rec = [&](int start, int need) {
    if (need == 0) {
      // solve a[.][idx] y = b by elimination (least squares not needed: take
      // any solution of the square/over system; reject if inconsistent)
      int k = static_cast<int>(idx.size());
      RatMat sys(m, RatVec(k + 1));
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < k; ++j) sys[i][j] = a[i][idx[j]];
        sys[i][k] = b[i];
      }
      // gaussian elimination
      int row = 0;
      std::vector<int> pivot_col;
      for (int col = 0; col < k && row < m; ++col) {
        int p = -1;
        for (int i = row; i < m; ++i)
          if (sys[i][col] != 0) {
            p = i;
            break;
          }
        if (p < 0) continue;
        std::swap(sys[p], sys[row]);
        for (int i = 0; i < m; ++i) {
          if (i == row || sys[i][col] == 0) continue;
          Rat f = sys[i][col] / sys[row][col];
          for (int j = col; j <= k; ++j) sys[i][j] -= f * sys[row][j];
        }
        pivot_col.push_back(col);
        ++row;
      }
      for (int i = row; i < m; ++i)
        if (sys[i][k] != 0) return;  // inconsistent
      if (static_cast<int>(pivot_col.size()) < k) return;  // underdetermined support
      RatVec y(k, Rat(0));
      for (int i = 0; i < row; ++i) y[i] = sys[i][k] / sys[i][pivot_col[i]];
      for (auto& v : y)
        if (v < 0) return;
      Rat obj(0);
      for (int j = 0; j < k; ++j)
        if (idx[j] < static_cast<int>(lp.objective.size()))
          obj += lp.objective[idx[j]] * (y[j]);
      // add the lower-bound shift cost
      for (int j = 0; j < n && j < static_cast<int>(lp.objective.size()); ++j)
        obj += lp.objective[j] * lower[j];
      if (!res.feasible || obj < res.best) {
        res.feasible = true;
        res.best = obj;
      }
      return;
    }
    if (start >= n) return;
    for (int c = start; c < n; ++c) {
      idx.push_back(c);
      rec(c + 1, need - 1);
      idx.pop_back();
    }
  };
  for (int k = 0; k <= std::min(n, m); ++k) rec(0, k);
  return res;
}

}  // namespace

TEST_CASE("trivial minimization") {
  RationalLP lp;
  int x = lp.add_col(Rat(1), Rat(3) / 7);
  (void)x;
  auto s = lp_solve(lp);
  CHECK(s.status == LPStatus::Optimal);
  CHECK(s.objective == Rat(3) / 7);
  CHECK(s.x[0] == Rat(3) / 7);
}

TEST_CASE("infeasible system") {
  // x >= 1 and x <= 0 (x + s = 0, s >= 0)
  RationalLP lp;
  int x = lp.add_col(Rat(0), Rat(1));
  int s1 = lp.add_col();
  int r = lp.add_row(Rat(0));
  lp.add_entry(r, x, Rat(1));
  lp.add_entry(r, s1, Rat(1));
  auto s = lp_solve(lp);
  CHECK(s.status == LPStatus::Infeasible);
}

TEST_CASE("unbounded detection") {
  RationalLP lp;
  int x = lp.add_col(Rat(-1));
  int y = lp.add_col(Rat(0));
  int r = lp.add_row(Rat(1));
  lp.add_entry(r, x, Rat(1));
  lp.add_entry(r, y, Rat(-1));
  auto s = lp_solve(lp);
  CHECK(s.status == LPStatus::Unbounded);
}

TEST_CASE("exact fractions survive") {
  // min x + y s.t. 3x + 7y = 1, x,y >= 0  -> y = 1/7 at vertex
  RationalLP lp;
  int x = lp.add_col(Rat(1));
  int y = lp.add_col(Rat(1));
  int r = lp.add_row(Rat(1));
  lp.add_entry(r, x, Rat(3));
  lp.add_entry(r, y, Rat(7));
  auto s = lp_solve(lp);
  CHECK(s.status == LPStatus::Optimal);
  CHECK(s.objective == Rat(1) / 7);
}

TEST_CASE("random small LPs match the vertex oracle") {
  std::mt19937_64 rng(17);
  int checked = 0;
  for (int t = 0; t < 120; ++t) {
    RationalLP lp;
    int n = 2 + static_cast<int>(rng() % 5);
    int m = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < n; ++j)
      lp.add_col(Rat(static_cast<long>(rng() % 11) - 5));
    for (int i = 0; i < m; ++i) {
      int r = lp.add_row(Rat(static_cast<long>(rng() % 9)));
      for (int j = 0; j < n; ++j) {
        long c = static_cast<long>(rng() % 7) - 3;
        if (c != 0) lp.add_entry(r, j, Rat(c));
      }
    }
    auto got = lp_solve(lp);
    auto expect = vertex_oracle(lp);
    if (!expect.feasible) {
      CHECK(got.status == LPStatus::Infeasible);
      continue;
    }
    if (got.status == LPStatus::Unbounded) continue;  // oracle only sees vertices
    REQUIRE(got.status == LPStatus::Optimal);
    // unboundedness aside, the simplex optimum is a vertex value
    CHECK(got.objective <= expect.best);
    // verify constraints hold exactly
    for (const auto& row : lp.rows) {
      Rat lhs(0);
      for (auto& [c, v] : row.coeffs) lhs += v * got.x[c];
      CHECK(lhs == row.rhs);
    }
    bool bounded_setup = true;
    for (int j = 0; j < n; ++j)
      if (lp.objective[j] < 0) bounded_setup = false;
    if (bounded_setup) CHECK(got.objective == expect.best);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("feasible_point identity") {
  RatMat m(3, RatVec(3, Rat(0)));
  for (int i = 0; i < 3; ++i) m[i][i] = 1;
  RatVec one(3, Rat(1));
  auto s = feasible_point(m, one, Rat(1));
  CHECK(s.status == LPStatus::Optimal);
  for (int i = 0; i < 3; ++i) CHECK(s.x[i] == 1);

  RatVec zero(3, Rat(0));
  auto s2 = feasible_point(m, zero, Rat(1));
  CHECK(s2.status == LPStatus::Infeasible);
}

TEST_CASE("cone interior certificate") {
  // V = +-standard basis in R^2, x = 0: interior
  RatMat v = {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)}, {Rat(0), Rat(-1)}};
  RatVec x = {Rat(0), Rat(0)};
  auto cert = cone_interior_certificate(v, x, 2);
  CHECK(cert.accepted);
  CHECK(verify_cone_certificate(v, x, 2, cert));

  // no spanning: single vector in R^2
  RatMat v2 = {{Rat(1), Rat(0)}};
  RatVec x2 = {Rat(1), Rat(0)};
  auto cert2 = cone_interior_certificate(v2, x2, 2);
  CHECK_FALSE(cert2.accepted);
}

TEST_CASE("cone interior random full-rank with +-basis") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    int d = 2 + static_cast<int>(rng() % 3);
    RatMat v;
    for (int i = 0; i < d; ++i) {
      RatVec e(d, Rat(0));
      e[i] = 1;
      v.push_back(e);
      e[i] = -1;
      v.push_back(e);
    }
    for (int extra = 0; extra < 3; ++extra) {
      RatVec r(d);
      for (int i = 0; i < d; ++i) r[i] = Rat(static_cast<long>(rng() % 9) - 4);
      v.push_back(r);
    }
    RatVec x(d);
    for (int i = 0; i < d; ++i) x[i] = Rat(static_cast<long>(rng() % 9) - 4);
    auto cert = cone_interior_certificate(v, x, d);
    CHECK(cert.accepted);
    CHECK(verify_cone_certificate(v, x, d, cert));
  }
}

TEST_CASE("2D geometric oracle: interior vs boundary") {
  // cone spanned by (1,0) and (1,1) plus enough vectors to span R^2
  RatMat v = {{Rat(1), Rat(0)}, {Rat(1), Rat(1)}, {Rat(0), Rat(1)}, {Rat(-1), Rat(0)},
              {Rat(0), Rat(-1)}};
  // x on a supporting hyperplane of cone(v)? cone(v) here is everything, so
  // use a restricted set instead:
  RatMat w = {{Rat(1), Rat(0)}, {Rat(1), Rat(1)}};
  // spanning fails for ambient 2? no: rank(w) = 2, so the rank test passes,
  // and interiority is decided by the feasibility step.
  RatVec inside = {Rat(3), Rat(1)};   // strictly between the rays
  RatVec edge = {Rat(2), Rat(0)};     // on the ray (1,0)
  auto c1 = cone_interior_certificate(w, inside, 2);
  CHECK(c1.accepted);
  auto c2 = cone_interior_certificate(w, edge, 2);
  CHECK_FALSE(c2.accepted);
}
