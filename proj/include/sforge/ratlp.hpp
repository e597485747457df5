#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sforge/rational.hpp"

namespace sforge {

// Exact rational linear program in the form
//   minimize c.x  subject to  A x = b,  x >= lower
// Rows are stored sparse; everything is solved in exact arithmetic.
struct RationalLP {
  int ncols = 0;
  std::vector<Rat> objective;  // empty means all-zero (feasibility)
  struct Row {
    std::vector<std::pair<int, Rat>> coeffs;
    Rat rhs;
  };
  std::vector<Row> rows;
  std::vector<Rat> lower;  // empty means all-zero

  int add_col(const Rat& cost = Rat(0), const Rat& lb = Rat(0));
  void add_entry(int row, int col, const Rat& v);
  int add_row(const Rat& rhs);

  // Debug dump: one constraint per line, exact fractions.
  std::string dump() const;
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
  LPStatus status = LPStatus::Infeasible;
  std::vector<Rat> x;
  Rat objective;
  std::vector<Rat> duals;       // one per row, valid at optimality
  std::vector<int> basis;       // basic structural columns (-1 for artificial)
  long pivots = 0;
};

// Two-phase exact simplex. Deterministic: largest-coefficient pivoting with a
// permanent switch to Bland's rule after a run of degenerate pivots, so
// termination is guaranteed.
LPSolution lp_solve(const RationalLP& lp);

// Any y with M y = x, y >= bound (componentwise), or infeasible.
LPSolution feasible_point(const RatMat& m, const RatVec& x, const Rat& bound);

// Certificate that x lies in the interior of the cone spanned by the columns
// of V, relative to a subspace of the stated dimension (Lemma of the cone
// interior: V spans, and x = sum t_i v_i with all t_i >= bound > 0).
struct ConeCertificate {
  bool accepted = false;
  std::string reason;
  Rat bound;                    // positive lower bound achieved on the t_i
  std::vector<Rat> coeffs;      // t
  std::vector<int> spanning;    // column indices forming a basis witness
};

ConeCertificate cone_interior_certificate(const RatMat& v_columns, const RatVec& x,
                                          int ambient_dim);

// Re-check a certificate by multiplication and an exact rank computation.
bool verify_cone_certificate(const RatMat& v_columns, const RatVec& x,
                             int ambient_dim, const ConeCertificate& cert);

}  // namespace sforge
