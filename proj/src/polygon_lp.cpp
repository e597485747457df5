#include "sforge/polygon_lp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace sforge {

namespace {

struct ColumnGen {
  const GluingProblem& gp;
  const Traintrack& t;
  PolygonSet pieces;
  std::vector<std::pair<int, int>> rect_of_turn_pair;  // unused; kept simple

  bool turn_bigon_only(int turn) const {
    return !gp.turn_bigon_only.empty() && gp.turn_bigon_only[turn];
  }
  bool turn_exclusive(int turn) const {
    return !gp.turn_exclusive.empty() && gp.turn_exclusive[turn];
  }

  bool rect_allowed(const Rectangle& r) const {
    if (gp.forbid_exclusive_pair_rects && !gp.circle_exclusive.empty()) {
      // both sides on exclusive circles: forbidden
      int ca = circle_of_edge(oe_edge(r.ea));
      int cb = circle_of_edge(oe_edge(r.eb));
      if (gp.circle_exclusive[ca] && gp.circle_exclusive[cb]) return false;
    }
    for (auto [s, tt] : internal_edges(r)) {
      if (turn_exclusive(s) && turn_exclusive(tt)) return false;
      if (turn_bigon_only(s) && turn_bigon_only(tt)) return false;
    }
    return true;
  }

  bool triangle_allowed(int a, int b, int c) const {
    if (a == b && b == c) return false;
    int exclusive = 0;
    for (int x : {a, b, c}) {
      if (turn_bigon_only(x)) return false;  // would make its vertex 3-valent
      if (turn_exclusive(x)) ++exclusive;
    }
    return exclusive <= 1;
  }

  int circle_of_edge(int edge) const {
    auto it = edge_circle.find(edge);
    return it == edge_circle.end() ? -1 : it->second;
  }
  std::map<int, int> edge_circle;

  explicit ColumnGen(const GluingProblem& g) : gp(g), t(g.ct->track) {
    for (size_t c = 0; c < gp.ct->circles.size(); ++c)
      for (int e : gp.ct->circles[c].edge_ids) edge_circle[e] = static_cast<int>(c);
    PolygonSet all;
    // rectangles over a chain track have forced flanks
    auto in_by = t.turns_in_by_oe();
    auto out_by = t.turns_out_by_oe();
    size_t noe = 2 * t.g.edges.size();
    for (size_t ea = 0; ea < noe; ++ea) {
      if (in_by[ea].empty()) continue;
      Letter la = oe_letter(t.g, static_cast<int>(ea));
      for (size_t eb = ea; eb < noe; ++eb) {
        if (in_by[eb].empty()) continue;
        if (!(oe_letter(t.g, static_cast<int>(eb)) == la.inverse())) continue;
        Rectangle r;
        r.ea = static_cast<int>(ea);
        r.eb = static_cast<int>(eb);
        r.pre_a = out_by[ea][0];
        r.post_a = in_by[ea][0];
        r.pre_b = out_by[eb][0];
        r.post_b = in_by[eb][0];
        if (rect_allowed(r)) pieces.rectangles.push_back(r);
      }
    }
  }
};

struct RowKey {
  int s, t;  // canonical: s < t, or s == t (self pair, trivially balanced)
};

class Solver {
 public:
  explicit Solver(const GluingProblem& g) : gp(g), gen(g), track(g.ct->track) {}

  GluingSolution run() {
    GluingSolution out;
    // active columns: all rectangles + a seed set of triangles
    for (size_t i = 0; i < gen.pieces.rectangles.size(); ++i)
      active_rects.push_back(static_cast<int>(i));
    seed_triangles();
    for (int round = 0; round < gp.max_rounds; ++round) {
      LPSolution sol = solve_current(true);
      if (sol.status != LPStatus::Optimal)
        throw std::logic_error("deviation LP cannot be infeasible");
      Rat dev_mass(0);
      for (size_t j = last_ncols; j < sol.x.size(); ++j) dev_mass += sol.x[j];
      if (dev_mass > 0) {
        // infeasible so far: try to price a triangle against the duals
        if (!price_and_add(sol)) {
          out.reason = "no gluing exists (deviation stays positive)";
          return out;
        }
        continue;
      }
      // deviation zero: check matching violations among used pieces
      if (add_violated_rows(sol)) continue;
      // genuinely feasible; re-solve without deviations for a clean vertex
      LPSolution clean = solve_current(false);
      if (clean.status != LPStatus::Optimal) {
        // numerically impossible: deviation-free system was satisfiable
        throw std::logic_error("clean solve failed after feasibility");
      }
      if (gp.minimize_triangles) {
        // optimality pricing over the full triangle universe
        if (price_and_add(clean)) continue;
      }
      if (add_violated_rows(clean)) continue;
      return extract(clean);
    }
    GluingSolution fail;
    fail.reason = "round budget exhausted";
    return fail;
  }

 private:
  const GluingProblem& gp;
  ColumnGen gen;
  const Traintrack& track;
  std::vector<int> active_rects;
  std::vector<Triangle> active_tris;
  std::set<Triangle> active_tri_set;
  std::map<std::pair<int, int>, int> row_of_pair;  // canonical (s<t) -> row id
  std::vector<std::pair<int, int>> pair_of_row;

  std::vector<std::pair<int, int>> piece_edges(int col) const {
    if (col < static_cast<int>(active_rects.size()))
      return internal_edges(gen.pieces.rectangles[active_rects[col]]);
    return internal_edges(active_tris[col - active_rects.size()]);
  }
  bool col_is_tri(int col) const {
    return col >= static_cast<int>(active_rects.size());
  }

  void seed_triangles() {
    // triangles all of whose sides reverse rectangle internal edges; these
    // are the fan triangles of all-rectangle vertices and give the solver a
    // useful starting basis
    std::set<std::pair<int, int>> rev;
    for (int ri : active_rects)
      for (auto [s, t] : internal_edges(gen.pieces.rectangles[ri]))
        rev.insert({t, s});
    std::map<int, std::vector<int>> succ;
    for (auto& [s, t] : rev) succ[s].push_back(t);
    for (auto& [a, bs] : succ)
      for (int b : bs) {
        if (!succ.count(b)) continue;
        for (int c : succ.at(b)) {
          if (!rev.count({c, a})) continue;
          if (!gen.triangle_allowed(a, b, c)) continue;
          add_triangle(a, b, c);
        }
      }
  }

  void add_triangle(int a, int b, int c) {
    Triangle t1{a, b, c}, t2{b, c, a}, t3{c, a, b};
    Triangle canon = std::min({t1, t2, t3});
    if (active_tri_set.insert(canon).second) active_tris.push_back(canon);
  }

  int row_for_pair(int s, int t) {
    if (s == t) return -1;  // self pairs are trivially balanced
    auto key = std::make_pair(std::min(s, t), std::max(s, t));
    auto it = row_of_pair.find(key);
    if (it != row_of_pair.end()) return it->second;
    int id = static_cast<int>(pair_of_row.size());
    row_of_pair[key] = id;
    pair_of_row.push_back(key);
    return id;
  }

  // build + solve the LP over the active sets; with_dev adds deviation
  // columns on every row and minimizes their total mass
  LPSolution solve_current(bool with_dev) {
    RationalLP lp;
    int ncols = static_cast<int>(active_rects.size() + active_tris.size());
    std::mt19937_64 prng(gp.perturb_seed);
    for (int j = 0; j < ncols; ++j) {
      Rat cost(0);
      if (gp.minimize_triangles && col_is_tri(j)) cost += 1;
      if (gp.perturb_seed != 0) {
        long r = static_cast<long>(prng() % 1024);
        cost += Rat(r) / Rat(Int(1) << 40);
      }
      lp.add_col(cost);
    }
    // boundary rows
    std::vector<int> boundary_row(track.turns.size());
    for (size_t ti = 0; ti < track.turns.size(); ++ti)
      boundary_row[ti] = lp.add_row(gp.ct->weight[ti]);
    Rat half(1, 2);
    for (int j = 0; j < static_cast<int>(active_rects.size()); ++j) {
      const auto& r = gen.pieces.rectangles[active_rects[j]];
      for (int flank : {r.pre_a, r.post_a, r.pre_b, r.post_b})
        lp.add_entry(boundary_row[flank], j, half);
    }
    // matching rows known so far
    int row_base = static_cast<int>(lp.rows.size());
    for (size_t k = 0; k < pair_of_row.size(); ++k) lp.add_row(Rat(0));
    for (int j = 0; j < ncols; ++j)
      for (auto [s, t] : piece_edges(j)) {
        if (s == t) continue;
        auto key = std::make_pair(std::min(s, t), std::max(s, t));
        auto it = row_of_pair.find(key);
        if (it == row_of_pair.end()) continue;  // row not materialized yet
        lp.add_entry(row_base + it->second, j, s < t ? Rat(1) : Rat(-1));
      }
    // pinned triangle mass
    if (gp.pinned_triangle_mass) {
      int row = lp.add_row(*gp.pinned_triangle_mass);
      for (int j = 0; j < ncols; ++j)
        if (col_is_tri(j)) lp.add_entry(row, j, Rat(1));
    }
    if (with_dev) {
      int nrows = static_cast<int>(lp.rows.size());
      for (int r = 0; r < nrows; ++r) {
        int dplus = lp.add_col(Rat(1));
        int dminus = lp.add_col(Rat(1));
        lp.add_entry(r, dplus, Rat(1));
        lp.add_entry(r, dminus, Rat(-1));
      }
    }
    last_row_base = row_base;
    last_ncols = ncols;
    return lp_solve(lp);
  }

  // adds matching rows violated by the used pieces; true if any were added
  bool add_violated_rows(const LPSolution& sol) {
    std::map<std::pair<int, int>, Rat> count;
    for (int j = 0; j < last_ncols; ++j) {
      if (sol.x[j] == 0) continue;
      for (auto [s, t] : piece_edges(j)) count[{s, t}] += sol.x[j];
    }
    bool added = false;
    for (auto& [e, c] : count) {
      if (e.first == e.second) continue;
      auto rev = std::make_pair(e.second, e.first);
      Rat other = count.count(rev) ? count[rev] : Rat(0);
      if (c != other) {
        auto key = std::make_pair(std::min(e.first, e.second),
                                  std::max(e.first, e.second));
        if (!row_of_pair.count(key)) {
          row_for_pair(e.first, e.second);
          added = true;
        }
      }
    }
    return added;
  }

  // prices the implicit triangle universe against the duals; adds the most
  // negative candidates. Floating preselection, exact verification.
  bool price_and_add(const LPSolution& sol) {
    auto pair_dual = [&](int s, int t) -> Rat {
      if (s == t) return Rat(0);
      auto key = std::make_pair(std::min(s, t), std::max(s, t));
      auto it = row_of_pair.find(key);
      if (it == row_of_pair.end()) return Rat(0);
      Rat y = sol.duals[last_row_base + it->second];
      return s < t ? y : -y;
    };
    Rat tau_dual(0);
    if (gp.pinned_triangle_mass) tau_dual = sol.duals.back();  // tau row is last
    int nturns = static_cast<int>(track.turns.size());
    // dense double approximation of the ordered-pair duals (sparse source)
    std::vector<std::vector<double>> d(nturns, std::vector<double>(nturns, 0.0));
    for (auto& [key, row] : row_of_pair) {
      double y = sol.duals[last_row_base + row].get_d();
      d[key.first][key.second] = y;
      d[key.second][key.first] = -y;
    }
    double base_cost = gp.minimize_triangles ? 1.0 : 0.0;
    double tau_d = tau_dual.get_d();
    struct Cand {
      double red;
      int a, b, c;
    };
    std::vector<Cand> shortlist;
    for (int a = 0; a < nturns; ++a) {
      if (!gp.turn_bigon_only.empty() && gp.turn_bigon_only[a]) continue;
      for (int b = 0; b < nturns; ++b) {
        if (!gp.turn_bigon_only.empty() && gp.turn_bigon_only[b]) continue;
        double dab = d[a][b];
        for (int c = 0; c < nturns; ++c) {
          double red = base_cost - dab - d[b][c] - d[c][a] - tau_d;
          if (red < -1e-9) shortlist.push_back({red, a, b, c});
        }
      }
    }
    std::sort(shortlist.begin(), shortlist.end(),
              [](const Cand& x, const Cand& y) { return x.red < y.red; });
    size_t added = 0;
    Rat rat_base = gp.minimize_triangles ? Rat(1) : Rat(0);
    for (const auto& cand : shortlist) {
      if (added >= 64) break;
      if (!gen.triangle_allowed(cand.a, cand.b, cand.c)) continue;
      Rat red = rat_base - pair_dual(cand.a, cand.b) - pair_dual(cand.b, cand.c) -
                pair_dual(cand.c, cand.a) - tau_dual;
      if (red >= 0) continue;
      Triangle canon = std::min({Triangle{cand.a, cand.b, cand.c},
                                 Triangle{cand.b, cand.c, cand.a},
                                 Triangle{cand.c, cand.a, cand.b}});
      if (active_tri_set.count(canon)) continue;
      add_triangle(cand.a, cand.b, cand.c);
      ++added;
    }
    return added > 0;
  }

  GluingSolution extract(const LPSolution& sol) {
    GluingSolution out;
    out.feasible = true;
    out.triangle_mass = 0;
    // compact the pieces to the active set
    for (int ri : active_rects) out.pieces.rectangles.push_back(gen.pieces.rectangles[ri]);
    out.pieces.triangles = active_tris;
    for (int j = 0; j < last_ncols; ++j) {
      if (sol.x[j] == 0) continue;
      out.weight.emplace_back(j, sol.x[j]);
      if (col_is_tri(j)) out.triangle_mass += sol.x[j];
    }
    return out;
  }

  int last_row_base = 0;
  int last_ncols = 0;
};

}  // namespace

GluingSolution solve_gluing(const GluingProblem& gp) {
  if (!gp.ct) throw std::invalid_argument("solve_gluing: no chain track");
  Solver s(gp);
  return s.run();
}

}  // namespace sforge
