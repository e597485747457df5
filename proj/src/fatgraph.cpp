#include "sforge/fatgraph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sforge {

int Fatgraph::add_vertex() {
  order.emplace_back();
  return nv++;
}

int Fatgraph::add_edge(int label) {
  edges.push_back({label});
  return static_cast<int>(edges.size()) - 1;
}

std::vector<int> Fatgraph::half_vertex() const {
  std::vector<int> hv(2 * edges.size(), -1);
  for (int v = 0; v < nv; ++v)
    for (int h : order[v]) {
      if (h < 0 || h >= static_cast<int>(hv.size()) || hv[h] >= 0)
        throw std::invalid_argument("bad half-edge placement");
      hv[h] = v;
    }
  for (int h : hv)
    if (h < 0) throw std::invalid_argument("unplaced half-edge");
  return hv;
}

LabeledGraph Fatgraph::skeleton() const {
  auto hv = half_vertex();
  LabeledGraph g;
  g.nv = nv;
  for (size_t e = 0; e < edges.size(); ++e)
    g.add_edge(hv[half_tail(static_cast<int>(e))], hv[half_head(static_cast<int>(e))],
               edges[e].label);
  return g;
}

void Fatgraph::validate() const { (void)half_vertex(); }

SurfaceData fatten(const Fatgraph& x) {
  SurfaceData sd;
  auto hv = x.half_vertex();
  // position of each half-edge within its vertex order
  std::vector<int> pos(2 * x.edges.size());
  for (int v = 0; v < x.nv; ++v)
    for (size_t i = 0; i < x.order[v].size(); ++i) pos[x.order[v][i]] = static_cast<int>(i);

  // boundary successor: arrive through h, leave through the previous
  // half-edge in the cyclic order at hv[h]
  auto successor = [&](int oe) {
    int e = oe_edge(oe);
    int h_arrive = oe_is_rev(oe) ? Fatgraph::half_tail(e) : Fatgraph::half_head(e);
    int v = hv[h_arrive];
    const auto& ord = x.order[v];
    int p = pos[h_arrive];
    int h_leave = ord[(p + ord.size() - 1) % ord.size()];
    int e2 = h_leave / 2;
    return (h_leave % 2 == 0) ? oe_fwd(e2) : oe_rev(e2);
  };

  std::vector<char> used(2 * x.edges.size(), 0);
  LabeledGraph skel = x.skeleton();
  for (int start = 0; start < static_cast<int>(2 * x.edges.size()); ++start) {
    if (used[start]) continue;
    std::vector<int> cyc;
    Word w;
    int cur = start;
    do {
      used[cur] = 1;
      cyc.push_back(cur);
      w.push_back(oe_letter(skel, cur));
      cur = successor(cur);
    } while (cur != start);
    sd.boundary_oes.push_back(std::move(cyc));
    sd.boundary_words.emplace_back(std::move(w));
  }
  sd.chi = x.nv - static_cast<int>(x.edges.size());

  // components and their chi
  sd.component_of_vertex.assign(x.nv, -1);
  sd.components = 0;
  std::vector<std::vector<int>> adj(x.nv);
  for (size_t e = 0; e < x.edges.size(); ++e) {
    adj[hv[2 * e]].push_back(hv[2 * e + 1]);
    adj[hv[2 * e + 1]].push_back(hv[2 * e]);
  }
  for (int s = 0; s < x.nv; ++s) {
    if (sd.component_of_vertex[s] >= 0) continue;
    std::vector<int> stack{s};
    sd.component_of_vertex[s] = sd.components;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : adj[v])
        if (sd.component_of_vertex[u] < 0) {
          sd.component_of_vertex[u] = sd.components;
          stack.push_back(u);
        }
    }
    sd.components++;
  }
  sd.chi_of_component.assign(sd.components, 0);
  for (int v = 0; v < x.nv; ++v) sd.chi_of_component[sd.component_of_vertex[v]]++;
  for (size_t e = 0; e < x.edges.size(); ++e)
    sd.chi_of_component[sd.component_of_vertex[hv[2 * e]]]--;
  for (const auto& cyc : sd.boundary_oes)
    sd.component_of_boundary.push_back(
        sd.component_of_vertex[hv[2 * oe_edge(cyc[0])]]);
  return sd;
}

bool is_reduced_fatgraph(const Fatgraph& x) {
  auto sd = fatten(x);
  for (const auto& w : sd.boundary_words)
    if (!is_cyclically_reduced(w)) return false;
  return true;
}

bool is_immersed_fatgraph(const Fatgraph& x) {
  int rank = 0;
  for (const auto& e : x.edges) rank = std::max(rank, e.label);
  return is_immersion(map_to_rose(x.skeleton(), std::max(rank, 1)));
}

std::vector<std::pair<int, int>> internal_edges(const Rectangle& r) {
  return {{r.post_a, r.pre_b}, {r.post_b, r.pre_a}};
}

std::vector<std::pair<int, int>> internal_edges(const Triangle& t) {
  return {{t.t0, t.t1}, {t.t1, t.t2}, {t.t2, t.t0}};
}

Rectangle make_rectangle(const Traintrack& t, int ea, int eb) {
  auto in_by = t.turns_in_by_oe();
  auto out_by = t.turns_out_by_oe();
  if (in_by[ea].size() != 1 || out_by[ea].size() != 1 || in_by[eb].size() != 1 ||
      out_by[eb].size() != 1)
    throw std::invalid_argument("make_rectangle needs forced flanks");
  Rectangle r;
  r.ea = ea;
  r.eb = eb;
  r.pre_a = out_by[ea][0];
  r.post_a = in_by[ea][0];
  r.pre_b = out_by[eb][0];
  r.post_b = in_by[eb][0];
  return r;
}

namespace {

Rectangle canonical_rect(Rectangle r) {
  auto side_a = std::make_tuple(r.ea, r.pre_a, r.post_a);
  auto side_b = std::make_tuple(r.eb, r.pre_b, r.post_b);
  if (side_b < side_a) {
    std::swap(r.ea, r.eb);
    std::swap(r.pre_a, r.pre_b);
    std::swap(r.post_a, r.post_b);
  }
  return r;
}

Triangle canonical_tri(int a, int b, int c) {
  // least rotation of the cyclic triple
  Triangle t1{a, b, c}, t2{b, c, a}, t3{c, a, b};
  return std::min({t1, t2, t3});
}

}  // namespace

PolygonSet enumerate_polygons(const Traintrack& t, bool full_triangles) {
  PolygonSet ps;
  auto in_by = t.turns_in_by_oe();
  auto out_by = t.turns_out_by_oe();
  size_t noe = 2 * t.g.edges.size();
  std::set<Rectangle> rects;
  for (size_t ea = 0; ea < noe; ++ea) {
    Letter la = oe_letter(t.g, static_cast<int>(ea));
    for (size_t eb = 0; eb < noe; ++eb) {
      if (oe_letter(t.g, static_cast<int>(eb)) != la.inverse()) continue;
      for (int pre_a : out_by[ea])
        for (int post_a : in_by[ea])
          for (int pre_b : out_by[eb])
            for (int post_b : in_by[eb]) {
              Rectangle r;
              r.ea = static_cast<int>(ea);
              r.eb = static_cast<int>(eb);
              r.pre_a = pre_a;
              r.post_a = post_a;
              r.pre_b = pre_b;
              r.post_b = post_b;
              rects.insert(canonical_rect(r));
            }
    }
  }
  ps.rectangles.assign(rects.begin(), rects.end());
  std::set<int> support;
  if (full_triangles) {
    for (size_t i = 0; i < t.turns.size(); ++i) support.insert(static_cast<int>(i));
  } else {
    for (const auto& r : ps.rectangles)
      for (auto [s, tt] : internal_edges(r)) {
        support.insert(s);
        support.insert(tt);
      }
  }
  std::set<Triangle> tris;
  for (int a : support)
    for (int b : support)
      for (int c : support) {
        if (a == b && b == c) continue;  // (x,x,x) never assembles alone
        tris.insert(canonical_tri(a, b, c));
      }
  ps.triangles.assign(tris.begin(), tris.end());
  return ps;
}

bool is_internally_balanced(const PolygonSet& ps, const PolygonWeight& p,
                            size_t /*nturns*/) {
  std::map<std::pair<int, int>, Rat> count;
  for (const auto& [idx, wt] : p.entries) {
    std::vector<std::pair<int, int>> edges;
    if (idx < static_cast<int>(ps.rectangles.size()))
      edges = internal_edges(ps.rectangles[idx]);
    else
      edges = internal_edges(ps.triangles[idx - ps.rectangles.size()]);
    for (auto& e : edges) count[e] += wt;
  }
  for (const auto& [e, c] : count) {
    auto rev = std::make_pair(e.second, e.first);
    auto it = count.find(rev);
    Rat other = it == count.end() ? Rat(0) : it->second;
    if (c != other) return false;
  }
  return true;
}

WeightVector boundary_map(const Traintrack& t, const PolygonSet& ps,
                          const PolygonWeight& p) {
  WeightVector w(t.turns.size(), Rat(0));
  Rat half(1, 2);
  for (const auto& [idx, wt] : p.entries) {
    if (idx >= static_cast<int>(ps.rectangles.size())) continue;
    const auto& r = ps.rectangles[idx];
    w[r.pre_a] += half * wt;
    w[r.post_a] += half * wt;
    w[r.pre_b] += half * wt;
    w[r.post_b] += half * wt;
  }
  return w;
}

Rat chi_of(const PolygonSet& ps, const PolygonWeight& p) {
  Rat tri_mass(0);
  for (const auto& [idx, wt] : p.entries)
    if (idx >= static_cast<int>(ps.rectangles.size())) tri_mass += wt;
  return tri_mass / 2;
}

PolygonWeight decompose(const Fatgraph& x, const Traintrack& t, PolygonSet& ps,
                        const BoundaryCarrying& carrying) {
  if (!is_reduced_fatgraph(x))
    throw std::invalid_argument("decompose: fatgraph not reduced");
  auto sd = fatten(x);
  if (carrying.routes.size() != sd.boundary_oes.size())
    throw std::invalid_argument("decompose: carrying component count mismatch");
  auto hv = x.half_vertex();

  // T-oriented-edge under each boundary position, and the turn at the point
  // between consecutive positions.
  // sector key: the arrival half-edge of x identifies the corner after a
  // position; record (T-in-edge, T-out-edge) per corner.
  std::map<int, Turn> corner_turn;       // arrival half-edge -> turn in T
  std::map<int, int> side_route;         // x-oriented-edge -> T-oriented-edge
  for (size_t c = 0; c < sd.boundary_oes.size(); ++c) {
    const auto& cyc = sd.boundary_oes[c];
    const auto& route = carrying.routes[c];
    if (route.size() != cyc.size())
      throw std::invalid_argument("decompose: route length mismatch");
    for (size_t i = 0; i < cyc.size(); ++i) {
      int oe = cyc[i];
      int te = route[i];
      if (!(oe_letter(x.skeleton(), oe) == oe_letter(t.g, te)))
        throw std::invalid_argument("decompose: route label mismatch");
      side_route[oe] = te;
      int e = oe_edge(oe);
      int h_arrive = oe_is_rev(oe) ? Fatgraph::half_tail(e) : Fatgraph::half_head(e);
      int te_next = route[(i + 1) % route.size()];
      Turn turn{te, te_next};
      if (t.turn_index(turn) < 0)
        throw std::invalid_argument("decompose: carrying turn not admissible");
      corner_turn[h_arrive] = turn;
    }
  }

  std::map<Rectangle, long> rect_count;
  std::map<Triangle, long> tri_count;

  // one rectangle per edge of x, flanks read off the boundary cycles
  std::map<int, int> pre_turn_of_oe;  // x-oriented-edge -> turn id before it
  std::map<int, int> post_turn_of_oe;
  for (size_t c = 0; c < sd.boundary_oes.size(); ++c) {
    const auto& cyc = sd.boundary_oes[c];
    const auto& route = carrying.routes[c];
    size_t n = cyc.size();
    for (size_t i = 0; i < n; ++i) {
      Turn turn{route[i], route[(i + 1) % n]};
      int id = t.turn_index(turn);
      post_turn_of_oe[cyc[i]] = id;
      pre_turn_of_oe[cyc[(i + 1) % n]] = id;
    }
  }
  for (size_t e = 0; e < x.edges.size(); ++e) {
    int oe1 = oe_fwd(static_cast<int>(e));
    int oe2 = oe_rev(static_cast<int>(e));
    Rectangle r;
    r.ea = side_route.at(oe1);
    r.eb = side_route.at(oe2);
    r.pre_a = pre_turn_of_oe.at(oe1);
    r.post_a = post_turn_of_oe.at(oe1);
    r.pre_b = pre_turn_of_oe.at(oe2);
    r.post_b = post_turn_of_oe.at(oe2);
    rect_count[canonical_rect(r)]++;
  }

  // corners around each vertex in n-gon orientation: successive arrival
  // half-edges under h -> prev(h); fan-triangulate from the least half-edge.
  std::vector<int> pos(2 * x.edges.size());
  for (int v = 0; v < x.nv; ++v)
    for (size_t i = 0; i < x.order[v].size(); ++i) pos[x.order[v][i]] = static_cast<int>(i);
  for (int v = 0; v < x.nv; ++v) {
    size_t m = x.order[v].size();
    if (m <= 2) continue;
    int h0 = *std::min_element(x.order[v].begin(), x.order[v].end());
    std::vector<int> corners;  // turn ids in n-gon boundary order
    int h = h0;
    for (size_t k = 0; k < m; ++k) {
      corners.push_back(t.turn_index(corner_turn.at(h)));
      h = x.order[v][(pos[h] + m - 1) % m];  // prev in cyclic order
    }
    for (size_t k = 1; k + 1 < m; ++k)
      tri_count[canonical_tri(corners[0], corners[k], corners[k + 1])]++;
  }

  // register any missing pieces in ps, then emit the weight vector
  std::map<Rectangle, int> rect_id;
  for (size_t i = 0; i < ps.rectangles.size(); ++i) rect_id[ps.rectangles[i]] = static_cast<int>(i);
  std::map<Triangle, int> tri_id;
  for (size_t i = 0; i < ps.triangles.size(); ++i) tri_id[ps.triangles[i]] = static_cast<int>(i);
  PolygonWeight p;
  for (auto& [r, cnt] : rect_count) {
    auto it = rect_id.find(r);
    int id;
    if (it == rect_id.end()) {
      ps.rectangles.push_back(r);
      id = static_cast<int>(ps.rectangles.size()) - 1;
      // shifting triangle indices: triangles are indexed after rectangles,
      // so appending a rectangle invalidates existing triangle references.
      // To stay safe, triangles are re-indexed by the callers through names,
      // and inside this function we only append rectangles before touching
      // triangle ids.
      rect_id[r] = id;
    } else {
      id = it->second;
    }
    p.entries.emplace_back(id, Rat(cnt));
  }
  for (auto& [tri, cnt] : tri_count) {
    auto it = tri_id.find(tri);
    int id;
    if (it == tri_id.end()) {
      ps.triangles.push_back(tri);
      id = static_cast<int>(ps.triangles.size()) - 1;
      tri_id[tri] = id;
    } else {
      id = it->second;
    }
    p.entries.emplace_back(static_cast<int>(ps.rectangles.size()) + id, Rat(cnt));
  }
  std::sort(p.entries.begin(), p.entries.end());
  return p;
}

AssembledSurface assemble(const Traintrack& t, const PolygonSet& ps,
                          const PolygonWeight& p) {
  AssembledSurface out;
  // instantiate pieces
  struct Node {
    bool is_tri = false;
    int piece = -1;        // index into ps
    int rect_instance = -1;  // for stubs: which rectangle copy, which end
    int rect_end = -1;       // 0 = head end of ea (post_a,pre_b), 1 = tail end
    std::vector<std::pair<int, int>> sides;  // ordered internal edges
  };
  std::vector<Node> nodes;
  long nrect_inst = 0;
  std::vector<int> rect_piece_of_instance;
  for (const auto& [idx, wt] : p.entries) {
    if (wt < 0 || !is_integral(wt))
      throw std::invalid_argument("assemble: weight must be nonnegative integral");
    long copies = wt.get_num().get_si();
    if (idx < static_cast<int>(ps.rectangles.size())) {
      const auto& r = ps.rectangles[idx];
      for (long c = 0; c < copies; ++c) {
        int inst = static_cast<int>(nrect_inst++);
        rect_piece_of_instance.push_back(idx);
        Node n1;
        n1.piece = idx;
        n1.rect_instance = inst;
        n1.rect_end = 0;
        n1.sides = {{r.post_a, r.pre_b}};
        nodes.push_back(n1);
        Node n2 = n1;
        n2.rect_end = 1;
        n2.sides = {{r.post_b, r.pre_a}};
        nodes.push_back(n2);
      }
    } else {
      const auto& tr = ps.triangles[idx - ps.rectangles.size()];
      for (long c = 0; c < copies; ++c) {
        Node n;
        n.is_tri = true;
        n.piece = idx;
        n.sides = internal_edges(tr);
        nodes.push_back(n);
      }
    }
  }

  // match side instances: (s,t) against (t,s), in order of appearance
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> slots;
  for (size_t ni = 0; ni < nodes.size(); ++ni)
    for (size_t si = 0; si < nodes[ni].sides.size(); ++si)
      slots[nodes[ni].sides[si]].emplace_back(static_cast<int>(ni), static_cast<int>(si));
  std::map<std::pair<int, int>, std::pair<int, int>> partner;  // (node,side)->(node,side)
  for (auto& [key, list] : slots) {
    auto rev = std::make_pair(key.second, key.first);
    if (key > rev) continue;
    auto it = slots.find(rev);
    const auto& other = it == slots.end() ? std::vector<std::pair<int, int>>{} : it->second;
    if (key == rev) {
      // self-paired ordered edge: match within the list, consecutively
      if (list.size() % 2 != 0)
        throw std::invalid_argument("assemble: odd self-paired internal edge count");
      for (size_t k = 0; k + 1 < list.size(); k += 2) {
        partner[list[k]] = list[k + 1];
        partner[list[k + 1]] = list[k];
      }
      continue;
    }
    if (list.size() != other.size())
      throw std::invalid_argument("assemble: internal edge matching fails");
    for (size_t k = 0; k < list.size(); ++k) {
      partner[list[k]] = other[k];
      partner[other[k]] = list[k];
    }
  }

  // vertex orbits: enter node through side -> exit through the next side in
  // the node's cyclic list -> jump to the partner side
  std::set<std::pair<int, int>> visited;
  Fatgraph& fg = out.fatgraph;
  // edges first: one per rectangle instance
  out.rect_edge.assign(nrect_inst, -1);
  for (long inst = 0; inst < nrect_inst; ++inst) {
    const auto& r = ps.rectangles[rect_piece_of_instance[inst]];
    Letter la = oe_letter(t.g, r.ea);
    out.rect_edge[inst] = fg.add_edge(std::abs(la.idx));
  }
  auto stub_half = [&](const Node& n) {
    // which half-edge of the fatgraph edge this rectangle end becomes
    const auto& r = ps.rectangles[n.piece];
    Letter la = oe_letter(t.g, r.ea);
    int e = out.rect_edge[n.rect_instance];
    bool ea_positive = la.sign > 0;
    // positive side runs tail -> head; ea's head end is rect_end 0
    if (ea_positive) return n.rect_end == 0 ? Fatgraph::half_head(e) : Fatgraph::half_tail(e);
    return n.rect_end == 0 ? Fatgraph::half_tail(e) : Fatgraph::half_head(e);
  };

  for (size_t ni = 0; ni < nodes.size(); ++ni) {
    for (size_t si = 0; si < nodes[ni].sides.size(); ++si) {
      if (visited.count({static_cast<int>(ni), static_cast<int>(si)})) continue;
      // walk the orbit
      std::vector<int> stubs;
      bool has_stub = false;
      std::pair<int, int> cur{static_cast<int>(ni), static_cast<int>(si)};
      std::vector<std::pair<int, int>> orbit;
      do {
        visited.insert(cur);
        orbit.push_back(cur);
        const Node& n = nodes[cur.first];
        if (!n.is_tri) {
          has_stub = true;
          stubs.push_back(stub_half(n));
        }
        // exit through the next side of this node
        int nsides = static_cast<int>(n.sides.size());
        std::pair<int, int> exit{cur.first, (cur.second + 1) % nsides};
        auto it = partner.find(exit);
        if (it == partner.end())
          throw std::invalid_argument("assemble: unmatched internal edge");
        cur = it->second;
      } while (!visited.count(cur));
      if (has_stub) {
        // the orbit walk circles the vertex against the fattening convention
        std::reverse(stubs.begin(), stubs.end());
        int v = fg.add_vertex();
        fg.order[v] = stubs;
      } else {
        out.discarded_triangles += static_cast<long>(orbit.size());
      }
    }
  }

  // discard edges on components that lost all their vertices: cannot happen,
  // every rectangle end lies in a stub orbit. Validate and return.
  fg.validate();
  return out;
}

BoundaryCarrying carry_boundary_on_chain(const Fatgraph& x, const ChainTrack& ct) {
  auto sd = fatten(x);
  auto skel = x.skeleton();
  BoundaryCarrying bc;
  for (size_t c = 0; c < sd.boundary_words.size(); ++c) {
    // trace-order letters (boundary_words store the canonical rotation)
    Word w;
    for (int oe : sd.boundary_oes[c]) w.push_back(oe_letter(skel, oe));
    bool placed = false;
    for (const auto& circ : ct.circles) {
      if (circ.spelling.size() != w.size()) continue;
      const Word& cw = circ.spelling;
      size_t n = w.size();
      for (size_t r = 0; r < n && !placed; ++r) {
        bool ok = true;
        for (size_t i = 0; i < n; ++i)
          if (!(cw[(r + i) % n] == w[i])) {
            ok = false;
            break;
          }
        if (ok) {
          std::vector<int> route;
          for (size_t i = 0; i < n; ++i) route.push_back(circ.oes[(r + i) % n]);
          bc.routes.push_back(std::move(route));
          placed = true;
        }
      }
      if (placed) break;
    }
    if (!placed)
      throw std::invalid_argument("boundary word is not carried by the chain track");
  }
  return bc;
}

std::string fatgraph_to_text(const Fatgraph& x) {
  std::ostringstream out;
  out << graph_to_text(x.skeleton());
  for (int v = 0; v < x.nv; ++v) {
    out << "order " << v;
    for (int h : x.order[v])
      out << " " << (h % 2 == 0 ? "+" : "-") << (h / 2 + 1);
    out << "\n";
  }
  return out.str();
}

PairingQuotient fatgraph_from_pairing(const std::vector<Word>& circles,
                                      const std::vector<int>& partner) {
  PairingQuotient q;
  int nslots = 0;
  std::vector<int> circle_of_slot;
  for (size_t c = 0; c < circles.size(); ++c) {
    q.slot_offset.push_back(nslots);
    for (size_t p = 0; p < circles[c].size(); ++p)
      circle_of_slot.push_back(static_cast<int>(c));
    nslots += static_cast<int>(circles[c].size());
  }
  if (static_cast<int>(partner.size()) != nslots)
    throw std::invalid_argument("pairing size mismatch");
  auto letter_of = [&](int s) {
    int c = circle_of_slot[s];
    return circles[c][s - q.slot_offset[c]];
  };
  auto next_slot = [&](int s) {
    int c = circle_of_slot[s];
    int n = static_cast<int>(circles[c].size());
    return q.slot_offset[c] + (s - q.slot_offset[c] + 1) % n;
  };
  for (int s = 0; s < nslots; ++s) {
    if (partner[s] == s || partner[partner[s]] != s)
      throw std::invalid_argument("pairing not involutive");
    if (!(letter_of(partner[s]) == letter_of(s).inverse()))
      throw std::invalid_argument("pairing does not invert labels");
  }
  // edges: one per slot pair
  q.edge_of_slot.assign(nslots, -1);
  for (int s = 0; s < nslots; ++s) {
    if (q.edge_of_slot[s] >= 0) continue;
    Letter l = letter_of(s);
    int e = q.fatgraph.add_edge(std::abs(l.idx));
    q.edge_of_slot[s] = e;
    q.edge_of_slot[partner[s]] = e;
  }
  // vertices: junction cycles of sigma(g) = gap_after(partner(next(g)))
  q.vertex_of_gap.assign(nslots, -1);
  for (int g0 = 0; g0 < nslots; ++g0) {
    if (q.vertex_of_gap[g0] >= 0) continue;
    int v = q.fatgraph.add_vertex();
    std::vector<int> halves;
    int g = g0;
    do {
      q.vertex_of_gap[g] = v;
      int s = next_slot(g);  // slot leaving this vertex
      int e = q.edge_of_slot[s];
      halves.push_back(letter_of(s).sign > 0 ? Fatgraph::half_tail(e)
                                             : Fatgraph::half_head(e));
      g = partner[s];
    } while (g != g0);
    // the junction walk circles the vertex against the fattening convention
    std::reverse(halves.begin(), halves.end());
    q.fatgraph.order[v] = halves;
  }
  q.fatgraph.validate();
  return q;
}

Fatgraph fatgraph_from_text(const std::string& text) {
  Fatgraph x;
  std::istringstream in(text);
  std::string line;
  std::vector<LabeledGraph::Edge> edges;
  int nv = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "vertices") {
      ls >> nv;
    } else if (kw == "edge") {
      int id, src, dst;
      std::string lab;
      ls >> id >> src >> dst >> lab;
      Word w = parse_word(lab);
      edges.push_back({src, dst, w[0].idx});
    } else if (kw == "order") {
      int v;
      ls >> v;
      while (static_cast<int>(x.order.size()) <= v) x.add_vertex();
      std::string tok;
      while (ls >> tok) {
        int e = std::stoi(tok.substr(1)) - 1;
        x.order[v].push_back(tok[0] == '+' ? Fatgraph::half_tail(e)
                                           : Fatgraph::half_head(e));
      }
    }
  }
  while (x.nv < nv) x.add_vertex();
  for (const auto& e : edges) x.add_edge(e.label);
  x.validate();
  return x;
}

}  // namespace sforge
