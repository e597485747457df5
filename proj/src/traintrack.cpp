#include "sforge/traintrack.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sforge {

int Traintrack::turn_index(const Turn& t) const {
  auto it = std::lower_bound(turns.begin(), turns.end(), t);
  if (it == turns.end() || !(*it == t)) return -1;
  return static_cast<int>(it - turns.begin());
}

std::vector<std::vector<int>> Traintrack::turns_in_by_oe() const {
  std::vector<std::vector<int>> m(2 * g.edges.size());
  for (size_t i = 0; i < turns.size(); ++i) m[turns[i].in_oe].push_back(static_cast<int>(i));
  return m;
}

std::vector<std::vector<int>> Traintrack::turns_out_by_oe() const {
  std::vector<std::vector<int>> m(2 * g.edges.size());
  for (size_t i = 0; i < turns.size(); ++i)
    m[turns[i].out_oe].push_back(static_cast<int>(i));
  return m;
}

void Traintrack::validate() const {
  for (const auto& t : turns) {
    if (oe_head(g, t.in_oe) != oe_tail(g, t.out_oe))
      throw std::invalid_argument("turn edges not incident");
    // traintrack immersion: admissible turns are locally injective, so the
    // labels read along the turn never cancel
    if (oe_letter(g, t.out_oe) == oe_letter(g, oe_opposite(t.in_oe)))
      throw std::invalid_argument("turn not locally injective over the rose");
  }
  if (!std::is_sorted(turns.begin(), turns.end()))
    throw std::invalid_argument("turns not sorted");
}

bool is_edge_balanced(const Traintrack& t, const WeightVector& w) {
  if (w.size() != t.turns.size()) return false;
  size_t noe = 2 * t.g.edges.size();
  RatVec out_sum(noe, Rat(0)), in_sum(noe, Rat(0));
  for (size_t i = 0; i < t.turns.size(); ++i) {
    in_sum[t.turns[i].in_oe] += w[i];
    out_sum[t.turns[i].out_oe] += w[i];
  }
  for (size_t oe = 0; oe < noe; ++oe)
    if (in_sum[oe] != out_sum[oe]) return false;
  return true;
}

bool in_weight_cone(const Traintrack& t, const WeightVector& w) {
  for (const auto& x : w)
    if (x < 0) return false;
  return is_edge_balanced(t, w);
}

RatVec edge_measure(const Traintrack& t, const WeightVector& w) {
  size_t noe = 2 * t.g.edges.size();
  RatVec mu(noe, Rat(0));
  for (size_t i = 0; i < t.turns.size(); ++i) mu[t.turns[i].in_oe] += w[i];
  return mu;
}

Traintrack from_subgroup_graphs(const std::vector<LabeledGraph>& graphs, int rank) {
  Traintrack t;
  t.rank = rank;
  for (const auto& g : graphs) {
    if (!is_immersion(map_to_rose(g, rank)))
      throw std::invalid_argument("from_subgroup_graphs: input not immersed");
    for (int v : vertex_valences(g))
      if (v == 1) throw std::invalid_argument("from_subgroup_graphs: 1-valent vertex");
    int voff = t.g.nv;
    int eoff = static_cast<int>(t.g.edges.size());
    for (int v = 0; v < g.nv; ++v) t.g.add_vertex();
    (void)voff;
    for (const auto& e : g.edges) t.g.add_edge(e.src + voff, e.dst + voff, e.label);
    (void)eoff;
  }
  auto out = outgoing_oriented_edges(t.g);
  for (int v = 0; v < t.g.nv; ++v) {
    for (int a : out[v])
      for (int b : out[v]) {
        // a arrives reversed, so the incoming oriented edge is opposite(a)
        int in_oe = oe_opposite(a);
        // non-backtracking: the labels read along the turn must not cancel
        if (oe_letter(t.g, b) == oe_letter(t.g, a)) continue;
        t.turns.push_back(Turn{in_oe, b});
      }
  }
  std::sort(t.turns.begin(), t.turns.end());
  t.turns.erase(std::unique(t.turns.begin(), t.turns.end()), t.turns.end());
  t.validate();
  return t;
}

ChainTrack from_chain(const Chain& c) {
  std::vector<std::pair<Word, Rat>> words;
  for (const auto& term : c.terms()) words.emplace_back(term.word.letters(), term.coeff);
  return track_from_words(words);
}

ChainTrack track_from_words(const std::vector<std::pair<Word, Rat>>& words) {
  ChainTrack ct;
  int rank = 1;
  for (const auto& [w, q] : words) rank = std::max(rank, max_generator(w));
  ct.track.rank = rank;
  for (const auto& [word, coeff] : words) {
    CyclicWord cw(word);
    if (!is_cyclically_reduced(cw))
      throw std::invalid_argument("from_chain: word not cyclically reduced");
    ChainTrack::Circle circ;
    circ.word = cw;
    circ.spelling = word;
    circ.coeff = coeff;
    const Word& ls = circ.spelling;
    int n = static_cast<int>(ls.size());
    int v0 = ct.track.g.nv;
    for (int i = 0; i < n; ++i) ct.track.g.add_vertex();
    for (int i = 0; i < n; ++i) {
      int a = v0 + i, b = v0 + (i + 1) % n;
      int e;
      if (ls[i].sign > 0)
        e = ct.track.g.add_edge(a, b, ls[i].idx);
      else
        e = ct.track.g.add_edge(b, a, ls[i].idx);
      circ.edge_ids.push_back(e);
      circ.oes.push_back(ls[i].sign > 0 ? oe_fwd(e) : oe_rev(e));
    }
    ct.circles.push_back(std::move(circ));
  }
  for (auto& circ : ct.circles) {
    int n = static_cast<int>(circ.oes.size());
    for (int i = 0; i < n; ++i)
      ct.track.turns.push_back(Turn{circ.oes[i], circ.oes[(i + 1) % n]});
  }
  std::sort(ct.track.turns.begin(), ct.track.turns.end());
  ct.track.turns.erase(std::unique(ct.track.turns.begin(), ct.track.turns.end()),
                       ct.track.turns.end());
  ct.track.validate();
  ct.weight.assign(ct.track.turns.size(), Rat(0));
  for (auto& circ : ct.circles) {
    int n = static_cast<int>(circ.oes.size());
    circ.turn_ids.resize(n);
    for (int i = 0; i < n; ++i) {
      int idx = ct.track.turn_index(Turn{circ.oes[i], circ.oes[(i + 1) % n]});
      circ.turn_ids[i] = idx;
      ct.weight[idx] += circ.coeff;
    }
  }
  return ct;
}

namespace {

void enumerate_reduced_words(int rank, int len, Word& cur, std::vector<Word>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int g = 1; g <= rank; ++g)
    for (int s : {1, -1}) {
      Letter l(g, s);
      if (!cur.empty() && cur.back() == l.inverse()) continue;
      cur.push_back(l);
      enumerate_reduced_words(rank, len, cur, out);
      cur.pop_back();
    }
}

}  // namespace

VerbalTraintrack verbal_traintrack(int rank, int len) {
  if (len < 2) throw std::invalid_argument("verbal_traintrack needs length >= 2");
  VerbalTraintrack vt;
  vt.track.rank = rank;
  Word cur;
  std::vector<Word> junctions;  // reduced words of length len-2, mod inversion
  enumerate_reduced_words(rank, len - 2, cur, junctions);
  std::map<Word, int> junction_id;
  for (const auto& j : junctions) {
    if (junction_id.count(j)) continue;
    int id = vt.track.g.nv;
    vt.track.g.add_vertex();
    junction_id[j] = id;
    junction_id[invert(j)] = id;
  }
  // abstract oriented edges: reduced words of length len-1, joining the
  // junction of their (len-2)-prefix to the junction of their (len-2)-suffix.
  // Geometric edges pair w with w^{-1}; realize each as a subdivided path.
  std::vector<Word> abstract_edges;
  cur.clear();
  enumerate_reduced_words(rank, len - 1, cur, abstract_edges);
  vt.abstract_oriented_edges = Int(abstract_edges.size());
  std::map<Word, std::vector<int>> path_oes;  // abstract word -> oriented edges
  std::set<Word> done;
  for (const auto& w : abstract_edges) {
    if (done.count(w)) continue;
    Word wi = invert(w);
    done.insert(w);
    done.insert(wi);
    Word pre(w.begin(), w.end() - 1);
    Word suf(w.begin() + 1, w.end());
    int a = junction_id[pre];
    int b = junction_id[suf];
    // subdivide: spell w from a to b
    std::vector<int> oes;
    int prev = a;
    for (size_t i = 0; i < w.size(); ++i) {
      int next = (i + 1 == w.size()) ? b : vt.track.g.add_vertex();
      int e;
      if (w[i].sign > 0) {
        e = vt.track.g.add_edge(prev, next, w[i].idx);
        oes.push_back(oe_fwd(e));
      } else {
        e = vt.track.g.add_edge(next, prev, w[i].idx);
        oes.push_back(oe_rev(e));
      }
      prev = next;
    }
    path_oes[w] = oes;
    std::vector<int> rev;
    for (auto it = oes.rbegin(); it != oes.rend(); ++it)
      rev.push_back(oe_opposite(*it));
    path_oes[wi] = rev;
  }
  // interior pass-through turns along each subdivided path
  for (const auto& [w, oes] : path_oes)
    for (size_t i = 0; i + 1 < oes.size(); ++i)
      vt.track.turns.push_back(Turn{oes[i], oes[i + 1]});
  // junction turns: reduced words of length len
  cur.clear();
  enumerate_reduced_words(rank, len, cur, vt.turn_words);
  vt.abstract_turns = Int(vt.turn_words.size());
  for (const auto& w : vt.turn_words) {
    Word pre(w.begin(), w.end() - 1);
    Word suf(w.begin() + 1, w.end());
    vt.track.turns.push_back(Turn{path_oes[pre].back(), path_oes[suf].front()});
  }
  std::sort(vt.track.turns.begin(), vt.track.turns.end());
  vt.track.turns.erase(std::unique(vt.track.turns.begin(), vt.track.turns.end()),
                       vt.track.turns.end());
  vt.track.validate();
  // epsilon: sigma -> -sigma^{-1} as an index involution
  std::map<Word, int> word_id;
  for (size_t i = 0; i < vt.turn_words.size(); ++i) word_id[vt.turn_words[i]] = static_cast<int>(i);
  vt.epsilon.resize(vt.turn_words.size());
  for (size_t i = 0; i < vt.turn_words.size(); ++i)
    vt.epsilon[i] = word_id.at(invert(vt.turn_words[i]));
  return vt;
}

WeightVector weight_of_carrying(const Traintrack& t, const CarryingMap& m) {
  WeightVector w(t.turns.size(), Rat(0));
  for (const auto& circ : m.circles) {
    int n = static_cast<int>(circ.size());
    if (n == 0) continue;
    for (int i = 0; i < n; ++i) {
      Turn turn{circ[i], circ[(i + 1) % n]};
      int idx = t.turn_index(turn);
      if (idx < 0) throw std::invalid_argument("carrying uses an inadmissible turn");
      w[idx] += 1;
    }
  }
  return w;
}

CarryingMap weight_to_manifold(const Traintrack& t, const WeightVector& w) {
  if (w.size() != t.turns.size())
    throw std::invalid_argument("weight size mismatch");
  for (const auto& x : w) {
    if (x < 0) throw std::invalid_argument("negative weight");
    if (!is_integral(x)) throw std::invalid_argument("non-integral weight");
  }
  if (!is_edge_balanced(t, w)) throw std::invalid_argument("unbalanced weight");

  // Interval copies per turn; glue per oriented edge, outgoing half-ends to
  // incoming half-ends, first-to-first in turn order.
  struct Copy {
    int turn;
    long index;
  };
  std::vector<long> counts(t.turns.size());
  for (size_t i = 0; i < t.turns.size(); ++i) counts[i] = w[i].get_num().get_si();
  // successor within the manifold: copy (turn, k) is followed by the k'-th
  // copy of the matched incoming turn on the out-edge of `turn`.
  size_t noe = 2 * t.g.edges.size();
  std::vector<std::vector<std::pair<int, long>>> in_slots(noe), out_slots(noe);
  for (size_t i = 0; i < t.turns.size(); ++i)
    for (long k = 0; k < counts[i]; ++k) {
      out_slots[t.turns[i].out_oe].emplace_back(static_cast<int>(i), k);
      in_slots[t.turns[i].in_oe].emplace_back(static_cast<int>(i), k);
    }
  // successor map from (turn copy) to (turn copy): the copy leaving through
  // edge e (as out) continues as the matched copy entering through e (as in).
  std::map<std::pair<int, long>, std::pair<int, long>> next;
  for (size_t oe = 0; oe < noe; ++oe) {
    if (out_slots[oe].size() != in_slots[oe].size())
      throw std::logic_error("edge balance violated in gluing");
    for (size_t k = 0; k < out_slots[oe].size(); ++k)
      next[out_slots[oe][k]] = in_slots[oe][k];
  }
  CarryingMap cm;
  std::set<std::pair<int, long>> used;
  for (size_t i = 0; i < t.turns.size(); ++i)
    for (long k = 0; k < counts[i]; ++k) {
      std::pair<int, long> start{static_cast<int>(i), k};
      if (used.count(start)) continue;
      std::vector<int> circle;
      auto cur = start;
      do {
        used.insert(cur);
        circle.push_back(t.turns[cur.first].out_oe);
        cur = next.at(cur);
      } while (!(cur == start));
      cm.circles.push_back(std::move(circle));
    }
  return cm;
}

HomologyVector homology_image(const Traintrack& t, const WeightVector& w) {
  if (!is_edge_balanced(t, w)) throw std::invalid_argument("unbalanced weight");
  RatVec mu = edge_measure(t, w);
  HomologyVector h(t.rank, Rat(0));
  for (size_t e = 0; e < t.g.edges.size(); ++e) {
    const Rat& fwd = mu[oe_fwd(static_cast<int>(e))];
    const Rat& rev = mu[oe_rev(static_cast<int>(e))];
    h[t.g.edges[e].label - 1] += fwd - rev;
  }
  return h;
}

ComponentHomology homology_refinement(const Traintrack& t, const WeightVector& w) {
  if (!is_edge_balanced(t, w)) throw std::invalid_argument("unbalanced weight");
  RatVec mu = edge_measure(t, w);
  ComponentHomology ch;
  // split the graph into components
  std::vector<int> comp(t.g.nv, -1);
  auto out = outgoing_oriented_edges(t.g);
  int ncomp = 0;
  for (int s = 0; s < t.g.nv; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = ncomp;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int oe : out[v]) {
        int u = oe_head(t.g, oe);
        if (comp[u] < 0) {
          comp[u] = ncomp;
          q.push(u);
        }
      }
    }
    ++ncomp;
  }
  ch.component_edges.resize(ncomp);
  std::vector<LabeledGraph> sub(ncomp);
  std::vector<std::vector<int>> vmap(ncomp);
  std::vector<int> local_vid(t.g.nv, -1);
  for (int v = 0; v < t.g.nv; ++v) {
    local_vid[v] = sub[comp[v]].add_vertex();
    vmap[comp[v]].push_back(v);
  }
  for (size_t e = 0; e < t.g.edges.size(); ++e) {
    int c = comp[t.g.edges[e].src];
    ch.component_edges[c].push_back(static_cast<int>(e));
    sub[c].add_edge(local_vid[t.g.edges[e].src], local_vid[t.g.edges[e].dst],
                    t.g.edges[e].label);
  }
  for (int c = 0; c < ncomp; ++c) {
    CycleBasis cb = cycle_basis_data(sub[c]);
    RatVec coords;
    for (int chord : cb.chord_edges) {
      int global_e = ch.component_edges[c][chord];
      coords.push_back(mu[oe_fwd(global_e)] - mu[oe_rev(global_e)]);
    }
    ch.bases.push_back(std::move(cb));
    ch.coordinates.push_back(std::move(coords));
  }
  return ch;
}

std::string traintrack_to_text(const Traintrack& t) {
  std::ostringstream out;
  out << graph_to_text(t.g);
  for (const auto& turn : t.turns) out << "turn " << turn.in_oe << " " << turn.out_oe << "\n";
  return out.str();
}

Traintrack traintrack_from_text(const std::string& text, int rank) {
  Traintrack t;
  t.rank = rank;
  std::string graph_part, rest;
  std::istringstream in(text);
  std::string line;
  std::ostringstream gtext;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "turn") {
      int a, b;
      ls >> a >> b;
      t.turns.push_back(Turn{a, b});
    } else {
      gtext << line << "\n";
    }
  }
  t.g = graph_from_text(gtext.str());
  std::sort(t.turns.begin(), t.turns.end());
  t.validate();
  return t;
}

}  // namespace sforge
