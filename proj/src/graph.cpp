#include "sforge/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sforge {

std::vector<std::vector<int>> outgoing_oriented_edges(const LabeledGraph& g) {
  std::vector<std::vector<int>> out(g.nv);
  for (size_t e = 0; e < g.edges.size(); ++e) {
    out[g.edges[e].src].push_back(oe_fwd(static_cast<int>(e)));
    out[g.edges[e].dst].push_back(oe_rev(static_cast<int>(e)));
  }
  return out;
}

std::vector<int> vertex_valences(const LabeledGraph& g) {
  std::vector<int> v(g.nv, 0);
  for (const auto& e : g.edges) {
    v[e.src]++;
    v[e.dst]++;
  }
  return v;
}

int graph_components(const LabeledGraph& g) {
  std::vector<int> comp(g.nv, -1);
  int n = 0;
  auto out = outgoing_oriented_edges(g);
  for (int s = 0; s < g.nv; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    comp[s] = n;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int oe : out[v]) {
        int u = oe_head(g, oe);
        if (comp[u] < 0) {
          comp[u] = n;
          q.push(u);
        }
      }
    }
    ++n;
  }
  return n;
}

bool graph_connected(const LabeledGraph& g) { return graph_components(g) <= 1; }

LabeledGraph rose(int rank) {
  LabeledGraph g;
  g.add_vertex();
  for (int i = 1; i <= rank; ++i) g.add_edge(0, 0, i);
  return g;
}

void GraphMap::validate() const {
  if (vmap.size() != static_cast<size_t>(domain.nv) ||
      emap.size() != domain.edges.size())
    throw std::invalid_argument("graph map size mismatch");
  for (size_t e = 0; e < domain.edges.size(); ++e) {
    const auto& de = domain.edges[e];
    const auto& ce = codomain.edges[emap[e]];
    if (de.label != ce.label) throw std::invalid_argument("graph map label mismatch");
    if (vmap[de.src] != ce.src || vmap[de.dst] != ce.dst)
      throw std::invalid_argument("graph map does not commute with endpoints");
  }
}

GraphMap identity_map(const LabeledGraph& g) {
  GraphMap m;
  m.domain = g;
  m.codomain = g;
  m.vmap.resize(g.nv);
  std::iota(m.vmap.begin(), m.vmap.end(), 0);
  m.emap.resize(g.edges.size());
  std::iota(m.emap.begin(), m.emap.end(), 0);
  return m;
}

GraphMap map_to_rose(const LabeledGraph& g, int rank) {
  GraphMap m;
  m.domain = g;
  m.codomain = rose(rank);
  m.vmap.assign(g.nv, 0);
  m.emap.resize(g.edges.size());
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (g.edges[e].label < 1 || g.edges[e].label > rank)
      throw std::invalid_argument("label beyond rank in map_to_rose");
    m.emap[e] = g.edges[e].label - 1;
  }
  return m;
}

GraphMap wedge_of_loops(const std::vector<CyclicWord>& words, int rank) {
  LabeledGraph g;
  int base = g.add_vertex();
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("wedge_of_loops: empty word");
    const Word& ls = w.letters();
    int prev = base;
    for (size_t i = 0; i < ls.size(); ++i) {
      int next = (i + 1 == ls.size()) ? base : g.add_vertex();
      if (ls[i].sign > 0)
        g.add_edge(prev, next, ls[i].idx);
      else
        g.add_edge(next, prev, ls[i].idx);
      prev = next;
    }
  }
  return map_to_rose(g, rank);
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // keep the smaller id as representative for determinism
    return true;
  }
};

}  // namespace

FoldingData stallingsFoldImpl(const GraphMap& g) {
  const LabeledGraph& X = g.domain;
  int ne = static_cast<int>(X.edges.size());
  UnionFind vuf(X.nv), euf(ne);

  // Folding: repeatedly identify two distinct edges leaving a common vertex
  // with the same label and direction (after the identifications so far).
  bool changed = true;
  while (changed) {
    changed = false;
    // germ key at a vertex class: (signed label) -> representative oriented edge
    std::map<std::pair<int, std::pair<int, int>>, int> seen;  // (vclass,(label,sign))->oe
    seen.clear();
    for (int e = 0; e < ne; ++e) {
      for (int oe : {oe_fwd(e), oe_rev(e)}) {
        if (euf.find(e) != e) continue;  // only representatives
        int tail = vuf.find(oe_tail(X, oe));
        Letter l = oe_letter(X, oe);
        auto key = std::make_pair(tail, std::make_pair(l.idx, l.sign));
        auto it = seen.find(key);
        if (it == seen.end()) {
          seen.emplace(key, oe);
          continue;
        }
        int oe2 = it->second;
        if (euf.find(oe_edge(oe2)) == euf.find(oe_edge(oe))) continue;
        // identify the two edges, matching orientations
        int h1 = vuf.find(oe_head(X, oe));
        int h2 = vuf.find(oe_head(X, oe2));
        euf.unite(oe_edge(oe), oe_edge(oe2));
        vuf.unite(h1, h2);
        changed = true;
        seen.clear();  // vertex classes moved; rescan
        break;
      }
      if (changed) break;
    }
  }

  // Build the quotient graph X'.
  FoldingData fd;
  std::vector<int> vname(X.nv, -1), ename(ne, -1);
  LabeledGraph Xp;
  for (int v = 0; v < X.nv; ++v) {
    int r = vuf.find(v);
    if (vname[r] < 0) vname[r] = Xp.add_vertex();
  }
  std::vector<int> emult;
  for (int e = 0; e < ne; ++e) {
    int r = euf.find(e);
    if (ename[r] < 0) {
      ename[r] = Xp.add_edge(vname[vuf.find(X.edges[r].src)],
                             vname[vuf.find(X.edges[r].dst)], X.edges[r].label);
      emult.push_back(0);
    }
  }
  fd.vertex_image.resize(X.nv);
  for (int v = 0; v < X.nv; ++v) fd.vertex_image[v] = vname[vuf.find(v)];
  fd.edge_image.resize(ne);
  for (int e = 0; e < ne; ++e) {
    fd.edge_image[e] = ename[euf.find(e)];
    emult[fd.edge_image[e]]++;
  }

  // fold(X): preimage of the edges of X' with more than one preimage.
  for (int e = 0; e < ne; ++e)
    if (emult[fd.edge_image[e]] > 1) fd.fold_edges.push_back(e);

  // Map X' into the codomain (edge images inherited from any preimage).
  fd.folded.domain = Xp;
  fd.folded.codomain = g.codomain;
  fd.folded.vmap.assign(Xp.nv, -1);
  fd.folded.emap.assign(Xp.edges.size(), -1);
  for (int v = 0; v < X.nv; ++v) fd.folded.vmap[fd.vertex_image[v]] = g.vmap[v];
  for (int e = 0; e < ne; ++e) fd.folded.emap[fd.edge_image[e]] = g.emap[e];
  fd.folded.validate();

  // Fold region components in X (as edge/vertex sets), plus their images.
  std::set<int> fold_set(fd.fold_edges.begin(), fd.fold_edges.end());
  std::vector<int> comp(ne, -1);
  int ncomp = 0;
  std::vector<std::vector<int>> adj(X.nv);
  for (int e : fd.fold_edges) {
    adj[X.edges[e].src].push_back(e);
    adj[X.edges[e].dst].push_back(e);
  }
  for (int e0 : fd.fold_edges) {
    if (comp[e0] >= 0) continue;
    std::vector<int> edges_here, verts_here;
    std::set<int> seen_v;
    std::queue<int> q;
    q.push(e0);
    comp[e0] = ncomp;
    while (!q.empty()) {
      int e = q.front();
      q.pop();
      edges_here.push_back(e);
      for (int v : {X.edges[e].src, X.edges[e].dst}) {
        if (seen_v.insert(v).second) {
          verts_here.push_back(v);
          for (int e2 : adj[v])
            if (comp[e2] < 0) {
              comp[e2] = ncomp;
              q.push(e2);
            }
        }
      }
    }
    std::sort(edges_here.begin(), edges_here.end());
    std::sort(verts_here.begin(), verts_here.end());
    std::set<int> img;
    for (int e : edges_here) img.insert(fd.edge_image[e]);
    fd.tree_edges.push_back(std::move(edges_here));
    fd.tree_vertices.push_back(std::move(verts_here));
    fd.image_tree_edges.emplace_back(img.begin(), img.end());
    ++ncomp;
  }
  return fd;
}

FoldingData stallings_fold(const GraphMap& g) { return stallingsFoldImpl(g); }

bool is_immersion(const GraphMap& g) {
  std::set<std::tuple<int, int, int>> seen;  // (vertex, image germ edge, dir)
  const LabeledGraph& X = g.domain;
  for (size_t e = 0; e < X.edges.size(); ++e) {
    int ie = g.emap[e];
    // outgoing germ at src, incoming germ at dst
    if (!seen.insert({X.edges[e].src, ie, 0}).second) return false;
    if (!seen.insert({X.edges[e].dst, ie, 1}).second) return false;
  }
  return true;
}

BoundedFolding has_bounded_folding(const GraphMap& g) {
  BoundedFolding r;
  r.data = stallings_fold(g);
  const LabeledGraph& X = g.domain;
  auto val = vertex_valences(X);

  // Disjointness of the image trees.
  std::set<int> all_img_edges;
  std::set<int> all_img_verts;
  for (size_t t = 0; t < r.data.tree_edges.size(); ++t) {
    const auto& imgs = r.data.image_tree_edges[t];
    std::set<int> vimg;
    for (int e : r.data.tree_vertices[t]) vimg.insert(r.data.vertex_image[e]);
    for (int e : imgs)
      if (!all_img_edges.insert(e).second) {
        r.reason = "image trees not edge-disjoint";
        return r;
      }
    for (int v : vimg)
      if (!all_img_verts.insert(v).second) {
        r.reason = "image trees not vertex-disjoint";
        return r;
      }
    // image is a tree
    const auto& Xp = r.data.folded.domain;
    std::set<int> iversum;
    for (int e : imgs) {
      iversum.insert(Xp.edges[e].src);
      iversum.insert(Xp.edges[e].dst);
    }
    if (imgs.size() + 1 != iversum.size()) {
      r.reason = "image of a fold component is not a tree";
      return r;
    }
    // preimage is a tree
    if (r.data.tree_edges[t].size() + 1 != r.data.tree_vertices[t].size()) {
      r.reason = "fold component is not a tree";
      return r;
    }
    // at most one vertex of valence > 2 in X
    int high = 0;
    for (int v : r.data.tree_vertices[t])
      if (val[v] > 2) ++high;
    if (high > 1) {
      r.reason = "fold tree has more than one vertex of valence > 2";
      return r;
    }
    // preimage of the image tree is exactly this component
    std::set<int> img_set(imgs.begin(), imgs.end());
    size_t preimage_count = 0;
    for (size_t e = 0; e < X.edges.size(); ++e)
      if (img_set.count(r.data.edge_image[e])) ++preimage_count;
    if (preimage_count != r.data.tree_edges[t].size()) {
      r.reason = "fold tree preimage not connected";
      return r;
    }
    // Both T_i and T_i' being finite trees, the simplicial surjection
    // between them is automatically a proper homotopy equivalence.
  }
  r.accepted = true;
  return r;
}

GraphMap subdivided_rose(const Endomorphism& phi, int n) {
  LabeledGraph g;
  int base = g.add_vertex();
  for (int gen = 1; gen <= phi.rank(); ++gen) {
    Word im = phi.apply_iterated({Letter(gen, 1)}, n);
    if (im.empty()) throw std::invalid_argument("trivial image word");
    int prev = base;
    for (size_t i = 0; i < im.size(); ++i) {
      int next = (i + 1 == im.size()) ? base : g.add_vertex();
      if (im[i].sign > 0)
        g.add_edge(prev, next, im[i].idx);
      else
        g.add_edge(next, prev, im[i].idx);
      prev = next;
    }
  }
  return map_to_rose(g, phi.rank());
}

CycleBasis cycle_basis_data(const LabeledGraph& g) {
  if (!graph_connected(g)) throw std::invalid_argument("cycle_basis: disconnected graph");
  CycleBasis cb;
  cb.in_tree.assign(g.edges.size(), 0);
  std::vector<int> parent_oe(g.nv, -1);  // oriented edge from parent
  std::vector<int> order;
  std::vector<char> visited(g.nv, 0);
  auto out = outgoing_oriented_edges(g);
  std::queue<int> q;
  if (g.nv == 0) return cb;
  q.push(0);
  visited[0] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    order.push_back(v);
    for (int oe : out[v]) {
      int u = oe_head(g, oe);
      if (!visited[u]) {
        visited[u] = 1;
        parent_oe[u] = oe;
        cb.in_tree[oe_edge(oe)] = 1;
        q.push(u);
      }
    }
  }
  auto path_from_root = [&](int v) {
    Word w;
    while (parent_oe[v] >= 0) {
      int oe = parent_oe[v];
      w.push_back(oe_letter(g, oe));
      v = oe_tail(g, oe);
    }
    std::reverse(w.begin(), w.end());
    return w;
  };
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (cb.in_tree[e]) continue;
    Word w = path_from_root(g.edges[e].src);
    w.push_back(Letter(g.edges[e].label, 1));
    Word back = invert(path_from_root(g.edges[e].dst));
    w.insert(w.end(), back.begin(), back.end());
    cb.words.emplace_back(CyclicWord(reduce(w)));
    cb.chord_edges.push_back(static_cast<int>(e));
  }
  return cb;
}

std::vector<CyclicWord> cycle_basis(const LabeledGraph& g) {
  return cycle_basis_data(g).words;
}

LabeledGraph trim_spikes(const LabeledGraph& g) {
  std::vector<char> edge_alive(g.edges.size(), 1);
  std::vector<char> vert_alive(g.nv, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> val(g.nv, 0);
    for (size_t e = 0; e < g.edges.size(); ++e)
      if (edge_alive[e]) {
        val[g.edges[e].src]++;
        val[g.edges[e].dst]++;
      }
    for (int v = 0; v < g.nv; ++v) {
      if (vert_alive[v] && val[v] == 1) {
        vert_alive[v] = 0;
        for (size_t e = 0; e < g.edges.size(); ++e)
          if (edge_alive[e] && (g.edges[e].src == v || g.edges[e].dst == v))
            edge_alive[e] = 0;
        changed = true;
      }
      if (vert_alive[v] && val[v] == 0 && g.nv > 1) vert_alive[v] = 0;
    }
  }
  LabeledGraph out;
  std::vector<int> vid(g.nv, -1);
  for (int v = 0; v < g.nv; ++v)
    if (vert_alive[v]) vid[v] = out.add_vertex();
  for (size_t e = 0; e < g.edges.size(); ++e)
    if (edge_alive[e])
      out.add_edge(vid[g.edges[e].src], vid[g.edges[e].dst], g.edges[e].label);
  return out;
}

std::string graph_to_text(const LabeledGraph& g) {
  std::ostringstream out;
  out << "vertices " << g.nv << "\n";
  for (size_t e = 0; e < g.edges.size(); ++e)
    out << "edge " << e << " " << g.edges[e].src << " " << g.edges[e].dst << " "
        << letter_to_string(Letter(g.edges[e].label, 1)) << "\n";
  return out.str();
}

LabeledGraph graph_from_text(const std::string& text) {
  LabeledGraph g;
  std::istringstream in(text);
  std::string kw;
  while (in >> kw) {
    if (kw == "vertices") {
      in >> g.nv;
    } else if (kw == "edge") {
      int id, src, dst;
      std::string lab;
      in >> id >> src >> dst >> lab;
      Word w = parse_word(lab);
      if (w.size() != 1 || w[0].sign != 1)
        throw std::invalid_argument("edge label must be a positive generator");
      if (static_cast<size_t>(id) != g.edges.size())
        throw std::invalid_argument("edge ids must be sequential");
      g.add_edge(src, dst, w[0].idx);
    } else {
      throw std::invalid_argument("unknown graph line: " + kw);
    }
  }
  return g;
}

}  // namespace sforge
