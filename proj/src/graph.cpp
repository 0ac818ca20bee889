#include "hopfren/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace hopfren {

namespace {

// union-find over a small id range
struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

FeynmanGraph::FeynmanGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::map<int, int> index_of;
    for (size_t i = 0; i < vertices_.size(); ++i) {
        if (index_of.count(vertices_[i].id))
            throw invariant_violation("duplicate vertex id " + std::to_string(vertices_[i].id));
        index_of[vertices_[i].id] = static_cast<int>(i);
    }
    std::map<int, int> valence;
    for (size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (!index_of.count(ed.a) || !index_of.count(ed.b))
            throw invariant_violation("edge references unknown vertex id");
        valence[ed.a] += 1;
        valence[ed.b] += 1;  // self-loops count twice by falling through both increments
        const Vertex& va = vertices_[static_cast<size_t>(index_of[ed.a])];
        const Vertex& vb = vertices_[static_cast<size_t>(index_of[ed.b])];
        if (va.kind == VertexKind::internal && vb.kind == VertexKind::internal)
            internal_edge_indices_.push_back(static_cast<int>(e));
    }
    std::set<int> ext_indices;
    for (const Vertex& v : vertices_) {
        if (v.kind == VertexKind::internal) {
            ++internal_vertex_count_;
            if (v.ext_index != 0)
                throw invariant_violation("internal vertex carries an external index");
            if (valence[v.id] != 3)
                throw invariant_violation("internal vertex " + std::to_string(v.id) +
                                          " has valence " + std::to_string(valence[v.id]) +
                                          ", expected 3");
        } else {
            ++ext_count_;
            if (valence[v.id] != 1)
                throw invariant_violation("external vertex " + std::to_string(v.id) +
                                          " has valence " + std::to_string(valence[v.id]) +
                                          ", expected 1");
            if (v.ext_index < 1) throw invariant_violation("external index must be >= 1");
            if (!ext_indices.insert(v.ext_index).second)
                throw invariant_violation("duplicate external index " +
                                          std::to_string(v.ext_index));
        }
    }
    if (!ext_indices.empty() &&
        (*ext_indices.begin() != 1 || *ext_indices.rbegin() != ext_count_))
        throw invariant_violation("external indices must be exactly 1..E with no gaps");
    internal_edge_count_ = static_cast<int>(internal_edge_indices_.size());

    if (!vertices_.empty()) {
        DisjointSet ds(static_cast<int>(vertices_.size()));
        for (const Edge& ed : edges_) ds.unite(index_of[ed.a], index_of[ed.b]);
        int root = ds.find(0);
        for (size_t i = 1; i < vertices_.size(); ++i)
            if (ds.find(static_cast<int>(i)) != root)
                throw invariant_violation("graph is not connected");
    }
}

bool FeynmanGraph::is_internal(int vertex_id) const {
    return vertex(vertex_id).kind == VertexKind::internal;
}

const Vertex& FeynmanGraph::vertex(int vertex_id) const {
    for (const Vertex& v : vertices_)
        if (v.id == vertex_id) return v;
    throw invariant_violation("unknown vertex id " + std::to_string(vertex_id));
}

FeynmanGraph FeynmanGraph::bubble() {
    return FeynmanGraph({{0, VertexKind::internal, 0},
                         {1, VertexKind::internal, 0},
                         {2, VertexKind::external, 1},
                         {3, VertexKind::external, 2}},
                        {{0, 1}, {0, 1}, {0, 2}, {1, 3}});
}

FeynmanGraph FeynmanGraph::triangle() {
    return FeynmanGraph({{0, VertexKind::internal, 0},
                         {1, VertexKind::internal, 0},
                         {2, VertexKind::internal, 0},
                         {3, VertexKind::external, 1},
                         {4, VertexKind::external, 2},
                         {5, VertexKind::external, 3}},
                        {{0, 1}, {1, 2}, {2, 0}, {0, 3}, {1, 4}, {2, 5}});
}

FeynmanGraph FeynmanGraph::nested_two_loop() {
    // external legs at 1 and 2; an inner bubble on vertices 3,4
    return FeynmanGraph({{1, VertexKind::internal, 0},
                         {2, VertexKind::internal, 0},
                         {3, VertexKind::internal, 0},
                         {4, VertexKind::internal, 0},
                         {5, VertexKind::external, 1},
                         {6, VertexKind::external, 2}},
                        {{1, 2}, {1, 3}, {3, 4}, {3, 4}, {4, 2}, {1, 5}, {2, 6}});
}

FeynmanGraph FeynmanGraph::single_vertex_tree() {
    return FeynmanGraph({{0, VertexKind::internal, 0},
                         {1, VertexKind::external, 1},
                         {2, VertexKind::external, 2},
                         {3, VertexKind::external, 3}},
                        {{0, 1}, {0, 2}, {0, 3}});
}

namespace {

// connectivity of the whole vertex set when one edge index is skipped
bool connected_skipping(const FeynmanGraph& g, int skip_edge) {
    std::map<int, int> index_of;
    const auto& vs = g.vertices();
    for (size_t i = 0; i < vs.size(); ++i) index_of[vs[i].id] = static_cast<int>(i);
    DisjointSet ds(static_cast<int>(vs.size()));
    const auto& es = g.edges();
    for (size_t e = 0; e < es.size(); ++e) {
        if (static_cast<int>(e) == skip_edge) continue;
        ds.unite(index_of[es[e].a], index_of[es[e].b]);
    }
    int root = ds.find(0);
    for (size_t i = 1; i < vs.size(); ++i)
        if (ds.find(static_cast<int>(i)) != root) return false;
    return true;
}

}  // namespace

bool is_one_particle_irreducible(const FeynmanGraph& g) {
    if (g.internal_edge_count() == 0) return false;
    for (int e : g.internal_edge_indices())
        if (!connected_skipping(g, e)) return false;
    return true;
}

int loop_number(const FeynmanGraph& g) {
    if (g.internal_vertex_count() == 0) return 0;
    // internal skeleton is connected for a connected graph with valence-1 externals
    return g.internal_edge_count() - g.internal_vertex_count() + 1;
}

int superficial_degree(const FeynmanGraph& g, int dim) {
    if (!is_one_particle_irreducible(g))
        throw std::domain_error("superficial degree is defined for 1PI graphs only");
    return dim * loop_number(g) - 2 * g.internal_edge_count();
}

bool is_divergent(const FeynmanGraph& g, int dim) { return superficial_degree(g, dim) >= 0; }

int component_leg_count(const FeynmanGraph& g, const SubgraphComponent& comp) {
    // each internal vertex has total valence 3; legs are the valence not used
    // by occupied edges (self-loops consume two)
    std::map<int, int> used;
    const auto& es = g.edges();
    for (int e : comp.edge_indices) {
        used[es[static_cast<size_t>(e)].a] += 1;
        used[es[static_cast<size_t>(e)].b] += 1;
    }
    int legs = 0;
    for (int v : comp.vertex_ids) legs += 3 - used[v];
    return legs;
}

namespace {

// 1PI of a component as a standalone diagram: every occupied edge non-bridging
bool component_is_1pi(const FeynmanGraph& g, const std::vector<int>& vertex_ids,
                      const std::vector<int>& edge_indices) {
    if (edge_indices.empty()) return false;
    std::map<int, int> pos;
    for (size_t i = 0; i < vertex_ids.size(); ++i) pos[vertex_ids[i]] = static_cast<int>(i);
    const auto& es = g.edges();
    for (int skip : edge_indices) {
        DisjointSet ds(static_cast<int>(vertex_ids.size()));
        for (int e : edge_indices) {
            if (e == skip) continue;
            ds.unite(pos[es[static_cast<size_t>(e)].a], pos[es[static_cast<size_t>(e)].b]);
        }
        int root = ds.find(0);
        for (size_t i = 1; i < vertex_ids.size(); ++i)
            if (ds.find(static_cast<int>(i)) != root) return false;
    }
    return true;
}

std::vector<SubgraphComponent> components_of_edge_set(const FeynmanGraph& g,
                                                      const std::vector<int>& edge_indices) {
    const auto& es = g.edges();
    std::map<int, int> pos;  // vertex id -> dense position
    std::vector<int> ids;
    for (int e : edge_indices) {
        for (int v : {es[static_cast<size_t>(e)].a, es[static_cast<size_t>(e)].b}) {
            if (!pos.count(v)) {
                pos[v] = static_cast<int>(ids.size());
                ids.push_back(v);
            }
        }
    }
    DisjointSet ds(static_cast<int>(ids.size()));
    for (int e : edge_indices)
        ds.unite(pos[es[static_cast<size_t>(e)].a], pos[es[static_cast<size_t>(e)].b]);
    std::map<int, SubgraphComponent> by_root;
    for (int v : ids) by_root[ds.find(pos[v])].vertex_ids.push_back(v);
    for (int e : edge_indices)
        by_root[ds.find(pos[es[static_cast<size_t>(e)].a])].edge_indices.push_back(e);
    std::vector<SubgraphComponent> out;
    for (auto& [root, comp] : by_root) {
        std::sort(comp.vertex_ids.begin(), comp.vertex_ids.end());
        std::sort(comp.edge_indices.begin(), comp.edge_indices.end());
        out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end(), [](const SubgraphComponent& x, const SubgraphComponent& y) {
        return x.vertex_ids.front() < y.vertex_ids.front();
    });
    return out;
}

bool embedding_is_admissible(const FeynmanGraph& g, const SubgraphEmbedding& emb) {
    std::set<int> all_edges;
    std::set<int> all_vertices;
    for (const auto& comp : emb.components) {
        if (comp.edge_indices.empty()) return false;
        for (int e : comp.edge_indices)
            if (e < 0 || e >= static_cast<int>(g.edges().size()) || !all_edges.insert(e).second)
                return false;
        for (int v : comp.vertex_ids)
            if (!g.is_internal(v) || !all_vertices.insert(v).second) return false;
        // occupied edges must live on the component's vertices
        std::set<int> vset(comp.vertex_ids.begin(), comp.vertex_ids.end());
        for (int e : comp.edge_indices) {
            const Edge& ed = g.edges()[static_cast<size_t>(e)];
            if (!vset.count(ed.a) || !vset.count(ed.b)) return false;
        }
        if (!component_is_1pi(g, comp.vertex_ids, comp.edge_indices)) return false;
        int legs = component_leg_count(g, comp);
        int loops = static_cast<int>(comp.edge_indices.size()) -
                    static_cast<int>(comp.vertex_ids.size()) + 1;
        if (6 * loops - 2 * static_cast<int>(comp.edge_indices.size()) < 0) return false;
        if (legs > 3) return false;  // redundant with power counting in dim 6, kept explicit
    }
    if (all_edges.empty()) return false;
    if (static_cast<int>(all_edges.size()) >= g.internal_edge_count()) return false;  // proper
    return true;
}

}  // namespace

std::vector<SubgraphEmbedding> enumerate_admissible_subgraphs(const FeynmanGraph& g) {
    const std::vector<int>& internal = g.internal_edge_indices();
    int n = static_cast<int>(internal.size());
    std::vector<SubgraphEmbedding> out;
    if (n == 0) return out;
    for (unsigned long mask = 1; mask + 1 < (1UL << n); ++mask) {
        std::vector<int> chosen;
        for (int i = 0; i < n; ++i)
            if (mask & (1UL << i)) chosen.push_back(internal[static_cast<size_t>(i)]);
        SubgraphEmbedding emb{components_of_edge_set(g, chosen)};
        bool ok = true;
        for (const auto& comp : emb.components) {
            if (!component_is_1pi(g, comp.vertex_ids, comp.edge_indices)) {
                ok = false;
                break;
            }
            int loops = static_cast<int>(comp.edge_indices.size()) -
                        static_cast<int>(comp.vertex_ids.size()) + 1;
            if (6 * loops - 2 * static_cast<int>(comp.edge_indices.size()) < 0) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(std::move(emb));
    }
    return out;
}

FeynmanGraph component_graph(const FeynmanGraph& g, const SubgraphComponent& comp) {
    const auto& es = g.edges();
    std::set<int> vset(comp.vertex_ids.begin(), comp.vertex_ids.end());
    std::set<int> eset(comp.edge_indices.begin(), comp.edge_indices.end());
    std::vector<Vertex> vs;
    for (int v : comp.vertex_ids) vs.push_back({v, VertexKind::internal, 0});
    std::vector<Edge> edges;
    for (int e : comp.edge_indices) edges.push_back(es[static_cast<size_t>(e)]);
    // legs: half-edges of unoccupied parent edges incident to the component, plus
    // parent external legs attached to it; order is deterministic (edge index, endpoint)
    int next_id = 1 + *std::max_element(comp.vertex_ids.begin(), comp.vertex_ids.end());
    int ext_index = 1;
    for (size_t e = 0; e < es.size(); ++e) {
        if (eset.count(static_cast<int>(e))) continue;
        for (int end = 0; end < 2; ++end) {
            int v = end == 0 ? es[e].a : es[e].b;
            if (!vset.count(v)) continue;
            vs.push_back({next_id, VertexKind::external, ext_index++});
            edges.push_back({v, next_id});
            ++next_id;
        }
    }
    return FeynmanGraph(std::move(vs), std::move(edges));
}

FeynmanGraph contract(const FeynmanGraph& g, const SubgraphEmbedding& emb) {
    if (!embedding_is_admissible(g, emb))
        throw std::domain_error("subgraph embedding is not admissible in this graph");

    std::map<int, int> collapse_to;  // parent vertex id -> collapsed vertex id
    std::set<int> contracted_edges;
    std::set<int> two_leg_collapsed;
    int next_id = 0;
    for (const Vertex& v : g.vertices()) next_id = std::max(next_id, v.id + 1);
    for (const auto& comp : emb.components) {
        int cid = next_id++;
        for (int v : comp.vertex_ids) collapse_to[v] = cid;
        for (int e : comp.edge_indices) contracted_edges.insert(e);
        if (component_leg_count(g, comp) == 2) two_leg_collapsed.insert(cid);
    }

    std::vector<Vertex> vs;
    for (const Vertex& v : g.vertices())
        if (!collapse_to.count(v.id)) vs.push_back(v);
    for (const auto& comp : emb.components)
        vs.push_back({collapse_to[comp.vertex_ids.front()], VertexKind::internal, 0});

    struct MutableEdge {
        int a, b;
        bool alive = true;
    };
    std::vector<MutableEdge> edges;
    const auto& es = g.edges();
    for (size_t e = 0; e < es.size(); ++e) {
        if (contracted_edges.count(static_cast<int>(e))) continue;
        int a = es[e].a, b = es[e].b;
        if (collapse_to.count(a)) a = collapse_to[a];
        if (collapse_to.count(b)) b = collapse_to[b];
        edges.push_back({a, b, true});
    }

    // dissolve two-leg collapsed vertices: join their two incident half-edges
    for (int cid : two_leg_collapsed) {
        int first = -1, second = -1;
        for (size_t i = 0; i < edges.size(); ++i) {
            if (!edges[i].alive) continue;
            int hits = (edges[i].a == cid ? 1 : 0) + (edges[i].b == cid ? 1 : 0);
            if (hits == 2)
                throw std::domain_error(
                    "contraction would create a vertexless loop (vacuum subdiagram)");
            if (hits == 1) (first < 0 ? first : second) = static_cast<int>(i);
        }
        if (first < 0 || second < 0)
            throw std::domain_error("two-leg component lost its attachments");
        int far1 = edges[static_cast<size_t>(first)].a == cid ? edges[static_cast<size_t>(first)].b
                                                              : edges[static_cast<size_t>(first)].a;
        int far2 = edges[static_cast<size_t>(second)].a == cid
                       ? edges[static_cast<size_t>(second)].b
                       : edges[static_cast<size_t>(second)].a;
        edges[static_cast<size_t>(first)] = {far1, far2, true};
        edges[static_cast<size_t>(second)].alive = false;
        // the dissolved vertex disappears from the vertex list
        vs.erase(std::remove_if(vs.begin(), vs.end(),
                                [cid](const Vertex& v) { return v.id == cid; }),
                 vs.end());
    }

    std::vector<Edge> final_edges;
    for (const MutableEdge& e : edges)
        if (e.alive) final_edges.push_back({e.a, e.b});
    return FeynmanGraph(std::move(vs), std::move(final_edges));
}

}  // namespace hopfren
