#pragma once

#include <string>
#include <vector>

#include "hopfren/errors.hpp"
#include "hopfren/rational.hpp"

namespace hopfren {

enum class VertexKind { internal, external };

struct Vertex {
    int id = 0;
    VertexKind kind = VertexKind::internal;
    int ext_index = 0;  // 1-based position among external legs; 0 for internal vertices
};

struct Edge {
    int a = 0;
    int b = 0;  // unordered endpoints (vertex ids); a == b is a self-loop
};

// A trivalent-scalar Feynman multigraph: internal vertices of valence exactly 3,
// external vertices of valence exactly 1 carrying the leg ordering 1..E, connected.
// Construction validates all invariants and throws invariant_violation otherwise.
class FeynmanGraph {
  public:
    FeynmanGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }

    int external_count() const { return ext_count_; }
    int internal_vertex_count() const { return internal_vertex_count_; }
    int internal_edge_count() const { return internal_edge_count_; }

    bool is_internal(int vertex_id) const;
    const Vertex& vertex(int vertex_id) const;
    // indices into edges() of the edges with both endpoints internal
    const std::vector<int>& internal_edge_indices() const { return internal_edge_indices_; }

    // reference fixtures
    static FeynmanGraph bubble();            // one-loop propagator correction
    static FeynmanGraph triangle();          // one-loop vertex correction
    static FeynmanGraph nested_two_loop();   // two-loop propagator graph with a bubble inside
    static FeynmanGraph single_vertex_tree();  // one vertex, three external legs

  private:
    std::vector<Vertex> vertices_;
    std::vector<Edge> edges_;
    int ext_count_ = 0;
    int internal_vertex_count_ = 0;
    int internal_edge_count_ = 0;
    std::vector<int> internal_edge_indices_;
};

// A graph with no internal edge is by convention not one-particle irreducible.
bool is_one_particle_irreducible(const FeynmanGraph& g);

// first Betti number of the internal skeleton (internal edges and vertices only)
int loop_number(const FeynmanGraph& g);

// power-counting degree dim*L - 2*I of a 1PI graph; throws std::domain_error otherwise
int superficial_degree(const FeynmanGraph& g, int dim = 6);

bool is_divergent(const FeynmanGraph& g, int dim = 6);

// One connected component of a subgraph specification: the occupied internal
// vertices and the occupied parent edge indices.
struct SubgraphComponent {
    std::vector<int> vertex_ids;    // sorted
    std::vector<int> edge_indices;  // sorted indices into parent edges()
};

struct SubgraphEmbedding {
    std::vector<SubgraphComponent> components;  // vertex-disjoint, sorted by least vertex
};

// All proper nonempty unions of vertex-disjoint divergent 1PI subdiagrams,
// enumerated deterministically (ascending edge-subset bitmask).
std::vector<SubgraphEmbedding> enumerate_admissible_subgraphs(const FeynmanGraph& g);

// number of external legs a component has inside its parent
int component_leg_count(const FeynmanGraph& g, const SubgraphComponent& comp);

// the component as a standalone graph with fresh external vertices for its legs
FeynmanGraph component_graph(const FeynmanGraph& g, const SubgraphComponent& comp);

// Collapse each component to a point: three-leg components become internal vertices,
// two-leg components dissolve into a single edge joining their attachment points.
// Throws std::domain_error when the embedding is not admissible in g.
FeynmanGraph contract(const FeynmanGraph& g, const SubgraphEmbedding& emb);

struct CanonicalForm {
    std::string label;         // identical across isomorphic graphs (external legs pinned)
    long long automorphisms;   // graph automorphisms fixing every external leg, including
                               // parallel-edge permutations and self-loop flips
};

CanonicalForm canonical_form(const FeynmanGraph& g);

// 1/|Aut(g)|, exact
Rational symmetry_factor(const FeynmanGraph& g);

// Hopf generator identity: minimum of canonical_form().label over relabelings of the
// external ordering, so that subgraph components (whose leg order is not canonical)
// acquire a well-defined label.
std::string generator_label(const FeynmanGraph& g);

struct EnumerationOptions {
    int max_loop_bound = 4;  // guard for the superexponential generation cost
};

// One representative per isomorphism class of 1PI graphs with the given number of
// external legs and loop number between 1 and max_loops, sorted by (loops, label).
std::vector<FeynmanGraph> enumerate_1pi_graphs(int max_loops, int ext_legs,
                                               const EnumerationOptions& opts = {});

}  // namespace hopfren
