#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "hopfren/graph.hpp"

namespace hopfren {

namespace {

struct Partial {
    int n;                           // internal vertex count
    std::vector<int> residual;       // remaining degree per internal vertex
    std::vector<std::vector<int>> m; // symmetric multiplicities, diagonal = self-loops
};

bool internally_connected(const Partial& p, const std::vector<int>& ext_at) {
    // all internal vertices must be mutually reachable through internal edges;
    // external legs never join two internal vertices
    (void)ext_at;
    std::vector<int> parent(static_cast<size_t>(p.n));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x)
            x = parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
    };
    for (int a = 0; a < p.n; ++a)
        for (int b = a + 1; b < p.n; ++b)
            if (p.m[static_cast<size_t>(a)][static_cast<size_t>(b)] > 0)
                parent[static_cast<size_t>(find(a))] = find(b);
    int root = find(0);
    for (int v = 1; v < p.n; ++v)
        if (find(v) != root) return false;
    return true;
}

FeynmanGraph assemble(const Partial& p, const std::vector<int>& ext_at) {
    std::vector<Vertex> vs;
    for (int v = 0; v < p.n; ++v) vs.push_back({v, VertexKind::internal, 0});
    std::vector<Edge> edges;
    for (int a = 0; a < p.n; ++a) {
        for (int k = 0; k < p.m[static_cast<size_t>(a)][static_cast<size_t>(a)]; ++k)
            edges.push_back({a, a});
        for (int b = a + 1; b < p.n; ++b)
            for (int k = 0; k < p.m[static_cast<size_t>(a)][static_cast<size_t>(b)]; ++k)
                edges.push_back({a, b});
    }
    for (size_t e = 0; e < ext_at.size(); ++e) {
        int id = p.n + static_cast<int>(e);
        vs.push_back({id, VertexKind::external, static_cast<int>(e) + 1});
        edges.push_back({ext_at[e], id});
    }
    return FeynmanGraph(std::move(vs), std::move(edges));
}

}  // namespace

std::vector<FeynmanGraph> enumerate_1pi_graphs(int max_loops, int ext_legs,
                                               const EnumerationOptions& opts) {
    if (max_loops < 0 || ext_legs < 0)
        throw std::domain_error("loop and leg counts must be non-negative");
    if (max_loops > opts.max_loop_bound)
        throw resource_limit_error("requested loop order " + std::to_string(max_loops) +
                                   " exceeds the configured bound " +
                                   std::to_string(opts.max_loop_bound));

    std::map<std::string, FeynmanGraph> found;  // generator label -> representative
    std::vector<std::pair<int, std::string>> order_keys;

    for (int loops = 1; loops <= max_loops; ++loops) {
        int v = 2 * loops - 2 + ext_legs;
        if (v < 1) continue;

        // distribute the E distinguishable legs over internal vertices
        std::vector<int> ext_at(static_cast<size_t>(ext_legs), 0);
        while (true) {
            std::vector<int> degree(static_cast<size_t>(v), 3);
            bool feasible = true;
            for (int a : ext_at) {
                if (--degree[static_cast<size_t>(a)] < 0) feasible = false;
            }
            if (feasible) {
                Partial p{v, degree,
                          std::vector<std::vector<int>>(static_cast<size_t>(v),
                                                        std::vector<int>(static_cast<size_t>(v), 0))};

                std::function<void(int)> place_vertex = [&](int a) {
                    if (a == p.n) {
                        if (!internally_connected(p, ext_at)) return;
                        FeynmanGraph g = assemble(p, ext_at);
                        if (!is_one_particle_irreducible(g)) return;
                        if (loop_number(g) != loops) return;
                        std::string label = generator_label(g);
                        if (!found.count(label)) {
                            found.emplace(label, g);
                            order_keys.push_back({loops, label});
                        }
                        return;
                    }
                    // self-loops at a, then edges toward b > a
                    int ra = p.residual[static_cast<size_t>(a)];
                    for (int s = 0; 2 * s <= ra; ++s) {
                        p.m[static_cast<size_t>(a)][static_cast<size_t>(a)] = s;
                        int rem0 = ra - 2 * s;
                        std::function<void(int, int)> distribute = [&](int b, int rem) {
                            if (b == p.n) {
                                if (rem == 0) {
                                    p.residual[static_cast<size_t>(a)] = 0;
                                    place_vertex(a + 1);
                                    p.residual[static_cast<size_t>(a)] = ra;
                                }
                                return;
                            }
                            int cap = std::min(rem, p.residual[static_cast<size_t>(b)]);
                            for (int k = 0; k <= cap; ++k) {
                                p.m[static_cast<size_t>(a)][static_cast<size_t>(b)] = k;
                                p.m[static_cast<size_t>(b)][static_cast<size_t>(a)] = k;
                                p.residual[static_cast<size_t>(b)] -= k;
                                distribute(b + 1, rem - k);
                                p.residual[static_cast<size_t>(b)] += k;
                            }
                            p.m[static_cast<size_t>(a)][static_cast<size_t>(b)] = 0;
                            p.m[static_cast<size_t>(b)][static_cast<size_t>(a)] = 0;
                        };
                        distribute(a + 1, rem0);
                    }
                    p.m[static_cast<size_t>(a)][static_cast<size_t>(a)] = 0;
                };
                place_vertex(0);
            }
            // advance the leg-assignment counter
            int pos = ext_legs - 1;
            while (pos >= 0 && ext_at[static_cast<size_t>(pos)] == v - 1) {
                ext_at[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++ext_at[static_cast<size_t>(pos)];
        }
    }

    std::sort(order_keys.begin(), order_keys.end());
    std::vector<FeynmanGraph> out;
    for (auto& [loops, label] : order_keys) out.push_back(found.at(label));
    return out;
}

}  // namespace hopfren
