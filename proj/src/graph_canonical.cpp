#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hopfren/graph.hpp"

namespace hopfren {

namespace {

// Dense view of a graph for labeling work: vertices 0..n-1, internals first
// (in input order), then externals sorted by ext_index.
struct DenseGraph {
    int n_internal = 0;
    int n_external = 0;
    std::vector<std::vector<int>> mult;  // symmetric multiplicity matrix; diagonal = self-loops
    std::vector<int> ext_index;          // for dense id >= n_internal
};

DenseGraph densify(const FeynmanGraph& g) {
    DenseGraph d;
    std::map<int, int> dense_of;
    for (const Vertex& v : g.vertices())
        if (v.kind == VertexKind::internal) dense_of[v.id] = d.n_internal++;
    std::vector<const Vertex*> exts;
    for (const Vertex& v : g.vertices())
        if (v.kind == VertexKind::external) exts.push_back(&v);
    std::sort(exts.begin(), exts.end(),
              [](const Vertex* a, const Vertex* b) { return a->ext_index < b->ext_index; });
    for (const Vertex* v : exts) {
        dense_of[v->id] = d.n_internal + d.n_external;
        d.ext_index.push_back(v->ext_index);
        ++d.n_external;
    }
    int n = d.n_internal + d.n_external;
    d.mult.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
    for (const Edge& e : g.edges()) {
        int a = dense_of[e.a], b = dense_of[e.b];
        if (a == b)
            d.mult[static_cast<size_t>(a)][static_cast<size_t>(a)] += 1;
        else {
            d.mult[static_cast<size_t>(a)][static_cast<size_t>(b)] += 1;
            d.mult[static_cast<size_t>(b)][static_cast<size_t>(a)] += 1;
        }
    }
    return d;
}

// iterative color refinement: new color of v is (old color, multiset of
// (neighbor color, multiplicity), self-loop count)
std::vector<int> refine(const DenseGraph& d, std::vector<int> color) {
    int n = d.n_internal + d.n_external;
    while (true) {
        std::vector<std::pair<std::vector<int>, int>> keyed(static_cast<size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<std::pair<int, int>> nb;
            for (int u = 0; u < n; ++u) {
                if (u == v) continue;
                int m = d.mult[static_cast<size_t>(v)][static_cast<size_t>(u)];
                if (m > 0) nb.push_back({color[static_cast<size_t>(u)], m});
            }
            std::sort(nb.begin(), nb.end());
            std::vector<int> key;
            key.push_back(color[static_cast<size_t>(v)]);
            key.push_back(d.mult[static_cast<size_t>(v)][static_cast<size_t>(v)]);
            for (auto& [c, m] : nb) {
                key.push_back(c);
                key.push_back(m);
            }
            keyed[static_cast<size_t>(v)] = {std::move(key), v};
        }
        std::vector<std::pair<std::vector<int>, int>> sorted = keyed;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> next(static_cast<size_t>(n));
        int c = -1;
        for (size_t i = 0; i < sorted.size(); ++i) {
            if (i == 0 || sorted[i].first != sorted[i - 1].first) ++c;
            next[static_cast<size_t>(sorted[i].second)] = c;
        }
        if (next == color) return color;
        int old_classes = *std::max_element(color.begin(), color.end());
        int new_classes = *std::max_element(next.begin(), next.end());
        color = std::move(next);
        if (new_classes == old_classes) return color;
    }
}

std::vector<int> initial_colors(const DenseGraph& d) {
    int n = d.n_internal + d.n_external;
    std::vector<int> color(static_cast<size_t>(n), 0);
    // externals get pairwise distinct colors above the shared internal color
    for (int i = 0; i < d.n_external; ++i)
        color[static_cast<size_t>(d.n_internal + i)] = d.ext_index[static_cast<size_t>(i)];
    return color;
}

std::string serialize_with_order(const DenseGraph& d, const std::vector<int>& rank) {
    // rank maps internal dense id -> canonical position; externals keep ext_index order
    std::ostringstream os;
    os << "v" << d.n_internal << "e" << d.n_external << "|";
    std::vector<std::string> items;
    for (int v = 0; v < d.n_internal; ++v) {
        int ls = d.mult[static_cast<size_t>(v)][static_cast<size_t>(v)];
        for (int k = 0; k < ls; ++k)
            items.push_back(std::to_string(rank[static_cast<size_t>(v)]) + "-" +
                            std::to_string(rank[static_cast<size_t>(v)]));
        for (int u = v + 1; u < d.n_internal; ++u) {
            int m = d.mult[static_cast<size_t>(v)][static_cast<size_t>(u)];
            int p = std::min(rank[static_cast<size_t>(v)], rank[static_cast<size_t>(u)]);
            int q = std::max(rank[static_cast<size_t>(v)], rank[static_cast<size_t>(u)]);
            for (int k = 0; k < m; ++k)
                items.push_back(std::to_string(p) + "-" + std::to_string(q));
        }
    }
    std::sort(items.begin(), items.end());
    for (size_t i = 0; i < items.size(); ++i) os << (i ? "," : "") << items[i];
    os << "|x";
    for (int i = 0; i < d.n_external; ++i) {
        int ev = d.n_internal + i;
        os << (i ? "," : "") << ":";
        bool attached = false;
        for (int u = 0; u < d.n_internal && !attached; ++u)
            if (d.mult[static_cast<size_t>(ev)][static_cast<size_t>(u)] > 0) {
                os << rank[static_cast<size_t>(u)];
                attached = true;
            }
        for (int j = 0; j < d.n_external && !attached; ++j)
            if (j != i && d.mult[static_cast<size_t>(ev)][static_cast<size_t>(d.n_internal + j)] > 0) {
                os << "e" << d.ext_index[static_cast<size_t>(j)];
                attached = true;
            }
    }
    return os.str();
}

void search_leaves(const DenseGraph& d, std::vector<int> color, std::string& best,
                   bool& have_best) {
    color = refine(d, color);
    // find the first non-singleton internal cell (smallest color value)
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < d.n_internal; ++v) cells[color[static_cast<size_t>(v)]].push_back(v);
    const std::vector<int>* target = nullptr;
    for (auto& [c, members] : cells)
        if (members.size() > 1) {
            target = &members;
            break;
        }
    int n = d.n_internal + d.n_external;
    if (!target) {
        // all internal cells singleton: colors induce the canonical order
        std::vector<int> order(static_cast<size_t>(d.n_internal));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return color[static_cast<size_t>(a)] < color[static_cast<size_t>(b)];
        });
        std::vector<int> rank(static_cast<size_t>(d.n_internal));
        for (size_t i = 0; i < order.size(); ++i) rank[static_cast<size_t>(order[i])] = static_cast<int>(i);
        std::string label = serialize_with_order(d, rank);
        if (!have_best || label < best) {
            best = label;
            have_best = true;
        }
        return;
    }
    int fresh = 1 + *std::max_element(color.begin(), color.end());
    for (int v : *target) {
        std::vector<int> branched = color;
        branched[static_cast<size_t>(v)] = fresh;
        (void)n;
        search_leaves(d, std::move(branched), best, have_best);
    }
}

long long factorial(int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// number of internal-vertex permutations preserving adjacency, external legs pinned
long long vertex_automorphisms(const DenseGraph& d, const std::vector<int>& stable_color) {
    std::map<int, std::vector<int>> cells;
    for (int v = 0; v < d.n_internal; ++v)
        cells[stable_color[static_cast<size_t>(v)]].push_back(v);
    std::vector<std::vector<int>> groups;
    for (auto& [c, members] : cells) groups.push_back(members);

    int n = d.n_internal + d.n_external;
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    long long count = 0;

    // iterate over products of within-cell permutations
    std::vector<std::vector<int>> arrangements(groups.size());
    for (size_t gi = 0; gi < groups.size(); ++gi) arrangements[gi] = groups[gi];

    std::vector<size_t> idx;
    auto check = [&]() {
        for (int v = 0; v < n; ++v)
            for (int u = v; u < n; ++u)
                if (d.mult[static_cast<size_t>(v)][static_cast<size_t>(u)] !=
                    d.mult[static_cast<size_t>(perm[static_cast<size_t>(v)])]
                          [static_cast<size_t>(perm[static_cast<size_t>(u)])])
                    return false;
        return true;
    };

    std::function<void(size_t)> rec = [&](size_t gi) {
        if (gi == groups.size()) {
            if (check()) ++count;
            return;
        }
        std::vector<int> arr = groups[gi];
        std::sort(arr.begin(), arr.end());
        do {
            for (size_t k = 0; k < arr.size(); ++k)
                perm[static_cast<size_t>(groups[gi][k])] = arr[k];
            rec(gi + 1);
        } while (std::next_permutation(arr.begin(), arr.end()));
    };
    rec(0);
    return count;
}

}  // namespace

CanonicalForm canonical_form(const FeynmanGraph& g) {
    DenseGraph d = densify(g);
    std::vector<int> color = refine(d, initial_colors(d));

    std::string best;
    bool have_best = false;
    search_leaves(d, color, best, have_best);

    long long vaut = vertex_automorphisms(d, color);
    long long edge_factor = 1;
    for (int v = 0; v < d.n_internal; ++v) {
        int s = d.mult[static_cast<size_t>(v)][static_cast<size_t>(v)];
        edge_factor *= factorial(s);
        for (int k = 0; k < s; ++k) edge_factor *= 2;  // each self-loop flips
        for (int u = v + 1; u < d.n_internal; ++u)
            edge_factor *= factorial(d.mult[static_cast<size_t>(v)][static_cast<size_t>(u)]);
    }
    return CanonicalForm{best, vaut * edge_factor};
}

Rational symmetry_factor(const FeynmanGraph& g) {
    return Rational(1, canonical_form(g).automorphisms);
}

std::string generator_label(const FeynmanGraph& g) {
    int e = g.external_count();
    std::vector<int> perm(static_cast<size_t>(e));
    std::iota(perm.begin(), perm.end(), 1);
    std::string best;
    bool first = true;
    do {
        std::vector<Vertex> vs = g.vertices();
        for (Vertex& v : vs)
            if (v.kind == VertexKind::external)
                v.ext_index = perm[static_cast<size_t>(v.ext_index - 1)];
        FeynmanGraph relabeled(std::move(vs), g.edges());
        std::string label = canonical_form(relabeled).label;
        if (first || label < best) {
            best = label;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace hopfren
