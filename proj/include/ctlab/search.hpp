#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "ctlab/cayley_ball.hpp"
#include "ctlab/path.hpp"

namespace ctlab {

// A graph here is anything with size() and for_each_edge(u, f), where f(v, w)
// receives neighbours in a fixed order with weights w in {0, 1}.

struct BallGraph {
    const CayleyBall& ball;
    std::size_t size() const { return ball.size(); }
    template <class F>
    void for_each_edge(VertexId u, F&& f) const {
        for (VertexId v : ball.neighbors(u)) {
            if (v != kNoVertex) f(v, 1);
        }
    }
};

/// 0-1 BFS from `sources`. Distances above `limit` are left unreached. The
/// search stops once every vertex in `targets` is settled.
template <class G>
std::vector<int> distances(const G& g, std::span<const VertexId> sources, int limit = kUnreached,
                           std::span<const VertexId> targets = {}) {
    std::vector<int> dist(g.size(), kUnreached);
    std::vector<char> target_flag;
    std::size_t remaining = 0;
    if (!targets.empty()) {
        target_flag.assign(g.size(), 0);
        for (VertexId t : targets) {
            if (!target_flag[t]) ++remaining;
            target_flag[t] = 1;
        }
    }
    std::deque<VertexId> queue;
    for (VertexId s : sources) {
        if (dist[s] != 0) queue.push_back(s);
        dist[s] = 0;
    }
    std::vector<char> settled(g.size(), 0);
    while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        if (settled[u]) continue;
        settled[u] = 1;
        if (remaining > 0 && target_flag[u] && --remaining == 0) break;
        const int du = dist[u];
        g.for_each_edge(u, [&](VertexId v, int w) {
            const int nd = du + w;
            if (nd < dist[v] && nd <= limit) {
                dist[v] = nd;
                if (w == 0) {
                    queue.push_front(v);
                } else {
                    queue.push_back(v);
                }
            }
        });
    }
    return dist;
}

template <class G>
std::vector<int> distances_from(const G& g, VertexId source, int limit = kUnreached) {
    const VertexId s[1] = {source};
    return distances(g, std::span<const VertexId>(s), limit);
}

template <class G>
int distance(const G& g, VertexId u, VertexId v) {
    if (u == v) return 0;
    const VertexId s[1] = {u};
    const VertexId t[1] = {v};
    return distances(g, std::span<const VertexId>(s), kUnreached, std::span<const VertexId>(t))[v];
}

struct LabeledField {
    std::vector<int> dist;
    std::vector<VertexId> label;  // smallest nearest source
};

/// Multi-source 0-1 BFS that also records, for every vertex, the smallest
/// source vertex among those at minimal distance.
template <class G>
LabeledField nearest_sources(const G& g, std::span<const VertexId> sources, int limit = kUnreached) {
    LabeledField f{std::vector<int>(g.size(), kUnreached), std::vector<VertexId>(g.size(), kNoVertex)};
    std::deque<VertexId> queue;
    for (VertexId s : sources) {
        f.dist[s] = 0;
        f.label[s] = std::min(f.label[s], s);
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        const int du = f.dist[u];
        const VertexId lu = f.label[u];
        g.for_each_edge(u, [&](VertexId v, int w) {
            const int nd = du + w;
            if (nd > limit) return;
            if (nd < f.dist[v] || (nd == f.dist[v] && lu < f.label[v])) {
                f.dist[v] = nd;
                f.label[v] = lu;
                if (w == 0) {
                    queue.push_front(v);
                } else {
                    queue.push_back(v);
                }
            }
        });
    }
    return f;
}

inline constexpr std::uint64_t kLexUnreached = std::numeric_limits<std::uint64_t>::max();

// Cost of an edge of weight w under the (weighted length, edge count) order.
constexpr std::uint64_t lex_cost(int w) { return (static_cast<std::uint64_t>(w) << 32) + 1; }

/// Dijkstra on the lexicographic key (weighted length, number of edges) from
/// `source`, stopping once `stop` is settled.
template <class G>
std::vector<std::uint64_t> lex_distances(const G& g, VertexId source, VertexId stop = kNoVertex) {
    std::vector<std::uint64_t> key(g.size(), kLexUnreached);
    using Item = std::pair<std::uint64_t, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    key[source] = 0;
    heap.emplace(0, source);
    while (!heap.empty()) {
        const auto [k, u] = heap.top();
        heap.pop();
        if (k != key[u]) continue;
        if (u == stop) break;
        g.for_each_edge(u, [&](VertexId v, int w) {
            const std::uint64_t nk = k + lex_cost(w);
            if (nk < key[v]) {
                key[v] = nk;
                heap.emplace(nk, v);
            }
        });
    }
    return key;
}

/// Walks from `from` down a distance field to its zero set, always taking the
/// first neighbour (in edge order) that decreases the field by exactly the edge cost.
template <class G, class T, class Cost>
GPath descend(const G& g, const std::vector<T>& field, VertexId from, Cost cost) {
    GPath path = GPath::single(from);
    VertexId u = from;
    while (field[u] != T{0}) {
        VertexId next = kNoVertex;
        int weight = 0;
        g.for_each_edge(u, [&](VertexId v, int w) {
            if (next == kNoVertex && field[v] != std::numeric_limits<T>::max() && field[v] + cost(w) == field[u]) {
                next = v;
                weight = w;
            }
        });
        if (next == kNoVertex) throw Error("distance field has no descending edge");
        path.push(next, static_cast<std::uint8_t>(weight));
        u = next;
    }
    return path;
}

}  // namespace ctlab
