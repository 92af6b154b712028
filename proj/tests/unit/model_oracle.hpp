#pragma once

#include <array>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ctlab/blocks.hpp"

// Independent reference models shared by the model-level tests.
namespace oracle {

using namespace ctlab;

inline const CayleyBall& ball_r(int r) {
    static std::map<int, CayleyBall> cache;
    auto it = cache.find(r);
    if (it == cache.end()) {
        BallOptions o;
        o.radius = r;
        o.margin = 2;
        it = cache.emplace(r, CayleyBall::build(o)).first;
    }
    return it->second;
}

inline std::string substitute(const std::string& w, char sigma, int n) {
    const char t = sigma == 'a' ? 'b' : 'd';
    const char T = static_cast<char>(t - 'a' + 'A');
    const char up = static_cast<char>(sigma - 'a' + 'A');
    const std::string pos(static_cast<std::size_t>(std::abs(n)), n >= 0 ? sigma : up);
    const std::string neg(static_cast<std::size_t>(std::abs(n)), n >= 0 ? up : sigma);
    std::string out;
    for (char ch : w) {
        if (ch == t) out += std::string(1, t) + pos;
        else if (ch == T) out += neg + std::string(1, T);
        else out += ch;
    }
    return out;
}

// Twist image by abelianization buckets and the word problem solver.
inline std::vector<VertexId> oracle_map(const CayleyBall& ball, char sigma, int n) {
    std::map<std::array<int, 4>, std::vector<VertexId>> buckets;
    for (VertexId v = 0; v < ball.size(); ++v) buckets[abelianization(ball.letters(v))].push_back(v);
    std::vector<VertexId> out(ball.size(), kNoVertex);
    for (VertexId v = 0; v < ball.size(); ++v) {
        const Word img = reduce(substitute(ball.label(v), sigma, n));
        auto it = buckets.find(abelianization(img.letters()));
        if (it == buckets.end()) continue;
        for (VertexId u : it->second) {
            if (same_element(img, ball.word(u))) out[v] = u;
        }
    }
    return out;
}

struct Block {
    bool thin;
    char sigma;  // thin curve or glue curve; 0 for identity glue
    int n;
};

// Explicit weighted graph of a stack, built level by level from first principles.
struct Oracle {
    std::size_t n;
    std::vector<std::vector<std::pair<std::size_t, int>>> adj;

    Oracle(const CayleyBall& ball, const std::vector<Block>& blocks, bool electrocuted = true) : n(ball.size()) {
        std::vector<char> sheet_sigma{0};
        struct Link {
            std::size_t lower;
            std::vector<VertexId> map;  // empty: identity
        };
        std::vector<Link> links;
        for (const auto& b : blocks) {
            const std::size_t bottom = sheet_sigma.size() - 1;
            if (b.thin) {
                sheet_sigma.push_back(b.sigma);
                sheet_sigma.push_back(b.sigma);
                sheet_sigma.push_back(0);
                links.push_back({bottom, {}});
                links.push_back({bottom + 1, oracle_map(ball, b.sigma, b.n)});
                links.push_back({bottom + 2, {}});
            } else {
                sheet_sigma.push_back(0);
                links.push_back({bottom, b.sigma ? oracle_map(ball, b.sigma, b.n) : std::vector<VertexId>{}});
            }
        }
        adj.resize(sheet_sigma.size() * n);
        for (std::size_t s = 0; s < sheet_sigma.size(); ++s) {
            for (VertexId v = 0; v < n; ++v) {
                for (Letter g : kAllLetters) {
                    const VertexId w = ball.neighbor(v, g);
                    if (w == kNoVertex) continue;
                    const char c = to_char(g);
                    const bool zero = electrocuted && sheet_sigma[s] && (c == sheet_sigma[s] || c == sheet_sigma[s] - 32);
                    adj[s * n + v].push_back({s * n + w, zero ? 0 : 1});
                }
            }
        }
        for (const auto& l : links) {
            for (VertexId v = 0; v < n; ++v) {
                const VertexId w = l.map.empty() ? v : l.map[v];
                if (w == kNoVertex) continue;
                adj[l.lower * n + v].push_back({(l.lower + 1) * n + w, 1});
                adj[(l.lower + 1) * n + w].push_back({l.lower * n + v, 1});
            }
        }
    }

    std::vector<int> dijkstra(std::size_t s) const { return dijkstra(std::vector<std::size_t>{s}); }

    std::vector<int> dijkstra(const std::vector<std::size_t>& sources) const {
        std::vector<int> d(adj.size(), 1 << 30);
        std::set<std::pair<int, std::size_t>> open;
        for (std::size_t s : sources) {
            d[s] = 0;
            open.insert({0, s});
        }
        while (!open.empty()) {
            auto [du, u] = *open.begin();
            open.erase(open.begin());
            for (auto [v, w] : adj[u]) {
                if (du + w < d[v]) {
                    open.erase({d[v], v});
                    d[v] = du + w;
                    open.insert({d[v], v});
                }
            }
        }
        return d;
    }
};

inline std::vector<BlockSpec> specs_of(const std::vector<Block>& blocks) {
    std::vector<BlockSpec> out;
    for (const auto& b : blocks) {
        if (b.thin) {
            out.emplace_back(ThinBlockSpec{CurveClass::parse(std::string(1, b.sigma)), b.n});
        } else if (!b.sigma) {
            out.emplace_back(ThickBlockSpec{Glue::identity});
        } else {
            const bool a = b.sigma == 'a';
            out.emplace_back(ThickBlockSpec{b.n > 0 ? (a ? Glue::tw_a : Glue::tw_c) : (a ? Glue::tw_a_inv : Glue::tw_c_inv)});
        }
    }
    return out;
}

}  // namespace oracle
