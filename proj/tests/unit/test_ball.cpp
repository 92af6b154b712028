#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>

#include "ctlab/cayley_ball.hpp"

using namespace ctlab;

namespace {

// Distinct elements of length <= r, by brute force: every freely reduced word,
// grouped by abelian image, then pairwise equality through reduce.
std::vector<std::size_t> oracle_sphere_sizes(int r) {
    std::vector<Letters> words = {{}};
    std::vector<std::size_t> sizes(r + 1, 0);
    std::map<std::array<int, 4>, std::vector<Letters>> reps;
    std::size_t frontier = 0;
    for (int len = 0; len <= r; ++len) {
        const std::size_t end = words.size();
        for (std::size_t i = frontier; i < end; ++i) {
            const Letters w = words[i];
            auto& bucket = reps[abelianization(w)];
            bool seen = false;
            for (const Letters& u : bucket) {
                Letters probe = u;
                for (auto it = w.rbegin(); it != w.rend(); ++it) probe.push_back(inverse(*it));
                if (is_trivial(probe)) {
                    seen = true;
                    break;
                }
            }
            if (!seen) {
                bucket.push_back(w);
                ++sizes[len];
            }
            if (len < r) {
                for (Letter x : kAllLetters) {
                    if (!w.empty() && w.back() == inverse(x)) continue;
                    Letters next = w;
                    next.push_back(x);
                    words.push_back(std::move(next));
                }
            }
        }
        frontier = end;
    }
    return sizes;
}

BallOptions opts(int r, int margin = 0) {
    BallOptions o;
    o.radius = r;
    o.margin = margin;
    o.cross_check = true;
    return o;
}

}  // namespace

TEST(Ball, RadiusOne) {
    const auto ball = CayleyBall::build(opts(1));
    EXPECT_EQ(ball.size(), 9u);
    EXPECT_EQ(ball.edge_count(), 8u);
    EXPECT_EQ(ball.label(0), "1");
    EXPECT_EQ(ball.point(0).x, 0.0);
}

TEST(Ball, RadiusTwoMatchesOracle) {
    const auto ball = CayleyBall::build(opts(2));
    const auto sizes = oracle_sphere_sizes(2);
    std::size_t total = 0;
    for (int r = 0; r <= 2; ++r) {
        EXPECT_EQ(ball.sphere_size(r), sizes[r]);
        total += sizes[r];
    }
    EXPECT_EQ(ball.size(), total);
}

TEST(Ball, PrefixMatchesOracleAtFour) {
    BallOptions o = opts(6, 2);
    o.cross_check = false;
    const auto ball = CayleyBall::build(o);
    const auto sizes = oracle_sphere_sizes(4);
    std::size_t total = 0;
    for (int r = 0; r <= 4; ++r) {
        EXPECT_EQ(ball.sphere_size(r), sizes[r]) << "r=" << r;
        total += sizes[r];
    }
    EXPECT_EQ(ball.ball_prefix(4), total);
    EXPECT_GT(ball.size(), 10'000u);
    EXPECT_LT(ball.size(), 1'000'000u);
}

TEST(Ball, CrossCheckedBuild) {
    EXPECT_NO_THROW(CayleyBall::build(opts(5, 1)));
}

TEST(Ball, GrowthRatio) {
    const auto ball = CayleyBall::build(opts(6, 1));
    for (int r = 2; r <= 5; ++r) {
        const double ratio = static_cast<double>(ball.ball_prefix(r + 1)) / static_cast<double>(ball.ball_prefix(r));
        EXPECT_GT(ratio, 4.0);
        EXPECT_LT(ratio, 8.0);
    }
}

TEST(Ball, WordsAreGeodesicAndShortlexOrdered) {
    const auto ball = CayleyBall::build(opts(4));
    for (VertexId v = 1; v < ball.size(); ++v) {
        EXPECT_EQ(static_cast<int>(ball.letters(v).size()), ball.depth(v));
        EXPECT_LT(ball.word(v - 1), ball.word(v));
        EXPECT_EQ(ball.locate(ball.letters(v)), std::optional<VertexId>(v));
        const auto p = ball.point(v);
        EXPECT_LT(p.x * p.x + p.y * p.y, 1.0);
    }
}

TEST(Ball, EdgesAreGeneratorSteps) {
    const auto ball = CayleyBall::build(opts(3));
    for (VertexId u = 0; u < ball.size(); ++u) {
        for (Letter g : kAllLetters) {
            const VertexId v = ball.neighbor(u, g);
            Letters w = ball.letters(u);
            w.push_back(g);
            const auto expect = ball.locate(w);
            if (v == kNoVertex) {
                EXPECT_FALSE(expect.has_value());
            } else {
                EXPECT_EQ(expect, std::optional<VertexId>(v));
                EXPECT_EQ(ball.neighbor(v, inverse(g)), u);
            }
        }
    }
}

TEST(Ball, Bipartite) {
    const auto ball = CayleyBall::build(opts(4));
    for (VertexId u = 0; u < ball.size(); ++u) {
        for (VertexId v : ball.neighbors(u)) {
            if (v != kNoVertex) EXPECT_EQ((ball.depth(u) + ball.depth(v)) % 2, 1);
        }
    }
}

TEST(Ball, LocateAndAt) {
    const auto ball = CayleyBall::build(opts(4));
    EXPECT_EQ(ball.at("abAB"), ball.at("dcDC"));
    EXPECT_EQ(ball.depth(ball.at("abab")), 4);
    EXPECT_THROW(ball.at("aaaaa"), TruncationError);
    EXPECT_FALSE(ball.locate(Word::parse("ababa")).has_value());
}

TEST(Ball, TrustedInterior) {
    const auto ball = CayleyBall::build(opts(4, 2));
    EXPECT_EQ(ball.trusted_radius(), 2);
    EXPECT_EQ(ball.trusted_vertices().size(), 1u + 8u + 56u);
    EXPECT_TRUE(ball.trusted(ball.at("ab")));
    EXPECT_FALSE(ball.trusted(ball.at("abc")));
}

TEST(Ball, Preconditions) {
    EXPECT_THROW(CayleyBall::build(opts(0)), PreconditionError);
    EXPECT_THROW(CayleyBall::build(opts(3, 3)), PreconditionError);
    BallOptions o = opts(5);
    o.vertex_cap = 1000;
    EXPECT_THROW(CayleyBall::build(o), ResourceLimitError);
}

TEST(Ball, CacheRoundTripAndCorruption) {
    const auto dir = std::filesystem::temp_directory_path() / "ctlab_ball_cache_test";
    std::filesystem::remove_all(dir);
    const BallOptions o = opts(4, 1);
    bool rebuilt = false;
    const auto a = CayleyBall::load_or_build(dir, o, &rebuilt);
    EXPECT_TRUE(rebuilt);
    const auto b = CayleyBall::load_or_build(dir, o, &rebuilt);
    EXPECT_FALSE(rebuilt);
    ASSERT_EQ(a.size(), b.size());
    for (VertexId v = 0; v < a.size(); ++v) {
        EXPECT_EQ(a.neighbors(v), b.neighbors(v));
        EXPECT_EQ(a.label(v), b.label(v));
    }

    const auto file = CayleyBall::cache_file(dir, o);
    {
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(0);
        f.write("XXXX", 4);
    }
    EXPECT_THROW(CayleyBall::load(file, o), Error);
    CayleyBall::load_or_build(dir, o, &rebuilt);
    EXPECT_TRUE(rebuilt);

    std::filesystem::resize_file(file, std::filesystem::file_size(file) - 5);
    EXPECT_THROW(CayleyBall::load(file, o), Error);

    CayleyBall::load_or_build(dir, o, &rebuilt);
    {
        // exponent byte of the identity's x coordinate
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(20 + 1 + 7, std::ios::beg);
        f.write("\x7f", 1);
    }
    EXPECT_THROW(CayleyBall::load(file, o), Error);
    std::filesystem::remove_all(dir);
}
