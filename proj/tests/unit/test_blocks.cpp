#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "ctlab/blocks.hpp"
#include "model_oracle.hpp"

using namespace ctlab;
using namespace oracle;

TEST(Blocks, LayoutOfMixedStack) {
    const auto& ball = ball_r(3);
    const auto m = ModelManifold::assemble(ball, specs_of({{false, 0, 0}, {true, 'a', 4}, {false, 'c', 1}}));
    EXPECT_EQ(m.sheet_count(), 1 + 1 + 3 + 1);
    EXPECT_EQ(m.size(), 6 * ball.size());
    EXPECT_EQ(m.levels(1), 4);
    EXPECT_EQ(m.bottom_sheet(1), 1);
    EXPECT_EQ(m.top_sheet(1), 4);
    for (int s = 0; s < m.sheet_count(); ++s) {
        EXPECT_EQ(m.sheet(s).electric, s == 2 || s == 3) << s;
    }
    EXPECT_EQ(m.gap_kind(0), EdgeKind::glue);
    EXPECT_EQ(m.gap_kind(1), EdgeKind::vertical);
    EXPECT_EQ(m.gap_kind(2), EdgeKind::twist);
    EXPECT_EQ(m.gap_kind(4), EdgeKind::glue);
    EXPECT_EQ(m.glue_distortion(2), 2);
    EXPECT_EQ(m.glue_distortion(0), 1);
    EXPECT_THROW(ModelManifold::assemble(ball, {}), PreconditionError);
}

TEST(Blocks, ThickIdentityDistances) {
    const auto& ball = ball_r(3);
    const auto m = ModelManifold::assemble(ball, specs_of({{false, 0, 0}}));
    const VertexId x = ball.at("ab");
    EXPECT_EQ(model_dist(m, m.global(0, x), m.global(0, x)), 0);
    EXPECT_EQ(model_dist(m, m.global(0, x), m.global(1, x)), 1);
    EXPECT_EQ(model_dist(m, m.global(0, 0), m.global(1, x)), 3);
}

TEST(Blocks, ThickTwistMatchesOracle) {
    const auto& ball = ball_r(4);
    const std::vector<Block> stack{{false, 'a', 1}};
    const auto m = ModelManifold::assemble(ball, specs_of(stack));
    const Oracle o(ball, stack);
    const auto d = o.dijkstra(0);
    const VertexId ba = ball.at("ba");
    EXPECT_EQ(model_dist(m, 0, m.global(1, ba)), d[ball.size() + ba]);
    // Vertical edge to b*a on level 1 starts at b, so the value is 2.
    EXPECT_EQ(d[ball.size() + ba], 2);
}

TEST(Blocks, ThinBlockMatchesOracle) {
    const auto& ball = ball_r(4);
    const std::vector<Block> stack{{true, 'a', 4}};
    const auto m = ModelManifold::assemble(ball, specs_of(stack));
    const Oracle o(ball, stack);
    const auto d = o.dijkstra(0);
    const auto mine = distances_from(m.graph(), 0);
    ASSERT_EQ(mine.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        ASSERT_EQ(mine[i], d[i] == (1 << 30) ? kUnreached : d[i]) << i;
    }
    EXPECT_EQ(mine[m.global(3, 0)], 3);
}

TEST(Blocks, MixedStackMatchesOracle) {
    const auto& ball = ball_r(4);
    const std::vector<Block> stack{{false, 0, 0}, {true, 'a', 4}, {false, 'c', 1}};
    const auto m = ModelManifold::assemble(ball, specs_of(stack));
    for (bool el : {true, false}) {
        const Oracle o(ball, stack, el);
        std::mt19937_64 rng(17);
        for (int i = 0; i < 4; ++i) {
            const auto s = static_cast<VertexId>(rng() % m.size());
            const auto d = o.dijkstra(s);
            const auto mine = distances_from(m.graph(el), s);
            for (int k = 0; k < 300; ++k) {
                const auto t = static_cast<std::size_t>(rng() % m.size());
                ASSERT_EQ(mine[t], d[t] == (1 << 30) ? kUnreached : d[t]) << s << "->" << t << " el=" << el;
            }
        }
    }
}

TEST(Blocks, StackingNeverShortcutsLowerBlock) {
    const auto& ball = ball_r(4);
    const auto one = ModelManifold::assemble(ball, specs_of({{false, 0, 0}}));
    const auto two = ModelManifold::assemble(ball, specs_of({{false, 0, 0}, {false, 0, 0}}));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5; ++i) {
        const auto s = static_cast<VertexId>(rng() % one.size());
        const auto d1 = distances_from(one.graph(), s);
        const auto d2 = distances_from(two.graph(), s);
        for (VertexId t = 0; t < one.size(); ++t) ASSERT_EQ(d1[t], d2[t]);
    }
}

TEST(Blocks, TubesHaveDiameterOne) {
    const auto& ball = ball_r(4);
    const auto m = ModelManifold::assemble(ball, specs_of({{true, 'c', 3}}));
    const auto& es = m.electric(CurveClass{Letter::c});
    int checked = 0;
    for (SetId s = 0; s < es.sets().size() && checked < 40; s += 7) {
        EXPECT_LE(tube_diameter(m, 0, s), 1) << s;
        ++checked;
    }
    EXPECT_EQ(tube_diameter(m, 0, es.set_of(0)), 1);
}

TEST(Blocks, ThinBlockVerticalSeparation) {
    const auto& ball = ball_r(3);
    const auto m = ModelManifold::assemble(ball, specs_of({{true, 'a', 2}}));
    std::vector<VertexId> bottom;
    for (VertexId v = 0; v < ball.size(); ++v) bottom.push_back(m.global(0, v));
    const auto d = distances(m.graph(), std::span<const VertexId>(bottom));
    int least = kUnreached;
    for (VertexId v = 0; v < ball.size(); ++v) least = std::min(least, d[m.global(3, v)]);
    EXPECT_EQ(least, 3);
}

TEST(Blocks, UnelectrocutedWeightsAreOne) {
    const auto& ball = ball_r(3);
    const auto m = ModelManifold::assemble(ball, specs_of({{true, 'a', 1}}));
    std::size_t zero_el = 0, zero_h = 0;
    for (VertexId u = 0; u < m.size(); ++u) {
        m.graph(true).for_each_edge(u, [&](VertexId, int w) { zero_el += w == 0; });
        m.graph(false).for_each_edge(u, [&](VertexId, int w) { zero_h += w == 0; });
    }
    EXPECT_GT(zero_el, 0u);
    EXPECT_EQ(zero_h, 0u);
}

TEST(Blocks, AssemblyIsDeterministic) {
    const auto& ball = ball_r(3);
    const auto specs = specs_of({{true, 'a', 2}, {false, 'c', -1}});
    const auto m1 = ModelManifold::assemble(ball, specs, 1);
    const auto m2 = ModelManifold::assemble(ball, specs, 3);
    EXPECT_TRUE(m1 == m2);
    std::multiset<std::tuple<VertexId, VertexId, int>> e1, e2;
    for (VertexId u = 0; u < m1.size(); ++u) {
        m1.graph().for_each_edge(u, [&](VertexId v, int w) { e1.insert({u, v, w}); });
        m2.graph().for_each_edge(u, [&](VertexId v, int w) { e2.insert({u, v, w}); });
    }
    EXPECT_EQ(e1, e2);
}

TEST(Blocks, StackJsonRoundTripAndErrors) {
    const auto specs = parse_stack(R"([{"kind":"thick","glue":"tw_c"},{"kind":"thin","curve":"a","n":16}])");
    ASSERT_EQ(specs.size(), 2u);
    EXPECT_EQ(describe(specs[0]), "thick(tw_c)");
    EXPECT_EQ(describe(specs[1]), "thin(a,16)");
    EXPECT_EQ(parse_stack(stack_to_json(specs)).size(), 2u);
    EXPECT_EQ(stack_to_json(parse_stack(stack_to_json(specs))), stack_to_json(specs));
    EXPECT_THROW(parse_stack(R"([{"kind":"thin","curve":"b","n":1}])"), ConfigError);
    EXPECT_THROW(parse_stack(R"([{"kind":"thin","curve":"a","n":0}])"), ConfigError);
    EXPECT_THROW(parse_stack(R"([{"kind":"thick","glue":"tw_b"}])"), ConfigError);
    EXPECT_THROW(parse_stack(R"([{"kind":"medium"}])"), ConfigError);
    EXPECT_THROW(parse_stack(R"({"kind":"thick"})"), ConfigError);
    EXPECT_THROW(parse_stack("[{"), ConfigError);
}

TEST(Blocks, CacheRoundTripAndCorruption) {
    const auto& ball = ball_r(4);
    const auto specs = specs_of({{true, 'a', 3}, {false, 'c', 1}});
    const auto dir = std::filesystem::temp_directory_path() / "ctlab_blocks_cache";
    std::filesystem::remove_all(dir);
    bool rebuilt = false;
    const auto m1 = ModelManifold::load_or_build(ball, specs, dir, 1, &rebuilt);
    EXPECT_TRUE(rebuilt);
    const auto m2 = ModelManifold::load_or_build(ball, specs, dir, 1, &rebuilt);
    EXPECT_FALSE(rebuilt);
    EXPECT_TRUE(m1 == m2);

    const auto file = ModelManifold::cache_file(dir, ball, specs);
    const auto size = std::filesystem::file_size(file);
    {
        // Swap one stored image for a different vertex.
        std::fstream f(file, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(static_cast<std::streamoff>(size - 4 * 20));
        const VertexId junk = 5;
        f.write(reinterpret_cast<const char*>(&junk), 4);
    }
    EXPECT_THROW(ModelManifold::load(ball, specs, file), Error);
    std::filesystem::resize_file(file, size - 3);
    EXPECT_THROW(ModelManifold::load(ball, specs, file), Error);
    EXPECT_THROW(ModelManifold::load(ball, specs_of({{true, 'a', 2}, {false, 'c', 1}}), file), Error);
    const auto m3 = ModelManifold::load_or_build(ball, specs, dir, 1, &rebuilt);
    EXPECT_TRUE(rebuilt);
    EXPECT_TRUE(m1 == m3);
    std::filesystem::remove_all(dir);
}
