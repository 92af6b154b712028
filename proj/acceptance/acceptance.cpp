// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <sstream>

#include "ctlab/ct.hpp"
#include "ctlab/fuchsian.hpp"
#include "ctlab/projections.hpp"
#include "ctlab/report.hpp"
#include "ctlab/rng.hpp"
#include "ctlab/twist.hpp"

namespace fs = std::filesystem;
using namespace ctlab;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Env {
    fs::path cache;
    fs::path config;
    fs::path scratch;
    int jobs = 1;

    std::map<std::pair<int, int>, std::unique_ptr<CayleyBall>> balls;

    const CayleyBall& ball(int R, int margin) {
        auto& slot = balls[{R, margin}];
        if (!slot) {
            BallOptions opt;
            opt.radius = R;
            opt.margin = margin;
            slot = std::make_unique<CayleyBall>(CayleyBall::load_or_build(cache, opt));
        }
        return *slot;
    }
};

double spread(const std::vector<double>& xs) {
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return *hi > 0 ? (*hi - *lo) / *hi : 0.0;
}

std::string list(const std::vector<double>& xs) {
    std::string out;
    for (double x : xs) out += (out.empty() ? "" : ",") + CsvWriter::format(std::round(x * 1000) / 1000);
    return out;
}

// Plain BFS over ball edges; the distance oracle for the quasigeodesic check.
// Stops expanding at `limit`, so farther vertices read as unreached.
std::unordered_map<VertexId, int> bfs(const CayleyBall& ball, VertexId s, int limit) {
    std::unordered_map<VertexId, int> d{{s, 0}};
    std::deque<VertexId> q{s};
    while (!q.empty()) {
        const VertexId u = q.front();
        q.pop_front();
        if (d[u] == limit) continue;
        for (VertexId w : ball.neighbors(u)) {
            if (w != kNoVertex && !d.contains(w)) {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    return d;
}

// 1. Dehn reduction against relator products and certified nontrivial words.
Verdict word_problem() {
    std::mt19937_64 rng(derive_seed(1, 1));
    auto letter = [&] { return letter_at(static_cast<int>(uniform_below(rng, kLetterCount))); };
    std::size_t trivial_fail = 0;
    for (int t = 0; t < 1000; ++t) {
        Letters w;
        const int factors = 1 + static_cast<int>(uniform_below(rng, 3));
        for (int f = 0; f < factors; ++f) {
            Letters g;
            for (int i = 0, n = static_cast<int>(uniform_below(rng, 4)); i < n; ++i) g.push_back(letter());
            Letters r(kRelator.begin(), kRelator.end());
            std::rotate(r.begin(), r.begin() + uniform_below(rng, r.size()), r.end());
            if (uniform_below(rng, 2)) {
                std::reverse(r.begin(), r.end());
                for (auto& x : r) x = inverse(x);
            }
            w.insert(w.end(), g.begin(), g.end());
            w.insert(w.end(), r.begin(), r.end());
            for (auto it = g.rbegin(); it != g.rend(); ++it) w.push_back(inverse(*it));
        }
        for (int k = 0, n = static_cast<int>(uniform_below(rng, 3)); k < n; ++k) {
            const Letter x = letter();
            const auto at = w.begin() + uniform_below(rng, w.size() + 1);
            w.insert(w.insert(at, inverse(x)), x);
        }
        if (!reduce(w).empty()) ++trivial_fail;
    }
    // Nontrivial: freely reduced words whose abelian image or matrix is not the identity.
    std::size_t nontrivial_fail = 0, made = 0;
    while (made < 1000) {
        Letters w;
        const auto len = 1 + uniform_below(rng, 10);
        while (w.size() < len) {
            const Letter x = letter();
            if (!w.empty() && x == inverse(w.back())) continue;
            w.push_back(x);
        }
        const auto ab = abelianization(w);
        const bool abelian = std::any_of(ab.begin(), ab.end(), [](int v) { return v != 0; });
        if (!abelian && word_matrix(w).displacement() < 1.0L) continue;  // not certified
        ++made;
        if (reduce(w).empty()) ++nontrivial_fail;
    }
    return {trivial_fail == 0 && nontrivial_fail == 0,
            "trivial failures " + std::to_string(trivial_fail) + "/1000, nontrivial failures " +
                std::to_string(nontrivial_fail) + "/1000"};
}

// 2. Thin-triangle constant on two radii.
Verdict hyperbolicity(Env& env) {
    const auto d5 = estimate_delta(env.ball(5, 2), 500, 2, env.jobs);
    const auto d6 = estimate_delta(env.ball(6, 2), 500, 2, env.jobs);
    const bool ok = std::abs(d5.delta - d6.delta) <= 1 && d5.delta <= 6 && d6.delta <= 6;
    return {ok, "delta R5=" + std::to_string(d5.delta) + " R6=" + std::to_string(d6.delta)};
}

// 3. Electric geodesics stay electrically close to graph geodesics.
Verdict electric_tracking(Env& env) {
    const auto& b5 = env.ball(5, 2);
    const auto& b6 = env.ball(6, 2);
    // Vertex ids of the smaller ball are a prefix of the larger one's.
    const auto pool = b5.trusted_vertices();
    std::mt19937_64 rng(derive_seed(3, 0));
    std::vector<std::pair<VertexId, VertexId>> pairs;
    while (pairs.size() < 200) {
        const VertexId u = pool[uniform_below(rng, pool.size())], v = pool[uniform_below(rng, pool.size())];
        if (u != v) pairs.emplace_back(u, v);
    }
    const ElectricSpace e5(b5, CurveClass{Letter::a}), e6(b6, CurveClass{Letter::a});
    int k5 = 0, k6 = 0;
    for (auto [u, v] : pairs) {
        k5 = std::max(k5, tracking(e5, u, v).electric_to_geodesic);
        k6 = std::max(k6, tracking(e6, u, v).electric_to_geodesic);
    }
    return {k6 - k5 <= 1, "K_track R5=" + std::to_string(k5) + " R6=" + std::to_string(k6)};
}

// 4. Twists are electric isometries but stretch the hyperbolic metric.
Verdict twist_dichotomy(Env& env) {
    const auto& ball = env.ball(6, 2);
    const ElectricSpace es(ball, CurveClass{Letter::a});
    bool ok = true;
    std::string detail;
    for (int n : {1, 2, 4, 8, 16}) {
        const TwistMap tw{CurveClass{Letter::a}, n};
        const auto e = electric_distortion(es, tw, 300, derive_seed(4, n));
        const auto w = hyperbolic_witness(tw);
        // |b a^n| = n + 1: the abelian image has that many letters and the word itself is that long.
        const Word image = reduce(std::vector<Letter>{Letter::b}) * power(Letter::a, n);
        const auto ab = abelianization(image.letters());
        const int certified = std::accumulate(ab.begin(), ab.end(), 0, [](int s, int v) { return s + std::abs(v); });
        const bool row = e.max_defect == 0 && e.used > 0 && w.before == 1 && w.after == certified &&
                         static_cast<int>(image.size()) == certified && certified - 1 >= n;
        ok = ok && row;
        detail += (detail.empty() ? "" : "; ") + std::string("n=") + std::to_string(n) +
                  " electric=" + std::to_string(e.max_defect) + " used=" + std::to_string(e.used) +
                  " stretch=" + std::to_string(w.after - w.before);
    }
    return {ok, detail};
}

// 5. Projection diameters between cosets do not depend on the ball radius.
Verdict coboundedness_stability(Env& env) {
    const ElectricSpace e5(env.ball(5, 2), CurveClass{Letter::a});
    const ElectricSpace e6(env.ball(6, 2), CurveClass{Letter::a});
    auto keyed = [](const ElectricSpace& es) {
        std::map<std::pair<VertexId, VertexId>, int> out;
        for (const auto& p : projection_diameters(es, 3)) out[{es.set(p.onto).rep, es.set(p.from).rep}] = p.diameter;
        return out;
    };
    const auto k5 = keyed(e5), k6 = keyed(e6);
    std::size_t shared = 0, differ = 0;
    int D5 = 0, D6 = 0;
    for (const auto& [key, d] : k5) D5 = std::max(D5, d);
    for (const auto& [key, d] : k6) D6 = std::max(D6, d);
    for (const auto& [key, d] : k5) {
        auto it = k6.find(key);
        if (it == k6.end()) continue;
        ++shared;
        if (it->second != d) ++differ;
    }
    const bool ok = shared > 0 && differ == 0 && D5 == D6;
    return {ok, "D R5=" + std::to_string(D5) + " R6=" + std::to_string(D6) + ", shared pairs " +
                    std::to_string(shared) + ", differing " + std::to_string(differ)};
}

// 6. Electro-ambient paths are uniform quasigeodesics.
Verdict electro_ambient_quality(Env& env) {
    const auto& ball = env.ball(7, 1);
    const ElectricSpace es(ball, CurveClass{Letter::a});
    const int T = ball.trusted_radius();
    std::vector<double> Ks, epss;
    std::string detail;
    bool ok = true;
    for (int n : {1, 2, 3, 4}) {
        std::mt19937_64 rng(derive_seed(6, n));
        const TwistMap tw{CurveClass{Letter::a}, n};
        const std::size_t pool = ball.ball_prefix(2);
        double K = 1;
        int eps = 0;
        std::size_t used = 0, tries = 0;
        while (used < 200 && tries < 20000) {
            ++tries;
            // Twist images of a short pair; b letters become b a^n.
            const auto x = ball.locate(tw.apply(ball.letters(static_cast<VertexId>(uniform_below(rng, pool)))));
            const auto y = ball.locate(tw.apply(ball.letters(static_cast<VertexId>(uniform_below(rng, pool)))));
            if (!x || !y || !ball.trusted(*x) || !ball.trusted(*y) || *x == *y) continue;
            const GPath amb = electro_ambient(es, electric_geodesic(es, *x, *y));
            // l over d for every subpath, with d from an independent BFS.
            for (std::size_t i = 0; i < amb.size(); ++i) {
                const auto d = bfs(ball, amb.vertices[i], static_cast<int>(amb.size()));
                for (std::size_t j = i + 1; j < amb.size(); ++j) {
                    const auto it = d.find(amb.vertices[j]);
                    if (it == d.end()) continue;
                    const int l = static_cast<int>(j - i), dij = it->second;
                    if (dij > 0) K = std::max(K, static_cast<double>(l) / dij);
                    eps = std::max(eps, l - dij);
                }
            }
            ++used;
        }
        Ks.push_back(K);
        epss.push_back(eps);
        ok = ok && used == 200 && K <= 4 && eps <= 8;
    }
    ok = ok && spread(Ks) <= 0.25 && spread(epss) <= 0.25;
    return {ok, "K by n=1..4: " + list(Ks) + " (spread " + list({spread(Ks)}) + "), eps: " + list(epss) +
                    " (spread " + list({spread(epss)}) + ")"};
}

std::vector<BlockSpec> retraction_stack(int n) {
    return {ThickBlockSpec{Glue::identity}, ThinBlockSpec{CurveClass{Letter::a}, n}, ThickBlockSpec{Glue::tw_c},
            ThinBlockSpec{CurveClass{Letter::c}, n}};
}

// 7. The retraction constant does not grow with the twist exponent.
Verdict retraction_constant_stability(Env& env) {
    const auto& ball = env.ball(6, 2);
    const GPath lambda = geodesic(ball, ball.at("ac"), ball.at("CA"));
    std::vector<double> Cs;
    std::size_t edges = 0;
    for (int n : {1, 4, 16, 64}) {
        const auto m = ModelManifold::load_or_build(ball, retraction_stack(n), env.cache, env.jobs);
        const Ladder L = build_ladder(m, lambda);
        if (L.truncated_at >= 0) return {false, "n=" + std::to_string(n) + " ladder truncated: " + L.truncation};
        const auto pi = Retraction::build(m, L, env.jobs);
        const auto r = retraction_constant(m, pi, 0, 0, env.jobs);
        Cs.push_back(r.C);
        edges += r.edges;
    }
    return {spread(Cs) <= 0.25, "C by n=1,4,16,64: " + list(Cs) + " (spread " + list({spread(Cs)}) + ", " +
                                    std::to_string(edges) + " edges swept)"};
}

// 8. Points of admissible paths satisfy the height bound. One ladder only
// touches a few points per block, so the sample is spread over many ladders.
Verdict heights(Env& env) {
    const auto& ball = env.ball(6, 2);
    const auto m = ModelManifold::load_or_build(ball, retraction_stack(4), env.cache, env.jobs);
    const auto trusted = ball.trusted_vertices();
    const std::size_t want = 200;
    std::vector<std::size_t> have(m.block_count(), 0);
    std::mt19937_64 rng(derive_seed(8, 0));
    std::size_t ladders = 0, paths = 0, skipped = 0, violations = 0;
    int worst = std::numeric_limits<int>::max();
    auto short_block = [&] { return std::any_of(have.begin(), have.end(), [&](auto h) { return h < want; }); };
    for (int attempt = 0; attempt < 200 && short_block(); ++attempt) {
        const int N = static_cast<int>(uniform_below(rng, ball.trusted_radius()));
        GPath lambda;
        try {
            lambda = ct_test_geodesic(m, N, derive_seed(8, attempt + 1));
        } catch (const Error&) {
            continue;
        }
        const Ladder L = build_ladder(m, lambda);
        if (L.truncated_at >= 0) continue;
        ++ladders;
        const auto pi = Retraction::build(m, L, env.jobs);
        const int C = retraction_constant(m, pi, 100, derive_seed(8, 1000 + attempt), env.jobs).C;
        const auto H = height_table(m, L);
        std::vector<std::set<VertexId>> by_block(m.block_count());
        for (int k = 0; k < 4; ++k) {
            const int s1 = static_cast<int>(uniform_below(rng, m.sheet_count()));
            const int s2 = static_cast<int>(uniform_below(rng, m.sheet_count()));
            const VertexId x = m.global(s1, trusted[uniform_below(rng, trusted.size())]);
            const VertexId y = m.global(s2, trusted[uniform_below(rng, trusted.size())]);
            try {
                const auto adm = join_the_dots(m, L, pi, model_geodesic(m, x, y), 4 * C + 8);
                for (VertexId p : adm.vertices) {
                    if (ball.trusted(m.local(p))) by_block[m.sheet(m.sheet_of(p)).block].insert(p);
                }
                ++paths;
            } catch (const Error&) {
                ++skipped;
            }
        }
        std::vector<VertexId> points;
        for (int b = 0; b < m.block_count(); ++b) {
            std::vector<VertexId> pts(by_block[b].begin(), by_block[b].end());
            std::shuffle(pts.begin(), pts.end(), rng);
            pts.resize(std::min(pts.size(), want - std::min(want, have[b])));
            have[b] += pts.size();
            points.insert(points.end(), pts.begin(), pts.end());
        }
        const auto chk = check_heights(m, L, H, points);
        violations += chk.violations;
        if (chk.points) worst = std::min(worst, chk.worst_slack);
    }
    std::string sizes;
    for (auto h : have) sizes += (sizes.empty() ? "" : ",") + std::to_string(h);
    return {!short_block() && violations == 0,
            "points per block " + sizes + " from " + std::to_string(paths) + " paths on " + std::to_string(ladders) +
                " ladders (" + std::to_string(skipped) + " joins skipped), violations " + std::to_string(violations) +
                ", worst slack " + std::to_string(worst)};
}

// 9. Model distance to the ladder base grows with N.
Verdict ct_trend(Env& env) {
    const auto& ball = env.ball(7, 1);
    const std::vector<BlockSpec> stack = {ThickBlockSpec{Glue::identity}, ThinBlockSpec{CurveClass{Letter::a}, 2},
                                          ThickBlockSpec{Glue::tw_c}, ThinBlockSpec{CurveClass{Letter::c}, 2},
                                          ThickBlockSpec{Glue::tw_a}};
    const auto m = ModelManifold::load_or_build(ball, stack, env.cache, env.jobs);
    CTOptions opt;
    opt.jobs = env.jobs;
    const auto curve = ct_curve(m, {1, 2, 3, 4, 5}, opt);
    bool geo_monotone = true, tracked = true;
    std::string adm, geo, track;
    for (std::size_t i = 0; i < curve.rows.size(); ++i) {
        const auto& r = curve.rows[i];
        if (i && r.M_geo < curve.rows[i - 1].M_geo) geo_monotone = false;
        if (r.tracking > 4 * r.C_retract + 8) tracked = false;
        adm += (i ? "," : "") + std::to_string(r.M_adm);
        geo += (i ? "," : "") + std::to_string(r.M_geo);
        track += (i ? "," : "") + std::to_string(r.tracking) + "/" + std::to_string(4 * r.C_retract + 8);
    }
    const auto& lo = curve.rows.front();
    const auto& hi = curve.rows.back();
    const bool ok = curve.nondecreasing() && geo_monotone && hi.M_adm > lo.M_adm && hi.M_geo > lo.M_geo && tracked;
    return {ok, "M_adm " + adm + "; M_geo " + geo + "; tracking/bound " + track};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 10. Two runs of the acceptance config produce identical CSVs.
Verdict determinism(Env& env) {
    auto cfg = load_config(env.config);
    cfg.cache = env.cache;
    cfg.jobs = env.jobs;
    std::vector<RunOutcome> runs;
    for (const char* dir : {"run1", "run2"}) {
        cfg.output = env.scratch / dir;
        fs::remove_all(cfg.output);
        std::ostringstream log;
        runs.push_back(run_experiment(cfg, &log));
        std::cout << log.str();
    }
    std::size_t files = 0, differ = 0;
    std::string first_diff;
    std::set<fs::path> names;
    for (const char* dir : {"run1", "run2"}) {
        for (const auto& e : fs::directory_iterator(env.scratch / dir)) names.insert(e.path().filename());
    }
    for (const auto& name : names) {
        ++files;
        if (slurp(env.scratch / "run1" / name) != slurp(env.scratch / "run2" / name)) {
            ++differ;
            if (first_diff.empty()) first_diff = name.string();
        }
    }
    std::string failed;
    for (const auto& r : runs.front().results) {
        if (!r.pass) failed += (failed.empty() ? "" : ",") + r.id;
    }
    const bool ok = differ == 0 && files > 1 && runs[0].exit_code == 0 && runs[1].exit_code == 0;
    return {ok, std::to_string(files) + " CSVs compared, " + std::to_string(differ) + " differ" +
                    (first_diff.empty() ? "" : " (first " + first_diff + ")") + ", exit codes " +
                    std::to_string(runs[0].exit_code) + "/" + std::to_string(runs[1].exit_code) +
                    (failed.empty() ? "" : ", failing suites " + failed)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    Env env;
    std::string cache = "acceptance_cache", scratch = "acceptance_out", config;
    std::vector<int> only;
    app.add_option("--cache", cache, "ball and model cache directory");
    app.add_option("--out", scratch, "scratch directory for the determinism runs");
    app.add_option("--config", config, "experiment config for the determinism check")->required()->check(CLI::ExistingFile);
    app.add_option("--jobs", env.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--only", only, "criterion numbers to run");
    CLI11_PARSE(app, argc, argv);
    env.cache = cache;
    env.scratch = scratch;
    env.config = config;

    const std::vector<std::pair<std::string, std::function<Verdict(Env&)>>> criteria = {
        {"word problem", [](Env&) { return word_problem(); }},
        {"hyperbolicity stability", hyperbolicity},
        {"electric tracking", electric_tracking},
        {"twist dichotomy", twist_dichotomy},
        {"mutual coboundedness", coboundedness_stability},
        {"electro-ambient quasigeodesics", electro_ambient_quality},
        {"retraction constant", retraction_constant_stability},
        {"heights", heights},
        {"Cannon-Thurston trend", ct_trend},
        {"determinism", determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = criteria[i].second(env);
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!v.pass) ++failures;
        std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " " << criteria[i].first << ": " << v.detail
                  << " [" << CsvWriter::format(std::round(secs * 10) / 10) << " s]" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
