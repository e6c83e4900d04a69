#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "torusfactor/common.hpp"
#include "torusfactor/gallery.hpp"
#include "torusfactor/rotation_theory.hpp"

using namespace torusfactor;

namespace {

// Brute-force version of the no-gap conclusion using a set of values.
bool window_covered(long N0, long m_prime, const std::vector<long>& xi, long m) {
    std::set<long> vals;
    for (std::size_t q = 0; q < xi.size(); ++q) vals.insert(m_prime + static_cast<long>(q) - xi[q]);
    for (long v = m; v <= m + N0; ++v)
        if (!vals.count(v)) return false;
    return true;
}

}  // namespace

TEST_CASE("suspension: fundamental-domain formula agrees with unwinding the relation") {
    CircleLift g1 = build_denjoy(kGolden, geometric_schedule(0.3), 20);
    CircleLift g2 = build_denjoy(kSilver, geometric_schedule(0.3), 20);
    for (const SuspensionSpec& s : {suspension_map(g1, g2), suspension_map(CircleLift::rigid(2.3), g2),
                                    suspension_map(CircleLift::rigid(-0.7), g2)}) {
        for (Vec2 p : lattice_samples(1000, 5)) {
            Vec2 a = s.quotient_map(p), b = s.quotient_map_unwound(p);
            CHECK(torus_dist(a, b) <= 1e-10);
        }
    }
}

TEST_CASE("suspension: the chart conjugates the quotient map to the torus map") {
    CircleLift g1 = build_denjoy(kGolden, geometric_schedule(0.3), 20);
    CircleLift g2 = CircleLift::piecewise({{0.1, 0.3}, {0.5, 0.6}, {0.9, 1.25}});
    SuspensionSpec s = suspension_map(g1, g2);
    for (Vec2 p : lattice_samples(1000, 6)) {
        CHECK(torus_dist(s.chart(s.quotient_map(p)), s.map.on_torus(s.chart(p))) <= 1e-10);
        CHECK(torus_dist(s.chart_inverse(s.chart(p)), p) <= 1e-12);
    }
}

TEST_CASE("suspension of two rotations") {
    const double r1 = 0.6180339887, r2 = 0.4142135624;
    SuspensionSpec s = example_rigid_suspension(r1, r2);
    for (Vec2 p : lattice_samples(200, 1)) {
        Vec2 q = s.quotient_map(p);
        double m = std::floor(p.x + r1);
        CHECK(torus_dist(q, wrap01(Vec2{p.x + r1, p.y + r2 * m})) <= 1e-12);
        // in the straightened chart it is the rigid rotation (r1, r1 r2)
        CHECK(torus_dist(s.map.on_torus(p), wrap01(Vec2{p.x + r1, p.y + r1 * r2})) <= 1e-12);
    }
    const long n = 10000;
    RotationCloud c = estimate_rotation_set(s.map, {n}, {64, 0});
    for (const auto& pt : c.points) {
        CHECK(std::fabs(pt.average.x - r1) <= 2.0 / n);
        CHECK(std::fabs(pt.average.y - r1 * r2) <= 2.0 / n);
    }
}

TEST_CASE("degenerate suspensions") {
    SuspensionSpec a = suspension_map(CircleLift::rigid(0.3), CircleLift::rigid(0.0));
    SuspensionSpec b = suspension_map(CircleLift::rigid(0.0), CircleLift::piecewise({{0.2, 0.3}, {0.7, 0.9}}));
    for (Vec2 p : lattice_samples(100, 2)) {
        CHECK(torus_dist(a.quotient_map(p), wrap01(Vec2{p.x + 0.3, p.y})) <= 1e-14);
        CHECK(torus_dist(b.quotient_map(p), p) <= 1e-14);
        CHECK(torus_dist(b.map.on_torus(p), p) <= 1e-12);
    }
}

TEST_CASE("Denjoy suspension rotation vector and plateaus in both directions") {
    GalleryExample ex = example_fully_essential();
    const long n = 4000;
    RotationCloud c = estimate_rotation_set(ex.suspension.map, {n}, {64, 0});
    for (const auto& pt : c.points) {
        CHECK(std::fabs(pt.average.x - ex.suspension.rotation_target.x) <= 2.0 / n + 1e-6);
        CHECK(std::fabs(pt.average.y - ex.suspension.rotation_target.y) <= 2.0 / n + 1e-6);
    }
    for (const TorusMap& f : {ex.suspension.map, ex.map, example_unbounded_inessential().map}) {
        CHECK(deviation_profile(f, {0, 1}, ex.suspension.rotation_target.y, 4000, {64, 0}).bounded);
        CHECK(deviation_profile(f, {1, 0}, ex.suspension.rotation_target.x, 4000, {64, 0}).bounded);
    }
}

TEST_CASE("unbounded inessential example: push stays in the wandering block") {
    GalleryExample ex = example_unbounded_inessential();
    const DenjoyGap& gap = ex.suspension.g2.gaps().gap(0);
    // the push disk sits inside the chart image of (u0 +- 0.05) x gap 0
    for (int q = 0; q < 64; ++q) {
        double th = 2.0 * M_PI * q / 64;
        Vec2 p = wrap01(ex.push.mid + ex.push.radius * Vec2{std::cos(th), std::sin(th)});
        Vec2 ux = ex.suspension.chart_inverse(p);
        CHECK(std::fabs(ux.x - 0.256) < 0.05);
        CHECK(ux.y > gap.a);
        CHECK(ux.y < gap.b);
    }
    CHECK(torus_dist(ex.map.on_torus(ex.probes.w0), ex.suspension.map.on_torus(ex.probes.w1)) < 1e-12);
    KroneckerReport r = kronecker_separation_probe(ex.map, ex.probes, 3000);
    CHECK(r.obstruction);
}

TEST_CASE("fully essential example: crossing times and a wandering base gap") {
    GalleryExample ex = example_fully_essential();
    CHECK(ex.crossing_count > 0);
    CHECK(ex.s1 > ex.s0);
    CHECK(recurrence_probe(ex.map, ex.probe_center, ex.probe_radius, 2000).empty());
}

TEST_CASE("Kronecker probe on a rotation gives no evidence") {
    TorusMap f = TorusMap::rigid(kGolden, kSilver);
    ProximityResult p = kronecker_pair_probe(f, {0.1, 0.2}, {0.1, 0.2}, 10);
    CHECK(p.forward_min == 0.0);
    KroneckerReport r = kronecker_separation_probe(f, {{0.1, 0.1}, {0.2, 0.1}, {0.1, 0.3}, {0.2, 0.3}}, 500);
    CHECK_FALSE(r.obstruction);
    CHECK(r.forward.forward_min == doctest::Approx(std::hypot(0.1, 0.2)));
}

TEST_CASE("surgery geometry") {
    Vec2 alpha{kGolden, kSilver};
    const double gamma = std::sqrt(3.0) - 1.0, delta = 0.01;
    SurgeryGeometry g = surgery_geometry(alpha, gamma, delta);
    for (long n = -50; n <= 50; ++n) {
        CHECK(g.delta_n(n, g.center(n)) == std::ldexp(delta, -static_cast<int>(std::labs(n)) - 10));
        CHECK(g.delta_n(n, g.segment_point(n, 1.0)) == 0.0);
        CHECK(g.delta_n(n, g.segment_point(n, -1.0)) == 0.0);
        CHECK(g.diameter(n) == 2.0 * delta);
    }
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        long n = static_cast<long>(U(rng) * 40) - 20;
        double v = g.delta_n(n, {U(rng), U(rng)});
        CHECK(v >= 0.0);
        CHECK(v <= std::ldexp(delta, -static_cast<int>(std::labs(n)) - 10));
    }
    CHECK_THROWS_WITH_AS(surgery_geometry(alpha, gamma, 0.4), doctest::Contains("delta too large"), DomainError);
    DisjointnessScan s = disjointness_scan(alpha, gamma, delta, 1000);
    CHECK(s.disjoint);
    CHECK(s.delta0 > delta);
    CHECK_FALSE(disjointness_scan(alpha, gamma, 1.01 * s.delta0, 1000).disjoint);
}

TEST_CASE("no-gap window formula") {
    NoGapWindow a = no_gap_window({0}, 5, 7);
    CHECK(a.M0 == 5);
    CHECK(a.m == 7);
    CHECK(no_gap_window({1, 3}, 2).M0 == 4);
    CHECK_THROWS_AS(no_gap_window({}, 2), DomainError);
    CHECK_THROWS_AS(no_gap_window({1}, -1), DomainError);
    NoGapScan single = no_gap_exhaustive({4}, 3);
    CHECK(single.functions == 1);
    CHECK(single.counterexamples == 0);
}

TEST_CASE("no-gap checker agrees with a set-based brute force") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> pick(-3, 3);
    for (int i = 0; i < 3000; ++i) {
        std::vector<long> xi(6);
        for (auto& v : xi) v = pick(rng);
        long N0 = std::labs(pick(rng)), mp = pick(rng), m = pick(rng) + mp;
        CHECK(no_gap_holds(N0, mp, xi, m) == window_covered(N0, mp, xi, m));
        auto w = no_gap_witness(N0, mp, xi);
        if (w) CHECK(window_covered(N0, mp, xi, *w));
    }
}

TEST_CASE("no-gap statement fails for A = {0, 1}, N0 = 1") {
    // xi = (0, 1, 0) on {0, 1, 2} gives values {0, 0, 2}: no two consecutive integers.
    CHECK_FALSE(no_gap_witness(1, 0, {0, 1, 0}).has_value());
    NoGapScan s = no_gap_exhaustive({0, 1}, 1);
    CHECK(s.functions == 8);
    CHECK(s.counterexamples > 0);
    // alternating xi defeats every window length
    for (long M = 1; M < 40; ++M) {
        std::vector<long> xi;
        for (long j = 0; j <= M; ++j) xi.push_back(j % 2);
        CHECK_FALSE(no_gap_witness(1, 0, xi).has_value());
    }
}

TEST_CASE("manifest is valid JSON with a stable hash") {
    auto j = nlohmann::json::parse(gallery_manifest_json());
    CHECK(j["manifest_version"] == kManifestVersion);
    CHECK(j.contains("3.2"));
    CHECK(j.contains("3.4-geometry"));
    CHECK(gallery_manifest_hash() == gallery_manifest_hash());
    CHECK(gallery_manifest_hash().size() == 16);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}
