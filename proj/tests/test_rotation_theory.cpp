#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "torusfactor/common.hpp"
#include "torusfactor/gallery.hpp"
#include "torusfactor/rotation_theory.hpp"

using namespace torusfactor;

namespace {

// Horizontal shear (x + a(y), y): rotation set is the segment [min a, max a] x {0}.
class ShearImpl final : public TorusMapImpl {
public:
    Vec2 delta(Vec2 u) const override { return {0.1 + 0.2 * std::sin(2.0 * M_PI * u.y), 0.0}; }
    Vec2 delta_inverse(Vec2 u) const override { return {-(0.1 + 0.2 * std::sin(2.0 * M_PI * u.y)), 0.0}; }
};

TorusMap shear() { return TorusMap::from_impl(std::make_shared<ShearImpl>(), 0, TorusKind::Composed, "shear"); }

// Direct re-computation of D(n) from repeated lift evaluation.
std::vector<double> naive_deviation(const TorusMap& f, Vec2 v, double rho, long n_max, int count) {
    std::vector<double> D(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (Vec2 z : lattice_samples(count, 0)) {
        Vec2 a = z, b = z;
        for (long n = 1; n <= n_max; ++n) {
            a = f.eval(a);
            b = f.eval_inverse(b);
            double nd = static_cast<double>(n);
            double d = std::max(std::fabs(dot(a - z, v) - nd * rho), std::fabs(dot(b - z, v) + nd * rho));
            D[static_cast<std::size_t>(n)] = std::max(D[static_cast<std::size_t>(n)], d);
        }
    }
    return D;
}

}  // namespace

TEST_CASE("rotation set of a rigid rotation is a point") {
    RotationCloud c = estimate_rotation_set(TorusMap::rigid(0.3, 0.6), {10, 100, 1000}, {64, 0});
    CHECK(c.hull_diameter < 1e-12);
    for (const auto& p : c.points) {
        CHECK(p.average.x == doctest::Approx(0.3));
        CHECK(p.average.y == doctest::Approx(0.6));
    }
}

TEST_CASE("rotation set of a shear spans the range of the shear") {
    RotationCloud c = estimate_rotation_set(shear(), {2000}, {256, 0});
    double lo = 1e9, hi = -1e9;
    for (Vec2 h : c.hull) {
        lo = std::min(lo, h.x);
        hi = std::max(hi, h.x);
        CHECK(h.y == doctest::Approx(0.0));
    }
    CHECK(lo == doctest::Approx(-0.1).epsilon(1e-3));
    CHECK(hi == doctest::Approx(0.3).epsilon(1e-3));
}

TEST_CASE("twist maps have no rotation set but a vertical rotation number") {
    TorusMap f = TorusMap::rigid(0.0, 0.37, 1);
    CHECK_THROWS_WITH_AS(estimate_rotation_set(f, {10}, {}), "rotation set undefined; use vertical_rotation_number",
                         DomainError);
    VerticalRotation v = vertical_rotation_number(f, 1000, {64, 0});
    CHECK(v.estimate == doctest::Approx(0.37));
    CHECK(v.spread < 1e-12);
}

TEST_CASE("deviation profile agrees with a direct recomputation") {
    GalleryExample ex = example_unbounded_inessential();
    DeviationProfile p = deviation_profile(ex.map, {0.0, 1.0}, ex.rho, 200, {32, 0});
    std::vector<double> oracle = naive_deviation(ex.map, {0.0, 1.0}, ex.rho, 200, 32);
    for (std::size_t n = 0; n < oracle.size(); ++n) CHECK(p.D[n] == doctest::Approx(oracle[n]).epsilon(1e-9));
}

TEST_CASE("deviation dichotomy: zero, bounded, growing") {
    DeviationProfile r = deviation_profile(TorusMap::rigid(kGolden, kSilver), {0.0, 1.0}, kSilver, 1000, {64, 0});
    CHECK(r.c_est < 1e-9);
    CHECK(r.bounded);
    CircleLift d = build_denjoy(kSilver, geometric_schedule(0.3), 30);
    DeviationProfile b = deviation_profile(TorusMap::product(CircleLift::rigid(kGolden), d), {0.0, 1.0}, kSilver, 4000, {64, 0});
    CHECK(b.bounded);
    CHECK(b.c_est < 1.0);
    DeviationProfile g = deviation_profile(TorusMap::rigid(kGolden, kSilver), {0.0, 1.0}, kSilver + 1e-3, 1000, {16, 0});
    CHECK_FALSE(g.bounded);
    CHECK(g.c_est == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("horizontal spread of the Dehn twist grows linearly") {
    SpreadTable t = horizontal_spread(TorusMap::dehn_twist(1), 300, {32, 0});
    for (std::size_t q = 0; q < t.n.size(); ++q) CHECK(t.spread[q] >= std::labs(t.n[q]) - 1.0);
    CHECK(t.forward_backward_agree);
    SpreadTable z = horizontal_spread(TorusMap::rigid(0.2, 0.3), 100, {32, 0});
    CHECK(z.max_forward < 1e-12);
}

TEST_CASE("proximality under an isometry stays at the initial distance") {
    TorusMap f = TorusMap::rigid(kGolden, kSilver);
    ProximityResult r = proximality_scan(f, {0.1, 0.1}, {0.13, 0.14}, 500);
    CHECK(r.forward_min == doctest::Approx(0.05));
    CHECK(r.backward_min == doctest::Approx(0.05));
    ProximityResult same = proximality_scan(f, {0.1, 0.1}, {0.1, 0.1}, 10);
    CHECK(same.forward_min == 0.0);
}

TEST_CASE("recurrence probe finds periodic returns and nothing for wandering balls") {
    std::vector<long> r = recurrence_probe(TorusMap::rigid(0.5, 0.0), {0.2, 0.2}, 0.01, 7);
    CHECK(r == std::vector<long>{2, 4, 6});
    GalleryExample ex = example_unbounded_inessential();
    CHECK(recurrence_probe(ex.map, ex.probe_center, ex.probe_radius, 3000).empty());
    CHECK_THROWS_AS(recurrence_probe(ex.map, ex.probe_center, 0.0, 10), DomainError);
}
