#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "torusfactor/circle_maps.hpp"
#include "torusfactor/common.hpp"

using namespace torusfactor;

namespace {

// Plain linear interpolation over the knots repeated on three periods.
double interp_oracle(const std::vector<Knot>& knots, double x) {
    std::vector<Knot> ext;
    for (int s = -5; s <= 5; ++s)
        for (const Knot& k : knots) ext.push_back({k.x + s, k.y + s});
    std::sort(ext.begin(), ext.end(), [](const Knot& a, const Knot& b) { return a.x < b.x; });
    for (std::size_t i = 0; i + 1 < ext.size(); ++i)
        if (ext[i].x <= x && x < ext[i + 1].x)
            return ext[i].y + (x - ext[i].x) / (ext[i + 1].x - ext[i].x) * (ext[i + 1].y - ext[i].y);
    return NAN;
}

double frac(double v) { return v - std::floor(v); }

}  // namespace

TEST_CASE("rigid lift evaluates, inverts and iterates") {
    CircleLift g = CircleLift::rigid(0.3);
    CHECK(g.eval(0.2) == doctest::Approx(0.5));
    CHECK(g.inverse(0.5) == doctest::Approx(0.2));
    CHECK(g.iterate(0.1, 10) == doctest::Approx(3.1));
    CHECK(g.iterate(g.iterate(0.1, 7), -7) == doctest::Approx(0.1));
    CHECK(g.blend(0.5, 0.0) == doctest::Approx(0.15));
}

TEST_CASE("rotation number of rigid rotations") {
    RotationEstimate r = rotation_number(CircleLift::rigid(0.25), 0.0, 1000);
    CHECK(std::fabs(r.estimate - 0.25) <= r.error_bound);
    CHECK(r.error_bound == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK(rotation_number(CircleLift::rigid(0.0), 0.0, 10).estimate == 0.0);
    CHECK(rotation_number(CircleLift::rigid(1.25), 0.3, 100).estimate == doctest::Approx(1.25));
    CHECK_THROWS_AS(rotation_number(CircleLift::rigid(0.1), 0.0, 0), DomainError);
}

TEST_CASE("piecewise lift matches linear interpolation") {
    std::vector<Knot> knots{{0.1, 0.3}, {0.4, 0.5}, {0.7, 1.2}};
    CircleLift g = CircleLift::piecewise(knots);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        double x = U(rng);
        CHECK(g.eval(x) == doctest::Approx(interp_oracle(knots, x)).epsilon(1e-12));
        CHECK(g.eval(x + 1.0) == doctest::Approx(g.eval(x) + 1.0).epsilon(1e-12));
        CHECK(g.inverse(g.eval(x)) == doctest::Approx(x).epsilon(1e-12));
        double s = std::fabs(U(rng)) / 3.0;
        CHECK(g.blend_inverse(s, g.blend(s, x)) == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("piecewise lift rejects malformed knots") {
    CHECK_THROWS_AS(CircleLift::piecewise({}), DomainError);
    CHECK_THROWS_AS(CircleLift::piecewise({{0.1, 0.5}, {0.2, 0.4}}), DomainError);
    CHECK_THROWS_AS(CircleLift::piecewise({{0.1, 0.1}, {0.2, 1.2}}), DomainError);
    CHECK_THROWS_AS(CircleLift::piecewise({{0.1, 0.1}, {0.1, 0.2}}), DomainError);
}

TEST_CASE("geometric schedule sums to the requested mass") {
    GapSchedule l = geometric_schedule(0.3);
    double sum = 0.0;
    for (int n = -200; n <= 200; ++n) sum += l(n);
    CHECK(sum == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(l(0) == doctest::Approx(0.1));
    CHECK(l(3) == doctest::Approx(0.1 / 8));
}

TEST_CASE("truncated Denjoy map sends gap n onto gap n+1") {
    const int N = 20;
    CircleLift g = build_denjoy(kGolden, geometric_schedule(0.3), N);
    const DenjoyGapTable& t = g.gaps();
    CHECK(t.total_mass == doctest::Approx(0.1 * (3.0 - std::ldexp(1.0, -19))).epsilon(1e-14));
    for (int n = -N; n < N; ++n) {
        const DenjoyGap& a = t.gap(n);
        const DenjoyGap& b = t.gap(n + 1);
        CHECK(frac(g.eval(a.a)) == doctest::Approx(b.a).epsilon(1e-12));
        CHECK(frac(g.eval(a.b)) == doctest::Approx(b.b).epsilon(1e-12));
        CHECK(b.b - b.a == doctest::Approx((a.b - a.a) * (n >= 0 ? 0.5 : 2.0)).epsilon(1e-12));
    }
    CHECK(t.truncation_tolerance == doctest::Approx(0.1 * 2.0 * std::ldexp(1.0, -N)).epsilon(1e-9));
}

TEST_CASE("Denjoy gaps are ordered like the orbit angles") {
    const int N = 15;
    CircleLift g = build_denjoy(kSilver, geometric_schedule(0.3), N);
    const DenjoyGapTable& t = g.gaps();
    std::vector<std::pair<double, int>> ang;
    for (int n = -N; n <= N; ++n) ang.push_back({std::fmod(n * kSilver + 100.0, 1.0), n});
    std::sort(ang.begin(), ang.end());
    double prev_b = -1.0;
    for (std::size_t p = 0; p < ang.size(); ++p) {
        const DenjoyGap& gp = t.gap(ang[p].second);
        CHECK(gp.a > prev_b);
        prev_b = gp.b;
    }
    CHECK(prev_b < 1.0);
}

TEST_CASE("Denjoy semi-conjugacy collapses gaps and conjugates to the rotation") {
    CircleLift g = build_denjoy(kGolden, geometric_schedule(0.3), 40);
    DenjoySemiconjugacy h = denjoy_semiconjugacy(g);
    const DenjoyGapTable& t = g.gaps();
    for (int n : {-40, -3, 0, 7, 39}) {
        const DenjoyGap& gp = t.gap(n);
        CHECK(h(gp.a) == doctest::Approx(h(0.5 * (gp.a + gp.b))).epsilon(1e-12));
    }
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
        double x = U(rng);
        worst = std::max(worst, circle_dist(h(g.eval(x)) - h(x), kGolden));
        CHECK(h(x + 1.0) == doctest::Approx(h(x) + 1.0));
    }
    CHECK(worst <= 4.0 * h.tolerance() + 1e-12);
}

TEST_CASE("Denjoy rotation number approaches the target") {
    CircleLift g = build_denjoy(kGolden, geometric_schedule(0.3), 40);
    RotationEstimate r = rotation_number(g, 0.123, 100000);
    CHECK(std::fabs(r.estimate - kGolden) <= r.error_bound + 1e-6);
    CHECK(g.iterate(g.iterate(0.3, 50), -50) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("Denjoy construction preconditions") {
    CHECK_THROWS_AS(build_denjoy(kGolden, geometric_schedule(0.3), 0), DomainError);
    CHECK_THROWS_AS(build_denjoy(kGolden, [](int) { return 0.2; }, 5), DomainError);
    CHECK_THROWS_AS(build_denjoy(0.5, geometric_schedule(0.3), 4), DomainError);
    CHECK_THROWS_AS(CircleLift::rigid(0.1).gaps(), DomainError);
}
