// Acceptance run: one pass/fail line per criterion.
//   acceptance            all criteria
//   acceptance 3 7        selected criteria
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "torusfactor/circle_maps.hpp"
#include "torusfactor/common.hpp"
#include "torusfactor/factor_builder.hpp"
#include "torusfactor/gallery.hpp"
#include "torusfactor/rotation_theory.hpp"
#include "torusfactor/skew_product.hpp"
#include "torusfactor/torus_maps.hpp"

using namespace torusfactor;

namespace {

constexpr double kA = 0.6180339887;
constexpr double kB = 0.4142135624;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[1024];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct GalleryMap {
    std::string name;
    TorusMap map;
    double rho;
};

std::vector<GalleryMap> gallery_maps() {
    GalleryExample e2 = example_unbounded_inessential(), e3 = example_fully_essential();
    SuspensionSpec rs = example_rigid_suspension(kA, kB);
    return {{"3.2", e2.map, e2.rho}, {"3.3", e3.map, e3.rho}, {"rigid-suspension", rs.map, rs.rotation_target.y}};
}

DeviationProfile vertical_plateau(const GalleryMap& g) {
    return deviation_profile(g.map, {0.0, 1.0}, g.rho, 10000, {256, 0});
}

Outcome c1() {
    RotationEstimate r = rotation_number(CircleLift::rigid(kA), 0.0, 100000);
    CircleLift d = build_denjoy(kA, geometric_schedule(0.3), 40);
    RotationEstimate e = rotation_number(d, 0.0, 100000);
    double er = std::fabs(r.estimate - kA), ed = std::fabs(e.estimate - kA);
    bool ok = er <= 1e-12 && ed <= 1e-5 + 1e-6;
    return {ok, fmt("rigid |est-a|=%.3g (<=1e-12), denjoy |est-a|=%.3g (<=1.1e-5)", er, ed)};
}

Outcome c2() {
    double comm = 0.0, closed = 0.0;
    for (const auto& g : gallery_maps()) {
        CentralizedSkew F = build_centralized(g.map, g.rho);
        comm = std::max(comm, check_commutation(F, 1000, 1).max_defect);
        closed = std::max(closed, check_closed_form(F, 1000, 20, 2).max_defect);
    }
    return {comm <= 1e-9 && closed <= 1e-7,
            fmt("commutation %.3g (<=1e-9), closed form %.3g (<=1e-7) over 3 gallery maps", comm, closed)};
}

Outcome c3() {
    bool ok = true;
    std::string d;
    for (const auto& g : gallery_maps()) {
        if (g.name == "rigid-suspension") continue;
        double c = vertical_plateau(g).c_est;
        CentralizedSkew F = build_centralized(g.map, g.rho, c);
        double osc = 0.0;
        for (Vec2 z : lattice_samples(64, 3)) osc = std::max(osc, vertical_orbit_bound(F, {0.0, z.x, z.y}, 10000).oscillation);
        ok = ok && osc <= 2.0 * c + 0.05;
        d += fmt("%s osc=%.4f bound=%.4f; ", g.name.c_str(), osc, 2.0 * c + 0.05);
    }
    return {ok, d};
}

Outcome c4() {
    DeviationProfile r = deviation_profile(TorusMap::rigid(kA, kB), {0.0, 1.0}, kB, 10000, {256, 0});
    DeviationProfile rh = deviation_profile(TorusMap::rigid(kA, kB), {1.0, 0.0}, kA, 10000, {256, 0});
    bool rigid_zero = r.c_est <= 1e-9 && rh.c_est <= 1e-9;
    SpreadTable st = horizontal_spread(TorusMap::dehn_twist(1), 1000, {64, 0});
    bool twist = true;
    for (std::size_t q = 0; q < st.n.size(); ++q)
        if (st.spread[q] < static_cast<double>(std::labs(st.n[q])) - 1.0) twist = false;
    bool plateau = true;
    std::string d = fmt("rigid C=%.2g; twist spread>=|n|-1: %s; ", std::max(r.c_est, rh.c_est), twist ? "yes" : "no");
    for (const auto& g : gallery_maps()) {
        DeviationProfile p = vertical_plateau(g);
        plateau = plateau && p.bounded;
        d += fmt("%s C=%.4f C80=%.4f %s; ", g.name.c_str(), p.c_est, p.c_at_80, p.bounded ? "plateau" : "growing");
    }
    return {rigid_zero && twist && plateau, d};
}

Outcome c5() {
    SuspensionSpec rs = example_rigid_suspension(kA, kB);
    double c = deviation_profile(rs.map, {0.0, 1.0}, rs.rotation_target.y, 2000, {64, 0}).c_est;
    GridSpec spec = GridSpec::for_deviation(c);
    TauRegion tau = build_tau(build_centralized(rs.map, rs.rotation_target.y, c), {0.5, 0.0}, 0.25, spec,
                              {0, false});
    if (tau.exhausted) return {false, "window exhausted"};
    int good = 0;
    for (int q = 0; q < 64; ++q) {
        FiberComponents fc = fiber_complement_components(tau.mask, q / 64.0);
        if (fc.unbounded == 2 && !fc.degenerate) ++good;
    }
    return {good == 64, fmt("two unbounded components at %d/64 sampled t (grid 256x256x512, %ld sweeps)", good,
                            tau.mask.iterations)};
}

Outcome c6() {
    TorusMap f = TorusMap::rigid(kA, kB);
    GridSpec spec = GridSpec::for_deviation(0.0);
    TauRegion tau = build_tau(build_centralized(f, kB, 0.0), {0.5, 0.0}, 0.25, spec);
    if (tau.exhausted) return {false, "window exhausted"};
    FactorMap fm = project_to_torus_factor(tau, 64, 64, 0.5 * spec.hy());
    double cell = spec.hy();
    bool ok = fm.undefined == 0 && fm.max_defect <= 2 * cell && fm.pr2_deviation <= 2 * cell;
    return {ok, fmt("defect %.3g cells, |h-pr2-c| %.3g cells (<=2), cell=%.6f", fm.max_defect / cell,
                    fm.pr2_deviation / cell, cell)};
}

Outcome c7() {
    SuspensionSpec rs = example_rigid_suspension(kA, kB);
    double rho = kA * kB;
    double c = deviation_profile(rs.map, {0.0, 1.0}, rho, 2000, {64, 0}).c_est;
    GridSpec spec = GridSpec::for_deviation(c);
    TauRegion tau = build_tau(build_centralized(rs.map, rho, c), {0.5, 0.0}, 0.25, spec);
    if (tau.exhausted) return {false, "window exhausted"};
    double cell = spec.hy(), tol = 0.5 * cell;
    FactorMap fm = project_to_torus_factor(tau, 64, 64, tol);
    EquivarianceReport eq = verify_equivariance(tau, 256, 5, tol, 64);
    bool ok = fm.undefined == 0 && fm.max_defect <= 4 * cell && eq.translate_defect <= 4 * cell &&
              eq.dynamics_defect <= 4 * cell && eq.ordering_violations == 0 && eq.undefined_samples == 0;
    return {ok, fmt("semi-conjugacy %.3g cells, T1 %.3g cells, f %.3g cells, ordering violations %zu/%zu",
                    fm.max_defect / cell, eq.translate_defect / cell, eq.dynamics_defect / cell,
                    eq.ordering_violations, eq.ordering_pairs)};
}

Outcome c8() {
    NoGapScan s = no_gap_sweep(-5, 5, 3, 3);
    std::string d = fmt("%zu (A,N0) cases, %zu functions, %zu counterexamples", s.cases, s.functions, s.counterexamples);
    if (s.first) {
        d += "; first: A={";
        for (std::size_t q = 0; q < s.first->A.size(); ++q) d += (q ? "," : "") + std::to_string(s.first->A[q]);
        d += fmt("} N0=%ld M0=%ld xi=(", s.first->N0, s.first->M0);
        for (std::size_t q = 0; q < s.first->xi.size(); ++q) d += (q ? "," : "") + std::to_string(s.first->xi[q]);
        d += ")";
    }
    return {s.counterexamples == 0, d};
}

Outcome c9() {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> jd(-50, 50), ed(-1000000, 1000000);
    int ok = 0;
    for (int q = 0; q < 1000; ++q) {
        long j = jd(rng);
        // B' with entries <= 1e6 in absolute value and det 1
        UnimodularMatrix Bp;
        for (;;) {
            long a = ed(rng), c = ed(rng);
            if (a == 0 && c == 0) continue;
            long x = 0, y = 0, g = a, r = c, x1 = 1, y1 = 0, x2 = 0, y2 = 1;
            while (r != 0) {
                long qq = g / r, t = g - qq * r;
                g = r; r = t;
                t = x1 - qq * x2; x1 = x2; x2 = t;
                t = y1 - qq * y2; y1 = y2; y2 = t;
            }
            x = x1; y = y1;
            if (std::labs(g) != 1) continue;
            // a x + c y = g, so [[a, -y g], [c, x g]] has det 1
            Bp = {a, -y * g, c, x * g};
            if (std::labs(Bp.b) > 1000000 || std::labs(Bp.d) > 1000000) continue;
            break;
        }
        UnimodularMatrix A = multiply(multiply(Bp, twist_matrix(j)), inverse(Bp));
        IsotopyNormalForm nf = normalize_isotopy_class(A);
        UnimodularMatrix back = multiply(multiply(inverse(nf.B), A), nf.B);
        if (nf.k == j && back == twist_matrix(j) && nf.B.det() == 1) ++ok;
    }
    return {ok == 1000, fmt("%d/1000 conjugates normalized to I_j exactly", ok)};
}

Outcome c10() {
    GalleryExample ex = example_unbounded_inessential();
    KroneckerReport kr = kronecker_separation_probe(ex.map, ex.probes, 10000, 1e-2);
    std::vector<long> ret = recurrence_probe(ex.map, ex.probe_center, ex.probe_radius, 10000);
    SurgeryGeometry g = surgery_geometry({kGolden, kSilver}, std::sqrt(3.0) - 1.0, 0.01);
    bool exact = true, diam = true;
    for (long n = -50; n <= 50; ++n) {
        if (g.delta_n(n, g.center(n)) != std::ldexp(g.delta, -static_cast<int>(std::labs(n)) - 10)) exact = false;
        if (g.diameter(n) != 2.0 * g.delta) diam = false;
    }
    bool ok = kr.forward.forward_min < 1e-2 && kr.backward.backward_min < 1e-2 && ret.empty() && exact && diam;
    return {ok, fmt("forward min %.3g at n=%ld, backward min %.3g at n=%ld, returns to block %zu, delta_n exact %s, "
                    "diameter 2delta %s",
                    kr.forward.forward_min, kr.forward.forward_argmin, kr.backward.backward_min,
                    kr.backward.backward_argmin, ret.size(), exact ? "yes" : "no", diam ? "yes" : "no")};
}

struct Criterion {
    int id;
    double budget_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all = {{1, 1, c1},   {2, 5, c2},     {3, 60, c3},   {4, 60, c4},  {5, 300, c5},
                                        {6, 300, c6}, {7, 600, c7},   {8, 60, c8},   {9, 1, c9},   {10, 120, c10}};
    std::vector<int> pick;
    for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
    int failures = 0;
    for (const auto& c : all) {
        if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.pass && secs <= c.budget_s;
        if (!pass) ++failures;
        std::printf("criterion %2d %s  %s [%.2fs, budget %.0fs]\n", c.id, pass ? "PASS" : "FAIL", o.detail.c_str(),
                    secs, c.budget_s);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
