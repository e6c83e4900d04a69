#include "torusfactor/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <bit>
#include <cstdio>

#include "json.hpp"

#include "torusfactor/common.hpp"

namespace torusfactor {

namespace {

class SuspensionImpl final : public TorusMapImpl {
public:
    SuspensionImpl(CircleLift g1, CircleLift g2) : g1_(std::move(g1)), g2_(std::move(g2)) {}

    Vec2 delta(Vec2 p) const override {
        double x = g2_.blend_inverse(p.x, p.y);
        double s = g1_.eval(p.x);
        double m = std::floor(s);
        double u2 = s - m;
        double w2 = g2_.blend(u2, g2_.iterate(x, static_cast<long>(m)));
        return {s - p.x, w2 - p.y};
    }

    Vec2 delta_inverse(Vec2 p) const override {
        double x2 = g2_.blend_inverse(p.x, p.y);
        double s = g1_.inverse(p.x);
        double m = std::floor(s);
        double u = s - m;
        double w = g2_.blend(u, g2_.iterate(x2, static_cast<long>(m)));
        return {s - p.x, w - p.y};
    }

private:
    CircleLift g1_, g2_;
};

// Example parameters. Changing any of these requires bumping kManifestVersion.
constexpr int kDenjoyOrder = 40;
constexpr double kDenjoyMass = 0.3;
constexpr double kRho1 = 0.6180339887;
constexpr double kRho2 = 0.4142135624;
constexpr double kBaseTime = 0.25;
constexpr double kTimeOffset = 0.012;
constexpr double kBlockHalfWidth = 0.05;
constexpr double kPushRadius = 0.025;
constexpr double kFlowStart = 0.5;
constexpr int kCrossingGrid = 10000;

bool off_gaps(const CircleLift& g, double u) {
    return g.gaps().gap_containing(u) == g.gaps().order + 1;
}

}  // namespace

Vec2 SuspensionSpec::quotient_map(Vec2 ux) const {
    double s = g1.eval(ux.x);
    double m = std::floor(s);
    return {wrap01(s - m), wrap01(g2.iterate(ux.y, static_cast<long>(m)))};
}

Vec2 SuspensionSpec::quotient_map_unwound(Vec2 ux) const {
    double s = g1.eval(ux.x), x = ux.y;
    while (s >= 1.0) {
        s -= 1.0;
        x = g2.eval(x);
    }
    while (s < 0.0) {
        s += 1.0;
        x = g2.inverse(x);
    }
    return {wrap01(s), wrap01(x)};
}

Vec2 SuspensionSpec::chart(Vec2 ux) const { return {ux.x, wrap01(g2.blend(ux.x, ux.y))}; }

Vec2 SuspensionSpec::chart_inverse(Vec2 uw) const { return {uw.x, wrap01(g2.blend_inverse(uw.x, uw.y))}; }

Vec2 SuspensionSpec::flow_point(double s, double y) const {
    double m = std::floor(s);
    return chart({s - m, wrap01(g2.iterate(y, static_cast<long>(m)))});
}

SuspensionSpec suspension_map(const CircleLift& g1, const CircleLift& g2) {
    SuspensionSpec spec{g1, g2, TorusMap::rigid(0.0, 0.0), {}, false};
    spec.map = TorusMap::from_impl(std::make_shared<SuspensionImpl>(g1, g2), 0, TorusKind::Suspension,
                                   "suspension(" + to_string(g1.kind()) + "," + to_string(g2.kind()) + ")");
    if (g1.has_target() && g2.has_target()) {
        spec.has_target = true;
        spec.rotation_target = {g1.alpha(), g1.alpha() * g2.alpha()};
    }
    return spec;
}

SuspensionSpec example_rigid_suspension(double rho1, double rho2) {
    return suspension_map(CircleLift::rigid(rho1), CircleLift::rigid(rho2));
}

namespace {

GalleryExample finish_example(std::string id, SuspensionSpec susp, double u0, double u1, double y0, double yp) {
    GalleryExample ex{std::move(id), susp, susp.map, {}, susp.rotation_target.y, {}, {}, 0.0, {}, 0.0};
    ex.probes.w0 = susp.flow_point(u0, y0);
    ex.probes.w1 = susp.flow_point(u1, y0);
    ex.probes.w0p = susp.flow_point(u0, yp);
    ex.probes.w1p = susp.flow_point(u1, yp);
    ex.push = disk_push_params(ex.probes.w0, ex.probes.w1, kPushRadius);
    ex.map = TorusMap::compose({susp.map, TorusMap::disk_push(ex.probes.w0, ex.probes.w1, kPushRadius)});
    ex.block_center = ex.push.mid;
    ex.block_radius = kBlockHalfWidth;
    ex.probe_center = ex.push.mid;
    ex.probe_radius = kPushRadius;
    return ex;
}

}  // namespace

GalleryExample example_unbounded_inessential() {
    CircleLift g1 = CircleLift::rigid(kRho1);
    CircleLift g2 = build_denjoy(kRho2, geometric_schedule(kDenjoyMass), kDenjoyOrder);
    const DenjoyGap& gap = g2.gaps().gap(0);
    GalleryExample ex = finish_example("3.2", suspension_map(g1, g2), kBaseTime, kBaseTime + kTimeOffset,
                                       0.5 * (gap.a + gap.b), gap.a);
    return ex;
}

std::size_t crossing_times(const SuspensionSpec& s, double s0, double s1, int grid) {
    if (grid < 1) throw DomainError("crossing grid must be positive");
    if (s.g1.kind() != CircleKind::DenjoyTruncated) return static_cast<std::size_t>(grid);
    std::size_t count = 0;
    for (int q = 0; q < grid; ++q) {
        double t = (q + 0.5) / grid;
        if (off_gaps(s.g1, wrap01(t * s0 + (1.0 - t) * s1))) ++count;
    }
    return count;
}

GalleryExample example_fully_essential() {
    CircleLift g1 = build_denjoy(kRho1, geometric_schedule(kDenjoyMass), kDenjoyOrder);
    CircleLift g2 = build_denjoy(kRho2, geometric_schedule(kDenjoyMass), kDenjoyOrder);
    double s0 = kFlowStart;
    while (!(off_gaps(g1, s0) && off_gaps(g1, s0 + kTimeOffset))) s0 += 1e-4;
    const DenjoyGap& gap = g2.gaps().gap(0);
    GalleryExample ex = finish_example("3.3", suspension_map(g1, g2), s0, s0 + kTimeOffset, 0.5 * (gap.a + gap.b), gap.a);
    ex.s0 = s0;
    ex.s1 = s0 + kTimeOffset;
    ex.crossing_grid = kCrossingGrid;
    ex.crossing_count = crossing_times(ex.suspension, ex.s0, ex.s1, kCrossingGrid);
    const DenjoyGap& base = g1.gaps().gap(0);
    ex.probe_center = {0.5 * (base.a + base.b), 0.5};
    ex.probe_radius = 0.4 * (base.b - base.a);
    return ex;
}

// ---------------------------------------------------------------- surgery geometry

Vec2 SurgeryGeometry::center(long n) const {
    return wrap01(Vec2{static_cast<double>(n) * alpha.x, static_cast<double>(n) * alpha.y});
}

double SurgeryGeometry::delta_n(long n, Vec2 z) const {
    double d = torus_dist(z, center(n));
    int e = -static_cast<int>(std::min<long>(std::labs(n), 1000)) - 10;
    return std::max(0.0, std::ldexp(delta - d, e));
}

Vec2 SurgeryGeometry::segment_point(long n, double p) const {
    Vec2 c = center(n);
    return wrap01(Vec2{c.x + p * delta, c.y + p * delta * gamma});
}

double SurgeryGeometry::diameter(long) const { return 2.0 * delta; }

double SurgeryGeometry::euclidean_diameter(long) const { return 2.0 * delta * std::sqrt(1.0 + gamma * gamma); }

DisjointnessScan disjointness_scan(Vec2 alpha, double gamma, double delta, long n_scan) {
    const double K = std::sqrt(1.0 + gamma * gamma);
    const Vec2 e{1.0 / K, gamma / K};
    DisjointnessScan out;
    out.delta0 = std::numeric_limits<double>::infinity();
    for (long n = 1; n <= n_scan; ++n) {
        Vec2 v{wrap_signed(static_cast<double>(n) * alpha.x), wrap_signed(static_cast<double>(n) * alpha.y)};
        double along = std::fabs(dot(v, e));
        double perp = std::fabs(v.x * e.y - v.y * e.x);
        double c = std::ldexp(1.0, -10) + std::ldexp(1.0, -static_cast<int>(std::min<long>(n, 1000)) - 10);
        out.delta0 = std::min(out.delta0, std::max(along / (2.0 * K), perp / (c * K)));
        if (out.disjoint && along < 2.0 * delta * K && perp < c * delta * K) {
            out.disjoint = false;
            out.violating_n = n;
        }
    }
    return out;
}

SurgeryGeometry surgery_geometry(Vec2 alpha, double gamma, double delta, long n_scan) {
    if (!(delta > 0.0)) throw DomainError("delta must be positive");
    DisjointnessScan scan = disjointness_scan(alpha, gamma, delta, n_scan);
    if (!scan.disjoint)
        throw DomainError("delta too large: T^" + std::to_string(scan.violating_n) +
                          " of the segment meets the segment");
    return {alpha, gamma, delta};
}

// ---------------------------------------------------------------- no-gap lemma

NoGapWindow no_gap_window(const std::vector<long>& A, long N0, long m_prime) {
    if (A.empty()) throw DomainError("A must be nonempty");
    if (N0 < 0) throw DomainError("N0 must be nonnegative");
    auto [lo, hi] = std::minmax_element(A.begin(), A.end());
    return {N0 + *hi - *lo, m_prime - *lo};
}

bool no_gap_holds(long N0, long m_prime, const std::vector<long>& xi, long m) {
    for (long v = m; v <= m + N0; ++v) {
        bool found = false;
        for (std::size_t q = 0; q < xi.size() && !found; ++q)
            found = m_prime + static_cast<long>(q) - xi[q] == v;
        if (!found) return false;
    }
    return true;
}

std::optional<long> no_gap_witness(long N0, long m_prime, const std::vector<long>& xi) {
    if (xi.empty()) return std::nullopt;
    long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
    for (std::size_t q = 0; q < xi.size(); ++q) {
        long v = m_prime + static_cast<long>(q) - xi[q];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (long m = lo; m + N0 <= hi; ++m)
        if (no_gap_holds(N0, m_prime, xi, m)) return m;
    return std::nullopt;
}

NoGapScan no_gap_exhaustive(const std::vector<long>& A, long N0) {
    NoGapWindow w = no_gap_window(A, N0);
    NoGapScan scan;
    scan.cases = 1;
    const std::size_t len = static_cast<std::size_t>(w.M0) + 1;
    std::vector<std::size_t> digit(len, 0);
    std::vector<long> xi(len, A[0]);
    for (;;) {
        ++scan.functions;
        if (!no_gap_holds(N0, 0, xi, w.m)) {
            ++scan.formula_failures;
            if (!no_gap_witness(N0, 0, xi)) {
                ++scan.counterexamples;
                if (!scan.first) scan.first = NoGapCounterexample{A, N0, w.M0, xi};
            }
        }
        std::size_t q = 0;
        while (q < len && ++digit[q] == A.size()) {
            digit[q] = 0;
            xi[q] = A[0];
            ++q;
        }
        if (q == len) break;
        xi[q] = A[digit[q]];
    }
    return scan;
}

NoGapScan no_gap_sweep(long lo, long hi, int max_size, long max_n0) {
    NoGapScan total;
    const long width = hi - lo + 1;
    if (width < 1 || width > 20) throw DomainError("sweep range must hold 1..20 integers");
    for (std::uint32_t mask = 1; mask < (1u << width); ++mask) {
        if (std::popcount(mask) > max_size) continue;
        std::vector<long> A;
        for (long b = 0; b < width; ++b)
            if (mask & (1u << b)) A.push_back(lo + b);
        for (long n0 = 0; n0 <= max_n0; ++n0) {
            NoGapScan s = no_gap_exhaustive(A, n0);
            total.cases += s.cases;
            total.functions += s.functions;
            total.formula_failures += s.formula_failures;
            total.counterexamples += s.counterexamples;
            if (!total.first && s.first) total.first = s.first;
        }
    }
    return total;
}

// ---------------------------------------------------------------- Kronecker probes

KroneckerReport kronecker_separation_probe(const TorusMap& f, const Quadruple& q, long n_max, double threshold,
                                           bool primes_separated) {
    KroneckerReport r;
    r.forward = proximality_scan(f, q.w0, q.w1p, n_max);
    r.backward = proximality_scan(f, q.w0, q.w0p, n_max);
    r.threshold = threshold;
    r.n_max = n_max;
    bool fwd = r.forward.forward_min < threshold, bwd = r.backward.backward_min < threshold;
    r.obstruction = fwd && bwd && primes_separated;
    if (r.obstruction)
        r.interpretation = "factor obstruction evidence: w0 is forward proximal to w1' and backward proximal to w0', "
                           "which are separated by construction";
    else if (fwd || bwd)
        r.interpretation = "partial evidence: only one proximality below threshold";
    else
        r.interpretation = "no evidence";
    return r;
}

ProximityResult kronecker_pair_probe(const TorusMap& f, Vec2 w0, Vec2 w1, long n_max) {
    return proximality_scan(f, w0, w1, n_max);
}

// ---------------------------------------------------------------- manifest

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string gallery_manifest_json() {
    using nlohmann::json;
    json m;
    m["manifest_version"] = kManifestVersion;
    m["denjoy"] = {{"order", kDenjoyOrder}, {"mass", kDenjoyMass}, {"schedule", "geometric"}};
    m["rho1"] = kRho1;
    m["rho2"] = kRho2;
    m["3.2"] = {{"g1", "rigid rho1"},
                {"g2", "denjoy rho2"},
                {"base_time", kBaseTime},
                {"time_offset", kTimeOffset},
                {"block_half_width", kBlockHalfWidth},
                {"push_radius", kPushRadius},
                {"probe_points", "w_i = flow(u_i, mid gap 0), w_i' = flow(u_i, left end of gap 0)"},
                {"proximality_threshold", 1e-2},
                {"n_max", 10000}};
    m["3.3"] = {{"g1", "denjoy rho1"},
                {"g2", "denjoy rho2"},
                {"flow_start", kFlowStart},
                {"time_offset", kTimeOffset},
                {"push_radius", kPushRadius},
                {"crossing_grid", kCrossingGrid},
                {"recurrence_ball", "center of base gap 0, radius 0.4 gap width"},
                {"n_max", 10000}};
    m["3.4-geometry"] = {{"alpha", {kGolden, kSilver}},
                         {"gamma", std::sqrt(3.0) - 1.0},
                         {"delta", 0.01},
                         {"n_scan", 1000},
                         {"table_range", 50}};
    return m.dump(2);
}

std::string gallery_manifest_hash() {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(gallery_manifest_json())));
    return buf;
}

}  // namespace torusfactor
