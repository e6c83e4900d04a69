#include "torusfactor/rotation_theory.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

namespace torusfactor {

namespace {

double cross(Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace

RotationCloud estimate_rotation_set(const TorusMap& f, const std::vector<long>& ladder, SampleSpec samples) {
    if (f.k() != 0) throw DomainError("rotation set undefined; use vertical_rotation_number");
    if (ladder.empty()) throw DomainError("empty ladder");
    RotationCloud cloud;
    cloud.ladder = ladder;
    std::sort(cloud.ladder.begin(), cloud.ladder.end());
    const long deepest = cloud.ladder.back();
    auto zs = lattice_samples(samples.count, samples.seed);
    std::vector<std::vector<RotationCloud::Point>> per(zs.size());
    parallel_chunks(zs.size(), [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) {
            LiftedPoint p0 = LiftedPoint::from(zs[i]), p = p0;
            long done = 0;
            for (long n : cloud.ladder) {
                for (; done < n; ++done) f.step(p);
                Vec2 d = displacement(p0, p);
                per[i].push_back({n, (1.0 / static_cast<double>(n)) * d, false});
            }
        }
    });
    std::vector<Vec2> deep;
    for (auto& v : per)
        for (auto& pt : v) {
            cloud.points.push_back(pt);
            if (pt.n == deepest) deep.push_back(pt.average);
        }
    cloud.hull = convex_hull(deep);
    for (auto& pt : cloud.points) {
        if (pt.n != deepest) continue;
        for (auto& h : cloud.hull)
            if (h.x == pt.average.x && h.y == pt.average.y) pt.on_hull = true;
    }
    for (auto& a : cloud.hull)
        for (auto& b : cloud.hull) cloud.hull_diameter = std::max(cloud.hull_diameter, norm(a - b));
    return cloud;
}

VerticalRotation vertical_rotation_number(const TorusMap& f, long n, SampleSpec samples) {
    if (n < 1) throw DomainError("vertical_rotation_number needs n >= 1");
    auto zs = lattice_samples(samples.count, samples.seed);
    std::vector<double> vals(zs.size());
    parallel_chunks(zs.size(), [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i) {
            LiftedPoint p0 = LiftedPoint::from(zs[i]), p = p0;
            for (long j = 0; j < n; ++j) f.step(p);
            vals[i] = displacement(p0, p).y / static_cast<double>(n);
        }
    });
    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : vals) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {sum / static_cast<double>(vals.size()), hi - lo};
}

DeviationProfile deviation_profile(const TorusMap& f, Vec2 v, double rho, long n_max, SampleSpec samples,
                                   PlateauTolerance tol) {
    if (n_max < 1) throw DomainError("deviation_profile needs n_max >= 1");
    DeviationProfile prof;
    prof.v = v;
    prof.rho = rho;
    prof.samples = samples;
    auto zs = lattice_samples(samples.count, samples.seed);
    const auto len = static_cast<std::size_t>(n_max) + 1;
    std::size_t chunks = chunk_count_for(zs.size());
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(len, 0.0));
    parallel_chunks(zs.size(), [&](std::size_t b, std::size_t e, std::size_t c) {
        auto& D = partial[c];
        for (std::size_t i = b; i < e; ++i) {
            LiftedPoint p0 = LiftedPoint::from(zs[i]), fw = p0, bw = p0;
            for (long n = 1; n <= n_max; ++n) {
                f.step(fw);
                f.step_inverse(bw);
                double nd = static_cast<double>(n);
                double a = std::fabs(dot(displacement(p0, fw), v) - nd * rho);
                double b2 = std::fabs(dot(displacement(p0, bw), v) + nd * rho);
                D[static_cast<std::size_t>(n)] = std::max(D[static_cast<std::size_t>(n)], std::max(a, b2));
            }
        }
    });
    prof.D.assign(len, 0.0);
    for (auto& D : partial)
        for (std::size_t n = 0; n < len; ++n) prof.D[n] = std::max(prof.D[n], D[n]);
    const auto cut = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n_max)));
    for (std::size_t n = 0; n < len; ++n) {
        if (n <= cut) prof.c_at_80 = std::max(prof.c_at_80, prof.D[n]);
        prof.c_est = std::max(prof.c_est, prof.D[n]);
    }
    prof.plateau_tolerance = tol.absolute + tol.relative * prof.c_at_80;
    prof.bounded = prof.c_est - prof.c_at_80 <= prof.plateau_tolerance;
    return prof;
}

SpreadTable horizontal_spread(const TorusMap& f, long n_max, SampleSpec samples) {
    if (n_max < 1) throw DomainError("horizontal_spread needs n_max >= 1");
    auto zs = lattice_samples(samples.count, samples.seed);
    // integer translate of the first sample: the pair realizing I_k^n (0,1)
    zs.push_back({zs.front().x, zs.front().y + 1.0});
    const auto len = static_cast<std::size_t>(2 * n_max + 1);
    std::vector<double> lo(len, std::numeric_limits<double>::infinity()), hi(len, -std::numeric_limits<double>::infinity());
    for (const Vec2& z : zs) {
        LiftedPoint p0 = LiftedPoint::from(z), fw = p0, bw = p0;
        auto put = [&](long n, const LiftedPoint& p) {
            auto idx = static_cast<std::size_t>(n + n_max);
            double d = displacement(p0, p).x;
            lo[idx] = std::min(lo[idx], d);
            hi[idx] = std::max(hi[idx], d);
        };
        put(0, p0);
        for (long n = 1; n <= n_max; ++n) {
            f.step(fw);
            f.step_inverse(bw);
            put(n, fw);
            put(-n, bw);
        }
    }
    SpreadTable t;
    for (long n = -n_max; n <= n_max; ++n) {
        auto idx = static_cast<std::size_t>(n + n_max);
        t.n.push_back(n);
        t.spread.push_back(hi[idx] - lo[idx]);
        if (n > 0) t.max_forward = std::max(t.max_forward, hi[idx] - lo[idx]);
        if (n < 0) t.max_backward = std::max(t.max_backward, hi[idx] - lo[idx]);
    }
    t.forward_backward_agree = t.max_backward <= t.max_forward + 2.0 && t.max_forward <= t.max_backward + 2.0;
    return t;
}

ProximityResult proximality_scan(const TorusMap& f, Vec2 x, Vec2 y, long n_max) {
    if (n_max < 1) throw DomainError("proximality_scan needs n_max >= 1");
    ProximityResult r{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 0, 0};
    LiftedPoint a = LiftedPoint::from(wrap01(x)), b = LiftedPoint::from(wrap01(y));
    LiftedPoint a2 = a, b2 = b;
    for (long n = 1; n <= n_max; ++n) {
        f.step(a);
        f.step(b);
        f.step_inverse(a2);
        f.step_inverse(b2);
        double df = torus_dist(a.frac, b.frac), db = torus_dist(a2.frac, b2.frac);
        if (df < r.forward_min) { r.forward_min = df; r.forward_argmin = n; }
        if (db < r.backward_min) { r.backward_min = db; r.backward_argmin = n; }
    }
    return r;
}

std::vector<long> recurrence_probe(const TorusMap& f, Vec2 center, double radius, long n_max, int rings) {
    if (!(radius > 0.0) || n_max < 1) throw DomainError("recurrence_probe needs radius > 0 and n_max >= 1");
    std::vector<Vec2> pts{wrap01(center)};
    for (int r = 1; r <= rings; ++r) {
        double rad = radius * r / (rings + 1.0);
        int m = 6 * r;
        for (int j = 0; j < m; ++j) {
            double th = 2.0 * std::numbers::pi * (j + 0.5 * (r % 2)) / m;
            pts.push_back(wrap01(Vec2{center.x + rad * std::cos(th), center.y + rad * std::sin(th)}));
        }
    }
    std::vector<char> hit(static_cast<std::size_t>(n_max) + 1, 0);
    for (const Vec2& z : pts) {
        Vec2 u = z;
        for (long n = 1; n <= n_max; ++n) {
            u = f.on_torus(u);
            if (torus_dist(u, center) < radius) hit[static_cast<std::size_t>(n)] = 1;
        }
    }
    std::vector<long> out;
    for (long n = 1; n <= n_max; ++n)
        if (hit[static_cast<std::size_t>(n)]) out.push_back(n);
    return out;
}

}  // namespace torusfactor
