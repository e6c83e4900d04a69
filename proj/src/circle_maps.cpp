#include "torusfactor/circle_maps.hpp"

#include <algorithm>
#include <cfloat>
#include <numeric>

namespace torusfactor {

PiecewiseLift PiecewiseLift::from_knots(std::vector<Knot> knots) {
    if (knots.empty()) throw DomainError("piecewise lift needs at least one knot");
    for (auto& k : knots) {
        if (!std::isfinite(k.x) || !std::isfinite(k.y)) throw DomainError("non-finite knot");
        double shift = std::floor(k.x);
        k.x -= shift;
        k.y -= shift;
        if (k.x >= 1.0) {
            k.x -= 1.0;
            k.y -= 1.0;
        }
    }
    std::sort(knots.begin(), knots.end(), [](const Knot& a, const Knot& b) { return a.x < b.x; });
    PiecewiseLift out;
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (i > 0) {
            if (!(knots[i].x > knots[i - 1].x)) throw DomainError("piecewise lift: duplicate breakpoint");
            if (!(knots[i].y > knots[i - 1].y)) throw DomainError("piecewise lift: values not strictly increasing");
        }
        out.xs_.push_back(knots[i].x);
        out.ys_.push_back(knots[i].y);
    }
    if (!(out.ys_.back() < out.ys_.front() + 1.0))
        throw DomainError("piecewise lift: values not strictly increasing across the period");
    return out;
}

double PiecewiseLift::eval(double x) const {
    double k = std::floor(x);
    double u = x - k;
    if (u >= 1.0) {
        u -= 1.0;
        k += 1.0;
    }
    const std::size_t m = xs_.size();
    auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
    double x0, y0, x1, y1;
    if (it == xs_.begin()) {
        x0 = xs_[m - 1] - 1.0;
        y0 = ys_[m - 1] - 1.0;
        x1 = xs_[0];
        y1 = ys_[0];
    } else {
        std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        x0 = xs_[i];
        y0 = ys_[i];
        if (i + 1 < m) {
            x1 = xs_[i + 1];
            y1 = ys_[i + 1];
        } else {
            x1 = xs_[0] + 1.0;
            y1 = ys_[0] + 1.0;
        }
    }
    if (u == x0) return k + y0;
    return k + y0 + (u - x0) * (y1 - y0) / (x1 - x0);
}

double PiecewiseLift::blend_inverse(double s, double w) const {
    const std::size_t m = xs_.size();
    auto z = [&](std::size_t i) { return xs_[i] + s * (ys_[i] - xs_[i]); };
    const double z0 = z(0);
    double k = std::floor(w - z0);
    double v = w - k;
    if (v >= z0 + 1.0) {
        v -= 1.0;
        k += 1.0;
    }
    // largest i with z(i) <= v
    std::size_t lo = 0, hi = m;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (z(mid) <= v) lo = mid; else hi = mid;
    }
    double xa = xs_[lo], za = z(lo), xb, zb;
    if (lo + 1 < m) {
        xb = xs_[lo + 1];
        zb = z(lo + 1);
    } else {
        xb = xs_[0] + 1.0;
        zb = z0 + 1.0;
    }
    if (v <= za) return k + xa;
    return k + xa + (v - za) * (xb - xa) / (zb - za);
}

int DenjoyGapTable::gap_containing(double x) const {
    double u = wrap01(x);
    auto it = std::upper_bound(by_position.begin(), by_position.end(), u,
                               [&](double v, int idx) { return v < gaps[static_cast<std::size_t>(idx)].a; });
    if (it == by_position.begin()) return order + 1;
    const DenjoyGap& g = gaps[static_cast<std::size_t>(*(it - 1))];
    return (u < g.b) ? g.n : order + 1;
}

double DenjoyGapTable::phi(double y) const {
    auto c = static_cast<std::size_t>(std::lower_bound(sorted_angles.begin(), sorted_angles.end(), y) -
                                      sorted_angles.begin());
    return (y + mass_before[c]) / normalization;
}

GapSchedule geometric_schedule(double mass) {
    // sum over Z of 2^{-|n|} is 3
    const double c = mass / 3.0;
    return [c](int n) { return c * std::ldexp(1.0, -std::abs(n)); };
}

std::string to_string(CircleKind k) {
    switch (k) {
        case CircleKind::Rigid: return "rigid";
        case CircleKind::PiecewiseAffine: return "piecewise-affine";
        case CircleKind::DenjoyTruncated: return "denjoy-truncated";
    }
    return "?";
}

CircleLift CircleLift::rigid(double alpha) {
    if (!std::isfinite(alpha)) throw DomainError("rigid rotation needs a finite offset");
    CircleLift g;
    g.kind_ = CircleKind::Rigid;
    g.alpha_ = alpha;
    return g;
}

CircleLift CircleLift::piecewise(std::vector<Knot> knots) {
    CircleLift g;
    g.kind_ = CircleKind::PiecewiseAffine;
    g.table_ = PiecewiseLift::from_knots(std::move(knots));
    return g;
}

const DenjoyGapTable& CircleLift::gaps() const {
    if (!gaps_) throw DomainError("lift is not a truncated Denjoy map");
    return *gaps_;
}

double CircleLift::eval(double x) const {
    return kind_ == CircleKind::Rigid ? x + alpha_ : table_.eval(x);
}

double CircleLift::inverse(double w) const {
    return kind_ == CircleKind::Rigid ? w - alpha_ : table_.inverse(w);
}

double CircleLift::blend(double s, double x) const {
    return kind_ == CircleKind::Rigid ? x + s * alpha_ : table_.blend(s, x);
}

double CircleLift::blend_inverse(double s, double w) const {
    return kind_ == CircleKind::Rigid ? w - s * alpha_ : table_.blend_inverse(s, w);
}

double CircleLift::iterate(double x, long n) const {
    if (n >= 0) {
        for (long i = 0; i < n; ++i) x = eval(x);
    } else {
        for (long i = 0; i < -n; ++i) x = inverse(x);
    }
    return x;
}

RotationEstimate rotation_number(const CircleLift& g, double x0, long n) {
    if (n < 1) throw DomainError("rotation_number needs n >= 1");
    // Integer winding is carried separately so the fractional part keeps full precision.
    double base = std::floor(x0);
    double u0 = x0 - base;
    double u = u0;
    double winding = 0.0;
    for (long i = 0; i < n; ++i) {
        double y = g.eval(u);
        double f = std::floor(y);
        winding += f;
        u = y - f;
        if (u >= 1.0) {
            u -= 1.0;
            winding += 1.0;
        }
    }
    double nd = static_cast<double>(n);
    double est = (winding + (u - u0)) / nd;
    return {est, 1.0 / nd + 8.0 * DBL_EPSILON * (1.0 + std::fabs(est))};
}

CircleLift build_denjoy(double alpha, const GapSchedule& schedule, int order) {
    if (order < 1) throw DomainError("Denjoy truncation order N must be >= 1");
    if (!std::isfinite(alpha)) throw DomainError("Denjoy angle must be finite");
    auto table = std::make_shared<DenjoyGapTable>();
    table->alpha = alpha;
    table->order = order;
    const int N = order;
    double total = 0.0;
    for (int n = -N; n <= N; ++n) {
        double l = schedule(n);
        if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("gap lengths must be positive");
        total += l;
        table->gaps.push_back({n, wrap01(n * alpha), l, 0.0, 0.0});
    }
    if (!(total < 1.0)) throw DomainError("gap schedule sum must be < 1");
    table->total_mass = total;
    table->normalization = 1.0 + total;
    const double norm = table->normalization;

    std::vector<int> pos(table->gaps.size());
    std::iota(pos.begin(), pos.end(), 0);
    std::sort(pos.begin(), pos.end(), [&](int i, int j) { return table->gaps[i].angle < table->gaps[j].angle; });
    double prefix = 0.0;
    table->mass_before.push_back(0.0);
    for (std::size_t p = 0; p < pos.size(); ++p) {
        DenjoyGap& g = table->gaps[static_cast<std::size_t>(pos[p])];
        if (p > 0 && !(g.angle > table->sorted_angles.back() + 1e-15))
            throw DomainError("Denjoy angles collide; alpha is too close to rational for this N");
        g.a = (g.angle + prefix) / norm;
        g.b = g.a + g.mass / norm;
        prefix += g.mass;
        table->sorted_angles.push_back(g.angle);
        table->mass_before.push_back(prefix);
    }
    table->by_position = pos;
    double tail = 0.0;
    for (int n = N + 1; n <= N + 4000; ++n) tail += schedule(n) + schedule(-n);
    table->truncation_tolerance = tail;

    std::vector<double> ends;
    for (const auto& g : table->gaps) {
        ends.push_back(g.a);
        ends.push_back(g.b);
    }
    auto room = [&](double v) {
        double d = 1.0;
        for (double e : ends) d = std::min(d, circle_dist(v, e));
        return d;
    };
    auto lift_shift = [&](double from_angle, double to_angle) { return std::round(from_angle + alpha - to_angle); };

    std::vector<Knot> knots;
    for (int n = -N; n < N; ++n) {
        const DenjoyGap& g = table->gap(n);
        const DenjoyGap& h = table->gap(n + 1);
        double j = lift_shift(g.angle, h.angle);
        knots.push_back({g.a, h.a + j});
        knots.push_back({g.b, h.b + j});
    }
    {
        // gap N goes to a short interval around the unmaterialized angle of N+1
        const DenjoyGap& g = table->gap(N);
        double ang = wrap01((N + 1) * alpha);
        double p = table->phi(ang);
        double w = std::min(schedule(N + 1) / norm, 0.25 * room(p));
        double j = lift_shift(g.angle, ang);
        knots.push_back({g.a, p - 0.5 * w + j});
        knots.push_back({g.b, p + 0.5 * w + j});
    }
    {
        // a short interval around the angle of -N-1 opens up into gap -N
        const DenjoyGap& h = table->gap(-N);
        double ang = wrap01((-N - 1) * alpha);
        double q = table->phi(ang);
        double w = std::min(schedule(-N - 1) / norm, 0.25 * room(q));
        double j = lift_shift(ang, h.angle);
        knots.push_back({q - 0.5 * w, h.a + j});
        knots.push_back({q + 0.5 * w, h.b + j});
    }
    CircleLift out;
    out.kind_ = CircleKind::DenjoyTruncated;
    out.alpha_ = alpha;
    out.table_ = PiecewiseLift::from_knots(std::move(knots));
    out.gaps_ = table;
    return out;
}

DenjoySemiconjugacy::DenjoySemiconjugacy(const CircleLift& g) : gaps_(g.gap_table_ptr()) {
    if (!gaps_) throw DomainError("semi-conjugacy needs a truncated Denjoy lift");
}

double DenjoySemiconjugacy::operator()(double x) const {
    const DenjoyGapTable& t = *gaps_;
    double k = std::floor(x);
    double u = x - k;
    if (u >= 1.0) {
        u -= 1.0;
        k += 1.0;
    }
    auto it = std::upper_bound(t.by_position.begin(), t.by_position.end(), u,
                               [&](double v, int idx) { return v < t.gaps[static_cast<std::size_t>(idx)].a; });
    auto c = static_cast<std::size_t>(it - t.by_position.begin());
    if (c > 0) {
        const DenjoyGap& g = t.gaps[static_cast<std::size_t>(t.by_position[c - 1])];
        if (u < g.b) return k + g.angle;
    }
    return k + u * t.normalization - t.mass_before[c];
}

DenjoySemiconjugacy denjoy_semiconjugacy(const CircleLift& g) { return DenjoySemiconjugacy(g); }

}  // namespace torusfactor
