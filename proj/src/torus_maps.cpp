#include "torusfactor/torus_maps.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace torusfactor {

std::string to_string(TorusKind k) {
    switch (k) {
        case TorusKind::Rigid: return "rigid";
        case TorusKind::Product: return "product";
        case TorusKind::Suspension: return "suspension";
        case TorusKind::Composed: return "composed";
        case TorusKind::DiskPush: return "disk-push";
        case TorusKind::Swapped: return "swapped";
    }
    return "?";
}

LiftedPoint LiftedPoint::from(Vec2 z) {
    LiftedPoint p;
    double fx = std::floor(z.x), fy = std::floor(z.y);
    p.px = static_cast<std::int64_t>(fx);
    p.py = static_cast<std::int64_t>(fy);
    p.frac = {z.x - fx, z.y - fy};
    if (p.frac.x >= 1.0) { p.frac.x -= 1.0; ++p.px; }
    if (p.frac.y >= 1.0) { p.frac.y -= 1.0; ++p.py; }
    return p;
}

namespace {

void renormalize(LiftedPoint& p, double vx, double vy) {
    double fx = std::floor(vx), fy = std::floor(vy);
    p.px += static_cast<std::int64_t>(fx);
    p.py += static_cast<std::int64_t>(fy);
    p.frac = {vx - fx, vy - fy};
    if (p.frac.x >= 1.0) { p.frac.x -= 1.0; ++p.px; }
    if (p.frac.y >= 1.0) { p.frac.y -= 1.0; ++p.py; }
}

class RigidImpl final : public TorusMapImpl {
public:
    RigidImpl(Vec2 c, int k) : c_(c), inv_{-c.x + k * c.y, -c.y} {}
    Vec2 delta(Vec2) const override { return c_; }
    Vec2 delta_inverse(Vec2) const override { return inv_; }

private:
    Vec2 c_, inv_;
};

class ProductImpl final : public TorusMapImpl {
public:
    ProductImpl(CircleLift g1, CircleLift g2) : g1_(std::move(g1)), g2_(std::move(g2)) {}
    Vec2 delta(Vec2 u) const override { return {g1_.eval(u.x) - u.x, g2_.eval(u.y) - u.y}; }
    Vec2 delta_inverse(Vec2 u) const override { return {g1_.inverse(u.x) - u.x, g2_.inverse(u.y) - u.y}; }

private:
    CircleLift g1_, g2_;
};

class ComposedImpl final : public TorusMapImpl {
public:
    ComposedImpl(std::vector<TorusMap> chain, int k) : chain_(std::move(chain)), k_(k) {}
    Vec2 delta(Vec2 u) const override {
        Vec2 z = u;
        for (auto it = chain_.rbegin(); it != chain_.rend(); ++it) z = it->eval(z);
        return {z.x - u.x - k_ * u.y, z.y - u.y};
    }
    Vec2 delta_inverse(Vec2 u) const override {
        Vec2 z = u;
        for (const auto& f : chain_) z = f.eval_inverse(z);
        return {z.x - u.x + k_ * u.y, z.y - u.y};
    }

private:
    std::vector<TorusMap> chain_;
    int k_;
};

class SwappedImpl final : public TorusMapImpl {
public:
    explicit SwappedImpl(TorusMap f) : f_(std::move(f)) {}
    Vec2 delta(Vec2 u) const override {
        Vec2 d = f_.delta({u.y, u.x});
        return {d.y, d.x};
    }
    Vec2 delta_inverse(Vec2 u) const override {
        Vec2 d = f_.delta_inverse({u.y, u.x});
        return {d.y, d.x};
    }

private:
    TorusMap f_;
};

// Radial bump: 1 on the inner disk of radius d/2, linear down to 0 at the radius.
class DiskPushImpl final : public TorusMapImpl {
public:
    explicit DiskPushImpl(DiskPushParams p) : p_(p) {
        push_ = {wrap_signed(p.center1.x - p.center0.x), wrap_signed(p.center1.y - p.center0.y)};
        len_ = norm(push_);
        dir_ = len_ > 0.0 ? (1.0 / len_) * push_ : Vec2{1.0, 0.0};
        inner_ = 0.5 * len_;
    }
    double bump(double rho) const {
        if (rho <= inner_) return 1.0;
        if (rho >= p_.radius) return 0.0;
        return (p_.radius - rho) / (p_.radius - inner_);
    }
    Vec2 local(Vec2 u) const { return {wrap_signed(u.x - p_.mid.x), wrap_signed(u.y - p_.mid.y)}; }
    Vec2 delta(Vec2 u) const override {
        if (len_ == 0.0) return {0.0, 0.0};
        Vec2 q = local(u);
        double b = bump(norm(q));
        if (b == 0.0) return {0.0, 0.0};
        return b * push_;
    }
    Vec2 delta_inverse(Vec2 u) const override {
        if (len_ == 0.0) return {0.0, 0.0};
        Vec2 q = local(u);
        if (norm(q) >= p_.radius) return {0.0, 0.0};
        // Solve sigma + len * bump(|perp + sigma dir|) = tau along the push line.
        double tau = dot(q, dir_);
        Vec2 perp = q - tau * dir_;
        double pn2 = dot(perp, perp);
        auto g = [&](double s) { return s + len_ * bump(std::sqrt(pn2 + s * s)); };
        double lo = tau - len_, hi = tau;
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            double mid = 0.5 * (lo + hi);
            if (g(mid) < tau) lo = mid; else hi = mid;
        }
        double sigma = 0.5 * (lo + hi);
        return (sigma - tau) * dir_;
    }

private:
    DiskPushParams p_;
    Vec2 push_, dir_;
    double len_ = 0.0, inner_ = 0.0;
};

}  // namespace

TorusMap TorusMap::from_impl(std::shared_ptr<const TorusMapImpl> impl, int k, TorusKind kind, std::string label) {
    TorusMap f;
    f.impl_ = std::move(impl);
    f.k_ = k;
    f.kind_ = kind;
    f.label_ = std::move(label);
    return f;
}

TorusMap TorusMap::rigid(double a, double b, int k) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("rigid map needs finite offsets");
    return from_impl(std::make_shared<RigidImpl>(Vec2{a, b}, k), k, TorusKind::Rigid, "rigid");
}

TorusMap TorusMap::product(const CircleLift& g1, const CircleLift& g2) {
    return from_impl(std::make_shared<ProductImpl>(g1, g2), 0, TorusKind::Product, "product");
}

DiskPushParams disk_push_params(Vec2 center0, Vec2 center1, double radius) {
    if (!(radius > 0.0) || !(radius < 0.25)) throw DomainError("disk push radius must lie in (0, 1/4)");
    DiskPushParams p;
    p.center0 = wrap01(center0);
    Vec2 d{wrap_signed(center1.x - center0.x), wrap_signed(center1.y - center0.y)};
    p.center1 = wrap01(p.center0 + d);
    p.mid = wrap01(p.center0 + 0.5 * d);
    p.radius = radius;
    // injectivity of the linear-falloff bump needs 1.5 |d| < radius
    if (!(1.5 * norm(d) < radius)) throw DomainError("disk push: centers too far apart for the radius");
    return p;
}

TorusMap TorusMap::disk_push(Vec2 center0, Vec2 center1, double radius) {
    DiskPushParams p = disk_push_params(center0, center1, radius);
    return from_impl(std::make_shared<DiskPushImpl>(p), 0, TorusKind::DiskPush, "disk-push");
}

TorusMap TorusMap::compose(const std::vector<TorusMap>& chain) {
    if (chain.empty()) throw DomainError("composition chain is empty");
    int k = 0;
    for (const auto& f : chain) k += f.k();
    TorusMap out = from_impl(std::make_shared<ComposedImpl>(chain, k), k, TorusKind::Composed, "composed");
    out.chain_ = chain;
    return out;
}

TorusMap TorusMap::swapped() const {
    if (k_ != 0) throw DomainError("coordinate swap needs a map homotopic to the identity");
    return from_impl(std::make_shared<SwappedImpl>(*this), 0, TorusKind::Swapped, label_ + "/swapped");
}

Vec2 TorusMap::eval(Vec2 z) const {
    Vec2 d = impl_->delta(wrap01(z));
    return {z.x + k_ * z.y + d.x, z.y + d.y};
}

Vec2 TorusMap::eval_inverse(Vec2 z) const {
    Vec2 d = impl_->delta_inverse(wrap01(z));
    return {z.x - k_ * z.y + d.x, z.y + d.y};
}

void TorusMap::step(LiftedPoint& p) const {
    Vec2 u = p.frac;
    Vec2 d = impl_->delta(u);
    p.px += static_cast<std::int64_t>(k_) * p.py;
    renormalize(p, u.x + k_ * u.y + d.x, u.y + d.y);
}

void TorusMap::step_inverse(LiftedPoint& p) const {
    Vec2 u = p.frac;
    Vec2 d = impl_->delta_inverse(u);
    p.px -= static_cast<std::int64_t>(k_) * p.py;
    renormalize(p, u.x - k_ * u.y + d.x, u.y + d.y);
}

// ---- integer normal form ----

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw DomainError("integer overflow in unimodular arithmetic");
    return static_cast<std::int64_t>(v);
}

std::int64_t egcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        std::int64_t q = a / b;
        std::int64_t t = a - q * b;
        a = b;
        b = t;
        t = x0 - q * x1; x0 = x1; x1 = t;
        t = y0 - q * y1; y0 = y1; y1 = t;
    }
    if (a < 0) { a = -a; x0 = -x0; y0 = -y0; }
    x = x0;
    y = y0;
    return a;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

std::int64_t UnimodularMatrix::det() const { return narrow(i128(a) * d - i128(b) * c); }

UnimodularMatrix multiply(const UnimodularMatrix& m, const UnimodularMatrix& n) {
    return {narrow(i128(m.a) * n.a + i128(m.b) * n.c), narrow(i128(m.a) * n.b + i128(m.b) * n.d),
            narrow(i128(m.c) * n.a + i128(m.d) * n.c), narrow(i128(m.c) * n.b + i128(m.d) * n.d)};
}

UnimodularMatrix inverse(const UnimodularMatrix& m) {
    if (m.det() != 1) throw DomainError("matrix is not unimodular");
    return {m.d, narrow(-i128(m.b)), narrow(-i128(m.c)), m.a};
}

IsotopyNormalForm normalize_isotopy_class(const UnimodularMatrix& A) {
    i128 det = i128(A.a) * A.d - i128(A.b) * A.c;
    i128 tr = i128(A.a) + A.d;
    if (det != 1 || tr != 2) throw DomainError("not unipotent: trace must be 2 and determinant 1");
    const std::int64_t n11 = A.a - 1, n12 = A.b, n21 = A.c, n22 = A.d - 1;
    if (n11 == 0 && n12 == 0 && n21 == 0 && n22 == 0) return {UnimodularMatrix{}, 0};

    // kernel of the rank-one nilpotent part
    std::int64_t r1 = n11, r2 = n12;
    if (r1 == 0 && r2 == 0) { r1 = n21; r2 = n22; }
    std::int64_t a = r2, c = -r1;
    std::int64_t g = std::gcd(a, c);
    a /= g;
    c /= g;
    if (a < 0 || (a == 0 && c < 0)) { a = -a; c = -c; }

    // a d - b c = 1  <=>  a x + c y = 1 with d = x, b = -y
    std::int64_t x, y;
    egcd(a, c, x, y);
    std::int64_t b0 = -y, d0 = x;
    auto cost = [&](std::int64_t j) {
        i128 b = i128(b0) + i128(j) * a, d = i128(d0) + i128(j) * c;
        i128 ab = b < 0 ? -b : b, ad = d < 0 ? -d : d;
        return std::pair<i128, i128>{ab + ad, ab};
    };
    std::vector<std::int64_t> cand{0};
    for (auto [num, den] : {std::pair{b0, a}, std::pair{d0, c}}) {
        if (den == 0) continue;
        std::int64_t f = floor_div(-num, den);
        for (std::int64_t j = f - 1; j <= f + 2; ++j) cand.push_back(j);
    }
    std::int64_t best = cand[0];
    for (std::int64_t j : cand) {
        auto cj = cost(j), cb = cost(best);
        if (cj < cb || (cj == cb && j < best)) best = j;
    }
    UnimodularMatrix B{a, narrow(i128(b0) + i128(best) * a), c, narrow(i128(d0) + i128(best) * c)};
    UnimodularMatrix conj = multiply(multiply(inverse(B), A), B);
    if (conj.a != 1 || conj.c != 0 || conj.d != 1) throw DomainError("normal form verification failed");
    return {B, conj.b};
}

}  // namespace torusfactor
