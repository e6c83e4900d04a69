#ifndef TORUSFACTOR_TORUS_MAPS_HPP
#define TORUSFACTOR_TORUS_MAPS_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "torusfactor/circle_maps.hpp"
#include "torusfactor/common.hpp"

namespace torusfactor {

enum class TorusKind { Rigid, Product, Suspension, Composed, DiskPush, Swapped };

std::string to_string(TorusKind k);

/// Point of R^2 split as integer cell plus fractional part in [0,1)^2.
struct LiftedPoint {
    std::int64_t px = 0;
    std::int64_t py = 0;
    Vec2 frac;

    static LiftedPoint from(Vec2 z);
    Vec2 value() const { return {static_cast<double>(px) + frac.x, static_cast<double>(py) + frac.y}; }
};

/// Displacement of two lifted points, b - a, computed without cancellation.
inline Vec2 displacement(const LiftedPoint& a, const LiftedPoint& b) {
    return {static_cast<double>(b.px - a.px) + (b.frac.x - a.frac.x),
            static_cast<double>(b.py - a.py) + (b.frac.y - a.frac.y)};
}

class TorusMapImpl {
public:
    virtual ~TorusMapImpl() = default;
    // u in [0,1)^2
    virtual Vec2 delta(Vec2 u) const = 0;
    virtual Vec2 delta_inverse(Vec2 u) const = 0;
};

struct DiskPushParams {
    Vec2 center0;
    Vec2 center1;
    Vec2 mid;
    double radius = 0.0;
};

/// Lift f~(z) = I_k z + Delta(pi z) together with its analytic inverse.
class TorusMap {
public:
    static TorusMap rigid(double a, double b, int k = 0);
    static TorusMap dehn_twist(int k) { return rigid(0.0, 0.0, k); }
    static TorusMap product(const CircleLift& g1, const CircleLift& g2);
    static TorusMap disk_push(Vec2 center0, Vec2 center1, double radius);
    /// f_0 o f_1 o ... (last element applied first).
    static TorusMap compose(const std::vector<TorusMap>& chain);
    static TorusMap from_impl(std::shared_ptr<const TorusMapImpl> impl, int k, TorusKind kind,
                              std::string label);

    int k() const { return k_; }
    TorusKind kind() const { return kind_; }
    const std::string& label() const { return label_; }
    const std::vector<TorusMap>& chain() const { return chain_; }

    Vec2 delta(Vec2 u) const { return impl_->delta(u); }
    Vec2 delta_inverse(Vec2 u) const { return impl_->delta_inverse(u); }

    Vec2 eval(Vec2 z) const;
    Vec2 eval_inverse(Vec2 z) const;
    void step(LiftedPoint& p) const;
    void step_inverse(LiftedPoint& p) const;
    /// Image on the torus of a point of [0,1)^2.
    Vec2 on_torus(Vec2 u) const { return wrap01(eval(u)); }
    Vec2 on_torus_inverse(Vec2 u) const { return wrap01(eval_inverse(u)); }

    /// Conjugate by the coordinate swap (x,y) -> (y,x). Needs k = 0.
    TorusMap swapped() const;

private:
    std::shared_ptr<const TorusMapImpl> impl_;
    int k_ = 0;
    TorusKind kind_ = TorusKind::Rigid;
    std::string label_;
    std::vector<TorusMap> chain_;
};

inline Vec2 eval_lift(const TorusMap& f, Vec2 z) { return f.eval(z); }
inline Vec2 eval_inverse(const TorusMap& f, Vec2 z) { return f.eval_inverse(z); }

inline TorusMap make_disk_push(Vec2 c0, Vec2 c1, double radius) { return TorusMap::disk_push(c0, c1, radius); }

DiskPushParams disk_push_params(Vec2 center0, Vec2 center1, double radius);

struct UnimodularMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;  // [[a,b],[c,d]]

    std::int64_t det() const;
    bool operator==(const UnimodularMatrix&) const = default;
};

UnimodularMatrix multiply(const UnimodularMatrix& m, const UnimodularMatrix& n);  // overflow-checked
UnimodularMatrix inverse(const UnimodularMatrix& m);                              // det must be 1
inline UnimodularMatrix twist_matrix(std::int64_t k) { return {1, k, 0, 1}; }

struct IsotopyNormalForm {
    UnimodularMatrix B;
    std::int64_t k = 0;
};

/// B^{-1} A B = I_k for a unipotent A.
IsotopyNormalForm normalize_isotopy_class(const UnimodularMatrix& A);

}  // namespace torusfactor

#endif
