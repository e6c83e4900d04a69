#ifndef TORUSFACTOR_FACTOR_BUILDER_HPP
#define TORUSFACTOR_FACTOR_BUILDER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torusfactor/rotation_theory.hpp"
#include "torusfactor/skew_product.hpp"

namespace torusfactor {

struct TauRegion {
    GridMask mask;
    CentralizedSkew F;
    Vec2 seed_point;
    double ball_radius = 0.0;
    std::string provenance;
    InvarianceReport invariance;
    bool exhausted = false;
    // lower complement component of every t-fiber, flood filled from the bottom edge
    std::vector<std::uint8_t> lower;
    std::vector<char> fiber_separates;

    const GridSpec& spec() const { return mask.spec(); }
    bool all_fibers_separate() const;
    /// z in U^-(Gamma^{-s}(closure T)_0)
    bool in_lower(double s, Vec2 z) const;
};

struct TauOptions {
    long max_iters = 0;
    bool check_invariance = true;
};

TauRegion build_tau(const CentralizedSkew& F, Vec2 seed_point, double ball_radius, const GridSpec& spec,
                    TauOptions opt = {});

struct FiberMask {
    double s = 0.0;
    int t_index = 0;
    int nx = 0, ny = 0;
    double y_lo = 0.0, hy = 0.0;  // already shifted by s
    std::vector<std::uint8_t> cells;  // x-major, y fastest
    bool separating = false;
};

FiberMask lower_component(const TauRegion& tau, double s);

struct ContinuumApprox {
    double s = 0.0;
    std::vector<Vec2> boundary;  // (x, y) cell centers in the t = 0 frame
    bool separating = false;
};

ContinuumApprox continuum_Cs(const TauRegion& tau, double s);

struct HValue {
    double value = 0.0;
    bool defined = false;
    bool ordering_violated = false;
};

HValue evaluate_h(const TauRegion& tau, Vec2 z, double tol);

struct EquivarianceReport {
    double cell = 0.0;
    double translate_defect = 0.0;   // |h(T1 z) - h(z) - 1|
    double dynamics_defect = 0.0;    // |h(f z) - h(z) - rho|
    std::size_t ordering_violations = 0;
    std::size_t ordering_pairs = 0;
    std::size_t undefined_samples = 0;
    std::size_t nonmonotone_samples = 0;
};

EquivarianceReport verify_equivariance(const TauRegion& tau, int samples, std::uint64_t seed, double tol,
                                       int ladder = 64);

struct FactorSample {
    double x, y, h;
};

struct FactorMap {
    int gx = 0, gy = 0;
    double cell = 0.0;
    double tol = 0.0;
    std::vector<FactorSample> samples;
    double max_defect = 0.0;   // circle distance |h(f z) - h(z) - rho|
    double mean_defect = 0.0;
    double pr2_offset = 0.0;   // const in h ~ pr2 + const
    double pr2_deviation = 0.0;
    std::size_t monotone_violations = 0;
    std::size_t undefined = 0;
};

FactorMap project_to_torus_factor(const TauRegion& tau, int gx, int gy, double tol);

struct DoubleFactor {
    FactorMap vertical;    // v = (0,1)
    FactorMap horizontal;  // v = (1,0), computed on the swapped map
    double joint_defect = 0.0;
    double cell = 0.0;
    double hull_diameter = 0.0;
    double c_vertical = 0.0;
    double c_horizontal = 0.0;
};

struct DoubleFactorOptions {
    int nt = 256, nx = 256, ny = 512;
    double ball_radius = 0.25;
    Vec2 seed_point{0.5, 0.0};
    int gx = 64, gy = 64;
    long n_deviation = 2000;
    int deviation_samples = 64;
    std::uint64_t seed = 0;
    long n_hull = 2000;
    double hull_limit = 0.02;
};

/// Circle factor for v = (0,1) and, after swapping coordinates, for v = (1,0).
/// Refuses maps that are not isotopic to the identity or whose rotation cloud is not a point.
DoubleFactor double_factor(const TorusMap& f, Vec2 rho, const DoubleFactorOptions& opt = {});

}  // namespace torusfactor

#endif
