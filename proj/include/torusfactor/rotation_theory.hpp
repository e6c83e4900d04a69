#ifndef TORUSFACTOR_ROTATION_THEORY_HPP
#define TORUSFACTOR_ROTATION_THEORY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "torusfactor/torus_maps.hpp"

namespace torusfactor {

struct SampleSpec {
    int count = 256;
    std::uint64_t seed = 0;
};

struct RotationCloud {
    std::vector<long> ladder;
    struct Point {
        long n;
        Vec2 average;
        bool on_hull;
    };
    std::vector<Point> points;
    std::vector<Vec2> hull;  // deepest level, counter-clockwise
    double hull_diameter = 0.0;
};

RotationCloud estimate_rotation_set(const TorusMap& f, const std::vector<long>& ladder, SampleSpec samples);

struct VerticalRotation {
    double estimate;
    double spread;
};

VerticalRotation vertical_rotation_number(const TorusMap& f, long n, SampleSpec samples);

struct DeviationProfile {
    Vec2 v;
    double rho = 0.0;
    SampleSpec samples;
    std::vector<double> D;  // D[n], 0 <= n <= n_max
    double c_est = 0.0;
    double c_at_80 = 0.0;          // running max over the first 80% of the ladder
    double plateau_tolerance = 0.0;
    bool bounded = false;
    std::string caveat = "sampled evidence only";
};

/// Relative part of the plateau test; increases below tol_abs + tol_rel * C are not counted.
struct PlateauTolerance {
    double absolute = 1e-9;
    double relative = 1e-3;
};

DeviationProfile deviation_profile(const TorusMap& f, Vec2 v, double rho, long n_max, SampleSpec samples,
                                   PlateauTolerance tol = {});

struct SpreadTable {
    std::vector<long> n;        // -n_max .. n_max
    std::vector<double> spread;
    bool forward_backward_agree = false;
    double max_forward = 0.0;
    double max_backward = 0.0;
    std::string caveat = "heuristic";
};

SpreadTable horizontal_spread(const TorusMap& f, long n_max, SampleSpec samples);

struct ProximityResult {
    double forward_min;
    double backward_min;
    long forward_argmin;
    long backward_argmin;
};

ProximityResult proximality_scan(const TorusMap& f, Vec2 x, Vec2 y, long n_max);

/// Return times of sampled points of the ball; `rings` concentric rings of sample points.
std::vector<long> recurrence_probe(const TorusMap& f, Vec2 center, double radius, long n_max, int rings = 6);

}  // namespace torusfactor

#endif
