#ifndef TORUSFACTOR_CIRCLE_MAPS_HPP
#define TORUSFACTOR_CIRCLE_MAPS_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "torusfactor/common.hpp"

namespace torusfactor {

inline const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
inline const double kSilver = std::sqrt(2.0) - 1.0;

struct Knot {
    double x;
    double y;
};

/// Degree-1 piecewise-linear lift given by knots x_0 < ... < x_{m-1} in [0,1)
/// with strictly increasing values, y_{m-1} < y_0 + 1.
class PiecewiseLift {
public:
    PiecewiseLift() = default;
    static PiecewiseLift from_knots(std::vector<Knot> knots);

    double eval(double x) const;
    // G_s(x) = x + s (g(x) - x), the straight-line isotopy from the identity.
    double blend(double s, double x) const { return x + s * (eval(x) - x); }
    double blend_inverse(double s, double w) const;
    double inverse(double w) const { return blend_inverse(1.0, w); }

    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }

private:
    std::vector<double> xs_;
    std::vector<double> ys_;
};

struct DenjoyGap {
    int n = 0;
    double angle = 0.0;  // frac(n alpha)
    double mass = 0.0;   // l_n
    double a = 0.0;      // placement [a, b) in Denjoy coordinates
    double b = 0.0;
};

struct DenjoyGapTable {
    double alpha = 0.0;
    int order = 0;  // N
    std::vector<DenjoyGap> gaps;    // indexed by n + N
    std::vector<int> by_position;   // gap indices sorted by a
    double total_mass = 0.0;
    double normalization = 1.0;     // 1 + sum l_n
    double truncation_tolerance = 0.0;

    const DenjoyGap& gap(int n) const { return gaps.at(static_cast<std::size_t>(n + order)); }
    /// Index n of the gap containing frac(x); order + 1 when x is off the gaps.
    int gap_containing(double x) const;
    std::vector<double> sorted_angles;  // angles in position order
    std::vector<double> mass_before;    // mass of gaps left of each position (size gaps+1)
    /// Blown-up coordinate map on [0,1), left limit at materialized angles.
    double phi(double y) const;
};

using GapSchedule = std::function<double(int)>;

/// l_n = c 2^{-|n|} with total mass `mass` over all of Z.
GapSchedule geometric_schedule(double mass = 0.3);

enum class CircleKind { Rigid, PiecewiseAffine, DenjoyTruncated };

std::string to_string(CircleKind k);

class CircleLift {
public:
    static CircleLift rigid(double alpha);
    static CircleLift piecewise(std::vector<Knot> knots);

    CircleKind kind() const { return kind_; }
    double alpha() const { return alpha_; }  // rigid offset or Denjoy target
    const PiecewiseLift& table() const { return table_; }
    const DenjoyGapTable& gaps() const;
    std::shared_ptr<const DenjoyGapTable> gap_table_ptr() const { return gaps_; }

    double eval(double x) const;
    double inverse(double w) const;
    double blend(double s, double x) const;
    double blend_inverse(double s, double w) const;
    /// n-fold iterate, inverse for n < 0.
    double iterate(double x, long n) const;

    /// Nominal rotation number: alpha for rigid and Denjoy, none for tables.
    bool has_target() const { return kind_ != CircleKind::PiecewiseAffine; }

private:
    friend CircleLift build_denjoy(double, const GapSchedule&, int);
    CircleKind kind_ = CircleKind::Rigid;
    double alpha_ = 0.0;
    PiecewiseLift table_;
    std::shared_ptr<const DenjoyGapTable> gaps_;
};

inline double eval_lift(const CircleLift& g, double x) { return g.eval(x); }

struct RotationEstimate {
    double estimate;
    double error_bound;
};

RotationEstimate rotation_number(const CircleLift& g, double x0, long n);

CircleLift build_denjoy(double alpha, const GapSchedule& schedule, int order);

/// Collapse map of a truncated Denjoy lift onto rotation coordinates.
class DenjoySemiconjugacy {
public:
    explicit DenjoySemiconjugacy(const CircleLift& g);
    double operator()(double x) const;  // lifted: h(x + 1) = h(x) + 1
    double tolerance() const { return gaps_->truncation_tolerance; }

private:
    std::shared_ptr<const DenjoyGapTable> gaps_;
};

DenjoySemiconjugacy denjoy_semiconjugacy(const CircleLift& g);

}  // namespace torusfactor

#endif
