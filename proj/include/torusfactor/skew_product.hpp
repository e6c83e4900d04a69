#ifndef TORUSFACTOR_SKEW_PRODUCT_HPP
#define TORUSFACTOR_SKEW_PRODUCT_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "torusfactor/torus_maps.hpp"

namespace torusfactor {

struct SkewState {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;  // annulus height, not reduced
};

double skew_distance(const SkewState& a, const SkewState& b);

class CentralizedSkew {
public:
    CentralizedSkew(TorusMap f, double rho, double c_est = 0.0);

    const TorusMap& map() const { return f_; }
    int k() const { return f_.k(); }
    double rho() const { return rho_; }
    double c_est() const { return c_est_; }

    SkewState apply(const SkewState& s) const;
    SkewState apply_inverse(const SkewState& s) const;
    SkewState iterate(SkewState s, long n) const;
    /// F^n through the annulus lift: T_{-t} T_{-n rho} f^n T_t.
    SkewState closed_form(const SkewState& s, long n) const;

    /// Annulus lift f^ and its inverse; x in the circle, y real.
    Vec2 annulus(Vec2 z) const;
    Vec2 annulus_inverse(Vec2 z) const;

private:
    TorusMap f_;
    double rho_;
    double c_est_;
};

inline CentralizedSkew build_centralized(const TorusMap& f, double rho, double c_est = 0.0) {
    return CentralizedSkew(f, rho, c_est);
}

inline SkewState iterate_F(const CentralizedSkew& F, const SkewState& s, long n) { return F.iterate(s, n); }

inline SkewState gamma_flow(const SkewState& s, double u) { return {wrap01(s.t + u), s.x, s.y - u}; }

struct CheckResult {
    double max_defect = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

CheckResult check_commutation(const CentralizedSkew& F, int samples, std::uint64_t seed, double threshold = 1e-9);
CheckResult check_closed_form(const CentralizedSkew& F, int samples, long n_abs_max, std::uint64_t seed,
                              double threshold = 1e-7);

struct OrbitBound {
    double oscillation = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;
};

OrbitBound vertical_orbit_bound(const CentralizedSkew& F, const SkewState& s, long n_max);

// ---------------------------------------------------------------- grids

struct GridSpec {
    int nt = 256;
    int nx = 256;
    int ny = 512;
    double y_lo = -2.0;
    double y_hi = 2.0;

    double ht() const { return 1.0 / nt; }
    double hx() const { return 1.0 / nx; }
    double hy() const { return (y_hi - y_lo) / ny; }
    std::size_t cells() const { return static_cast<std::size_t>(nt) * nx * ny; }
    std::size_t fiber_cells() const { return static_cast<std::size_t>(nx) * ny; }
    std::size_t index(int i, int j, int l) const {
        return (static_cast<std::size_t>(i) * nx + static_cast<std::size_t>(j)) * ny + static_cast<std::size_t>(l);
    }
    int t_cell(double t) const;
    int x_cell(double x) const;
    int y_cell(double y) const;  // may be out of [0, ny)
    double t_center(int i) const { return (i + 0.5) / nt; }
    double x_center(int j) const { return (j + 0.5) / nx; }
    double y_center(int l) const { return y_lo + (l + 0.5) * hy(); }

    /// Window [-Y, Y] with Y = 2 C + 2 at the given resolution.
    static GridSpec for_deviation(double c_est, int nt = 256, int nx = 256, int ny = 512);
};

class GridMask {
public:
    GridMask() = default;
    explicit GridMask(GridSpec spec) : spec_(spec), cells_(spec.cells(), 0) {}

    const GridSpec& spec() const { return spec_; }
    bool at(int i, int j, int l) const { return cells_[spec_.index(i, j, l)] != 0; }
    bool at(std::size_t idx) const { return cells_[idx] != 0; }
    void set(int i, int j, int l, bool v = true) { cells_[spec_.index(i, j, l)] = v ? 1 : 0; }
    std::size_t count() const;
    bool touches_window_edge() const;
    bool subset_of(const GridMask& other) const;
    bool operator==(const GridMask& o) const { return cells_ == o.cells_; }

    std::vector<std::uint8_t>& raw() { return cells_; }
    const std::vector<std::uint8_t>& raw() const { return cells_; }

    std::string provenance;
    long iterations = 0;
    bool exhausted = false;
    bool converged = false;

private:
    GridSpec spec_;
    std::vector<std::uint8_t> cells_;
};

using FiberSet = std::function<bool(double x, double y)>;

GridMask make_block(const GridSpec& spec, const FiberSet& V, double t, double r);

/// Fixed point of M -> cc(seed, M u F(M) u F^{-1}(M)); max_iters <= 0 means unbounded.
GridMask saturate_invariant_region(const CentralizedSkew& F, const GridMask& seed, long max_iters = 0);

/// Cells reached by mapping the sample points of a cell (5 fiber points, 3 t offsets).
void cell_image(const CentralizedSkew& F, const GridSpec& spec, int i, int j, int l, bool inverse,
                std::vector<std::size_t>& out, bool& left_window);

struct InvarianceReport {
    std::size_t forward_violations = 0;
    std::size_t backward_violations = 0;
    bool within_one_cell() const { return forward_violations == 0 && backward_violations == 0; }
};

/// Checks F(mask) and F^{-1}(mask) against the mask dilated by one cell.
InvarianceReport invariance_defect(const CentralizedSkew& F, const GridMask& mask);

/// Image of a mask under F (same rasterization as saturation).
GridMask map_mask(const CentralizedSkew& F, const GridMask& mask);

/// Every cell of a lies within Chebyshev distance 1 of a cell of b and vice versa.
bool hausdorff_within_one_cell(const GridMask& a, const GridMask& b);

struct FiberComponent {
    std::size_t size = 0;
    bool touches_top = false;
    bool touches_bottom = false;
    bool unbounded() const { return touches_top || touches_bottom; }
};

struct FiberComponents {
    int t_index = 0;
    std::vector<FiberComponent> components;  // in scan order of first cell
    int unbounded = 0;
    bool degenerate = false;  // a component touches both edges
};

FiberComponents fiber_complement_components(const GridMask& mask, double t);

void write_mask_dump(std::ostream& os, const GridMask& mask);
GridMask read_mask_dump(std::istream& is);

}  // namespace torusfactor

#endif
