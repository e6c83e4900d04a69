#include "torusfactor/factor_builder.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "torusfactor/common.hpp"

namespace torusfactor {

namespace {

void fill_lower(const GridMask& mask, int i, std::uint8_t* out, char& separates) {
    const GridSpec& g = mask.spec();
    const int nx = g.nx, ny = g.ny;
    std::fill(out, out + static_cast<std::size_t>(nx) * ny, std::uint8_t{0});
    std::deque<std::pair<int, int>> q;
    for (int j = 0; j < nx; ++j)
        if (!mask.at(i, j, 0)) {
            out[static_cast<std::size_t>(j) * ny] = 1;
            q.emplace_back(j, 0);
        }
    bool top = false;
    while (!q.empty()) {
        auto [j, l] = q.front();
        q.pop_front();
        if (l == ny - 1) top = true;
        const std::pair<int, int> nbrs[4] = {{(j + 1) % nx, l}, {(j + nx - 1) % nx, l}, {j, l - 1}, {j, l + 1}};
        for (auto [nj, nl] : nbrs) {
            if (nl < 0 || nl >= ny) continue;
            std::size_t f = static_cast<std::size_t>(nj) * ny + nl;
            if (out[f] || mask.at(i, nj, nl)) continue;
            out[f] = 1;
            q.emplace_back(nj, nl);
        }
    }
    separates = top ? 0 : 1;
}

}  // namespace

bool TauRegion::all_fibers_separate() const {
    return std::all_of(fiber_separates.begin(), fiber_separates.end(), [](char c) { return c != 0; });
}

bool TauRegion::in_lower(double s, Vec2 z) const {
    const GridSpec& g = spec();
    int i = g.t_cell(s - std::floor(s));
    double y = z.y - s;
    if (y < g.y_lo) return true;
    if (y >= g.y_hi) return false;
    int l = std::min(g.ny - 1, static_cast<int>((y - g.y_lo) / g.hy()));
    int j = g.x_cell(z.x);
    return lower[static_cast<std::size_t>(i) * g.fiber_cells() + static_cast<std::size_t>(j) * g.ny + l] != 0;
}

TauRegion build_tau(const CentralizedSkew& F, Vec2 seed_point, double ball_radius, const GridSpec& spec,
                    TauOptions opt) {
    if (!(ball_radius > 0.0) || ball_radius > 1.0) throw DomainError("ball radius must lie in (0, 1]");
    if (seed_point.y - ball_radius - 0.5 <= spec.y_lo || seed_point.y + ball_radius + 0.5 >= spec.y_hi)
        throw DomainError("seed block does not fit inside the height window");
    const double r2 = ball_radius * ball_radius;
    FiberSet ball = [&](double x, double y) {
        double dx = wrap_signed(x - seed_point.x), dy = y - seed_point.y;
        return dx * dx + dy * dy < r2;
    };
    GridMask seed = make_block(spec, ball, 0.0, 0.5);
    seed.provenance = "ball-block(wandering completion approximated by the ball)";
    TauRegion tau{saturate_invariant_region(F, seed, opt.max_iters), F, seed_point, ball_radius, {}, {}, false, {}, {}};
    tau.exhausted = tau.mask.exhausted;
    tau.provenance = tau.mask.provenance;
    if (opt.check_invariance && !tau.exhausted) tau.invariance = invariance_defect(F, tau.mask);
    const GridSpec& g = tau.spec();
    tau.lower.assign(g.cells(), 0);
    tau.fiber_separates.assign(static_cast<std::size_t>(g.nt), 0);
    std::size_t chunks = 0;
    parallel_chunks(static_cast<std::size_t>(g.nt), [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t i = b; i < e; ++i)
            fill_lower(tau.mask, static_cast<int>(i), tau.lower.data() + i * g.fiber_cells(), tau.fiber_separates[i]);
    }, &chunks);
    return tau;
}

FiberMask lower_component(const TauRegion& tau, double s) {
    const GridSpec& g = tau.spec();
    FiberMask fm;
    fm.s = s;
    fm.t_index = g.t_cell(s - std::floor(s));
    fm.nx = g.nx;
    fm.ny = g.ny;
    fm.y_lo = g.y_lo + s;
    fm.hy = g.hy();
    auto off = static_cast<std::ptrdiff_t>(static_cast<std::size_t>(fm.t_index) * g.fiber_cells());
    fm.cells.assign(tau.lower.begin() + off, tau.lower.begin() + off + static_cast<std::ptrdiff_t>(g.fiber_cells()));
    fm.separating = tau.fiber_separates[static_cast<std::size_t>(fm.t_index)] != 0;
    return fm;
}

ContinuumApprox continuum_Cs(const TauRegion& tau, double s) {
    FiberMask fm = lower_component(tau, s);
    ContinuumApprox c;
    c.s = s;
    c.separating = fm.separating;
    const int nx = fm.nx, ny = fm.ny;
    auto at = [&](int j, int l) {
        if (l < 0) return true;
        if (l >= ny) return false;
        return fm.cells[static_cast<std::size_t>(j) * ny + l] != 0;
    };
    for (int j = 0; j < nx; ++j)
        for (int l = 0; l < ny; ++l) {
            if (!at(j, l)) continue;
            if (!at((j + 1) % nx, l) || !at((j + nx - 1) % nx, l) || !at(j, l + 1) || !at(j, l - 1))
                c.boundary.push_back({(j + 0.5) / nx, fm.y_lo + (l + 0.5) * fm.hy});
        }
    return c;
}

HValue evaluate_h(const TauRegion& tau, Vec2 z, double tol) {
    if (!(tol > 0.0)) throw DomainError("bisection tolerance must be positive");
    const GridSpec& g = tau.spec();
    const double step = g.hy();
    const double s_lo = z.y - g.y_hi - step, s_hi = z.y - g.y_lo + step;
    const int n = static_cast<int>(std::ceil((s_hi - s_lo) / step));
    HValue h;
    int first = -1;
    for (int q = 0; q <= n; ++q) {
        bool in = tau.in_lower(s_lo + q * step, z);
        if (in && first < 0) first = q;
        if (!in && first >= 0) h.ordering_violated = true;
    }
    if (first <= 0) return h;
    double a = s_lo + (first - 1) * step, b = s_lo + first * step;
    while (b - a > tol) {
        double m = 0.5 * (a + b);
        if (tau.in_lower(m, z)) b = m; else a = m;
    }
    h.value = 0.5 * (a + b);
    h.defined = true;
    return h;
}

EquivarianceReport verify_equivariance(const TauRegion& tau, int samples, std::uint64_t seed, double tol,
                                       int ladder) {
    const GridSpec& g = tau.spec();
    const CentralizedSkew& F = tau.F;
    EquivarianceReport rep;
    rep.cell = g.hy();
    auto zs = lattice_samples(samples, seed);
    for (const Vec2& z : zs) {
        HValue h0 = evaluate_h(tau, z, tol);
        HValue h1 = evaluate_h(tau, {z.x, z.y + 1.0}, tol);
        HValue hf = evaluate_h(tau, F.annulus(z), tol);
        if (!h0.defined || !h1.defined || !hf.defined) {
            ++rep.undefined_samples;
            continue;
        }
        if (h0.ordering_violated || h1.ordering_violated || hf.ordering_violated) ++rep.nonmonotone_samples;
        rep.translate_defect = std::max(rep.translate_defect, std::fabs(h1.value - h0.value - 1.0));
        rep.dynamics_defect = std::max(rep.dynamics_defect, std::fabs(hf.value - h0.value - F.rho()));
    }
    // Ordering of the continua as inclusion of lower components, compared column by column.
    if (ladder >= 2) {
        std::vector<double> ss;
        for (int q = 0; q < ladder; ++q) ss.push_back(static_cast<double>(q) / ladder);
        const double step = g.hy();
        const double y0 = g.y_lo + ss.front() - step, y1 = g.y_hi + ss.back() + step;
        const int rows = static_cast<int>(std::ceil((y1 - y0) / step));
        const std::size_t per = static_cast<std::size_t>(g.nx) * rows;
        std::vector<std::uint8_t> prof(per * ss.size());
        for (std::size_t q = 0; q < ss.size(); ++q)
            for (int j = 0; j < g.nx; ++j)
                for (int r = 0; r < rows; ++r)
                    prof[q * per + static_cast<std::size_t>(j) * rows + r] =
                        tau.in_lower(ss[q], {g.x_center(j), y0 + (r + 0.5) * step}) ? 1 : 0;
        for (std::size_t a = 0; a < ss.size(); ++a)
            for (std::size_t b = a + 1; b < ss.size(); ++b) {
                if (ss[b] - ss[a] < 2.0 * step - 1e-15) continue;
                ++rep.ordering_pairs;
                bool included = true, grows = false;
                const std::uint8_t* pa = prof.data() + a * per;
                const std::uint8_t* pb = prof.data() + b * per;
                for (std::size_t q = 0; q < per; ++q) {
                    if (pa[q] && !pb[q]) included = false;
                    if (pb[q] && !pa[q]) grows = true;
                }
                if (!included || !grows) ++rep.ordering_violations;
            }
    }
    return rep;
}

FactorMap project_to_torus_factor(const TauRegion& tau, int gx, int gy, double tol) {
    if (gx < 1 || gy < 1) throw DomainError("factor grid must be at least 1x1");
    const CentralizedSkew& F = tau.F;
    FactorMap fm;
    fm.gx = gx;
    fm.gy = gy;
    fm.cell = tau.spec().hy();
    fm.tol = tol;
    fm.samples.resize(static_cast<std::size_t>(gx) * gy);
    std::vector<double> defect(fm.samples.size(), -1.0);
    parallel_chunks(fm.samples.size(), [&](std::size_t b, std::size_t e, std::size_t) {
        for (std::size_t q = b; q < e; ++q) {
            int a = static_cast<int>(q / static_cast<std::size_t>(gy)), c = static_cast<int>(q % static_cast<std::size_t>(gy));
            Vec2 z{(a + 0.5) / gx, (c + 0.5) / gy};
            HValue h = evaluate_h(tau, z, tol);
            HValue hf = evaluate_h(tau, F.annulus(z), tol);
            fm.samples[q] = {z.x, z.y, h.defined ? h.value : std::numeric_limits<double>::quiet_NaN()};
            if (h.defined && hf.defined) defect[q] = circle_dist(hf.value - h.value - F.rho(), 0.0);
        }
    });
    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    std::size_t counted = 0;
    for (std::size_t q = 0; q < fm.samples.size(); ++q) {
        if (defect[q] < 0.0) {
            ++fm.undefined;
            continue;
        }
        ++counted;
        sum += defect[q];
        fm.max_defect = std::max(fm.max_defect, defect[q]);
        double off = fm.samples[q].h - fm.samples[q].y;
        lo = std::min(lo, off);
        hi = std::max(hi, off);
    }
    fm.mean_defect = counted ? sum / static_cast<double>(counted) : 0.0;
    if (counted) {
        fm.pr2_offset = 0.5 * (lo + hi);
        fm.pr2_deviation = 0.5 * (hi - lo);
    }
    for (int a = 0; a < gx; ++a)
        for (int c = 1; c < gy; ++c) {
            const auto& p = fm.samples[static_cast<std::size_t>(a) * gy + c - 1];
            const auto& q = fm.samples[static_cast<std::size_t>(a) * gy + c];
            if (q.h < p.h - tol) ++fm.monotone_violations;
        }
    return fm;
}

namespace {

FactorMap one_direction(const TorusMap& g, double rho, const DoubleFactorOptions& opt, double& c_est) {
    DeviationProfile dp = deviation_profile(g, {0.0, 1.0}, rho, opt.n_deviation, {opt.deviation_samples, opt.seed});
    if (!dp.bounded) throw DomainError("vertical deviations do not plateau; the factor construction does not apply");
    c_est = dp.c_est;
    GridSpec spec = GridSpec::for_deviation(c_est, opt.nt, opt.nx, opt.ny);
    TauRegion tau = build_tau(build_centralized(g, rho, c_est), opt.seed_point, opt.ball_radius, spec);
    if (tau.exhausted) throw WindowExhausted("window exhausted while saturating the invariant region");
    return project_to_torus_factor(tau, opt.gx, opt.gy, 0.5 * spec.hy());
}

}  // namespace

DoubleFactor double_factor(const TorusMap& f, Vec2 rho, const DoubleFactorOptions& opt) {
    if (f.k() != 0) throw DomainError("map is not isotopic to the identity (k != 0)");
    RotationCloud cloud = estimate_rotation_set(f, {opt.n_hull}, {opt.deviation_samples, opt.seed});
    if (cloud.hull_diameter > opt.hull_limit)
        throw DomainError("not a pseudo-rotation: rotation cloud diameter " + std::to_string(cloud.hull_diameter) +
                          " exceeds " + std::to_string(opt.hull_limit));
    DoubleFactor out;
    out.hull_diameter = cloud.hull_diameter;
    out.vertical = one_direction(f, rho.y, opt, out.c_vertical);
    out.horizontal = one_direction(f.swapped(), rho.x, opt, out.c_horizontal);
    out.joint_defect = std::max(out.vertical.max_defect, out.horizontal.max_defect);
    out.cell = std::max(out.vertical.cell, out.horizontal.cell);
    return out;
}

}  // namespace torusfactor
