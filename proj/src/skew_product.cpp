#include "torusfactor/skew_product.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace torusfactor {

double skew_distance(const SkewState& a, const SkewState& b) {
    return circle_dist(a.t, b.t) + std::hypot(wrap_signed(a.x - b.x), a.y - b.y);
}

CentralizedSkew::CentralizedSkew(TorusMap f, double rho, double c_est) : f_(std::move(f)), rho_(rho), c_est_(c_est) {
    if (!std::isfinite(rho)) throw DomainError("rho must be finite");
}

SkewState CentralizedSkew::apply(const SkewState& s) const {
    const int k = f_.k();
    double y = wrap01(s.y);
    Vec2 d = f_.delta({s.x, wrap01(y + s.t)});
    return {wrap01(s.t + rho_), wrap01(s.x + k * (y + s.t) + d.x), s.y + d.y - rho_};
}

SkewState CentralizedSkew::apply_inverse(const SkewState& s) const {
    const int k = f_.k();
    double y = wrap01(s.y);
    Vec2 d = f_.delta_inverse({s.x, wrap01(y + s.t)});
    return {wrap01(s.t - rho_), wrap01(s.x - k * (y + s.t) + d.x), s.y + d.y + rho_};
}

SkewState CentralizedSkew::iterate(SkewState s, long n) const {
    if (n >= 0) {
        for (long i = 0; i < n; ++i) s = apply(s);
    } else {
        for (long i = 0; i < -n; ++i) s = apply_inverse(s);
    }
    return s;
}

Vec2 CentralizedSkew::annulus(Vec2 z) const {
    double fy = wrap01(z.y);
    Vec2 d = f_.delta({wrap01(z.x), fy});
    return {wrap01(z.x + f_.k() * fy + d.x), z.y + d.y};
}

Vec2 CentralizedSkew::annulus_inverse(Vec2 z) const {
    double fy = wrap01(z.y);
    Vec2 d = f_.delta_inverse({wrap01(z.x), fy});
    return {wrap01(z.x - f_.k() * fy + d.x), z.y + d.y};
}

SkewState CentralizedSkew::closed_form(const SkewState& s, long n) const {
    Vec2 z{s.x, s.y + s.t};
    if (n >= 0) {
        for (long i = 0; i < n; ++i) z = annulus(z);
    } else {
        for (long i = 0; i < -n; ++i) z = annulus_inverse(z);
    }
    double nd = static_cast<double>(n);
    return {wrap01(s.t + nd * rho_), z.x, z.y - nd * rho_ - s.t};
}

namespace {

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double unit() { return unit_from_bits(eng()); }
    double range(double a, double b) { return a + (b - a) * unit(); }
};

}  // namespace

CheckResult check_commutation(const CentralizedSkew& F, int samples, std::uint64_t seed, double threshold) {
    Rng rng(seed);
    CheckResult r;
    r.threshold = threshold;
    for (int i = 0; i < samples; ++i) {
        SkewState s{rng.unit(), rng.unit(), rng.range(-2.0, 2.0)};
        double u = rng.range(-1.0, 1.0);
        double d = skew_distance(F.apply(gamma_flow(s, u)), gamma_flow(F.apply(s), u));
        r.max_defect = std::max(r.max_defect, d);
    }
    r.passed = r.max_defect <= threshold;
    return r;
}

CheckResult check_closed_form(const CentralizedSkew& F, int samples, long n_abs_max, std::uint64_t seed,
                              double threshold) {
    Rng rng(seed);
    CheckResult r;
    r.threshold = threshold;
    for (int i = 0; i < samples; ++i) {
        SkewState s{rng.unit(), rng.unit(), rng.range(-2.0, 2.0)};
        for (int dir : {1, -1}) {
            SkewState a = s;
            Vec2 z{s.x, s.y + s.t};
            for (long n = 1; n <= n_abs_max; ++n) {
                a = dir > 0 ? F.apply(a) : F.apply_inverse(a);
                z = dir > 0 ? F.annulus(z) : F.annulus_inverse(z);
                double nd = static_cast<double>(dir * n);
                SkewState b{wrap01(s.t + nd * F.rho()), z.x, z.y - nd * F.rho() - s.t};
                r.max_defect = std::max(r.max_defect, skew_distance(a, b));
            }
        }
    }
    r.passed = r.max_defect <= threshold;
    return r;
}

OrbitBound vertical_orbit_bound(const CentralizedSkew& F, const SkewState& s, long n_max) {
    OrbitBound b{0.0, s.y, s.y};
    SkewState fw = s, bw = s;
    for (long n = 1; n <= n_max; ++n) {
        fw = F.apply(fw);
        bw = F.apply_inverse(bw);
        b.y_min = std::min({b.y_min, fw.y, bw.y});
        b.y_max = std::max({b.y_max, fw.y, bw.y});
    }
    b.oscillation = b.y_max - b.y_min;
    return b;
}

// ---------------------------------------------------------------- grids

int GridSpec::t_cell(double t) const { return std::min(nt - 1, static_cast<int>(wrap01(t) * nt)); }

int GridSpec::x_cell(double x) const { return std::min(nx - 1, static_cast<int>(wrap01(x) * nx)); }

int GridSpec::y_cell(double y) const {
    double v = std::floor((y - y_lo) / hy());
    if (v < -1.0) return -1;
    if (v > ny) return ny;
    return static_cast<int>(v);
}

GridSpec GridSpec::for_deviation(double c_est, int nt, int nx, int ny) {
    if (nt < 2 || nx < 2 || ny < 2) throw DomainError("grid resolution must be at least 2 in every direction");
    double Y = 2.0 * c_est + 2.0;
    return {nt, nx, ny, -Y, Y};
}

std::size_t GridMask::count() const {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool GridMask::touches_window_edge() const {
    for (int i = 0; i < spec_.nt; ++i)
        for (int j = 0; j < spec_.nx; ++j)
            if (at(i, j, 0) || at(i, j, spec_.ny - 1)) return true;
    return false;
}

bool GridMask::subset_of(const GridMask& other) const {
    for (std::size_t i = 0; i < cells_.size(); ++i)
        if (cells_[i] && !other.cells_[i]) return false;
    return true;
}

GridMask make_block(const GridSpec& spec, const FiberSet& V, double t, double r) {
    if (!(r > 0.0) || r > 0.5) throw DomainError("block half-width must lie in (0, 1/2]");
    GridMask m(spec);
    const int home = spec.t_cell(t);
    for (int i = 0; i < spec.nt; ++i) {
        double u = wrap_signed(spec.t_center(i) - t);
        if (i != home && !(std::fabs(u) < r)) continue;
        u = std::clamp(u, -r, r);
        for (int j = 0; j < spec.nx; ++j)
            for (int l = 0; l < spec.ny; ++l)
                if (V(spec.x_center(j), spec.y_center(l) + u)) m.set(i, j, l);
    }
    m.provenance = "block";
    return m;
}

namespace {

struct Neighborhood {
    const GridSpec& g;
    int up_lo, up_hi, dn_lo, dn_hi;

    explicit Neighborhood(const GridSpec& spec) : g(spec) {
        double a = spec.ht() / spec.hy();
        up_lo = static_cast<int>(std::floor(-a));
        up_hi = static_cast<int>(std::ceil(1.0 - a)) - 1;
        dn_lo = static_cast<int>(std::floor(a));
        dn_hi = static_cast<int>(std::ceil(1.0 + a)) - 1;
    }

    template <class Fn>
    void each(std::size_t idx, Fn&& fn) const {
        const int ny = g.ny, nx = g.nx, nt = g.nt;
        int l = static_cast<int>(idx % static_cast<std::size_t>(ny));
        std::size_t rest = idx / static_cast<std::size_t>(ny);
        int j = static_cast<int>(rest % static_cast<std::size_t>(nx));
        int i = static_cast<int>(rest / static_cast<std::size_t>(nx));
        if (l > 0) fn(idx - 1);
        if (l + 1 < ny) fn(idx + 1);
        fn(g.index(i, (j + 1) % nx, l));
        fn(g.index(i, (j + nx - 1) % nx, l));
        int ip = (i + 1) % nt, im = (i + nt - 1) % nt;
        for (int o = up_lo; o <= up_hi; ++o) {
            int lp = l + o;
            if (lp >= 0 && lp < ny) fn(g.index(ip, j, lp));
        }
        for (int o = dn_lo; o <= dn_hi; ++o) {
            int lp = l + o;
            if (lp >= 0 && lp < ny) fn(g.index(im, j, lp));
        }
    }
};

void decode(const GridSpec& g, std::size_t idx, int& i, int& j, int& l) {
    l = static_cast<int>(idx % static_cast<std::size_t>(g.ny));
    std::size_t rest = idx / static_cast<std::size_t>(g.ny);
    j = static_cast<int>(rest % static_cast<std::size_t>(g.nx));
    i = static_cast<int>(rest / static_cast<std::size_t>(g.nx));
}

// Three separable passes of a 3-wide max filter (t and x wrap, y clamps).
std::vector<std::uint8_t> dilate(const GridSpec& g, const std::vector<std::uint8_t>& src) {
    std::vector<std::uint8_t> a(src.size()), b(src.size());
    for (std::size_t idx = 0; idx < src.size(); ++idx) a[idx] = src[idx] == 1 ? 1 : 0;
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            std::size_t base = g.index(i, j, 0);
            for (int l = 0; l < g.ny; ++l) {
                std::uint8_t v = a[base + l];
                if (l > 0) v |= a[base + l - 1];
                if (l + 1 < g.ny) v |= a[base + l + 1];
                b[base + l] = v;
            }
        }
    for (int i = 0; i < g.nt; ++i)
        for (int j = 0; j < g.nx; ++j) {
            std::size_t c = g.index(i, j, 0), p = g.index(i, (j + g.nx - 1) % g.nx, 0),
                        n = g.index(i, (j + 1) % g.nx, 0);
            for (int l = 0; l < g.ny; ++l) a[c + l] = b[c + l] | b[p + l] | b[n + l];
        }
    const std::size_t fc = g.fiber_cells();
    for (int i = 0; i < g.nt; ++i) {
        std::size_t c = static_cast<std::size_t>(i) * fc, p = static_cast<std::size_t>((i + g.nt - 1) % g.nt) * fc,
                    n = static_cast<std::size_t>((i + 1) % g.nt) * fc;
        for (std::size_t q = 0; q < fc; ++q) b[c + q] = a[c + q] | a[p + q] | a[n + q];
    }
    return b;
}

}  // namespace

void cell_image(const CentralizedSkew& F, const GridSpec& g, int i, int j, int l, bool inverse,
                std::vector<std::size_t>& out, bool& left_window) {
    static constexpr double kOff[5][2] = {{0.0, 0.0}, {-0.45, -0.25}, {0.45, -0.25}, {-0.45, 0.25}, {0.45, 0.25}};
    const double tc = g.t_center(i), xc = g.x_center(j), yc = g.y_center(l);
    const double hx = g.hx(), hy = g.hy(), dt = 0.45 * g.ht();
    for (const auto& o : kOff) {
        SkewState s{tc, xc + o[0] * hx, yc + o[1] * hy};
        SkewState im = inverse ? F.apply_inverse(s) : F.apply(s);
        int jx = g.x_cell(im.x);
        for (double d : {-dt, 0.0, dt}) {
            int it = g.t_cell(im.t + d);
            int ly = g.y_cell(im.y - d);
            if (ly < 0 || ly >= g.ny) {
                left_window = true;
                continue;
            }
            out.push_back(g.index(it, jx, ly));
        }
    }
}

GridMask saturate_invariant_region(const CentralizedSkew& F, const GridMask& seed, long max_iters) {
    const GridSpec& g = seed.spec();
    GridMask out = seed;
    auto& st = out.raw();  // 0 empty, 1 member, 2 pending
    std::vector<std::size_t> frontier;
    for (std::size_t idx = 0; idx < st.size(); ++idx)
        if (st[idx] == 1) frontier.push_back(idx);
    if (frontier.empty()) throw DomainError("saturation seed is empty");

    bool left = false;
    long iter = 0;
    constexpr std::size_t kBatch = 1 << 15;
    std::vector<std::size_t> candidates, next;
    while (!frontier.empty()) {
        if (max_iters > 0 && iter >= max_iters) break;
        ++iter;
        candidates.clear();
        for (std::size_t b0 = 0; b0 < frontier.size(); b0 += kBatch) {
            std::size_t b1 = std::min(frontier.size(), b0 + kBatch);
            std::size_t chunks = chunk_count_for(b1 - b0);
            std::vector<std::vector<std::size_t>> parts(chunks);
            std::vector<char> leaving(chunks, 0);
            parallel_chunks(b1 - b0, [&](std::size_t b, std::size_t e, std::size_t c) {
                bool lw = false;
                for (std::size_t q = b0 + b; q < b0 + e; ++q) {
                    int i, j, l;
                    decode(g, frontier[q], i, j, l);
                    cell_image(F, g, i, j, l, false, parts[c], lw);
                    cell_image(F, g, i, j, l, true, parts[c], lw);
                }
                leaving[c] = lw;
            });
            for (std::size_t c = 0; c < chunks; ++c) {
                left = left || leaving[c];
                for (std::size_t idx : parts[c])
                    if (st[idx] == 0) {
                        st[idx] = 2;
                        candidates.push_back(idx);
                    }
            }
        }
        next.clear();
        for (std::size_t c : candidates) {
            st[c] = 1;
            next.push_back(c);
        }
        frontier.swap(next);
        if (left) break;
    }
    for (auto& v : st)
        if (v == 2) v = 0;
    out.iterations = iter;
    out.exhausted = left || out.touches_window_edge();
    out.converged = frontier.empty() && !out.exhausted;
    out.provenance = seed.provenance + "|saturated";
    return out;
}

InvarianceReport invariance_defect(const CentralizedSkew& F, const GridMask& mask) {
    const GridSpec& g = mask.spec();
    auto dil = dilate(g, mask.raw());
    InvarianceReport rep;
    std::vector<std::size_t> buf;
    for (std::size_t idx = 0; idx < mask.raw().size(); ++idx) {
        if (!mask.at(idx)) continue;
        int i, j, l;
        decode(g, idx, i, j, l);
        for (bool inv : {false, true}) {
            buf.clear();
            bool left = false;
            cell_image(F, g, i, j, l, inv, buf, left);
            std::size_t bad = left ? 1 : 0;
            for (std::size_t c : buf)
                if (!dil[c]) ++bad;
            if (bad) (inv ? rep.backward_violations : rep.forward_violations) += 1;
        }
    }
    return rep;
}

GridMask map_mask(const CentralizedSkew& F, const GridMask& mask) {
    const GridSpec& g = mask.spec();
    GridMask out(g);
    std::vector<std::size_t> buf;
    for (std::size_t idx = 0; idx < mask.raw().size(); ++idx) {
        if (!mask.at(idx)) continue;
        int i, j, l;
        decode(g, idx, i, j, l);
        buf.clear();
        bool left = false;
        cell_image(F, g, i, j, l, false, buf, left);
        for (std::size_t c : buf) out.raw()[c] = 1;
        out.exhausted = out.exhausted || left;
    }
    return out;
}

bool hausdorff_within_one_cell(const GridMask& a, const GridMask& b) {
    const GridSpec& g = a.spec();
    auto da = dilate(g, a.raw()), db = dilate(g, b.raw());
    for (std::size_t idx = 0; idx < da.size(); ++idx) {
        if (a.at(idx) && !db[idx]) return false;
        if (b.at(idx) && !da[idx]) return false;
    }
    return true;
}

FiberComponents fiber_complement_components(const GridMask& mask, double t) {
    const GridSpec& g = mask.spec();
    FiberComponents res;
    res.t_index = g.t_cell(t);
    const int nx = g.nx, ny = g.ny;
    std::vector<int> label(static_cast<std::size_t>(nx) * ny, -1);
    auto fidx = [&](int j, int l) { return static_cast<std::size_t>(j) * ny + l; };
    std::deque<std::pair<int, int>> q;
    for (int j = 0; j < nx; ++j)
        for (int l = 0; l < ny; ++l) {
            if (mask.at(res.t_index, j, l) || label[fidx(j, l)] >= 0) continue;
            int id = static_cast<int>(res.components.size());
            FiberComponent comp;
            label[fidx(j, l)] = id;
            q.emplace_back(j, l);
            while (!q.empty()) {
                auto [cj, cl] = q.front();
                q.pop_front();
                ++comp.size;
                if (cl == 0) comp.touches_bottom = true;
                if (cl == ny - 1) comp.touches_top = true;
                const std::pair<int, int> nbrs[4] = {
                    {(cj + 1) % nx, cl}, {(cj + nx - 1) % nx, cl}, {cj, cl - 1}, {cj, cl + 1}};
                for (auto [nj, nl] : nbrs) {
                    if (nl < 0 || nl >= ny) continue;
                    if (mask.at(res.t_index, nj, nl) || label[fidx(nj, nl)] >= 0) continue;
                    label[fidx(nj, nl)] = id;
                    q.emplace_back(nj, nl);
                }
            }
            res.components.push_back(comp);
        }
    for (const auto& c : res.components) {
        if (c.unbounded()) ++res.unbounded;
        if (c.touches_top && c.touches_bottom) res.degenerate = true;
    }
    return res;
}

void write_mask_dump(std::ostream& os, const GridMask& mask) {
    const GridSpec& g = mask.spec();
    std::ostringstream hdr;
    hdr.precision(17);
    os << "# torusfactor mask v1\n";
    os << "resolution " << g.nt << ' ' << g.nx << ' ' << g.ny << '\n';
    hdr << "window " << g.y_lo << ' ' << g.y_hi << '\n';
    os << hdr.str();
    os << "provenance " << (mask.provenance.empty() ? "-" : mask.provenance) << '\n';
    os << "iterations " << mask.iterations << '\n';
    os << "exhausted " << (mask.exhausted ? 1 : 0) << '\n';
    const auto& c = mask.raw();
    std::vector<std::pair<int, std::size_t>> runs;
    for (std::size_t idx = 0; idx < c.size();) {
        int v = c[idx] == 1 ? 1 : 0;
        std::size_t e = idx;
        while (e < c.size() && (c[e] == 1 ? 1 : 0) == v) ++e;
        runs.emplace_back(v, e - idx);
        idx = e;
    }
    os << "runs " << runs.size() << '\n';
    for (auto [v, n] : runs) os << v << ' ' << n << '\n';
}

GridMask read_mask_dump(std::istream& is) {
    std::string line, key;
    GridSpec g;
    std::string prov;
    long iters = 0;
    int exh = 0;
    std::size_t nruns = 0;
    auto expect = [&](const char* k) {
        if (!(is >> key) || key != k) throw DomainError(std::string("mask dump: expected ") + k);
    };
    std::getline(is, line);
    if (line.rfind("# torusfactor mask", 0) != 0) throw DomainError("mask dump: bad header");
    expect("resolution");
    is >> g.nt >> g.nx >> g.ny;
    expect("window");
    is >> g.y_lo >> g.y_hi;
    expect("provenance");
    std::getline(is >> std::ws, prov);
    expect("iterations");
    is >> iters;
    expect("exhausted");
    is >> exh;
    expect("runs");
    is >> nruns;
    GridMask m(g);
    std::size_t pos = 0;
    for (std::size_t r = 0; r < nruns; ++r) {
        int v;
        std::size_t n;
        if (!(is >> v >> n) || pos + n > m.raw().size()) throw DomainError("mask dump: bad run");
        std::fill_n(m.raw().begin() + static_cast<std::ptrdiff_t>(pos), n, static_cast<std::uint8_t>(v));
        pos += n;
    }
    if (pos != m.raw().size()) throw DomainError("mask dump: truncated");
    m.provenance = prov == "-" ? "" : prov;
    m.iterations = iters;
    m.exhausted = exh != 0;
    return m;
}

}  // namespace torusfactor
