// torusfactor command line front end.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "torusfactor/circle_maps.hpp"
#include "torusfactor/common.hpp"
#include "torusfactor/factor_builder.hpp"
#include "torusfactor/gallery.hpp"
#include "torusfactor/map_config.hpp"
#include "torusfactor/rotation_theory.hpp"
#include "torusfactor/skew_product.hpp"
#include "torusfactor/torus_maps.hpp"

using namespace torusfactor;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitWindow = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string map_text(const std::string& arg) { return !arg.empty() && arg[0] == '@' ? read_file(arg.substr(1)) : arg; }

std::vector<double> numbers(const std::string& s, std::size_t want, const char* what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad number in ") + what + ": " + item);
        }
    }
    if (out.size() != want) throw UsageError(std::string(what) + " needs " + std::to_string(want) + " comma-separated values");
    return out;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Output: files in --out when given, otherwise the main table on stdout.
class Sink {
public:
    Sink(std::string dir, std::string command, json config) : dir_(std::move(dir)), cmd_(std::move(command)), config_(std::move(config)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    json provenance() const {
        return {{"command", cmd_}, {"config", config_}, {"version", kVersion}, {"manifest_hash", gallery_manifest_hash()}};
    }

    void csv(const std::string& name, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows,
             const std::vector<std::string>& extra = {}) const {
        std::ostringstream os;
        os << "# torusfactor " << kVersion << "\n# manifest " << gallery_manifest_hash() << "\n# command " << cmd_
           << "\n# config " << config_.dump() << "\n";
        for (const auto& e : extra) os << "# " << e << "\n";
        for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
        os << "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
        emit(name + ".csv", os.str());
    }

    void json_doc(const std::string& name, const json& result) const {
        json doc = {{"provenance", provenance()}, {"result", result}};
        emit(name + ".json", doc.dump(2) + "\n");
    }

    bool to_files() const { return !dir_.empty(); }
    std::ostream& summary() const { return to_files() ? std::cout : std::cerr; }

private:
    void emit(const std::string& file, const std::string& text) const {
        if (dir_.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(std::filesystem::path(dir_) / file);
        out << text;
    }

    std::string dir_, cmd_;
    json config_;
};

json resolved_config(const CLI::App* sub) {
    json c = json::object();
    for (const CLI::Option* o : sub->get_options()) {
        std::string name = o->get_single_name();
        if (name == "help" || name == "config" || name.empty()) continue;
        if (o->count() > 0) {
            auto r = o->results();
            c[name] = r.size() == 1 ? json(r.front()) : json(r);
        } else if (!o->get_default_str().empty()) {
            c[name] = o->get_default_str();
        } else {
            c[name] = nullptr;
        }
    }
    return c;
}

// Config JSON keys become long flags placed before the command-line flags, so the latter win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] != "--config") continue;
        json cfg;
        try {
            cfg = json::parse(read_file(args[i + 1]));
        } catch (const json::exception& e) {
            throw UsageError(std::string("bad config file: ") + e.what());
        }
        if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
        std::vector<std::string> flags;
        for (auto& [k, v] : cfg.items()) {
            if (k == "command") continue;
            flags.push_back("--" + k);
            flags.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
        // insert right after the subcommand name (first positional after argv[0] and global flags)
        std::size_t at = 1;
        while (at < args.size() && args[at].rfind("--", 0) == 0) at += 2;
        if (at >= args.size() && cfg.contains("command")) {
            args.push_back(cfg["command"].get<std::string>());
            at = args.size() - 1;
        } else if (at < args.size() && cfg.contains("command") && args[at] != cfg["command"]) {
            throw UsageError("config command does not match the subcommand");
        }
        args.insert(args.begin() + static_cast<std::ptrdiff_t>(at) + 1, flags.begin(), flags.end());
        break;
    }
    return args;
}

double rho_or_target(const std::optional<double>& rho, const MapDefinition& def, bool vertical) {
    if (rho) return *rho;
    if (def.rotation_target) return vertical ? def.rotation_target->y : def.rotation_target->x;
    throw UsageError("--rho is required for this map (no known rotation target)");
}

// ---------------------------------------------------------------- commands

struct Common {
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 0;
};

int cmd_rotnum(const CLI::App* sub, const Common& cm, const std::optional<double>& rigid, const std::string& denjoy,
               const std::string& circle, const std::string& map, long n, double x0, int samples) {
    Sink sink(cm.out, "rotnum", resolved_config(sub));
    int given = (rigid ? 1 : 0) + (!denjoy.empty() ? 1 : 0) + (!circle.empty() ? 1 : 0) + (!map.empty() ? 1 : 0);
    if (given != 1) throw UsageError("give exactly one of --rigid, --denjoy, --circle, --map");
    if (!map.empty()) {
        MapDefinition def = parse_map(map_text(map));
        json r;
        if (def.map.k() == 0) {
            RotationCloud c = estimate_rotation_set(def.map, {n}, {samples, cm.seed});
            Vec2 mean{0, 0};
            for (const auto& p : c.points) mean = mean + p.average;
            mean = (1.0 / static_cast<double>(c.points.size())) * mean;
            r = {{"n", n}, {"mean", {mean.x, mean.y}}, {"hull_diameter", c.hull_diameter}};
            std::vector<std::vector<std::string>> rows;
            for (const auto& h : c.hull) rows.push_back({num(h.x), num(h.y)});
            if (cm.format == "json") sink.json_doc("rotnum", r);
            else sink.csv("rotnum", {"hull_x", "hull_y"}, rows, {"mean " + num(mean.x) + " " + num(mean.y)});
            sink.summary() << "rotation vector ~ (" << num(mean.x) << ", " << num(mean.y) << "), hull diameter "
                           << num(c.hull_diameter) << "\n";
        } else {
            VerticalRotation v = vertical_rotation_number(def.map, n, {samples, cm.seed});
            r = {{"n", n}, {"vertical", v.estimate}, {"spread", v.spread}};
            if (cm.format == "json") sink.json_doc("rotnum", r);
            else sink.csv("rotnum", {"vertical", "spread"}, {{num(v.estimate), num(v.spread)}});
            sink.summary() << "vertical rotation number ~ " << num(v.estimate) << " (spread " << num(v.spread) << ")\n";
        }
        return kExitOk;
    }
    CircleLift g = rigid ? CircleLift::rigid(*rigid)
                 : !denjoy.empty() ? parse_circle(json{{"kind", "denjoy"}, {"alpha", denjoy}}.dump())
                                   : parse_circle(map_text(circle));
    RotationEstimate e = rotation_number(g, x0, n);
    if (cm.format == "json") sink.json_doc("rotnum", {{"estimate", e.estimate}, {"error_bound", e.error_bound}, {"n", n}});
    else sink.csv("rotnum", {"n", "estimate", "error_bound"}, {{std::to_string(n), num(e.estimate), num(e.error_bound)}});
    sink.summary() << "rotation number " << num(e.estimate) << " +- " << num(e.error_bound) << "\n";
    return kExitOk;
}

int cmd_deviations(const CLI::App* sub, const Common& cm, const std::string& map, const std::string& v,
                   const std::optional<double>& rho, long nmax, int samples) {
    Sink sink(cm.out, "deviations", resolved_config(sub));
    MapDefinition def = parse_map(map_text(map));
    auto vv = numbers(v, 2, "--v");
    Vec2 dir{vv[0], vv[1]};
    DeviationProfile p;
    if (def.map.k() != 0 && dir.y == 0.0) {
        SpreadTable t = horizontal_spread(def.map, nmax, {samples, cm.seed});
        std::vector<std::vector<std::string>> rows;
        for (std::size_t q = 0; q < t.n.size(); ++q) rows.push_back({std::to_string(t.n[q]), num(t.spread[q])});
        sink.csv("deviations", {"n", "spread"}, rows, {"caveat " + t.caveat});
        sink.summary() << "horizontal spread: max forward " << num(t.max_forward) << ", max backward " << num(t.max_backward)
                       << " (" << t.caveat << ")\n";
        return kExitOk;
    }
    double r = rho ? *rho : rho_or_target(rho, def, dir.y != 0.0);
    p = deviation_profile(def.map, dir, r, nmax, {samples, cm.seed});
    std::string verdict = p.bounded ? "plateau" : "growing";
    if (cm.format == "json") {
        sink.json_doc("deviations", {{"D", p.D}, {"c_est", p.c_est}, {"c_at_80", p.c_at_80}, {"verdict", verdict},
                                     {"caveat", p.caveat}});
    } else {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t n = 0; n < p.D.size(); ++n) rows.push_back({std::to_string(n), num(p.D[n])});
        sink.csv("deviations", {"n", "D"}, rows, {"verdict " + verdict, "c_est " + num(p.c_est)});
    }
    sink.summary() << "C_est " << num(p.c_est) << " (first 80%: " << num(p.c_at_80) << "), verdict " << verdict << "\n";
    return kExitOk;
}

int cmd_skeworbit(const CLI::App* sub, const Common& cm, const std::string& map, const std::optional<double>& rho,
                  const std::string& state, long nmax) {
    Sink sink(cm.out, "skeworbit", resolved_config(sub));
    MapDefinition def = parse_map(map_text(map));
    auto st = numbers(state, 3, "--state");
    CentralizedSkew F = build_centralized(def.map, rho_or_target(rho, def, true));
    if (nmax < 0) throw UsageError("--nmax must be nonnegative");
    SkewState s{wrap01(st[0]), wrap01(st[1]), st[2]};
    std::vector<std::vector<std::string>> rows;
    double lo = s.y, hi = s.y;
    for (long n = 0; n <= nmax; ++n) {
        rows.push_back({std::to_string(n), num(s.t), num(s.x), num(s.y)});
        lo = std::min(lo, s.y);
        hi = std::max(hi, s.y);
        s = F.apply(s);
    }
    sink.csv("skeworbit", {"n", "t", "x", "y"}, rows, {"oscillation " + num(hi - lo)});
    sink.summary() << "vertical oscillation " << num(hi - lo) << " over " << nmax << " steps\n";
    return kExitOk;
}

struct FactorArgs {
    std::string map;
    std::optional<double> rho;
    std::string seed_point;
    std::string resolution = "256,256,512";
    std::optional<double> window;
    int sladder = 64;
    std::optional<double> tol;
    std::string grid = "64,64";
    double radius = 0.25;
    long n_deviation = 2000;
    int clouds = 8;
};

int cmd_factor(const CLI::App* sub, const Common& cm, const FactorArgs& a) {
    Sink sink(cm.out, "factor", resolved_config(sub));
    if (a.seed_point.empty()) throw UsageError("--seed-point is required (a point with recurrence evidence)");
    MapDefinition def = parse_map(map_text(a.map));
    double rho = rho_or_target(a.rho, def, true);
    auto sp = numbers(a.seed_point, 2, "--seed-point");
    auto res = numbers(a.resolution, 3, "--resolution");
    auto gr = numbers(a.grid, 2, "--grid");
    double c_est = 0.0;
    GridSpec spec;
    if (a.window) {
        spec = {static_cast<int>(res[0]), static_cast<int>(res[1]), static_cast<int>(res[2]), -*a.window, *a.window};
        c_est = std::max(0.0, 0.5 * (*a.window - 2.0));
    } else {
        DeviationProfile p = deviation_profile(def.map, {0, 1}, rho, a.n_deviation, {64, cm.seed});
        if (!p.bounded) throw NumericFailure("vertical deviations do not plateau; no window can be chosen");
        c_est = p.c_est;
        spec = GridSpec::for_deviation(c_est, static_cast<int>(res[0]), static_cast<int>(res[1]), static_cast<int>(res[2]));
    }
    CentralizedSkew F = build_centralized(def.map, rho, c_est);
    CheckResult comm = check_commutation(F, 1000, cm.seed);
    if (!comm.passed) throw NumericFailure("commutation defect " + num(comm.max_defect) + " above threshold");
    std::vector<long> returns = recurrence_probe(def.map, wrap01(Vec2{sp[0], sp[1]}), 0.05, 1000);
    TauRegion tau = build_tau(F, {sp[0], sp[1]}, a.radius, spec);
    if (returns.empty()) tau.provenance += "; warning: no recurrence evidence near the seed point";
    if (tau.exhausted) throw WindowExhausted("window exhausted (raise --window or lower --radius)");
    double cell = spec.hy();
    double tol = a.tol ? *a.tol : 0.5 * cell;
    FactorMap fm = project_to_torus_factor(tau, static_cast<int>(gr[0]), static_cast<int>(gr[1]), tol);
    EquivarianceReport eq = verify_equivariance(tau, 256, cm.seed, tol, a.sladder);

    std::vector<std::vector<std::string>> rows;
    for (const auto& s : fm.samples) rows.push_back({num(s.x), num(s.y), num(s.h)});
    sink.csv("factor", {"x", "y", "h"}, rows, {"provenance " + tau.provenance});
    json summary = {{"cell", cell},
                    {"window", {spec.y_lo, spec.y_hi}},
                    {"resolution", {spec.nt, spec.nx, spec.ny}},
                    {"rho", rho},
                    {"c_est", c_est},
                    {"tau_cells", tau.mask.count()},
                    {"saturation_sweeps", tau.mask.iterations},
                    {"invariance_within_one_cell", tau.invariance.within_one_cell()},
                    {"all_fibers_separate", tau.all_fibers_separate()},
                    {"max_defect_cells", fm.max_defect / cell},
                    {"mean_defect_cells", fm.mean_defect / cell},
                    {"pr2_deviation_cells", fm.pr2_deviation / cell},
                    {"monotone_violations", fm.monotone_violations},
                    {"translate_defect_cells", eq.translate_defect / cell},
                    {"dynamics_defect_cells", eq.dynamics_defect / cell},
                    {"ordering_violations", eq.ordering_violations},
                    {"ordering_pairs", eq.ordering_pairs},
                    {"recurrence_returns", returns.size()},
                    {"provenance", tau.provenance}};
    sink.json_doc("defects", summary);
    std::vector<std::vector<std::string>> cloud_rows;
    for (int q = 0; q < a.clouds; ++q) {
        double s = static_cast<double>(q) / a.clouds;
        ContinuumApprox c = continuum_Cs(tau, s);
        for (const Vec2& p : c.boundary) cloud_rows.push_back({num(s), num(p.x), num(p.y)});
    }
    sink.csv("clouds", {"s", "x", "y"}, cloud_rows,
             {"resolution " + std::to_string(spec.nt) + "x" + std::to_string(spec.nx) + "x" + std::to_string(spec.ny),
              "provenance " + tau.provenance});
    sink.summary() << "semi-conjugacy defect " << num(fm.max_defect / cell) << " cells, T1 " << num(eq.translate_defect / cell)
                   << " cells, f " << num(eq.dynamics_defect / cell) << " cells, ordering violations "
                   << eq.ordering_violations << "/" << eq.ordering_pairs << "\n";
    return tau.all_fibers_separate() ? kExitOk : kExitNumeric;
}

json proximity_json(const ProximityResult& p) {
    return {{"forward_min", p.forward_min}, {"forward_argmin", p.forward_argmin}, {"backward_min", p.backward_min},
            {"backward_argmin", p.backward_argmin}};
}

int cmd_gallery(const CLI::App* sub, const Common& cm, const std::string& id, long nmax, int samples) {
    Sink sink(cm.out, "gallery", resolved_config(sub));
    if (id == "3.4-geometry") {
        SurgeryGeometry g = surgery_geometry({kGolden, kSilver}, std::sqrt(3.0) - 1.0, 0.01);
        DisjointnessScan scan = disjointness_scan(g.alpha, g.gamma, g.delta, 1000);
        std::vector<std::vector<std::string>> rows;
        bool exact = true;
        for (long n = -50; n <= 50; ++n) {
            double dn = g.delta_n(n, g.center(n));
            exact = exact && dn == std::ldexp(g.delta, -static_cast<int>(std::labs(n)) - 10);
            rows.push_back({std::to_string(n), num(dn), num(g.diameter(n)), num(g.euclidean_diameter(n))});
        }
        sink.csv("gallery_3.4", {"n", "delta_n_at_center", "diameter", "euclidean_diameter"}, rows,
                 {"delta " + num(g.delta) + " gamma " + num(g.gamma) + " delta0 " + num(scan.delta0)});
        sink.summary() << "delta_n(T^n 0) = 2^{-|n|-10} delta for |n| <= 50: " << (exact ? "exact" : "MISMATCH")
                       << "; diameter " << num(2 * g.delta) << " for every n; disjointness threshold delta0 "
                       << num(scan.delta0) << "\n";
        return exact ? kExitOk : kExitNumeric;
    }
    if (id != "3.2" && id != "3.3") throw UsageError("unknown gallery id \"" + id + "\"; known ids: 3.2, 3.3, 3.4-geometry");
    GalleryExample ex = id == "3.2" ? example_unbounded_inessential() : example_fully_essential();
    DeviationProfile dv = deviation_profile(ex.map, {0, 1}, ex.rho, nmax, {samples, cm.seed});
    DeviationProfile dh = deviation_profile(ex.map, {1, 0}, ex.suspension.rotation_target.x, nmax, {samples, cm.seed});
    std::vector<long> ret = recurrence_probe(ex.map, ex.probe_center, ex.probe_radius, nmax);
    KroneckerReport kr = kronecker_separation_probe(ex.map, ex.probes, nmax, 1e-2);
    CentralizedSkew F = build_centralized(ex.map, ex.rho, dv.c_est);
    CheckResult comm = check_commutation(F, 1000, cm.seed), closed = check_closed_form(F, 1000, 20, cm.seed);
    json r = {{"id", id},
              {"rho", ex.rho},
              {"rotation_target", {ex.suspension.rotation_target.x, ex.suspension.rotation_target.y}},
              {"vertical_plateau", {{"c_est", dv.c_est}, {"c_at_80", dv.c_at_80}, {"bounded", dv.bounded}}},
              {"horizontal_plateau", {{"c_est", dh.c_est}, {"c_at_80", dh.c_at_80}, {"bounded", dh.bounded}}},
              {"recurrence", {{"center", {ex.probe_center.x, ex.probe_center.y}}, {"radius", ex.probe_radius}, {"returns", ret}}},
              {"probes",
               {{"w0", {ex.probes.w0.x, ex.probes.w0.y}},
                {"w1", {ex.probes.w1.x, ex.probes.w1.y}},
                {"w0p", {ex.probes.w0p.x, ex.probes.w0p.y}},
                {"w1p", {ex.probes.w1p.x, ex.probes.w1p.y}}}},
              {"proximality_w0_w1p", proximity_json(kr.forward)},
              {"proximality_w0_w0p", proximity_json(kr.backward)},
              {"obstruction", kr.obstruction},
              {"interpretation", kr.interpretation},
              {"commutation_defect", comm.max_defect},
              {"closed_form_defect", closed.max_defect}};
    if (id == "3.3") r["crossings"] = {{"s0", ex.s0}, {"s1", ex.s1}, {"grid", ex.crossing_grid}, {"count", ex.crossing_count}};
    sink.json_doc("gallery_" + id, r);
    auto& os = sink.summary();
    os << "gallery " << id << ": vertical C_est " << num(dv.c_est) << (dv.bounded ? " (plateau)" : " (growing)")
       << ", returns to probe ball " << ret.size() << ", proximality minima " << num(kr.forward.forward_min) << " / "
       << num(kr.backward.backward_min) << ", " << kr.interpretation << "\n";
    if (id == "3.3") os << "crossing times found: " << ex.crossing_count << " of " << ex.crossing_grid << "\n";
    return comm.passed && closed.passed ? kExitOk : kExitNumeric;
}

int cmd_double_factor(const CLI::App* sub, const Common& cm, const std::string& map, const std::string& rho,
                      const std::string& resolution, const std::string& grid, double radius) {
    Sink sink(cm.out, "double-factor", resolved_config(sub));
    MapDefinition def = parse_map(map_text(map));
    Vec2 r;
    if (!rho.empty()) {
        auto v = numbers(rho, 2, "--rho");
        r = {v[0], v[1]};
    } else if (def.rotation_target) {
        r = *def.rotation_target;
    } else {
        throw UsageError("--rho is required for this map (no known rotation target)");
    }
    auto res = numbers(resolution, 3, "--resolution");
    auto gr = numbers(grid, 2, "--grid");
    DoubleFactorOptions opt;
    opt.nt = static_cast<int>(res[0]);
    opt.nx = static_cast<int>(res[1]);
    opt.ny = static_cast<int>(res[2]);
    opt.gx = static_cast<int>(gr[0]);
    opt.gy = static_cast<int>(gr[1]);
    opt.ball_radius = radius;
    opt.seed = cm.seed;
    DoubleFactor d;
    try {
        d = double_factor(def.map, r, opt);
    } catch (const DomainError& e) {
        throw NumericFailure(std::string("refused: ") + e.what());
    }
    std::vector<std::vector<std::string>> rows;
    for (std::size_t q = 0; q < d.vertical.samples.size(); ++q) {
        const auto& v = d.vertical.samples[q];
        // the horizontal factor was sampled in swapped coordinates on the same grid
        const auto& h = d.horizontal.samples[q];
        rows.push_back({num(v.x), num(v.y), num(h.h), num(v.h)});
    }
    sink.csv("double_factor", {"x", "y", "h1", "h2"}, rows,
             {"h1 sampled at (y, x) of the swapped map; h2 at (x, y)"});
    json s = {{"rho", {r.x, r.y}},
              {"hull_diameter", d.hull_diameter},
              {"h1_defect_cells", d.horizontal.max_defect / d.horizontal.cell},
              {"h2_defect_cells", d.vertical.max_defect / d.vertical.cell},
              {"joint_defect", d.joint_defect},
              {"joint_defect_cells", d.joint_defect / d.cell}};
    sink.json_doc("double_factor_summary", s);
    sink.summary() << "h1 defect " << num(d.horizontal.max_defect / d.horizontal.cell) << " cells, h2 defect "
                   << num(d.vertical.max_defect / d.vertical.cell) << " cells\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rotation theory, skew products and circle factors for torus homeomorphisms.\n"
                 "CSV outputs: '#' provenance lines, then a header row. Columns:\n"
                 "  rotnum: n,estimate,error_bound   deviations: n,D   skeworbit: n,t,x,y\n"
                 "  factor: x,y,h  clouds: s,x,y   double-factor: x,y,h1,h2"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (0 = hardware)");
    app.set_version_flag("--version", std::string(kVersion));

    Common cm;
    auto common = [&](CLI::App* s) {
        s->add_option("--out", cm.out, "Output directory (tables go to stdout when absent)");
        s->add_option("--format", cm.format, "Main table format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
        s->add_option("--seed", cm.seed, "Sampling seed")->capture_default_str();
        s->add_option("--config", "JSON file whose keys replace flags; explicit flags win");
    };

    auto* rot = app.add_subcommand("rotnum", "Rotation number of a circle lift or rotation data of a torus map");
    std::optional<double> rigid;
    std::string denjoy, circle, rot_map;
    long rot_n = 100000;
    double x0 = 0.0;
    int rot_samples = 64;
    rot->add_option("--rigid", rigid, "Rigid rotation offset");
    rot->add_option("--denjoy", denjoy, "Denjoy target: golden, sqrt2m1 or a number");
    rot->add_option("--circle", circle, "Circle map JSON (or @file)");
    rot->add_option("--map", rot_map, "Torus map JSON (or @file)");
    rot->add_option("--n", rot_n, "Iterations")->capture_default_str();
    rot->add_option("--x0", x0, "Start point")->capture_default_str();
    rot->add_option("--samples", rot_samples, "Sample count for torus maps")->capture_default_str();
    common(rot);

    auto* dev = app.add_subcommand("deviations", "Rotational deviation profile D(n)");
    std::string dev_map, dev_v = "0,1";
    std::optional<double> dev_rho;
    long dev_nmax = 2000;
    int dev_samples = 256;
    dev->add_option("--map", dev_map, "Torus map JSON (or @file)")->required();
    dev->add_option("--v", dev_v, "Direction v")->capture_default_str();
    dev->add_option("--rho", dev_rho, "Rotation number along v (default: map target)");
    dev->add_option("--nmax", dev_nmax, "Largest n")->capture_default_str();
    dev->add_option("--samples", dev_samples, "Sample count")->capture_default_str();
    common(dev);

    auto* sko = app.add_subcommand("skeworbit", "Orbit of the centralized skew product");
    std::string sko_map, sko_state = "0,0,0";
    std::optional<double> sko_rho;
    long sko_nmax = 1000;
    sko->add_option("--map", sko_map, "Torus map JSON (or @file)")->required();
    sko->add_option("--rho", sko_rho, "Vertical rotation number (default: map target)");
    sko->add_option("--state", sko_state, "Initial t,x,y")->capture_default_str();
    sko->add_option("--nmax", sko_nmax, "Steps")->capture_default_str();
    common(sko);

    auto* fac = app.add_subcommand("factor", "Invariant region, annular continua and circle factor");
    FactorArgs fa;
    fac->add_option("--map", fa.map, "Torus map JSON (or @file)")->required();
    fac->add_option("--rho", fa.rho, "Vertical rotation number (default: map target)");
    fac->add_option("--seed-point", fa.seed_point, "Ball center x,y in the annulus");
    fac->add_option("--resolution", fa.resolution, "Grid nt,nx,ny")->capture_default_str();
    fac->add_option("--window", fa.window, "Height window half-size Y (default 2 C_est + 2)");
    fac->add_option("--sladder", fa.sladder, "s-ladder length for the ordering check")->capture_default_str();
    fac->add_option("--tol", fa.tol, "Bisection tolerance (default half a cell)");
    fac->add_option("--grid", fa.grid, "Factor sample grid gx,gy")->capture_default_str();
    fac->add_option("--radius", fa.radius, "Seed ball radius")->capture_default_str();
    fac->add_option("--clouds", fa.clouds, "Number of continua dumped")->capture_default_str();
    common(fac);

    auto* gal = app.add_subcommand("gallery", "Evidence report for a gallery example (3.2, 3.3, 3.4-geometry)");
    std::string gal_id;
    long gal_nmax = 10000;
    int gal_samples = 256;
    gal->add_option("id", gal_id, "Example id")->required();
    gal->add_option("--nmax", gal_nmax, "Scan length")->capture_default_str();
    gal->add_option("--samples", gal_samples, "Deviation sample count")->capture_default_str();
    common(gal);

    auto* dbl = app.add_subcommand("double-factor", "Circle factors in both directions of a pseudo-rotation");
    std::string dbl_map, dbl_rho, dbl_res = "256,256,512", dbl_grid = "64,64";
    double dbl_radius = 0.25;
    dbl->add_option("--map", dbl_map, "Torus map JSON (or @file)")->required();
    dbl->add_option("--rho", dbl_rho, "Rotation vector r1,r2 (default: map target)");
    dbl->add_option("--resolution", dbl_res, "Grid nt,nx,ny")->capture_default_str();
    dbl->add_option("--grid", dbl_grid, "Factor sample grid gx,gy")->capture_default_str();
    dbl->add_option("--radius", dbl_radius, "Seed ball radius")->capture_default_str();
    common(dbl);

    try {
        std::vector<std::string> args(argv, argv + argc);
        args = expand_config(args);
        std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
        app.parse(rev);
        set_max_threads(threads);
        if (*rot) return cmd_rotnum(rot, cm, rigid, denjoy, circle, rot_map, rot_n, x0, rot_samples);
        if (*dev) return cmd_deviations(dev, cm, dev_map, dev_v, dev_rho, dev_nmax, dev_samples);
        if (*sko) return cmd_skeworbit(sko, cm, sko_map, sko_rho, sko_state, sko_nmax);
        if (*fac) return cmd_factor(fac, cm, fa);
        if (*gal) return cmd_gallery(gal, cm, gal_id, gal_nmax, gal_samples);
        if (*dbl) return cmd_double_factor(dbl, cm, dbl_map, dbl_rho, dbl_res, dbl_grid, dbl_radius);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric check failed: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const WindowExhausted& e) {
        std::cerr << e.what() << "\n";
        return kExitWindow;
    }
    return kExitUsage;
}
