#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "torusfactor/circle_maps.hpp"
#include "torusfactor/common.hpp"
#include "torusfactor/gallery.hpp"
#include "torusfactor/map_config.hpp"
#include "torusfactor/rotation_theory.hpp"
#include "torusfactor/skew_product.hpp"
#include "torusfactor/torus_maps.hpp"

namespace py = pybind11;
using namespace torusfactor;

namespace {

using Pair = std::pair<double, double>;

Vec2 vec(Pair p) { return {p.first, p.second}; }
Pair pair(Vec2 v) { return {v.x, v.y}; }

py::dict proximity_dict(const ProximityResult& r) {
    py::dict d;
    d["forward_min"] = r.forward_min;
    d["backward_min"] = r.backward_min;
    d["forward_argmin"] = r.forward_argmin;
    d["backward_argmin"] = r.backward_argmin;
    return d;
}

}  // namespace

PYBIND11_MODULE(_torusfactor, m) {
    m.doc() = "Circle factors of torus pseudo-rotations";
    m.attr("__version__") = kVersion;

    static py::exception<DomainError> domain_error(m, "DomainError", PyExc_ValueError);
    static py::exception<WindowExhausted> window_exhausted(m, "WindowExhausted", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const DomainError& e) {
            domain_error(e.what());
        } catch (const WindowExhausted& e) {
            window_exhausted(e.what());
        }
    });

    m.def("set_max_threads", &set_max_threads, py::arg("n"));

    py::class_<CircleLift>(m, "CircleLift")
        .def_static("rigid", &CircleLift::rigid, py::arg("alpha"))
        .def_static("from_json", &parse_circle, py::arg("text"))
        .def_property_readonly("kind", [](const CircleLift& g) { return to_string(g.kind()); })
        .def_property_readonly("alpha", &CircleLift::alpha)
        .def("__call__", &CircleLift::eval, py::arg("x"))
        .def("inverse", &CircleLift::inverse, py::arg("w"))
        .def("iterate", &CircleLift::iterate, py::arg("x"), py::arg("n"));

    m.def(
        "rotation_number",
        [](const CircleLift& g, double x0, long n) {
            RotationEstimate r = rotation_number(g, x0, n);
            return std::make_pair(r.estimate, r.error_bound);
        },
        py::arg("g"), py::arg("x0") = 0.0, py::arg("n") = 100000, "(estimate, error bound)");

    py::class_<TorusMap>(m, "TorusMap")
        .def_static("rigid", &TorusMap::rigid, py::arg("a"), py::arg("b"), py::arg("k") = 0)
        .def_static(
            "from_json", [](const std::string& text) { return parse_map(text).map; }, py::arg("text"))
        .def_property_readonly("k", &TorusMap::k)
        .def_property_readonly("kind", [](const TorusMap& f) { return to_string(f.kind()); })
        .def_property_readonly("label", &TorusMap::label)
        .def("__call__", [](const TorusMap& f, Pair z) { return pair(f.eval(vec(z))); }, py::arg("z"))
        .def("inverse", [](const TorusMap& f, Pair z) { return pair(f.eval_inverse(vec(z))); }, py::arg("z"))
        .def("on_torus", [](const TorusMap& f, Pair z) { return pair(f.on_torus(vec(z))); }, py::arg("z"))
        .def("swapped", &TorusMap::swapped);

    m.def(
        "rotation_target",
        [](const std::string& text) -> std::optional<Pair> {
            auto r = parse_map(text).rotation_target;
            if (!r) return std::nullopt;
            return pair(*r);
        },
        py::arg("text"));

    m.def(
        "deviation_profile",
        [](const TorusMap& f, Pair v, double rho, long n_max, int samples, std::uint64_t seed) {
            DeviationProfile p = deviation_profile(f, vec(v), rho, n_max, SampleSpec{samples, seed});
            py::dict d;
            d["D"] = p.D;
            d["c_est"] = p.c_est;
            d["c_at_80"] = p.c_at_80;
            d["bounded"] = p.bounded;
            d["caveat"] = p.caveat;
            return d;
        },
        py::arg("f"), py::arg("v"), py::arg("rho"), py::arg("n_max") = 1000, py::arg("samples") = 256,
        py::arg("seed") = 0);

    m.def(
        "proximality_scan",
        [](const TorusMap& f, Pair x, Pair y, long n_max) {
            return proximity_dict(proximality_scan(f, vec(x), vec(y), n_max));
        },
        py::arg("f"), py::arg("x"), py::arg("y"), py::arg("n_max"));

    py::class_<SkewState>(m, "SkewState")
        .def(py::init([](double t, double x, double y) { return SkewState{t, x, y}; }), py::arg("t") = 0.0,
             py::arg("x") = 0.0, py::arg("y") = 0.0)
        .def_readwrite("t", &SkewState::t)
        .def_readwrite("x", &SkewState::x)
        .def_readwrite("y", &SkewState::y)
        .def("__repr__", [](const SkewState& s) {
            return "SkewState(" + std::to_string(s.t) + ", " + std::to_string(s.x) + ", " + std::to_string(s.y) + ")";
        });
    m.def("skew_distance", &skew_distance, py::arg("a"), py::arg("b"));

    py::class_<CentralizedSkew>(m, "CentralizedSkew")
        .def(py::init<TorusMap, double, double>(), py::arg("f"), py::arg("rho"), py::arg("c_est") = 0.0)
        .def_property_readonly("rho", &CentralizedSkew::rho)
        .def("apply", &CentralizedSkew::apply, py::arg("s"))
        .def("apply_inverse", &CentralizedSkew::apply_inverse, py::arg("s"))
        .def("iterate", &CentralizedSkew::iterate, py::arg("s"), py::arg("n"))
        .def("closed_form", &CentralizedSkew::closed_form, py::arg("s"), py::arg("n"));

    m.def(
        "check_commutation",
        [](const CentralizedSkew& F, int samples, std::uint64_t seed) {
            return check_commutation(F, samples, seed).max_defect;
        },
        py::arg("F"), py::arg("samples") = 1000, py::arg("seed") = 0, "largest defect of F T - T F");

    m.def(
        "disjointness_scan",
        [](Pair alpha, double gamma, double delta, long n_scan) {
            DisjointnessScan s = disjointness_scan(vec(alpha), gamma, delta, n_scan);
            py::dict d;
            d["disjoint"] = s.disjoint;
            d["violating_n"] = s.violating_n;
            d["delta0"] = s.delta0;
            return d;
        },
        py::arg("alpha"), py::arg("gamma"), py::arg("delta"), py::arg("n_scan") = 1000);

    m.def(
        "surgery_diameters",
        [](Pair alpha, double gamma, double delta, long n_scan) {
            SurgeryGeometry g = surgery_geometry(vec(alpha), gamma, delta, n_scan);
            std::vector<double> out;
            for (long n = -n_scan; n <= n_scan; ++n) out.push_back(g.diameter(n));
            return out;
        },
        py::arg("alpha"), py::arg("gamma"), py::arg("delta"), py::arg("n_scan") = 1000);

    m.def("no_gap_holds", &no_gap_holds, py::arg("N0"), py::arg("m_prime"), py::arg("xi"), py::arg("m"));
    m.def("no_gap_witness", &no_gap_witness, py::arg("N0"), py::arg("m_prime"), py::arg("xi"));
    m.def(
        "no_gap_exhaustive",
        [](const std::vector<long>& A, long N0) {
            NoGapScan s = no_gap_exhaustive(A, N0);
            py::dict d;
            d["functions"] = s.functions;
            d["formula_failures"] = s.formula_failures;
            d["counterexamples"] = s.counterexamples;
            if (s.first) {
                py::dict c;
                c["A"] = s.first->A;
                c["N0"] = s.first->N0;
                c["M0"] = s.first->M0;
                c["xi"] = s.first->xi;
                d["first"] = c;
            } else {
                d["first"] = py::none();
            }
            return d;
        },
        py::arg("A"), py::arg("N0"));

    m.def(
        "kronecker_pair_probe",
        [](const TorusMap& f, Pair w0, Pair w1, long n_max) {
            return proximity_dict(kronecker_pair_probe(f, vec(w0), vec(w1), n_max));
        },
        py::arg("f"), py::arg("w0"), py::arg("w1"), py::arg("n_max"));

    m.def("gallery_manifest_json", &gallery_manifest_json);
    m.def("gallery_manifest_hash", &gallery_manifest_hash);
}
