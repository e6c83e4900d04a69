#ifndef TORUSFACTOR_GALLERY_HPP
#define TORUSFACTOR_GALLERY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "torusfactor/circle_maps.hpp"
#include "torusfactor/rotation_theory.hpp"
#include "torusfactor/torus_maps.hpp"

namespace torusfactor {

/// Suspension of g1 with fiber map g2, written in the straightened chart
/// psi[s, x] = (s, G_s(x)), G_s = identity + s (g2~ - identity).
struct SuspensionSpec {
    CircleLift g1;
    CircleLift g2;
    TorusMap map;
    Vec2 rotation_target;  // (rho(g1), rho(g1) rho(g2)), only when both have targets
    bool has_target = false;

    /// Fundamental-domain formula on [0,1) x T: (g1(u) mod 1, g2^{floor g1(u)}(x)).
    Vec2 quotient_map(Vec2 ux) const;
    /// Same point by stepping the relation (s, x) ~ (s - 1, g2(x)) one unit at a time.
    Vec2 quotient_map_unwound(Vec2 ux) const;
    Vec2 chart(Vec2 ux) const;
    Vec2 chart_inverse(Vec2 uw) const;
    /// Phi^s(0, y) in chart coordinates.
    Vec2 flow_point(double s, double y) const;
};

SuspensionSpec suspension_map(const CircleLift& g1, const CircleLift& g2);

struct Quadruple {
    Vec2 w0, w1, w0p, w1p;
};

struct GalleryExample {
    std::string id;
    SuspensionSpec suspension;
    TorusMap map;  // g o l
    DiskPushParams push;
    double rho = 0.0;  // vertical rotation number used for centralization
    Quadruple probes;
    Vec2 block_center;
    double block_radius = 0.0;
    Vec2 probe_center;     // recurrence ball
    double probe_radius = 0.0;
    // fully essential example only
    double s0 = 0.0, s1 = 0.0;
    std::size_t crossing_count = 0;
    int crossing_grid = 0;
};

GalleryExample example_unbounded_inessential();
GalleryExample example_fully_essential();
/// Suspension of two rigid rotations (golden, sqrt2 - 1).
SuspensionSpec example_rigid_suspension(double rho1 = 0.6180339887, double rho2 = 0.4142135624);

/// Count of t in a grid of (0,1) whose flow point t s0 + (1-t) s1 projects outside the gaps of g1.
std::size_t crossing_times(const SuspensionSpec& s, double s0, double s1, int grid);

struct SurgeryGeometry {
    Vec2 alpha;
    double gamma = 0.0;
    double delta = 0.0;

    Vec2 center(long n) const;  // T_alpha^n(0) on the torus
    /// delta_n(z) = max(0, 2^{-|n|-10} (delta - d(z, T^n 0))).
    double delta_n(long n, Vec2 z) const;
    /// Endpoint of the n-th segment, parameter in [-1, 1].
    Vec2 segment_point(long n, double p) const;
    /// Extent of the n-th domain along pr1 (equals 2 delta).
    double diameter(long n) const;
    double euclidean_diameter(long n) const;
};

struct DisjointnessScan {
    bool disjoint = true;
    long violating_n = 0;
    double delta0 = 0.0;  // sup of half-widths passing the scan
};

DisjointnessScan disjointness_scan(Vec2 alpha, double gamma, double delta, long n_scan);

/// Throws DomainError("delta too large ...") when the scan fails.
SurgeryGeometry surgery_geometry(Vec2 alpha, double gamma, double delta, long n_scan = 1000);

struct NoGapWindow {
    long M0 = 0;
    long m = 0;
};

/// Window size from the combinatorial lemma and the m it proposes for start m'.
NoGapWindow no_gap_window(const std::vector<long>& A, long N0, long m_prime = 0);

/// True when {m..m+N0} lies in {j - xi(j) : j in m'..m'+M0}.
bool no_gap_holds(long N0, long m_prime, const std::vector<long>& xi, long m);
/// Any m that works for this xi.
std::optional<long> no_gap_witness(long N0, long m_prime, const std::vector<long>& xi);

struct NoGapCounterexample {
    std::vector<long> A;
    long N0 = 0;
    long M0 = 0;
    std::vector<long> xi;
};

struct NoGapScan {
    std::size_t cases = 0;        // (A, N0) pairs
    std::size_t functions = 0;    // xi enumerated
    std::size_t formula_failures = 0;  // proposed m fails
    std::size_t counterexamples = 0;   // no m works at all
    std::optional<NoGapCounterexample> first;
};

/// All xi: {0..M0} -> A for one (A, N0).
NoGapScan no_gap_exhaustive(const std::vector<long>& A, long N0);
/// All A in [lo, hi] with |A| <= max_size and N0 <= max_n0.
NoGapScan no_gap_sweep(long lo, long hi, int max_size, long max_n0);

struct KroneckerReport {
    ProximityResult forward;   // (w0, w1') forward
    ProximityResult backward;  // (w0, w0') backward
    double threshold = 0.0;
    long n_max = 0;
    bool obstruction = false;
    std::string interpretation;
};

/// w0 forward-proximal to w1' and backward-proximal to w0', with w0', w1' separated by construction.
KroneckerReport kronecker_separation_probe(const TorusMap& f, const Quadruple& q, long n_max,
                                           double threshold = 1e-2, bool primes_separated = true);

/// Two-point version: both minima of (w0, w1).
ProximityResult kronecker_pair_probe(const TorusMap& f, Vec2 w0, Vec2 w1, long n_max);

inline constexpr int kManifestVersion = 1;
std::string gallery_manifest_json();
std::string gallery_manifest_hash();
std::uint64_t fnv1a64(const std::string& s);

}  // namespace torusfactor

#endif
