#ifndef TORUSFACTOR_COMMON_HPP
#define TORUSFACTOR_COMMON_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace torusfactor {

inline constexpr const char* kVersion = "0.3.1";

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Representative in [0,1). Ties go toward 0, and -0.0 / 1-ulp rounding to 1.0 are folded back.
inline double wrap01(double v) {
    double r = v - std::floor(v);
    if (r >= 1.0) r = 0.0;
    return r + 0.0;
}

// Signed representative in [-1/2, 1/2).
inline double wrap_signed(double v) {
    double r = v - std::floor(v + 0.5);
    if (r >= 0.5) r -= 1.0;
    return r;
}

inline double circle_dist(double a, double b) { return std::fabs(wrap_signed(a - b)); }

inline Vec2 wrap01(Vec2 v) { return {wrap01(v.x), wrap01(v.y)}; }

inline double torus_dist(Vec2 a, Vec2 b) {
    return std::hypot(wrap_signed(a.x - b.x), wrap_signed(a.y - b.y));
}

/// Thrown for violated preconditions. The message is user-facing.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WindowExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Platform-stable uniform double in [0,1) from a 64-bit engine output.
inline double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Low-discrepancy lattice on [0,1)^2 (plastic-number Kronecker sequence)
/// with seeded uniform jitter of half-width 0.5/sqrt(count).
std::vector<Vec2> lattice_samples(int count, std::uint64_t seed);

/// Same idea on [0,1).
std::vector<double> lattice_samples_1d(int count, std::uint64_t seed);

void set_max_threads(int n);
int max_threads();

/// Runs fn(begin, end, chunk_index) over contiguous chunks of [0, n).
/// Chunk boundaries depend only on n and the chunk count, never on timing.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn,
                     std::size_t* chunk_count_out = nullptr);

std::size_t chunk_count_for(std::size_t n);

}  // namespace torusfactor

#endif
