#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ergotrope/rng.hpp"

namespace ergotrope::torus {

struct PrecisionExhausted : std::runtime_error {
    PrecisionExhausted(std::int64_t bits_needed)
        : std::runtime_error("torus orbit: precision budget exhausted, need " +
                             std::to_string(bits_needed) + " bits"),
          bits(bits_needed) {}
    std::int64_t bits;
};

// Exact rational point of the torus, num/den in [0,1).  Orbits of the
// hyperbolic maps are kept in integer arithmetic: floating point is unusable
// here because the doubling map discards one mantissa bit per step.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);
    long double value() const { return static_cast<long double>(num) / den; }
    bool operator==(const Rational&) const = default;
};

enum class MapKind { Doubling, Cat };

// T2 x = 2x (mod 1)
Rational doubling_step(const Rational& x);
// preimage with the fiber selected by `bit`: (num + bit*den) / (2 den)
Rational doubling_back(const Rational& x, bool bit);

// T_cat(x, y) = (2x + y mod 1, x + y mod 1); exact on a common denominator
std::pair<Rational, Rational> cat_step(const Rational& x, const Rational& y);
std::pair<Rational, Rational> cat_back(const Rational& x, const Rational& y);

// Exact iterates T^n omega0 for n in [a, b] (index 0 maps to omega0).  For
// the doubling map with a < 0 the preimage fiber bits are drawn from `rng`
// in the order n = -1, -2, ...; the seeded stream is the reproducibility
// record.  Each point is a d-vector (d = 1 doubling, d = 2 cat).
std::vector<std::vector<Rational>> orbit(MapKind map,
                                         const std::vector<Rational>& omega0,
                                         std::int64_t a, std::int64_t b,
                                         RngStream* rng = nullptr);

// A uniform point of the torus under the doubling map, represented by its
// binary digits: x_n = T^n x = 0.b_{n+1} b_{n+2} ...  (Lebesgue measure =
// i.i.d. fair bits, T = bit shift.)  Digits materialized for j in
// [lo, hi]; x(n) needs the 64 digits b_{n+1}..b_{n+64}.
class BitstreamPoint {
public:
    static BitstreamPoint sample(RngStream& rng, std::int64_t lo, std::int64_t hi);

    double x(std::int64_t n) const;
    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(bits_.size()) - 1; }

private:
    std::vector<std::uint8_t> bits_;
    std::int64_t lo_ = 0;
};

} // namespace ergotrope::torus
