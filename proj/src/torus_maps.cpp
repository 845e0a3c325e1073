#include "ergotrope/torus_maps.hpp"

#include <numeric>

namespace ergotrope::torus {

namespace {
constexpr std::int64_t kDenCap = std::int64_t{1} << 61;

Rational reduced(std::int64_t num, std::int64_t den) {
    std::int64_t g = std::gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rational r;
    r.num = num;
    r.den = den;
    return r;
}
} // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d <= 0) throw std::invalid_argument("Rational: positive denominator required");
    n %= d;
    if (n < 0) n += d;
    *this = reduced(n, d);
}

Rational doubling_step(const Rational& x) {
    return reduced((2 * x.num) % x.den, x.den);
}

Rational doubling_back(const Rational& x, bool bit) {
    if (x.den > kDenCap / 2) throw PrecisionExhausted(63);
    std::int64_t num = x.num + (bit ? x.den : 0);
    return reduced(num, 2 * x.den);
}

std::pair<Rational, Rational> cat_step(const Rational& x, const Rational& y) {
    std::int64_t g = std::gcd(x.den, y.den);
    if (x.den / g > kDenCap / y.den) throw PrecisionExhausted(63);
    std::int64_t den = x.den / g * y.den;
    std::int64_t nx = x.num * (den / x.den);
    std::int64_t ny = y.num * (den / y.den);
    return {reduced((2 * nx % den + ny) % den, den), reduced((nx + ny) % den, den)};
}

std::pair<Rational, Rational> cat_back(const Rational& x, const Rational& y) {
    // inverse matrix [[1,-1],[-1,2]]
    std::int64_t g = std::gcd(x.den, y.den);
    if (x.den / g > kDenCap / y.den) throw PrecisionExhausted(63);
    std::int64_t den = x.den / g * y.den;
    std::int64_t nx = x.num * (den / x.den);
    std::int64_t ny = y.num * (den / y.den);
    std::int64_t u = ((nx - ny) % den + den) % den;
    std::int64_t v = ((2 * ny % den - nx) % den + den) % den;
    return {reduced(u, den), reduced(v, den)};
}

std::vector<std::vector<Rational>> orbit(MapKind map,
                                         const std::vector<Rational>& omega0,
                                         std::int64_t a, std::int64_t b,
                                         RngStream* rng) {
    if (a > b) throw std::invalid_argument("orbit: empty range");
    std::size_t d_expected = map == MapKind::Doubling ? 1 : 2;
    if (omega0.size() != d_expected)
        throw std::invalid_argument("orbit: point dimension does not match map");
    std::vector<std::vector<Rational>> out(static_cast<std::size_t>(b - a + 1));
    auto slot = [&](std::int64_t n) -> std::vector<Rational>& {
        return out[static_cast<std::size_t>(n - a)];
    };
    // forward from 0
    std::vector<Rational> cur = omega0;
    for (std::int64_t n = 0; n <= b; ++n) {
        if (n >= a) slot(n) = cur;
        if (n < b) {
            if (map == MapKind::Doubling) {
                cur[0] = doubling_step(cur[0]);
            } else {
                auto [x, y] = cat_step(cur[0], cur[1]);
                cur = {x, y};
            }
        }
    }
    // backward from 0
    if (a < 0) {
        cur = omega0;
        for (std::int64_t n = -1; n >= a; --n) {
            if (map == MapKind::Doubling) {
                if (!rng)
                    throw std::invalid_argument(
                        "orbit: doubling preimages need an RNG stream for fiber bits");
                cur[0] = doubling_back(cur[0], rng->fair_bit());
            } else {
                auto [x, y] = cat_back(cur[0], cur[1]);
                cur = {x, y};
            }
            if (n <= b) slot(n) = cur;
        }
    }
    return out;
}

BitstreamPoint BitstreamPoint::sample(RngStream& rng, std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("BitstreamPoint: empty range");
    BitstreamPoint p;
    p.lo_ = lo;
    p.bits_.resize(static_cast<std::size_t>(hi - lo + 1));
    for (auto& b : p.bits_) b = rng.fair_bit() ? 1 : 0;
    return p;
}

double BitstreamPoint::x(std::int64_t n) const {
    if (n + 1 < lo() || n + 64 > hi())
        throw std::out_of_range("BitstreamPoint: digits [" + std::to_string(n + 1) + "," +
                                std::to_string(n + 64) + "] not materialized");
    std::uint64_t w = 0;
    for (int j = 0; j < 64; ++j)
        w = (w << 1) | bits_[static_cast<std::size_t>(n + 1 + j - lo_)];
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

} // namespace ergotrope::torus
