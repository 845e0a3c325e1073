#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ergotrope/lattice_box.hpp"
#include "ergotrope/rng.hpp"
#include "ergotrope/subshift.hpp"
#include "ergotrope/torus_maps.hpp"

namespace ergotrope::pot {

enum class Family { Free, Maryland, AlmostMathieu, MonotoneSawtooth, Subshift };

// Driver of the Subshift family: a Markov subshift with a locally constant
// observable (letter values), or a hyperbolic torus map with v(x) = cos 2*pi*x
// on the first coordinate.
struct SubshiftDriver {
    enum class Kind { Markov, Doubling, Cat };
    Kind kind = Kind::Doubling;
    subshift::SubshiftSpec markov;
    std::vector<double> letter_values; // Markov observable v(omega) = values[omega_0]
};

struct PotentialSpec {
    Family family = Family::Free;
    int dimension = 1;
    double g = 1.0;
    std::vector<long double> alpha; // frequencies (d entries for d-dim families)
    double xi = 1.0;                // sawtooth Hoelder exponent
    double a_minus = 1.0, a_plus = 1.0;
    SubshiftDriver driver;

    void validate() const;
};

// Phase of a sample: scalar torus point (quasi-periodic families), a subshift
// path, a doubling-map bit stream, or an exact cat-map orbit materialized on
// a site range.
struct TorusPhase {
    long double omega = 0.0L;
};

struct CatPhase {
    std::vector<double> x_values; // first coordinate of T^n omega
    std::int64_t lo = 0;
    double x(std::int64_t n) const {
        if (n < lo || n >= lo + static_cast<std::int64_t>(x_values.size()))
            throw std::out_of_range("CatPhase: site outside materialized orbit");
        return x_values[static_cast<std::size_t>(n - lo)];
    }
};

using Phase = std::variant<std::monostate, TorusPhase, subshift::SymbolicPoint,
                           torus::BitstreamPoint, CatPhase>;

struct MarylandSingularPhase : std::runtime_error {
    explicit MarylandSingularPhase(std::int64_t site)
        : std::runtime_error("Maryland phase within 1e-8 of a tan singularity at n = " +
                             std::to_string(site)),
          n(site) {}
    std::int64_t n;
};

// Draws a phase from the ergodic measure of the family, materialized for all
// sites n with |n|_inf <= radius (quasi-periodic phases need no
// materialization).  Callers resample on MarylandSingularPhase.
Phase sample_phase(const PotentialSpec& spec, RngStream& rng, std::int64_t radius);

// Deterministic phase for quasi-periodic families (used by fixed-omega runs).
Phase fixed_phase(const PotentialSpec& spec, long double omega);

// T^k applied to the phase (d = 1; quasi-periodic phases accept any d via the
// vector overload).
Phase shifted_phase(const PotentialSpec& spec, const Phase& phase,
                    std::span<const std::int64_t> k);

// v(x) = x^xi, the canonical monotone sawtooth sample function.
double default_sawtooth(double x, double xi);

// V(omega, n) at a single site.
double potential_value(const PotentialSpec& spec, const Phase& phase,
                       std::span<const std::int64_t> site);

// V over every site of the box, linearized in box order.
std::vector<double> sample_potential(const PotentialSpec& spec, const Phase& phase,
                                     const lattice::LatticeBox& box);

// d = 1 convenience: V(k), V(k+1), .., V(l).
std::vector<double> potential_sequence(const PotentialSpec& spec, const Phase& phase,
                                       std::int64_t k, std::int64_t l);

} // namespace ergotrope::pot
