#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ergotrope/rng.hpp"

namespace ergotrope::subshift {

// Subshift of finite type with a compatible Markov measure.  Letters are
// 0-based indices into the alphabet {0, .., k-1}.  Convention: P is
// row-stochastic and the stationary vector satisfies p P = p.
struct SubshiftSpec {
    int k = 0;
    std::vector<int> adjacency;      // k*k, entries {0,1}; A[i*k+j]
    std::vector<double> transition;  // k*k row-stochastic; P[i*k+j]
    std::vector<double> stationary;  // p, positive, sums to 1

    int A(int i, int j) const { return adjacency[static_cast<std::size_t>(i) * k + j]; }
    double P(int i, int j) const { return transition[static_cast<std::size_t>(i) * k + j]; }

    // Builds a validated spec from a transition matrix: derives the adjacency
    // pattern and computes the stationary vector.  Throws on non-stochastic
    // rows, reducibility, or periodicity.
    static SubshiftSpec from_transition(int k, std::span<const double> P);

    static SubshiftSpec full_shift(int k); // P == 1/k everywhere
};

// p with p P = p, sum p = 1, residual <= 1e-12, via damped power iteration.
std::vector<double> stationary_distribution(int k, std::span<const double> P);

// P^m by repeated squaring (k x k row-major).
std::vector<double> matrix_power(int k, std::span<const double> P, std::int64_t m);

struct Cylinder {
    std::int64_t base = 0;
    std::vector<int> word;
};

// nu([base; a_0..a_m]) = p_{a0} P_{a0 a1} ... ; exactly 0 on words that
// violate the adjacency pattern.  Shift invariant (independent of base).
double cylinder_measure(const SubshiftSpec& spec, const Cylinder& cyl);

// nu(cyl1 cap cyl2) / (nu(cyl1) nu(cyl2)) for cylinders with disjoint
// supports (cyl2 strictly to the right), computed exactly through the Markov
// bridge (P^gap)_{a_j b_0} / p_{b_0}.  Empty intersection returns 0 and sets
// *empty_intersection when provided.
double bounded_distortion_ratio(const SubshiftSpec& spec, const Cylinder& cyl1,
                                const Cylinder& cyl2,
                                bool* empty_intersection = nullptr);

// A two-sided point of the subshift, materialized on a finite window.
class SymbolicPoint {
public:
    SymbolicPoint(std::vector<int> letters, std::int64_t lo)
        : letters_(std::move(letters)), lo_(lo) {}

    std::int64_t lo() const { return lo_; }
    std::int64_t hi() const { return lo_ + static_cast<std::int64_t>(letters_.size()) - 1; }
    int letter(std::int64_t n) const;
    bool covers(std::int64_t a, std::int64_t b) const { return lo() <= a && b <= hi(); }

    // T^k omega (the left shift: (T omega)_n = omega_{n+1})
    SymbolicPoint shifted(std::int64_t k) const { return {letters_, lo_ - k}; }

private:
    std::vector<int> letters_;
    std::int64_t lo_;
};

// Stationary two-sided sample on the window [-W, W]: omega_0 from p, forward
// symbols by rows of P, backward symbols by the reversed chain
// Phat_ij = p_j P_ji / p_i.
SymbolicPoint sample_path(const SubshiftSpec& spec, RngStream& rng, std::int64_t W);

// d(omega, tilde) = e^{-N}, N = max{M >= 0 : agreement for |n| <= M};
// 0 when the points agree on the whole compared range (certified only up to
// that range); e (N = -1) when they already differ at n = 0.  Throws if the
// common materialized radius is below min_radius without a disagreement.
double shift_metric(const SymbolicPoint& a, const SymbolicPoint& b,
                    std::int64_t min_radius = 0);

// The cutoff construction: agree with omega on |m| <= n, continued outward by
// the successor rule q (A_{p,q(p)} = 1 required).
SymbolicPoint truncate_environment(const SymbolicPoint& omega, std::int64_t n,
                                   std::span<const int> successor);

// q(p) = first letter allowed after p.
std::vector<int> default_successor(const SubshiftSpec& spec);

} // namespace ergotrope::subshift
