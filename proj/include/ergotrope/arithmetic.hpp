#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ergotrope::arith {

// Convergent p_k/q_k of a regular continued fraction.
struct Convergent {
    std::int64_t p = 0;
    std::int64_t q = 1;
};

// A frequency alpha in (0,1), kept at x86 extended precision so continued
// fraction expansions stay clean well past 25 convergents (double precision
// corrupts q_n beyond q_n ~ 1e7; extended is good to q_n ~ 1e18).
class Frequency {
public:
    explicit Frequency(long double value);

    long double value() const { return value_; }

    // First K convergents (starting from p_0/q_0 = 0/1).  If the value is
    // indistinguishable from a rational at working precision the list stops
    // early and rational() reports true.
    std::span<const Convergent> convergents(int K) const;

    bool rational() const { return rational_; }

    // Named frequencies used throughout the experiments.
    static Frequency golden();        // (sqrt(5)-1)/2
    static Frequency sqrt2_minus_1(); // sqrt(2)-1
    static Frequency e_minus_2();     // e-2

private:
    long double value_;
    mutable std::vector<Convergent> conv_;
    mutable bool rational_ = false;
    mutable bool exhausted_ = false;

    void extend(int K) const;
};

// Finite-K estimate of beta(alpha) = limsup log(q_{n+1})/q_n: the max of
// log(q_{k+1})/q_k over the available convergents.  `tail` (optional, may be
// null) receives the last three terms so callers can see the trend.
// Throws if alpha is rational (beta undefined).
double beta_irrationality(const Frequency& alpha, int K,
                          std::vector<double>* tail = nullptr);

// Same estimate over an explicit convergent ladder (synthetic q-sequences).
double beta_irrationality(std::span<const Convergent> convergents,
                          std::vector<double>* tail = nullptr);

// min over 0 < |n| <= N of |n|^tau * dist(<n,alpha>, Z), for a scalar alpha.
double diophantine_margin(const Frequency& alpha, double tau, std::int64_t N);

// Multidimensional version: n ranges over the l1 ball 0 < |n|_1 <= N.
double diophantine_margin(std::span<const long double> alpha, double tau,
                          std::int64_t N);

// dist(x, Z) = |x - round(x)|
long double dist_to_integers(long double x);

// frac(omega + n*alpha) in [0,1), evaluated in extended precision so phases
// stay accurate to ~1e-12 over large |n|.
double torus_phase(long double omega, long double alpha, std::int64_t n);

// frac(omega + <n,alpha>) for d-dimensional frequency vectors.
double torus_phase(long double omega, std::span<const long double> alpha,
                   std::span<const std::int64_t> n);

} // namespace ergotrope::arith
