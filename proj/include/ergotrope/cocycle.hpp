#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ergotrope/potentials.hpp"
#include "ergotrope/spectral.hpp"

namespace ergotrope::cocycle {

// 2x2 real matrix, row-major
struct Mat2 {
    double a = 1, b = 0, c = 0, d = 1;

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
    }
    double det() const { return a * d - b * c; }
    double frobenius() const;
    double spectral_norm() const; // largest singular value, closed form
};

// one-step transfer matrix [[lambda - v, -1], [1, 0]]
Mat2 transfer_matrix(double lambda, double v);

// Running product A(v_{m-1}) ... A(v_0) with per-step renormalization; the
// stored factor stays O(1) while the log of the removed scale accumulates,
// so products of length up to ~1e8 neither overflow nor lose the exponent.
class CocycleAccumulator {
public:
    void step(double lambda, double v);
    double log_norm() const; // log of the spectral norm of the full product
    double log_det_error() const;
    std::int64_t steps() const { return steps_; }

private:
    Mat2 m_;
    double log_scale_ = 0.0;
    std::int64_t steps_ = 0;
};

// log ||A(v_{l-1}) ... A(v_k)|| for the potential values v[0..l-k-1]
double cocycle_log_norm(double lambda, std::span<const double> potential);

struct LyapunovEstimate {
    double gamma = 0.0;
    double stderr_ = 0.0;
    std::int64_t samples = 0;
    std::int64_t steps = 0;
    std::int64_t resampled_phases = 0;
};

// Monte Carlo gamma(lambda) = E{(1/n) log||Phi_{0,n}||} over phases drawn
// from the family's ergodic measure.  Maryland singular phases are resampled
// (counted in the result).
LyapunovEstimate lyapunov_estimate(double lambda, const pot::PotentialSpec& spec,
                                   std::int64_t n, std::int64_t samples,
                                   std::uint64_t master_seed, std::uint64_t stream_base = 0);

struct LyapunovScan {
    std::vector<double> lambda;
    std::vector<double> gamma;
    std::vector<double> stderr_;
    std::int64_t samples = 0;
    std::int64_t steps = 0;
};

LyapunovScan lyapunov_scan(const pot::PotentialSpec& spec, std::span<const double> grid,
                           std::int64_t n, std::int64_t samples, std::uint64_t master_seed);

struct DeviationRow {
    std::int64_t n = 0;
    double tail_probability = 0.0;
};

// Per n in n_list: fraction of sampled phases with
// |n^{-1} log||Phi_{0,n}|| - gamma_ref| > eps.
std::vector<DeviationRow> large_deviation_profile(double lambda,
                                                  const pot::PotentialSpec& spec,
                                                  double eps, double gamma_ref,
                                                  std::span<const std::int64_t> n_list,
                                                  std::int64_t samples,
                                                  std::uint64_t master_seed);

// Windowed variant (all -n <= k <= l <= n against (l-k) gamma_ref with
// threshold eps*n); O(n^2) per sample, intended for modest n.
double window_deviation_probability(double lambda, const pot::PotentialSpec& spec,
                                    double eps, double gamma_ref, std::int64_t n,
                                    std::int64_t samples, std::uint64_t master_seed);

// Maximal grid sub-intervals where gamma - 2 stderr >= gamma_min; the
// empirical stand-in for the uniformly-positive-Lyapunov region.
std::vector<spectral::EnergyWindow> localized_intervals(const LyapunovScan& scan,
                                                        double gamma_min);

// Closed-form Maryland Lyapunov exponent: gamma = arcsinh(s) with s the
// positive root of 4 s^4 + (4 - lambda^2 - g^2) s^2 - g^2 = 0.  Equivalent
// route: gamma = -log|eta0| for the root of eta + 1/eta = lambda + i g with
// |eta0| < 1; debug builds check the two against each other at every call.
// At lambda = 0 this reduces to arcsinh(|g|/2).
double maryland_lyapunov_closed_form(double lambda, double g);

} // namespace ergotrope::cocycle
