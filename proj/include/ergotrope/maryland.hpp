#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

namespace ergotrope::maryland {

// Parameters of the exact 1-d Maryland pipeline: density of states, labelled
// eigenvalues through the inverse IDS, and the eigenfunction profile psi0 by
// torus quadrature.
struct MarylandParams {
    double g = 2.0;
    long double alpha = 0.0L;
    long double omega = 0.0L;
    int quadrature_order = 2048; // trapezoid points (doubled until stable)
    int max_fourier_order = 512; // cap on the t-series truncation
};

// Density of states n(lambda): the average over theta of Cauchy densities
// centered at 2 cos(theta) with scale |g|.
double dos(double lambda, double g);

// Integrated density of states N(lambda) = int_{-inf}^lambda n; strictly
// increasing, N(-inf) = 0, N(+inf) = 1.
double ids(double lambda, double g);

// N^{-1}: bracketed bisection/secant solve of N(lambda) = target to 1e-10.
double ids_inverse(double target, double g);

// Eigenvalue with label l: lambda_l = N^{-1}(frac(omega + l alpha + 1/2)).
// The half-period offset accounts for the tan(pi .) phase convention, whose
// singular site (not its zero) anchors the bottom of the spectrum; it is
// pinned by matching labelled eigenvalues against direct diagonalization.
// Throws when frac(omega + l alpha) sits within 1e-10 of the singularity
// (eigenvalue at infinity).
double label_to_eigenvalue(const MarylandParams& p, std::int64_t l);

struct EtaRoot {
    double gamma = 0.0;            // -log|eta0| > 0
    double phi = 0.0;              // -arg(eta0), normalized to [0, pi]
    std::complex<double> eta0{};   // |eta0| < 1, eta0 + 1/eta0 = lambda + i g
};

EtaRoot eta_root(double lambda, double g);

// l_m = (2i/|m|) e^{-gamma |m|} sin(|m| phi), m != 0
std::complex<double> fourier_coeff_l(std::int64_t m, double lambda, double g);

// t_m = l_m / (1 - e^{2 pi i alpha m}) for 0 < |m| <= M, with M chosen
// adaptively so the dropped tail is below 1e-12.  Throws naming the resonant
// m when a denominator falls below 1e-12.
struct TCoefficients {
    int M = 0;
    std::vector<std::complex<double>> t; // index m + M, m in [-M, M]; t[M] = 0
    std::complex<double> at(std::int64_t m) const { return t[static_cast<std::size_t>(m + M)]; }
};

TCoefficients t_coefficients(const MarylandParams& p, double lambda);

// psi0(lambda, n) for all n in [n_lo, n_hi] by one spectrally-accurate torus
// quadrature; normalized so that sum_n |psi0|^2 = 1.
std::vector<std::complex<double>> psi0_range(const MarylandParams& p, double lambda,
                                             std::int64_t n_lo, std::int64_t n_hi);

std::complex<double> psi0(const MarylandParams& p, double lambda, std::int64_t n);

} // namespace ergotrope::maryland
