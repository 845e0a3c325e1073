#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ergotrope/lattice.hpp"
#include "ergotrope/linalg.hpp"

namespace ergotrope::spectral {

struct EnergyWindow {
    double lo = 0.0, hi = 0.0;
    bool closed_lo = true, closed_hi = true;

    bool contains(double x) const {
        if (x < lo || x > hi) return false;
        if (x == lo && !closed_lo) return false;
        if (x == hi && !closed_hi) return false;
        return true;
    }
    double width() const { return hi - lo; }
};

// Eigendecomposition of a finite-volume operator together with its box.
struct Spectrum {
    linalg::EigenDecomposition eig;
    lattice::LatticeBox box;

    std::int64_t index_of(std::span<const std::int64_t> site) const { return box.index_of(site); }
};

Spectrum decompose(const lattice::LatticeOperator& H);

// Fermi projection P = sum_{lambda_l <= eF} psi_l psi_l^T.
struct ProjectionMatrix {
    linalg::DenseSym mat;
    lattice::LatticeBox box;
    int rank = 0;
    double fermi_energy = 0.0;

    // max violation among {||P^2-P||, asymmetry, eigenvalue range}; test hook
    double validate() const;
};

ProjectionMatrix fermi_projection(const Spectrum& spec, double fermi_energy);

// Entries of P on a sub-box only (same numbers as restricting the full
// projection; avoids forming the host-sized matrix).
linalg::DenseSym fermi_projection_block(const Spectrum& spec, double fermi_energy,
                                        const lattice::LatticeBox& sub, int* rank = nullptr);

// Q_I(m,n) = sum_{lambda_l in I} |psi_l(m)| |psi_l(n)|
struct CorrelatorMatrix {
    linalg::DenseSym mat;
    lattice::LatticeBox box;
    EnergyWindow window;
};

CorrelatorMatrix eigenfunction_correlator(const Spectrum& spec, const EnergyWindow& I);

// (H - lambda)^{-1}(k, l) through a shifted solve; k, l are 1-d sites.
double green_entry(const lattice::LatticeOperator& H, double lambda, std::int64_t k,
                   std::int64_t l);

struct SignedLogMag {
    int sign = 1;       // 0 marks an exact zero
    double log_abs = 0; // -inf for an exact zero
};

// |G(k,l)| from the three restricted determinants (Cramer), in log space:
// G(k,l) = (-1)^{k+l} (prod off-diagonals between k and l)
//          det(T^{[a,k-1]}-lambda) det(T^{[l+1,b]}-lambda) / det(T-lambda).
SignedLogMag green_via_determinants(const linalg::SymTridiag& T, double lambda,
                                    std::int64_t k, std::int64_t l);

// Bad(M, eps): resolvent of the centered box reaches its edges, i.e.
// max(|G(c, c+n)|, |G(c, c-n)|) >= eps; an exact eigenvalue hit counts as bad.
bool bad_membership(const lattice::LatticeOperator& H_box, double lambda, double eps);

// Same with an explicit reference site (for near-centered boxes [c-n+i, c+n-j]).
bool bad_membership(const lattice::LatticeOperator& H_box, double lambda, double eps,
                    std::int64_t reference_site);

// Res(M, eps): dist(lambda, spectrum) <= eps.
bool res_membership(const lattice::LatticeOperator& H_box, double lambda, double eps);
bool res_membership(std::span<const double> eigenvalues, double lambda, double eps);

// max over the sampled times of |sum_{lambda_l in I} e^{-it lambda_l}
// psi_l(m) psi_l(n)|; a lower bound for the sup over all t, and always
// <= Q_I(m,n).  m, n are row indices into the decomposition.
double dynamical_amplitude(const linalg::EigenDecomposition& eig, const EnergyWindow& I,
                           int m, int n, std::span<const double> times);

// logarithmic ladder {dt 2^j} merged with a linear grid up to t_max
std::vector<double> default_time_grid(double dt = 0.05, double t_max = 200.0,
                                      int linear_points = 512);

EnergyWindow spectrum_hull(const linalg::EigenDecomposition& eig);

// argmax |psi(m)|, ties to the smallest site
std::int64_t localization_center(std::span<const double> psi, std::int64_t index_offset);

} // namespace ergotrope::spectral
