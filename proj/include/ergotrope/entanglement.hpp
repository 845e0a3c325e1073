#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergotrope/lattice.hpp"
#include "ergotrope/spectral.hpp"

namespace ergotrope::ent {

// h(x) = -x ln x - (1-x) ln(1-x) (natural log; h(0) = h(1) = 0).  Accepts a
// 1e-9 clamp band around [0,1] for eigenvalue noise and rejects anything
// further out.
double binary_entropy(double x);

// S_Lambda = sum_j h(mu_j) over the eigenvalues of the block restriction of
// the projection, clamped to [0,1]; clamp violations beyond 1e-6 throw.
double entropy_of_block(const spectral::ProjectionMatrix& P, const lattice::LatticeBox& block);

// Same numbers without forming the host-sized projection.
double entropy_of_block(const spectral::Spectrum& spec, double fermi_energy,
                        const lattice::LatticeBox& block);

struct EntropyCurve {
    std::vector<std::int64_t> L;
    std::vector<double> mean_S;
    std::vector<double> stderr_S;
    std::int64_t samples = 0;
    double fermi_energy = 0.0;
    std::int64_t resampled_phases = 0;
};

// Host margin: either absolute sites or a multiple of the largest block side.
struct HostMargin {
    double multiplier = 2.0; // margin = multiplier * max(L) when sites == 0
    std::int64_t sites = 0;

    std::int64_t resolve(std::int64_t max_L) const {
        return sites > 0 ? sites
                         : static_cast<std::int64_t>(multiplier * static_cast<double>(max_L));
    }
};

// Monte Carlo E{S_Lambda(L)} over the family's ergodic measure: per sample
// one host diagonalization (side max(L) + 2 margin, blocks centered), then
// one block restriction per L.  Deterministic for a fixed master seed; the
// Maryland singular-phase resamples are counted.
EntropyCurve entropy_scaling_study(const pot::PotentialSpec& spec,
                                   const lattice::KernelSpec& kernel, double fermi_energy,
                                   std::span<const std::int64_t> L_list, HostMargin margin,
                                   std::int64_t samples, std::uint64_t master_seed,
                                   int jobs = 1);

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double slope_stderr = 0.0;
    int points = 0;
    double range_lo = 0.0, range_hi = 0.0;
};

// Least-squares line on (distance, ln value) for values > 1e-30 inside the
// range; needs >= 5 usable points.  A constant series reports slope 0 and
// r2 = 0.
DecayFit decay_fit(std::span<const double> distances, std::span<const double> values,
                   double range_lo, double range_hi);

struct DecayStudy {
    std::vector<std::int64_t> distances;
    std::vector<double> mean_absP, stderr_absP;
    std::vector<double> mean_Q, stderr_Q;
    DecayFit fit_P, fit_Q;
    spectral::EnergyWindow window; // window used for Q
    std::int64_t samples = 0;
    std::int64_t resampled_phases = 0;
};

// Monte Carlo means of |P(0,n)| and Q_I(0,n) with exponential fits attached.
// If `window` is absent, Q uses I = [hull_lo, fermi_energy).
DecayStudy projection_decay_study(const pot::PotentialSpec& spec,
                                  const lattice::KernelSpec& kernel, double fermi_energy,
                                  std::optional<spectral::EnergyWindow> window,
                                  std::span<const std::int64_t> distances,
                                  std::int64_t host_margin, std::int64_t samples,
                                  std::uint64_t master_seed, int jobs = 1);

enum class ScalingVerdict { Area, EnhancedArea, Volume, Undetermined };

struct ScalingThresholds {
    double area_slope_tol = 0.02;  // |slope of S/L^{d-1} vs ln L| below this, CI must contain 0
    double enhanced_r2_min = 0.9;  // positive slope with at least this r2
    double volume_rel_tol = 0.02;  // |slope of S/L^d vs ln L| <= tol * mean
};

struct ScalingFit {
    ScalingVerdict verdict = ScalingVerdict::Undetermined;
    DecayFit area_fit;    // S/L^{d-1} against ln L
    DecayFit volume_fit;  // S/L^d against ln L
};

ScalingFit area_law_fit(const EntropyCurve& curve, int dimension,
                        const ScalingThresholds& thresholds = {});

std::string to_string(ScalingVerdict v);

} // namespace ergotrope::ent
