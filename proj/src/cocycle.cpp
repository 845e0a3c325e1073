#include "ergotrope/cocycle.hpp"

#include <cassert>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace ergotrope::cocycle {

double Mat2::frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }

double Mat2::spectral_norm() const {
    // singular values from the 2x2 Gram matrix
    double t = a * a + b * b + c * c + d * d;
    double dd = det();
    double disc = t * t - 4.0 * dd * dd;
    if (disc < 0.0) disc = 0.0;
    return std::sqrt(0.5 * (t + std::sqrt(disc)));
}

Mat2 transfer_matrix(double lambda, double v) { return {lambda - v, -1.0, 1.0, 0.0}; }

void CocycleAccumulator::step(double lambda, double v) {
    m_ = transfer_matrix(lambda, v) * m_;
    double f = m_.frobenius();
    m_ = {m_.a / f, m_.b / f, m_.c / f, m_.d / f};
    log_scale_ += std::log(f);
    ++steps_;
}

double CocycleAccumulator::log_norm() const {
    return log_scale_ + std::log(m_.spectral_norm());
}

double CocycleAccumulator::log_det_error() const {
    // det of the stored factor should equal exp(-2 log_scale)
    double logdet_full = std::log(std::fabs(m_.det())) + 2.0 * log_scale_;
    return std::fabs(logdet_full);
}

double cocycle_log_norm(double lambda, std::span<const double> potential) {
    if (potential.empty()) throw std::invalid_argument("cocycle_log_norm: l > k required");
    CocycleAccumulator acc;
    for (double v : potential) acc.step(lambda, v);
    return acc.log_norm();
}

namespace {

// one orbit, with log||Phi_{0,n}|| recorded at the requested checkpoints
struct OrbitResult {
    std::vector<double> log_norms;
    std::int64_t resampled = 0;
};

OrbitResult orbit_log_norms(double lambda, const pot::PotentialSpec& spec,
                            std::span<const std::int64_t> checkpoints, RngStream& rng) {
    std::int64_t n_max = 0;
    for (auto n : checkpoints) n_max = std::max(n_max, n);
    OrbitResult out;
    for (int attempt = 0;; ++attempt) {
        try {
            auto phase = pot::sample_phase(spec, rng, n_max);
            auto v = pot::potential_sequence(spec, phase, 0, n_max - 1);
            CocycleAccumulator acc;
            out.log_norms.clear();
            std::size_t ci = 0;
            for (std::int64_t j = 0; j < n_max; ++j) {
                acc.step(lambda, v[static_cast<std::size_t>(j)]);
                while (ci < checkpoints.size() && checkpoints[ci] == j + 1) {
                    out.log_norms.push_back(acc.log_norm());
                    ++ci;
                }
            }
            return out;
        } catch (const pot::MarylandSingularPhase&) {
            ++out.resampled;
            if (attempt > 200)
                throw std::runtime_error("lyapunov: persistent Maryland singular phases");
        }
    }
}

} // namespace

LyapunovEstimate lyapunov_estimate(double lambda, const pot::PotentialSpec& spec,
                                   std::int64_t n, std::int64_t samples,
                                   std::uint64_t master_seed, std::uint64_t stream_base) {
    if (n < 1 || samples < 1)
        throw std::invalid_argument("lyapunov_estimate: n >= 1, samples >= 1");
    std::int64_t checkpoints[1] = {n};
    double sum = 0.0, sum2 = 0.0;
    std::int64_t resampled = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        RngStream rng(master_seed, stream_base + static_cast<std::uint64_t>(s));
        auto orbit = orbit_log_norms(lambda, spec, checkpoints, rng);
        double gamma = orbit.log_norms[0] / static_cast<double>(n);
        sum += gamma;
        sum2 += gamma * gamma;
        resampled += orbit.resampled;
    }
    LyapunovEstimate est;
    est.samples = samples;
    est.steps = n;
    est.resampled_phases = resampled;
    est.gamma = sum / static_cast<double>(samples);
    if (samples > 1) {
        double var = (sum2 - sum * sum / static_cast<double>(samples)) /
                     static_cast<double>(samples - 1);
        est.stderr_ = std::sqrt(std::max(var, 0.0) / static_cast<double>(samples));
    }
    return est;
}

LyapunovScan lyapunov_scan(const pot::PotentialSpec& spec, std::span<const double> grid,
                           std::int64_t n, std::int64_t samples, std::uint64_t master_seed) {
    LyapunovScan scan;
    scan.samples = samples;
    scan.steps = n;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto est = lyapunov_estimate(grid[i], spec, n, samples, master_seed,
                                     static_cast<std::uint64_t>(i) * 1000003u);
        scan.lambda.push_back(grid[i]);
        scan.gamma.push_back(est.gamma);
        scan.stderr_.push_back(est.stderr_);
    }
    return scan;
}

std::vector<DeviationRow> large_deviation_profile(double lambda,
                                                  const pot::PotentialSpec& spec,
                                                  double eps, double gamma_ref,
                                                  std::span<const std::int64_t> n_list,
                                                  std::int64_t samples,
                                                  std::uint64_t master_seed) {
    if (eps <= 0.0) throw std::invalid_argument("large_deviation_profile: eps > 0");
    std::vector<std::int64_t> ns(n_list.begin(), n_list.end());
    std::sort(ns.begin(), ns.end());
    std::vector<std::int64_t> exceed(ns.size(), 0);
    for (std::int64_t s = 0; s < samples; ++s) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(s));
        auto orbit = orbit_log_norms(lambda, spec, ns, rng);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            double g = orbit.log_norms[i] / static_cast<double>(ns[i]);
            if (std::fabs(g - gamma_ref) > eps) ++exceed[i];
        }
    }
    std::vector<DeviationRow> rows;
    for (std::size_t i = 0; i < ns.size(); ++i)
        rows.push_back({ns[i], static_cast<double>(exceed[i]) / static_cast<double>(samples)});
    return rows;
}

double window_deviation_probability(double lambda, const pot::PotentialSpec& spec,
                                    double eps, double gamma_ref, std::int64_t n,
                                    std::int64_t samples, std::uint64_t master_seed) {
    std::int64_t bad = 0;
    for (std::int64_t s = 0; s < samples; ++s) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(s));
        auto phase = pot::sample_phase(spec, rng, n + 1);
        auto v = pot::potential_sequence(spec, phase, -n, n - 1); // steps k..l-1
        bool exceeded = false;
        for (std::int64_t k = -n; k <= n && !exceeded; ++k) {
            CocycleAccumulator acc;
            for (std::int64_t l = k + 1; l <= n; ++l) {
                acc.step(lambda, v[static_cast<std::size_t>(l - 1 + n)]);
                double dev = std::fabs(acc.log_norm() -
                                       static_cast<double>(l - k) * gamma_ref);
                if (dev >= eps * static_cast<double>(n)) {
                    exceeded = true;
                    break;
                }
            }
        }
        if (exceeded) ++bad;
    }
    return static_cast<double>(bad) / static_cast<double>(samples);
}

std::vector<spectral::EnergyWindow> localized_intervals(const LyapunovScan& scan,
                                                        double gamma_min) {
    std::vector<spectral::EnergyWindow> out;
    std::size_t i = 0;
    while (i < scan.lambda.size()) {
        if (scan.gamma[i] - 2.0 * scan.stderr_[i] >= gamma_min) {
            std::size_t j = i;
            while (j + 1 < scan.lambda.size() &&
                   scan.gamma[j + 1] - 2.0 * scan.stderr_[j + 1] >= gamma_min)
                ++j;
            out.push_back({scan.lambda[i], scan.lambda[j], true, true});
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

double maryland_lyapunov_closed_form(double lambda, double g) {
    if (g == 0.0) throw std::invalid_argument("maryland_lyapunov_closed_form: g != 0");
    double l2 = lambda * lambda, g2 = g * g;
    double bcoef = 4.0 - l2 - g2;
    double s2 = ((l2 + g2 - 4.0) + std::sqrt(bcoef * bcoef + 16.0 * g2)) / 8.0;
    double gamma = std::asinh(std::sqrt(s2));
#ifndef NDEBUG
    std::complex<double> z(lambda, g);
    std::complex<double> root = std::sqrt(z * z - 4.0);
    std::complex<double> eta = 0.5 * (z - root);
    if (std::abs(eta) > 1.0) eta = 0.5 * (z + root);
    assert(std::fabs(-std::log(std::abs(eta)) - gamma) < 1e-10);
#endif
    return gamma;
}

} // namespace ergotrope::cocycle
