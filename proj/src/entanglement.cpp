#include "ergotrope/entanglement.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ergotrope::ent {

namespace {

// entropy of the spectrum of a block projection, with the [0,1] clamp
double entropy_from_mus(std::span<const double> mus) {
    double s = 0.0;
    for (double mu : mus) {
        if (mu < -1e-6 || mu > 1.0 + 1e-6)
            throw std::runtime_error("entropy_of_block: block eigenvalue " +
                                     std::to_string(mu) + " outside [0,1]; projection invalid");
        s += binary_entropy(std::min(1.0, std::max(0.0, mu)));
    }
    return s;
}

// centered block of side L (lo = -floor(L/2) per axis)
lattice::LatticeBox centered_block(int dim, std::int64_t L) {
    lattice::LatticeBox b;
    b.lo.assign(dim, -(L / 2));
    b.hi.assign(dim, -(L / 2) + L - 1);
    return b;
}

std::int64_t box_radius(const lattice::LatticeBox& b) {
    std::int64_t r = 0;
    for (int j = 0; j < b.dim(); ++j)
        r = std::max({r, static_cast<std::int64_t>(std::llabs(b.lo[j])),
                      static_cast<std::int64_t>(std::llabs(b.hi[j]))});
    return r;
}

// run f(sample_index) over a pool; exceptions resurface on the caller
template <typename F>
void parallel_samples(std::int64_t samples, int jobs, F&& f) {
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(samples)));
    if (jobs == 1) {
        for (std::int64_t s = 0; s < samples; ++s) f(s);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t s = next.fetch_add(1);
                if (s >= samples) return;
                try {
                    f(s);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

struct Ols {
    double slope = 0.0, intercept = 0.0, r2 = 0.0, slope_se = 0.0;
};

// plain least squares; constant y reports slope 0 with r2 = 0
Ols ols_fit(std::span<const double> x, std::span<const double> y) {
    auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    Ols fit;
    fit.intercept = my;
    if (syy <= 0.0 || sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += r * r;
    }
    fit.r2 = 1.0 - ssr / syy;
    if (x.size() > 2) fit.slope_se = std::sqrt(ssr / (n - 2.0) / sxx);
    return fit;
}

struct MeanStderr {
    double mean = 0.0, se = 0.0;
};

MeanStderr reduce(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    MeanStderr out;
    auto n = static_cast<double>(xs.size());
    out.mean = sum / n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

// phase drawn from the stream, resampled past Maryland singularities
pot::Phase usable_phase(const pot::PotentialSpec& spec, RngStream& rng,
                        std::int64_t radius, const lattice::LatticeBox& host,
                        std::int64_t& resample_count) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        auto phase = pot::sample_phase(spec, rng, radius);
        try {
            pot::sample_potential(spec, phase, host); // singularity check over the box
            return phase;
        } catch (const pot::MarylandSingularPhase&) {
            ++resample_count;
        }
    }
    throw std::runtime_error("entropy study: persistent Maryland singular phases");
}

} // namespace

double binary_entropy(double x) {
    if (x < -1e-9 || x > 1.0 + 1e-9)
        throw std::invalid_argument("binary_entropy: x = " + std::to_string(x) +
                                    " outside the clamp band");
    x = std::min(1.0, std::max(0.0, x));
    double s = 0.0;
    if (x > 0.0) s -= x * std::log(x);
    if (x < 1.0) s -= (1.0 - x) * std::log(1.0 - x);
    return s;
}

double entropy_of_block(const spectral::ProjectionMatrix& P, const lattice::LatticeBox& block) {
    if (!P.box.contains(block))
        throw std::invalid_argument("entropy_of_block: block not inside the projection box");
    std::int64_t m = block.size();
    auto sub = linalg::DenseSym::zero(static_cast<int>(m));
    std::vector<std::int64_t> rows(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i)
        rows[static_cast<std::size_t>(i)] = P.box.index_of(block.site_of(i));
    for (std::int64_t i = 0; i < m; ++i)
        for (std::int64_t j = 0; j < m; ++j)
            sub.at(static_cast<int>(i), static_cast<int>(j)) =
                P.mat.at(static_cast<int>(rows[static_cast<std::size_t>(i)]),
                         static_cast<int>(rows[static_cast<std::size_t>(j)]));
    return entropy_from_mus(linalg::dense_eigen(sub).values);
}

double entropy_of_block(const spectral::Spectrum& spec, double fermi_energy,
                        const lattice::LatticeBox& block) {
    auto sub = spectral::fermi_projection_block(spec, fermi_energy, block);
    return entropy_from_mus(linalg::dense_eigen(sub).values);
}

EntropyCurve entropy_scaling_study(const pot::PotentialSpec& spec,
                                   const lattice::KernelSpec& kernel, double fermi_energy,
                                   std::span<const std::int64_t> L_list, HostMargin margin,
                                   std::int64_t samples, std::uint64_t master_seed,
                                   int jobs) {
    if (L_list.empty() || samples < 1)
        throw std::invalid_argument("entropy_scaling_study: need blocks and samples");
    std::vector<std::int64_t> Ls(L_list.begin(), L_list.end());
    std::sort(Ls.begin(), Ls.end());
    std::int64_t max_L = Ls.back();
    std::int64_t m = margin.resolve(max_L);

    lattice::LatticeBox host = centered_block(spec.dimension, max_L);
    for (int j = 0; j < spec.dimension; ++j) {
        host.lo[j] -= m;
        host.hi[j] += m;
    }
    std::int64_t radius = box_radius(host) + 1;

    std::vector<std::vector<double>> S(Ls.size(),
                                       std::vector<double>(static_cast<std::size_t>(samples)));
    std::vector<std::int64_t> resamples(static_cast<std::size_t>(samples), 0);

    parallel_samples(samples, jobs, [&](std::int64_t s) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(s));
        auto phase = usable_phase(spec, rng, radius, host,
                                  resamples[static_cast<std::size_t>(s)]);
        auto H = lattice::build_hamiltonian(spec, phase, host, kernel);
        auto spectrum = spectral::decompose(H);
        for (std::size_t li = 0; li < Ls.size(); ++li)
            S[li][static_cast<std::size_t>(s)] =
                entropy_of_block(spectrum, fermi_energy, centered_block(spec.dimension, Ls[li]));
    });

    EntropyCurve curve;
    curve.samples = samples;
    curve.fermi_energy = fermi_energy;
    for (auto r : resamples) curve.resampled_phases += r;
    for (std::size_t li = 0; li < Ls.size(); ++li) {
        auto ms = reduce(S[li]);
        curve.L.push_back(Ls[li]);
        curve.mean_S.push_back(ms.mean);
        curve.stderr_S.push_back(ms.se);
    }
    return curve;
}

DecayFit decay_fit(std::span<const double> distances, std::span<const double> values,
                   double range_lo, double range_hi) {
    if (distances.size() != values.size())
        throw std::invalid_argument("decay_fit: size mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (distances[i] < range_lo || distances[i] > range_hi) continue;
        if (!(values[i] > 1e-30)) continue;
        x.push_back(distances[i]);
        y.push_back(std::log(values[i]));
    }
    if (x.size() < 5)
        throw std::invalid_argument("decay_fit: fewer than 5 usable points in range");
    auto o = ols_fit(x, y);
    DecayFit fit;
    fit.points = static_cast<int>(x.size());
    fit.range_lo = range_lo;
    fit.range_hi = range_hi;
    fit.slope = o.slope;
    fit.intercept = o.intercept;
    fit.r2 = o.r2;
    fit.slope_stderr = o.slope_se;
    return fit;
}

DecayStudy projection_decay_study(const pot::PotentialSpec& spec,
                                  const lattice::KernelSpec& kernel, double fermi_energy,
                                  std::optional<spectral::EnergyWindow> window,
                                  std::span<const std::int64_t> distances,
                                  std::int64_t host_margin, std::int64_t samples,
                                  std::uint64_t master_seed, int jobs) {
    if (distances.empty() || samples < 1)
        throw std::invalid_argument("projection_decay_study: need distances and samples");
    if (spec.dimension != 1)
        throw std::invalid_argument("projection_decay_study: 1-d hosts");
    std::vector<std::int64_t> ds(distances.begin(), distances.end());
    std::sort(ds.begin(), ds.end());
    std::int64_t R = ds.back() + host_margin;
    auto host = lattice::LatticeBox::interval(-R, R);

    spectral::EnergyWindow I =
        window.value_or(spectral::EnergyWindow{-1e300, fermi_energy, true, false});

    std::vector<std::vector<double>> absP(ds.size(),
                                          std::vector<double>(static_cast<std::size_t>(samples)));
    auto Qv = absP;
    std::vector<std::int64_t> resamples(static_cast<std::size_t>(samples), 0);

    parallel_samples(samples, jobs, [&](std::int64_t s) {
        RngStream rng(master_seed, static_cast<std::uint64_t>(s));
        auto phase = usable_phase(spec, rng, R + 1, host, resamples[static_cast<std::size_t>(s)]);
        auto H = lattice::build_hamiltonian(spec, phase, host, kernel);
        auto spectrum = spectral::decompose(H);
        const auto& eig = spectrum.eig;
        int n = eig.n;
        int row0 = static_cast<int>(-host.lo[0]); // site 0
        int rank = 0;
        while (rank < n && eig.values[static_cast<std::size_t>(rank)] <= fermi_energy) ++rank;
        for (std::size_t di = 0; di < ds.size(); ++di) {
            int rowd = static_cast<int>(ds[di] - host.lo[0]);
            double p = 0.0, q = 0.0;
            for (int k = 0; k < n; ++k) {
                double lam = eig.values[static_cast<std::size_t>(k)];
                double prod = eig.vec(row0, k) * eig.vec(rowd, k);
                if (k < rank) p += prod;
                if (I.contains(lam)) q += std::fabs(prod);
            }
            absP[di][static_cast<std::size_t>(s)] = std::fabs(p);
            Qv[di][static_cast<std::size_t>(s)] = q;
        }
    });

    DecayStudy study;
    study.samples = samples;
    study.window = I;
    for (auto r : resamples) study.resampled_phases += r;
    std::vector<double> dist_d, meanP, meanQ;
    for (std::size_t di = 0; di < ds.size(); ++di) {
        auto mp = reduce(absP[di]);
        auto mq = reduce(Qv[di]);
        study.distances.push_back(ds[di]);
        study.mean_absP.push_back(mp.mean);
        study.stderr_absP.push_back(mp.se);
        study.mean_Q.push_back(mq.mean);
        study.stderr_Q.push_back(mq.se);
        dist_d.push_back(static_cast<double>(ds[di]));
    }
    double lo = dist_d.front(), hi = dist_d.back();
    study.fit_P = decay_fit(dist_d, study.mean_absP, lo, hi);
    study.fit_Q = decay_fit(dist_d, study.mean_Q, lo, hi);
    return study;
}

ScalingFit area_law_fit(const EntropyCurve& curve, int dimension,
                        const ScalingThresholds& th) {
    if (curve.L.size() < 4)
        throw std::invalid_argument("area_law_fit: need at least 4 block sizes");
    double span = static_cast<double>(curve.L.back()) / static_cast<double>(curve.L.front());
    if (span < 4.0)
        throw std::invalid_argument("area_law_fit: block sizes must span a factor >= 4");

    auto fit_against_logL = [&](int power) {
        // least squares of S/L^power against ln L
        std::vector<double> x, y;
        for (std::size_t i = 0; i < curve.L.size(); ++i) {
            double Lp = std::pow(static_cast<double>(curve.L[i]), power);
            x.push_back(std::log(static_cast<double>(curve.L[i])));
            y.push_back(curve.mean_S[i] / Lp);
        }
        auto o = ols_fit(x, y);
        DecayFit fit;
        fit.points = static_cast<int>(x.size());
        fit.range_lo = x.front();
        fit.range_hi = x.back();
        fit.slope = o.slope;
        fit.intercept = o.intercept;
        fit.r2 = o.r2;
        fit.slope_stderr = o.slope_se;
        return fit;
    };

    ScalingFit out;
    out.area_fit = fit_against_logL(dimension - 1);
    out.volume_fit = fit_against_logL(dimension);

    const DecayFit& af = out.area_fit;
    bool ci_contains_zero = std::fabs(af.slope) <= 2.0 * af.slope_stderr + 1e-15;
    if (std::fabs(af.slope) <= th.area_slope_tol && ci_contains_zero) {
        out.verdict = ScalingVerdict::Area;
        return out;
    }
    if (af.slope > 0.0 && af.r2 >= th.enhanced_r2_min) {
        out.verdict = ScalingVerdict::EnhancedArea;
        return out;
    }
    double mean_ratio = 0.0;
    for (std::size_t i = 0; i < curve.L.size(); ++i)
        mean_ratio += curve.mean_S[i] / std::pow(static_cast<double>(curve.L[i]), dimension);
    mean_ratio /= static_cast<double>(curve.L.size());
    if (mean_ratio > 0.0 &&
        std::fabs(out.volume_fit.slope) <= th.volume_rel_tol * mean_ratio) {
        out.verdict = ScalingVerdict::Volume;
        return out;
    }
    out.verdict = ScalingVerdict::Undetermined;
    return out;
}

std::string to_string(ScalingVerdict v) {
    switch (v) {
        case ScalingVerdict::Area: return "Area";
        case ScalingVerdict::EnhancedArea: return "EnhancedArea";
        case ScalingVerdict::Volume: return "Volume";
        case ScalingVerdict::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

} // namespace ergotrope::ent
