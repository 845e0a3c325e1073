#include "ergotrope/harness/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <json.hpp>

#include "ergotrope/cocycle.hpp"
#include "ergotrope/entanglement.hpp"
#include "ergotrope/maryland.hpp"
#include "ergotrope/spectral.hpp"
#include "ergotrope/subshift.hpp"

namespace ergotrope::harness {

const char* kVersion = "ergotrope 1.0.0";

namespace {

using json = nlohmann::ordered_json;

struct Artifacts {
    std::vector<std::pair<std::string, std::string>> files; // name -> bytes
    void add(const std::string& name, const std::string& bytes) {
        files.emplace_back(name, bytes);
    }
};

int effective_jobs(const ExperimentConfig& cfg) {
    if (cfg.jobs > 0) return cfg.jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename F>
void parallel_indices(std::int64_t count, int jobs, F&& f) {
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (jobs == 1) {
        for (std::int64_t i = 0; i < count; ++i) f(i);
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex mtx;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(mtx);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

json fit_to_json(const ent::DecayFit& f) {
    return json{{"slope", f.slope},
                {"intercept", f.intercept},
                {"r2", f.r2},
                {"slope_stderr", f.slope_stderr},
                {"points", f.points},
                {"range", {f.range_lo, f.range_hi}}};
}

// ---------------------------------------------------------------- entropy

void run_entropy_scaling(const ExperimentConfig& cfg, Artifacts& art, std::int64_t& tasks) {
    auto curve = ent::entropy_scaling_study(cfg.potential, cfg.kernel, cfg.fermi_energy,
                                            cfg.L_list, cfg.host_margin, cfg.samples,
                                            cfg.seed, effective_jobs(cfg));
    tasks = cfg.samples;
    CsvWriter csv({"L", "mean_S", "stderr", "samples"});
    for (std::size_t i = 0; i < curve.L.size(); ++i)
        csv.row({std::to_string(curve.L[i]), format_double(curve.mean_S[i]),
                 format_double(curve.stderr_S[i]), std::to_string(curve.samples)});
    art.add("entropy_curve.csv", csv.body());

    json verdict;
    try {
        auto fit = ent::area_law_fit(curve, cfg.potential.dimension, cfg.thresholds);
        verdict = json{{"verdict", ent::to_string(fit.verdict)},
                       {"area_fit", fit_to_json(fit.area_fit)},
                       {"volume_fit", fit_to_json(fit.volume_fit)}};
    } catch (const std::invalid_argument& ex) {
        verdict = json{{"verdict", "Undetermined"}, {"note", ex.what()}};
    }
    verdict["resampled_phases"] = curve.resampled_phases;
    art.add("verdict.json", verdict.dump(2) + "\n");
}

// ------------------------------------------------------------------ decay

void run_projection_decay(const ExperimentConfig& cfg, Artifacts& art, std::int64_t& tasks) {
    auto study = ent::projection_decay_study(
        cfg.potential, cfg.kernel, cfg.fermi_energy, cfg.window, cfg.distances,
        cfg.host_margin.sites > 0 ? cfg.host_margin.sites : 20, cfg.samples, cfg.seed,
        effective_jobs(cfg));
    tasks = cfg.samples;
    CsvWriter csv({"n", "mean_absP", "stderr_absP", "mean_Q", "stderr_Q"});
    for (std::size_t i = 0; i < study.distances.size(); ++i)
        csv.row({std::to_string(study.distances[i]), format_double(study.mean_absP[i]),
                 format_double(study.stderr_absP[i]), format_double(study.mean_Q[i]),
                 format_double(study.stderr_Q[i])});
    art.add("decay.csv", csv.body());
    json fits{{"P", fit_to_json(study.fit_P)},
              {"Q", fit_to_json(study.fit_Q)},
              {"window", {study.window.lo, study.window.hi}},
              {"samples", study.samples},
              {"resampled_phases", study.resampled_phases}};
    art.add("fits.json", fits.dump(2) + "\n");
}

// ------------------------------------------------------------------- scan

void run_lyapunov_scan(const ExperimentConfig& cfg, Artifacts& art, std::int64_t& tasks) {
    if (cfg.lambda_points < 2) throw ConfigError({"lambda_points: need >= 2"});
    std::vector<double> grid(static_cast<std::size_t>(cfg.lambda_points));
    for (int i = 0; i < cfg.lambda_points; ++i)
        grid[static_cast<std::size_t>(i)] =
            cfg.lambda_min + (cfg.lambda_max - cfg.lambda_min) * i / (cfg.lambda_points - 1);

    cocycle::LyapunovScan scan;
    scan.samples = cfg.samples;
    scan.steps = cfg.steps;
    scan.lambda = grid;
    scan.gamma.assign(grid.size(), 0.0);
    scan.stderr_.assign(grid.size(), 0.0);
    parallel_indices(static_cast<std::int64_t>(grid.size()), effective_jobs(cfg),
                     [&](std::int64_t i) {
                         auto est = cocycle::lyapunov_estimate(
                             grid[static_cast<std::size_t>(i)], cfg.potential, cfg.steps,
                             cfg.samples, cfg.seed,
                             static_cast<std::uint64_t>(i) * 1000003u);
                         scan.gamma[static_cast<std::size_t>(i)] = est.gamma;
                         scan.stderr_[static_cast<std::size_t>(i)] = est.stderr_;
                     });
    tasks = static_cast<std::int64_t>(grid.size());

    CsvWriter csv({"lambda", "gamma", "stderr", "samples", "steps"});
    for (std::size_t i = 0; i < grid.size(); ++i)
        csv.row({format_double(scan.lambda[i]), format_double(scan.gamma[i]),
                 format_double(scan.stderr_[i]), std::to_string(scan.samples),
                 std::to_string(scan.steps)});
    art.add("lyapunov_scan.csv", csv.body());

    json intervals = json::array();
    for (const auto& w : cocycle::localized_intervals(scan, cfg.gamma_min))
        intervals.push_back({{"lo", w.lo}, {"hi", w.hi}});
    art.add("intervals.json",
            json{{"gamma_min", cfg.gamma_min}, {"intervals", intervals}}.dump(2) + "\n");
}

// -------------------------------------------------------------------- uld

void run_large_deviation(const ExperimentConfig& cfg, Artifacts& art, std::int64_t& tasks) {
    if (cfg.n_list.empty()) throw ConfigError({"n_list: empty"});
    double gamma_ref;
    if (cfg.gamma_ref) {
        gamma_ref = *cfg.gamma_ref;
    } else {
        std::int64_t n_ref = *std::max_element(cfg.n_list.begin(), cfg.n_list.end());
        auto est = cocycle::lyapunov_estimate(cfg.lambda, cfg.potential, n_ref,
                                              cfg.samples, cfg.seed, 0xabcdef);
        gamma_ref = est.gamma;
    }
    auto rows = cocycle::large_deviation_profile(cfg.lambda, cfg.potential, cfg.epsilon,
                                                 gamma_ref, cfg.n_list, cfg.samples, cfg.seed);
    tasks = cfg.samples;
    CsvWriter csv({"n", "tail_probability", "samples", "epsilon"});
    for (const auto& r : rows)
        csv.row({std::to_string(r.n), format_double(r.tail_probability),
                 std::to_string(cfg.samples), format_double(cfg.epsilon)});
    art.add("large_deviation.csv", csv.body());
    art.add("gamma_ref.json",
            json{{"lambda", cfg.lambda}, {"gamma_ref", gamma_ref}}.dump(2) + "\n");
}

// --------------------------------------------------------------- maryland

void run_maryland_verify(const ExperimentConfig& cfg, Artifacts& art, std::int64_t& tasks) {
    maryland::MarylandParams mp;
    mp.g = cfg.potential.g;
    mp.alpha = cfg.potential.alpha.at(0);
    mp.omega = cfg.omega;
    mp.quadrature_order = cfg.quadrature_order;

    std::int64_t R = cfg.host_radius;
    auto host = lattice::LatticeBox::interval(-R, R);
    auto phase = pot::fixed_phase(cfg.potential, cfg.omega);
    auto H = lattice::build_hamiltonian(cfg.potential, phase, host, cfg.kernel);
    auto spectrum = spectral::decompose(H);
    const auto& eig = spectrum.eig;
    int n = eig.n;
    tasks = 2 * cfg.labels + 1;

    // localization centers of the numeric eigenvectors
    std::vector<std::int64_t> centers(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::span<const double> psi(eig.vectors.data() + static_cast<std::size_t>(k) * n,
                                    static_cast<std::size_t>(n));
        centers[static_cast<std::size_t>(k)] = spectral::localization_center(psi, -R);
    }

    CsvWriter csv({"l", "lambda_pred", "lambda_num", "abs_delta", "overlap", "residual"});
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    int matched = 0;
    double worst_delta = 0.0, worst_residual = 0.0;
    for (std::int64_t l = -cfg.labels; l <= cfg.labels; ++l) {
        double lam_pred = maryland::label_to_eigenvalue(mp, l);
        // best unused eigenpair whose center sits near the label
        int best = -1;
        double best_delta = 1e300;
        for (int k = 0; k < n; ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            if (std::llabs(centers[static_cast<std::size_t>(k)] - l) > 3) continue;
            double d = std::fabs(eig.values[static_cast<std::size_t>(k)] - lam_pred);
            if (d < best_delta) {
                best_delta = d;
                best = k;
            }
        }
        if (best < 0) {
            csv.row({std::to_string(l), format_double(lam_pred), "nan", "nan", "0", "nan"});
            continue;
        }
        used[static_cast<std::size_t>(best)] = 1;
        ++matched;
        double lam_num = eig.values[static_cast<std::size_t>(best)];

        // assembled eigenfunction psi_l(n) = psi0(lambda_pred, n - l)
        auto psi_c = maryland::psi0_range(mp, lam_pred, -R - l, R - l);
        std::vector<double> psi_abs(static_cast<std::size_t>(n));
        double overlap = 0.0, asm_norm2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double a = std::abs(psi_c[static_cast<std::size_t>(i)]);
            psi_abs[static_cast<std::size_t>(i)] = a;
            asm_norm2 += a * a;
            overlap += a * std::fabs(eig.vec(i, best));
        }
        overlap /= std::sqrt(asm_norm2);

        // interior residual of the complex assembled vector
        const auto& T = H.tri();
        double res2 = 0.0;
        for (int i = 1; i + 1 < n; ++i) {
            auto r = psi_c[static_cast<std::size_t>(i + 1)] + psi_c[static_cast<std::size_t>(i - 1)] +
                     (T.diag[static_cast<std::size_t>(i)] - lam_pred) * psi_c[static_cast<std::size_t>(i)];
            res2 += std::norm(r);
        }
        double residual = std::sqrt(res2 / asm_norm2);
        worst_delta = std::max(worst_delta, best_delta);
        worst_residual = std::max(worst_residual, residual);
        csv.row({std::to_string(l), format_double(lam_pred), format_double(lam_num),
                 format_double(best_delta), format_double(overlap), format_double(residual)});
    }
    art.add("maryland_labels.csv", csv.body());

    // psi0 normalization at the central label
    double lam0 = maryland::label_to_eigenvalue(mp, 0);
    auto psi0_long = maryland::psi0_range(mp, lam0, -80, 80);
    double norm = 0.0;
    for (const auto& c : psi0_long) norm += std::norm(c);

    // decay envelope: E{|P(0,n)|} <= C envelope(n) N(eF) with fitted rate
    double eF = cfg.has_fermi ? cfg.fermi_energy : 0.0;
    std::vector<std::int64_t> dist;
    for (std::int64_t d = 1; d <= 40; ++d) dist.push_back(d);
    auto study = ent::projection_decay_study(cfg.potential, cfg.kernel, eF, std::nullopt,
                                             dist, 40, cfg.samples, cfg.seed,
                                             effective_jobs(cfg));
    double N_eF = maryland::ids(eF, mp.g);
    double c_tilde = -study.fit_P.slope;
    double C_tilde = 0.0;
    bool envelope_ok = c_tilde > 0.0;
    if (envelope_ok) {
        for (std::size_t i = 0; i < dist.size(); ++i)
            C_tilde = std::max(C_tilde, study.mean_absP[i] *
                                            std::exp(c_tilde * static_cast<double>(dist[i])) /
                                            N_eF);
        for (std::size_t i = 0; i < dist.size(); ++i)
            if (study.mean_absP[i] >
                C_tilde * std::exp(-c_tilde * static_cast<double>(dist[i])) * N_eF * (1 + 1e-12))
                envelope_ok = false;
    }

    json summary{{"labels", 2 * cfg.labels + 1},
                 {"matched", matched},
                 {"max_abs_delta", worst_delta},
                 {"max_residual", worst_residual},
                 {"psi0_norm", norm},
                 {"fermi_energy", eF},
                 {"ids_at_fermi", N_eF},
                 {"decay_rate_c", c_tilde},
                 {"envelope_C", C_tilde},
                 {"envelope_holds", envelope_ok},
                 {"decay_fit", fit_to_json(study.fit_P)}};
    art.add("maryland_summary.json", summary.dump(2) + "\n");
}

// --------------------------------------------------------------- subshift

void run_subshift_stats(const ExperimentConfig& cfg, Artifacts& art, std::int64_t& tasks) {
    const auto& spec = cfg.potential.driver.markov;
    if (spec.k < 2) throw ConfigError({"subshift-stats: markov_P missing"});
    int k = spec.k;
    tasks = cfg.samples;

    // stationary residual
    double residual = 0.0;
    for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int i = 0; i < k; ++i) s += spec.stationary[i] * spec.P(i, j);
        residual = std::max(residual, std::fabs(s - spec.stationary[j]));
    }

    // cylinder additivity over all words up to length 3
    double additivity = 0.0;
    std::vector<std::vector<int>> words;
    for (int a = 0; a < k; ++a) words.push_back({a});
    for (std::size_t w = 0; w < words.size() && words[w].size() < 3; ++w)
        for (int a = 0; a < k; ++a) {
            auto ext = words[w];
            ext.push_back(a);
            words.push_back(ext);
        }
    for (const auto& w : words) {
        double base = subshift::cylinder_measure(spec, {0, w});
        double sum = 0.0;
        for (int a = 0; a < k; ++a) {
            auto ext = w;
            ext.push_back(a);
            sum += subshift::cylinder_measure(spec, {0, ext});
        }
        additivity = std::max(additivity, std::fabs(sum - base));
    }

    // empirical cylinder frequencies at 1e5 samples, 3-sigma z-scores
    std::int64_t trials = 100000;
    std::vector<int> word = {0, std::min(1, k - 1), 0};
    double p_word = subshift::cylinder_measure(spec, {0, word});
    std::int64_t hits = 0;
    {
        RngStream rng(cfg.seed, 7001);
        for (std::int64_t t = 0; t < trials; ++t) {
            auto pt = subshift::sample_path(spec, rng, 2);
            bool match = true;
            for (std::size_t i = 0; i < word.size(); ++i)
                if (pt.letter(static_cast<std::int64_t>(i)) != word[i]) {
                    match = false;
                    break;
                }
            if (match) ++hits;
        }
    }
    double freq = static_cast<double>(hits) / static_cast<double>(trials);
    double sigma = std::sqrt(std::max(p_word * (1.0 - p_word), 1e-12) /
                             static_cast<double>(trials));
    double zscore = (freq - p_word) / sigma;

    // bounded distortion over random disjoint cylinder pairs
    double ratio_min = 1e300, ratio_max = 0.0;
    {
        RngStream rng(cfg.seed, 7002);
        int done = 0;
        while (done < 1000) {
            subshift::Cylinder c1{0, {rng.discrete(spec.stationary)}};
            while (c1.word.size() < 3) {
                int prev = c1.word.back();
                std::span<const double> row(spec.transition.data() +
                                                static_cast<std::size_t>(prev) * k,
                                            static_cast<std::size_t>(k));
                c1.word.push_back(rng.discrete(row));
            }
            std::int64_t gap = 1 + static_cast<std::int64_t>(rng.uniform01() * 8);
            subshift::Cylinder c2{static_cast<std::int64_t>(c1.word.size()) - 1 + gap,
                                  {rng.discrete(spec.stationary)}};
            bool empty = false;
            double r = subshift::bounded_distortion_ratio(spec, c1, c2, &empty);
            if (empty) continue;
            ratio_min = std::min(ratio_min, r);
            ratio_max = std::max(ratio_max, r);
            ++done;
        }
    }

    // mixing: max_ij |(P^m)_ij - p_j| against a geometric fit
    CsvWriter mix({"m", "max_deviation"});
    std::vector<double> ms, devs;
    for (std::int64_t m = 1; m <= 50; ++m) {
        auto Pm = subshift::matrix_power(k, spec.transition, m);
        double dev = 0.0;
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j)
                dev = std::max(dev, std::fabs(Pm[static_cast<std::size_t>(i) * k + j] -
                                              spec.stationary[j]));
        mix.row({std::to_string(m), format_double(dev)});
        if (dev > 1e-14) {
            ms.push_back(static_cast<double>(m));
            devs.push_back(dev);
        }
    }
    art.add("mixing.csv", mix.body());
    double rate = 0.0;
    if (ms.size() >= 5) rate = std::exp(ent::decay_fit(ms, devs, 1, 50).slope);

    // second eigenvalue modulus estimate via powers of the deflated matrix
    std::vector<double> B(static_cast<std::size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            B[static_cast<std::size_t>(i) * k + j] = spec.P(i, j) - spec.stationary[j];
    auto Bm = subshift::matrix_power(k, B, 40);
    double norm_m = 0.0;
    for (double v : Bm) norm_m = std::max(norm_m, std::fabs(v));
    double lambda2 = norm_m > 0.0 ? std::pow(norm_m, 1.0 / 40.0) : 0.0;

    json out{{"k", k},
             {"stationary", spec.stationary},
             {"stationary_residual", residual},
             {"cylinder_additivity_error", additivity},
             {"frequency_word", word},
             {"frequency_expected", p_word},
             {"frequency_observed", freq},
             {"frequency_zscore", zscore},
             {"distortion_ratio_min", ratio_min},
             {"distortion_ratio_max", ratio_max},
             {"distortion_C", std::max(ratio_max, ratio_min > 0 ? 1.0 / ratio_min : 0.0)},
             {"mixing_rate_measured", rate},
             {"second_eigenvalue_modulus", lambda2}};
    art.add("subshift_stats.json", out.dump(2) + "\n");
}

} // namespace

ResultManifest run(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    Artifacts art;
    std::int64_t tasks = 0;
    switch (cfg.experiment) {
        case Experiment::EntropyScaling: run_entropy_scaling(cfg, art, tasks); break;
        case Experiment::ProjectionDecay: run_projection_decay(cfg, art, tasks); break;
        case Experiment::LyapunovScan: run_lyapunov_scan(cfg, art, tasks); break;
        case Experiment::LargeDeviation: run_large_deviation(cfg, art, tasks); break;
        case Experiment::MarylandVerify: run_maryland_verify(cfg, art, tasks); break;
        case Experiment::SubshiftStats: run_subshift_stats(cfg, art, tasks); break;
    }

    ResultManifest man;
    man.version = kVersion;
    man.master_seed = cfg.seed;
    man.seeding_rule = "stream id = task index (per-sample) or grid index * 1000003 (per-lambda)";
    man.tasks = tasks;
    man.config_echo = cfg.echo;
    for (const auto& [name, bytes] : art.files)
        man.outputs.push_back(write_output(cfg.out_dir, name, bytes));
    man.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json j{{"version", man.version},
           {"experiment", to_string(cfg.experiment)},
           {"master_seed", man.master_seed},
           {"seeding_rule", man.seeding_rule},
           {"tasks", man.tasks},
           {"wall_clock_sec", man.wall_clock_sec},
           {"config", man.config_echo}};
    j["outputs"] = json::array();
    for (const auto& f : man.outputs)
        j["outputs"].push_back({{"file", f.name}, {"bytes", f.bytes}, {"fnv1a64", f.digest}});
    write_output(cfg.out_dir, "manifest.json", j.dump(2) + "\n");
    return man;
}

} // namespace ergotrope::harness
