#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergotrope/entanglement.hpp"
#include "ergotrope/lattice.hpp"
#include "ergotrope/potentials.hpp"
#include "ergotrope/spectral.hpp"

namespace ergotrope::harness {

enum class Experiment {
    EntropyScaling,
    ProjectionDecay,
    LyapunovScan,
    LargeDeviation,
    MarylandVerify,
    SubshiftStats,
};

std::string to_string(Experiment e);

// every schema violation, one line each, with the offending line number
struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> errs);
    std::vector<std::string> errors;
};

struct ExperimentConfig {
    Experiment experiment = Experiment::EntropyScaling;
    pot::PotentialSpec potential;
    lattice::KernelSpec kernel;

    double fermi_energy = 0.0;
    bool has_fermi = false;
    std::optional<spectral::EnergyWindow> window;

    std::vector<std::int64_t> L_list;
    std::vector<std::int64_t> distances;
    std::vector<std::int64_t> n_list;
    ent::HostMargin host_margin;

    double lambda_min = 0.0, lambda_max = 0.0;
    int lambda_points = 0;
    double lambda = 0.0; // large-deviation reference energy
    std::optional<double> gamma_ref;

    double epsilon = 0.1;
    double gamma_min = 0.05;
    std::int64_t steps = 2000;
    std::int64_t samples = 64;

    // maryland-verify
    long double omega = 0.1L;
    std::int64_t labels = 50;
    std::int64_t host_radius = 300;
    int quadrature_order = 2048;

    ent::ScalingThresholds thresholds;

    std::uint64_t seed = 1;
    int jobs = 0; // 0 = hardware
    std::string out_dir = "out";

    std::map<std::string, std::string> echo; // resolved key -> value
};

// parse + validate; throws ConfigError carrying the aggregated error list
ExperimentConfig validate_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

} // namespace ergotrope::harness
