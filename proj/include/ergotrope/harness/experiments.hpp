#pragma once

#include <string>
#include <vector>

#include "ergotrope/harness/config.hpp"
#include "ergotrope/harness/io.hpp"

namespace ergotrope::harness {

struct ResultManifest {
    std::string version;
    double wall_clock_sec = 0.0;
    std::uint64_t master_seed = 0;
    std::string seeding_rule; // stream id derivation for tasks
    std::int64_t tasks = 0;
    std::vector<OutputFile> outputs;
    std::map<std::string, std::string> config_echo;
};

// Runs the configured experiment and writes its artifacts plus manifest.json
// under cfg.out_dir.  Artifacts are buffered and flushed only on success, so
// a failed run leaves no partial outputs.
ResultManifest run(const ExperimentConfig& cfg);

extern const char* kVersion;

} // namespace ergotrope::harness
