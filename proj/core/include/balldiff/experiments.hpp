#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "balldiff/processes.hpp"
#include "balldiff/stats.hpp"

namespace balldiff {

// Configuration for one named experiment run.  Fields that a given
// experiment does not use are ignored by it but still participate in the
// config digest, so a digest pins the full invocation.  threads and
// output_dir never affect results and are excluded from the digest.
struct ExperimentConfig {
    std::string experiment;  // one of experiment_names()

    int n = 2;          // ambient ball dimension
    double ell = 2.0;   // codimension weight in the invariant density
    std::string gamma_spec = "const:1";
    std::string g_spec;  // empty: derived default const:(n-1+ell)/2

    double t_horizon = 1.0;
    double dt = 1e-3;
    std::size_t paths = 1000;
    std::uint64_t seed = 1;

    std::string process;          // simulate/boundary: wf, besq, u, radial,
                                  // projected, sphere
    double alpha = 2.0;           // WF / BESQ-x parameter
    double beta = 2.0;            // WF / BESQ-y parameter
    double delta = 2.0;           // BESQ parameter for simulate
    std::vector<double> x0;      // start override (scalar processes use x0[0])
    std::vector<double> dt_list;  // refinement experiments
    std::size_t samples = 5000;   // stationarity sample target
    std::string direction = "below";  // boundary hitting direction

    bool dump_paths = false;
    int threads = 1;
    std::string output_dir;  // empty: do not write files
};

std::vector<std::string> experiment_names();

// Fill experiment-specific defaults (dt, horizon, path counts, start points)
// for fields the caller left at generic values.  Throws ConfigError for an
// unknown experiment name.
ExperimentConfig default_config(const std::string& experiment);

// Parse `const:<v>`, `linear:<a>,<b>` (a + b*u), or `poly:<c0>,<c1>,...`
// into coefficient functions of the radius with analytically derived
// Lipschitz constants and minimum.  Throws ConfigError on malformed input.
Coefficients make_coefficients(int n, const std::string& gamma_spec,
                               const std::string& g_spec);

// Hex FNV-1a digest of the canonical config serialization (excludes threads,
// output_dir, and any timestamp).
std::string config_digest(const ExperimentConfig& cfg);

struct ExperimentOutput {
    ReportSummary summary;
    std::string report_json;   // full report including a timestamp field
    std::string summary_text;  // one line per report plus the verdict
    std::string paths_csv;     // empty unless paths were dumped
};

// Run the named experiment.  Statistical verdicts land in the summary;
// configuration problems throw ConfigError/DomainError/DimensionError and
// numerical breakdowns throw SingularityError/AccuracyError/RangeError.
ExperimentOutput run_experiment(const ExperimentConfig& cfg);

// Write report.json, summary.txt, and (when non-empty) paths.csv under dir.
void write_outputs(const ExperimentOutput& out, const std::string& dir);

// Human-readable statement of what the experiment checks and its defaults.
std::string describe_experiment(const std::string& experiment);

}  // namespace balldiff
