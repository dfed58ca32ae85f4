#ifndef SERF_TOOLS_EXPERIMENTS_HPP
#define SERF_TOOLS_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace serf::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

/// One batch run: experiment name, parameter overrides, output directory,
/// seed. Every run is reproducible from (spec, seed).
struct ExperimentSpec {
    std::string experiment;
    std::string config_path;   // empty -> defaults
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;

    // Shared numeric overrides; each experiment reads the ones it uses.
    std::optional<double> alpha;
    double eta_l = 1e-3;
    double eta_a = 1e-3;
    int grid = 360;
    double t_store = 0.1;
    std::optional<double> omega_b;  // rad/s
    double tau_s = 0.149;
    double t1 = 0.3;

    // collide
    std::string scheme = "dm1";
    double r_se = 1000.0;
    double duration = 0.1;
    int n_atoms = 200;
    double eta = 1e-2;

    // lifetime-scan
    double tau = 0.149;
    double t_max = 1.0;
    int points = 20;
    double noise = 0.0;   // multiplicative sigma; 0 = noiseless
    std::optional<double> kappa;  // with r_se: tau = 1/(1/t1 + kappa*r_se)

    // tomography
    double beta = 1.0;
};

const std::vector<std::string>& experiment_names();

/// Runs the experiment, writing CSV output plus manifest.json under
/// spec.out_dir. Returns process exit status: 0 ok, 2 config error,
/// 3 numerical failure.
int run(const ExperimentSpec& spec);

/// FNV-1a 64-bit, used to fingerprint the resolved config in manifests.
std::uint64_t fnv1a64(const std::string& text);

}  // namespace serf::cli

#endif
