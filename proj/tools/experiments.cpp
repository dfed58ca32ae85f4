#include "experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "serf/cesium_params.hpp"
#include "serf/collisions.hpp"
#include "serf/constants.hpp"
#include "serf/dark_state.hpp"
#include "serf/philox.hpp"
#include "serf/retrieval.hpp"
#include "serf/sequence.hpp"

namespace serf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, const std::string& header) : out_(path) {
        if (!out_) throw std::runtime_error("cannot write " + path.string());
        out_ << header << "\n";
    }
    void row(std::initializer_list<double> values,
             std::initializer_list<std::string> tail = {}) {
        bool first = true;
        for (double v : values) {
            if (!first) out_ << ",";
            out_ << fmt17(v);
            first = false;
        }
        for (const auto& s : tail) {
            if (!first) out_ << ",";
            out_ << s;
            first = false;
        }
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

struct RunContext {
    CesiumParams params;
    double alpha;
    std::uint64_t seed;
    bool seed_was_given;
    json manifest_params;
    std::vector<std::string> outputs;
};

RunContext make_context(const ExperimentSpec& spec) {
    RunContext ctx{
        spec.config_path.empty() ? CesiumParams::defaults()
                                 : load_params(spec.config_path),
        0.0, 0, spec.seed.has_value(), json::object(), {}};
    ctx.alpha = spec.alpha.value_or(alpha_ellipticity(ctx.params));
    if (spec.seed.has_value()) {
        ctx.seed = *spec.seed;
    } else {
        std::random_device rd;
        ctx.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    return ctx;
}

void write_manifest(const ExperimentSpec& spec, const RunContext& ctx) {
    json manifest;
    manifest["experiment"] = spec.experiment;
    manifest["version"] = kVersion;
    manifest["schema_version"] = kSchemaVersion;
    manifest["seed"] = ctx.seed;
    manifest["seed_was_given"] = ctx.seed_was_given;
    manifest["config_hash"] = fnv1a64(params_to_json_text(ctx.params));
    manifest["parameters"] = ctx.manifest_params;
    manifest["outputs"] = ctx.outputs;
    std::ofstream out(fs::path(spec.out_dir) / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest.json");
    out << manifest.dump(2) << "\n";
}

void run_map_storage(const ExperimentSpec& spec, RunContext& ctx) {
    CsvWriter csv(fs::path(spec.out_dir) / "map_storage.csv", "phi_l,eta_a,phi_a");
    for (int i = 0; i < spec.grid; ++i) {
        const double phi_l = kTwoPi * i / spec.grid;
        const BlochOrientation b = storage_map(spec.eta_l, phi_l, ctx.alpha);
        csv.row({phi_l, b.eta_a, b.phi_a});
    }
    ctx.manifest_params = {{"alpha", ctx.alpha}, {"eta_l", spec.eta_l}, {"grid", spec.grid}};
    ctx.outputs = {"map_storage.csv"};
}

void run_map_retrieval(const ExperimentSpec& spec, RunContext& ctx) {
    CsvWriter csv(fs::path(spec.out_dir) / "map_retrieval.csv",
                  "phi_a,eta_l_out,phi_l_out");
    for (int i = 0; i < spec.grid; ++i) {
        const double phi_a = kTwoPi * i / spec.grid;
        const RetrievedLight r = retrieval_map(spec.eta_a, phi_a, ctx.alpha);
        csv.row({phi_a, r.eta_l_out, r.phi_l_out});
    }
    ctx.manifest_params = {{"alpha", ctx.alpha}, {"eta_a", spec.eta_a}, {"grid", spec.grid}};
    ctx.outputs = {"map_retrieval.csv"};
}

SequenceConfig sequence_from_spec(const ExperimentSpec& spec, const RunContext& ctx) {
    SequenceConfig cfg;
    cfg.t_store = spec.t_store;
    cfg.omega_b = spec.omega_b.value_or(0.0);
    cfg.tau_s = spec.tau_s;
    cfg.t1 = spec.t1;
    cfg.alpha = ctx.alpha;
    return cfg;
}

void run_full_transform(const ExperimentSpec& spec, RunContext& ctx) {
    const SequenceConfig cfg = sequence_from_spec(spec, ctx);
    CsvWriter csv(fs::path(spec.out_dir) / "full_transform.csv",
                  "phi_l,eta_l_out,phi_l_out");
    for (int i = 0; i < spec.grid; ++i) {
        const double phi_l = kTwoPi * i / spec.grid;
        const RetrievedLight r = full_transform_exact(spec.eta_l, phi_l, cfg);
        csv.row({phi_l, r.eta_l_out, r.phi_l_out});
    }
    ctx.manifest_params = {{"alpha", cfg.alpha},   {"eta_l", spec.eta_l},
                           {"grid", spec.grid},    {"t_store", cfg.t_store},
                           {"omega_b", cfg.omega_b}, {"tau_s", cfg.tau_s}};
    ctx.outputs = {"full_transform.csv"};
}

void run_eraser_scan(const ExperimentSpec& spec, RunContext& ctx) {
    CsvWriter csv(fs::path(spec.out_dir) / "eraser_scan.csv",
                  "alpha,ellipticity_no_field,ellipticity_erased,ratio,eraser_omega_b");
    std::vector<double> alphas = {0.02, 0.05, 0.1};
    if (spec.alpha.has_value()) alphas = {*spec.alpha};
    for (double a : alphas) {
        SequenceConfig cfg = sequence_from_spec(spec, ctx);
        cfg.alpha = a;
        cfg.omega_b = 0.0;
        const double plain = transform_ellipticity(cfg, spec.grid);
        cfg.omega_b = eraser_field(a, cfg.t_store);
        const double erased = transform_ellipticity(cfg, spec.grid);
        csv.row({a, plain, erased, plain / erased, cfg.omega_b});
    }
    ctx.manifest_params = {{"alphas", alphas}, {"grid", spec.grid},
                           {"t_store", spec.t_store}};
    ctx.outputs = {"eraser_scan.csv"};
}

void run_collide(const ExperimentSpec& spec, RunContext& ctx) {
    McConfig mc;
    if (spec.scheme == "dm1") {
        mc.scheme = Scheme::kDeltaM1;
    } else if (spec.scheme == "dm2") {
        mc.scheme = Scheme::kDeltaM2;
    } else {
        throw std::invalid_argument("collide: scheme must be dm1 or dm2");
    }
    mc.r_se = spec.r_se;
    mc.duration = spec.duration;
    mc.n_atoms = spec.n_atoms;
    mc.eta = spec.eta;
    mc.seed = ctx.seed;

    const McResult result = mc_coherence_decay(mc, ctx.params);

    CsvWriter csv(fs::path(spec.out_dir) / "collide_trace.csv",
                  "t_seconds,abs_coherence,scheme,r_se,seed");
    for (const auto& [t, c] : result.trace) {
        csv.row({t, c}, {scheme_name(mc.scheme), fmt17(mc.r_se),
                         std::to_string(mc.seed)});
    }

    json fitj;
    fitj["scheme"] = scheme_name(mc.scheme);
    fitj["r_se"] = mc.r_se;
    fitj["fit_ok"] = result.fit_ok;
    if (result.fit_ok) {
        fitj["tau_s"] = result.fit.tau_s;
        fitj["stderr"] = result.fit.stderr_tau;
        fitj["n_points"] = result.fit.n_points;
        fitj["decay_rate"] = result.decay_rate;
    } else {
        fitj["error"] = result.fit_error;
    }
    std::ofstream out(fs::path(spec.out_dir) / "collide_fit.json");
    out << fitj.dump(2) << "\n";

    ctx.manifest_params = {{"scheme", scheme_name(mc.scheme)},
                           {"r_se", mc.r_se},
                           {"duration", mc.duration},
                           {"n_atoms", mc.n_atoms},
                           {"eta", mc.eta}};
    ctx.outputs = {"collide_trace.csv", "collide_fit.json"};
}

void run_lifetime_scan(const ExperimentSpec& spec, RunContext& ctx) {
    double tau = spec.tau;
    if (spec.kappa.has_value()) {
        tau = composed_lifetime(spec.t1, *spec.kappa, spec.r_se);
    }
    if (spec.points < 3) throw std::invalid_argument("lifetime-scan: points >= 3");

    Philox4x64 rng(ctx.seed);
    std::vector<double> ts(spec.points), ys(spec.points);
    for (int i = 0; i < spec.points; ++i) {
        ts[i] = spec.t_max * i / (spec.points - 1);
        ys[i] = std::exp(-ts[i] / tau);
        if (spec.noise > 0.0) ys[i] *= 1.0 + spec.noise * rng.next_normal();
        ys[i] = std::max(ys[i], 1e-12);
    }

    CsvWriter csv(fs::path(spec.out_dir) / "lifetime_scan.csv", "t,retrieved_power");
    for (int i = 0; i < spec.points; ++i) csv.row({ts[i], ys[i]});

    const LifetimeFit fit = fit_lifetime(ts, ys);
    json fitj;
    fitj["tau_s"] = fit.tau_s;
    fitj["stderr"] = fit.stderr_tau;
    fitj["n_points"] = fit.n_points;
    std::ofstream out(fs::path(spec.out_dir) / "lifetime_fit.json");
    out << fitj.dump(2) << "\n";

    ctx.manifest_params = {{"tau_true", tau}, {"t_max", spec.t_max},
                           {"points", spec.points}, {"noise", spec.noise}};
    ctx.outputs = {"lifetime_scan.csv", "lifetime_fit.json"};
}

void run_tomography(const ExperimentSpec& spec, RunContext& ctx) {
    SequenceConfig cfg = sequence_from_spec(spec, ctx);
    if (!spec.omega_b.has_value()) cfg.omega_b = 1.34 * kTwoPi;  // rad/s
    MeasurementModel meas;
    meas.beta = spec.beta;

    // Faraday sampling grid: 10 monitor periods, 32 samples each.
    const double period = kTwoPi / meas.omega_b_monitor;
    std::vector<double> t_grid;
    for (int k = 0; k < 320; ++k) t_grid.push_back(k * period / 32.0);

    CsvWriter csv(fs::path(spec.out_dir) / "tomography.csv",
                  "phi_l,phi_a,s_x,s_y,eta_l_out,phi_l_out");
    for (int i = 0; i < spec.grid; ++i) {
        const double phi_l = kTwoPi * i / spec.grid;
        const BlochOrientation stored = storage_map(spec.eta_l, phi_l, cfg.alpha);
        const auto trace = faraday_trace(stored, meas, t_grid);
        const auto [sx, sy] = demodulate_trace(trace, meas);
        const BlochOrientation evolved = dark_evolution(stored, cfg);
        const RetrievedLight out = retrieval_map(evolved.eta_a, evolved.phi_a, cfg.alpha);
        csv.row({phi_l, stored.phi_a, sx, sy, out.eta_l_out, out.phi_l_out});
    }
    ctx.manifest_params = {{"alpha", cfg.alpha},     {"eta_l", spec.eta_l},
                           {"grid", spec.grid},      {"t_store", cfg.t_store},
                           {"omega_b", cfg.omega_b}, {"tau_s", cfg.tau_s},
                           {"beta", meas.beta}};
    ctx.outputs = {"tomography.csv"};
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "map-storage", "map-retrieval", "full-transform", "eraser-scan",
        "collide",     "lifetime-scan", "tomography"};
    return names;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

int run(const ExperimentSpec& spec) {
    try {
        if (std::find(experiment_names().begin(), experiment_names().end(),
                      spec.experiment) == experiment_names().end()) {
            throw std::invalid_argument("unknown experiment '" + spec.experiment + "'");
        }
        RunContext ctx = make_context(spec);
        fs::create_directories(spec.out_dir);

        if (spec.experiment == "map-storage") run_map_storage(spec, ctx);
        else if (spec.experiment == "map-retrieval") run_map_retrieval(spec, ctx);
        else if (spec.experiment == "full-transform") run_full_transform(spec, ctx);
        else if (spec.experiment == "eraser-scan") run_eraser_scan(spec, ctx);
        else if (spec.experiment == "collide") run_collide(spec, ctx);
        else if (spec.experiment == "lifetime-scan") run_lifetime_scan(spec, ctx);
        else if (spec.experiment == "tomography") run_tomography(spec, ctx);

        write_manifest(spec, ctx);
        return 0;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace serf::cli
