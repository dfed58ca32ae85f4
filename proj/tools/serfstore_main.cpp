#include <CLI11.hpp>

#include "experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"serfstore: spin-orientation light-storage simulator"};
    app.require_subcommand(1);

    serf::cli::ExperimentSpec spec;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", spec.config_path, "JSON config file");
        sub->add_option("--out", spec.out_dir, "output directory");
        sub->add_option("--seed", [&](auto& res) {
            spec.seed = std::stoull(res[0]); return true; }, "64-bit RNG seed");
        return sub;
    };

    auto* map_storage = add_common(app.add_subcommand(
        "map-storage", "light -> spin orientation scan"));
    map_storage->add_option("--alpha", [&](auto& res) {
        spec.alpha = std::stod(res[0]); return true; }, "ellipticity");
    map_storage->add_option("--eta-l", spec.eta_l, "signal/control ratio");
    map_storage->add_option("--grid", spec.grid, "number of phase points");

    auto* map_retrieval = add_common(app.add_subcommand(
        "map-retrieval", "spin orientation -> light scan"));
    map_retrieval->add_option("--alpha", [&](auto& res) {
        spec.alpha = std::stod(res[0]); return true; }, "ellipticity");
    map_retrieval->add_option("--eta-a", spec.eta_a, "spin polar angle");
    map_retrieval->add_option("--grid", spec.grid, "number of phase points");

    auto* full = add_common(app.add_subcommand(
        "full-transform", "storage -> dark time -> retrieval scan"));
    full->add_option("--alpha", [&](auto& res) {
        spec.alpha = std::stod(res[0]); return true; }, "ellipticity");
    full->add_option("--eta-l", spec.eta_l, "signal/control ratio");
    full->add_option("--grid", spec.grid, "number of phase points");
    full->add_option("--t-store", spec.t_store, "storage time, s");
    full->add_option("--omega-b", [&](auto& res) {
        spec.omega_b = std::stod(res[0]); return true; }, "Larmor, rad/s");
    full->add_option("--tau-s", spec.tau_s, "storage lifetime, s");

    auto* eraser = add_common(app.add_subcommand(
        "eraser-scan", "ellipticity with and without the eraser field"));
    eraser->add_option("--alpha", [&](auto& res) {
        spec.alpha = std::stod(res[0]); return true; }, "single ellipticity value");
    eraser->add_option("--grid", spec.grid, "number of phase points");
    eraser->add_option("--t-store", spec.t_store, "storage time, s");

    auto* collide = add_common(app.add_subcommand(
        "collide", "spin-exchange collision Monte Carlo"));
    collide->add_option("--scheme", spec.scheme, "dm1 or dm2");
    collide->add_option("--rse", spec.r_se, "collision rate per atom, 1/s");
    collide->add_option("--duration", spec.duration, "simulated time, s");
    collide->add_option("--n-atoms", spec.n_atoms, "ensemble size");
    collide->add_option("--eta", spec.eta, "stored polar angle");

    auto* lifetime = add_common(app.add_subcommand(
        "lifetime-scan", "synthetic decay trace and lifetime fit"));
    lifetime->add_option("--tau", spec.tau, "true lifetime, s");
    lifetime->add_option("--tmax", spec.t_max, "last sample time, s");
    lifetime->add_option("--points", spec.points, "number of samples");
    lifetime->add_option("--noise", spec.noise, "multiplicative noise sigma");
    lifetime->add_option("--t1", spec.t1, "spin-destruction time, s");
    lifetime->add_option("--kappa", [&](auto& res) {
        spec.kappa = std::stod(res[0]); return true; },
        "compose tau from 1/t1 + kappa*rse");
    lifetime->add_option("--rse", spec.r_se, "collision rate for --kappa");

    auto* tomo = add_common(app.add_subcommand(
        "tomography", "phase map with Faraday readout"));
    tomo->add_option("--alpha", [&](auto& res) {
        spec.alpha = std::stod(res[0]); return true; }, "ellipticity");
    tomo->add_option("--eta-l", spec.eta_l, "signal/control ratio");
    tomo->add_option("--grid", spec.grid, "number of phase points");
    tomo->add_option("--t-store", spec.t_store, "storage time, s");
    tomo->add_option("--omega-b", [&](auto& res) {
        spec.omega_b = std::stod(res[0]); return true; }, "Larmor, rad/s");
    tomo->add_option("--tau-s", spec.tau_s, "storage lifetime, s");
    tomo->add_option("--beta", spec.beta, "Faraday constant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    spec.experiment = app.get_subcommands().front()->get_name();
    return serf::cli::run(spec);
}
