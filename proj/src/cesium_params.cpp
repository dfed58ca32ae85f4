#include "serf/cesium_params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "serf/constants.hpp"

namespace serf {

using nlohmann::json;

CesiumParams CesiumParams::defaults() {
    CesiumParams p;
    p.delta = 1100.0e6 * kTwoPi;
    p.gamma = 124.0e6 * kTwoPi;
    p.f_cs = 0.58;
    p.a_cs = 4.0 / std::sqrt(7.0);
    p.b_cs = 1.0 / std::sqrt(7.0);
    p.d_cs = 2.6 * std::sqrt(7.0) / 4.0 * kElementaryCharge * kBohrRadius;
    p.nuclear_spin = 3.5;
    p.p_coeff = std::sqrt(1.0 / 8.0);
    p.q_coeff = std::sqrt(7.0 / 8.0);
    p.alpha_se = 6.5e-10;
    return p;
}

void CesiumParams::validate() const {
    if (!(delta > 0.0) || !(gamma > 0.0) || !(alpha_se > 0.0)) {
        throw std::invalid_argument("cesium params: delta, gamma, alpha_se must be positive");
    }
    if (std::abs(p_coeff * p_coeff + q_coeff * q_coeff - 1.0) > 1e-12) {
        throw std::invalid_argument("cesium params: p^2 + q^2 must equal 1");
    }
    if (std::abs(a_cs * b_cs - 4.0 / 7.0) > 1e-12) {
        throw std::invalid_argument("cesium params: a_cs * b_cs must equal 4/7");
    }
}

double alpha_ellipticity(const CesiumParams& params) {
    params.validate();
    return params.f_cs * params.gamma / params.delta;
}

RabiFrequencies rabi_frequencies(double control_amplitude, double eta_l,
                                 double phi_l, const CesiumParams& params) {
    params.validate();
    if (eta_l < 0.0) {
        throw std::invalid_argument("rabi_frequencies: eta_l must be non-negative");
    }
    RabiFrequencies out;
    out.omega_c = params.d_cs * std::abs(control_amplitude) / (std::sqrt(2.0) * kHbar);
    out.omega_s = std::sqrt(2.0) * out.omega_c * eta_l *
                  std::polar(1.0, phi_l);
    return out;
}

double spin_exchange_rate(double density_cm3, const CesiumParams& params) {
    params.validate();
    if (density_cm3 < 0.0) {
        throw std::invalid_argument("spin_exchange_rate: density must be non-negative");
    }
    return params.alpha_se * density_cm3;
}

namespace {

double take(json& section, const char* key, double fallback) {
    if (!section.contains(key)) return fallback;
    if (!section[key].is_number()) {
        throw std::invalid_argument(std::string("config: key 'cesium.") + key +
                                    "' must be a number");
    }
    const double v = section[key].get<double>();
    section.erase(key);
    return v;
}

}  // namespace

CesiumParams params_from_json_text(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    CesiumParams p = CesiumParams::defaults();
    if (root.contains("cesium")) {
        json section = root["cesium"];
        p.delta = kTwoPi * take(section, "delta_hz", p.delta / kTwoPi);
        p.gamma = kTwoPi * take(section, "gamma_hz", p.gamma / kTwoPi);
        p.f_cs = take(section, "f_cs", p.f_cs);
        p.alpha_se = take(section, "alpha_se_cm3_per_s", p.alpha_se);
        p.nuclear_spin = take(section, "nuclear_spin", p.nuclear_spin);
        const double p_squared = take(section, "p_squared", p.p_coeff * p.p_coeff);
        if (!(p_squared >= 0.0 && p_squared <= 1.0)) {
            throw std::invalid_argument("config: cesium.p_squared must lie in [0, 1]");
        }
        p.p_coeff = std::sqrt(p_squared);
        p.q_coeff = std::sqrt(1.0 - p_squared);
        if (!section.empty()) {
            throw std::invalid_argument("config: unknown key 'cesium." +
                                        section.begin().key() + "'");
        }
    }
    p.validate();
    return p;
}

CesiumParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return params_from_json_text(buf.str());
}

std::string params_to_json_text(const CesiumParams& params) {
    json root;
    root["cesium"] = {
        {"delta_hz", params.delta / kTwoPi},
        {"gamma_hz", params.gamma / kTwoPi},
        {"f_cs", params.f_cs},
        {"alpha_se_cm3_per_s", params.alpha_se},
        {"nuclear_spin", params.nuclear_spin},
        {"p_squared", params.p_coeff * params.p_coeff},
    };
    return root.dump(2) + "\n";
}

void save_params(const CesiumParams& params, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("config: cannot write '" + path + "'");
    }
    out << params_to_json_text(params);
}

}  // namespace serf
