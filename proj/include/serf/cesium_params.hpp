#ifndef SERF_CESIUM_PARAMS_HPP
#define SERF_CESIUM_PARAMS_HPP

#include <complex>
#include <string>

namespace serf {

/// Physical constants of the cesium model. Angular frequencies are stored
/// in rad/s; config files carry plain Hz and are converted on load.
/// Immutable in practice: construct (or load) once, then share freely.
struct CesiumParams {
    double delta;         // excited hyperfine splitting, rad/s
    double gamma;         // Doppler half-linewidth, rad/s
    double f_cs;          // ellipticity constant
    double a_cs;          // coupling ratio 4/sqrt(7)
    double b_cs;          // coupling ratio 1/sqrt(7)
    double d_cs;          // D1 dipole moment, C m
    double nuclear_spin;  // I = 7/2
    double p_coeff;       // p, with p^2 = 1/8
    double q_coeff;       // q, with q^2 = 7/8
    double alpha_se;      // spin-exchange coefficient, cm^3/s

    static CesiumParams defaults();

    /// Throws std::invalid_argument on violated invariants
    /// (positivity, p^2+q^2 = 1, a*b = 4/7).
    void validate() const;
};

/// alpha = f_cs * gamma / delta (the 2pi factors cancel).
double alpha_ellipticity(const CesiumParams& params);

struct RabiFrequencies {
    double omega_c;                 // control, rad/s
    std::complex<double> omega_s;   // signal, rad/s
};

/// Omega_c = d |E_c| / (sqrt(2) hbar), Omega_s = sqrt(2) Omega_c eta_l e^{i phi_l}.
RabiFrequencies rabi_frequencies(double control_amplitude, double eta_l,
                                 double phi_l, const CesiumParams& params);

/// R_SE = alpha_se * n, with n in cm^-3.
double spin_exchange_rate(double density_cm3, const CesiumParams& params);

/// Config I/O. The file is JSON with a "cesium" section holding
/// delta_hz, gamma_hz, f_cs, alpha_se_cm3_per_s, nuclear_spin, p_squared.
/// Missing keys fall back to the defaults; unknown keys are rejected.
CesiumParams load_params(const std::string& path);
CesiumParams params_from_json_text(const std::string& text);
std::string params_to_json_text(const CesiumParams& params);
void save_params(const CesiumParams& params, const std::string& path);

}  // namespace serf

#endif
