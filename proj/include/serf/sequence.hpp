#ifndef SERF_SEQUENCE_HPP
#define SERF_SEQUENCE_HPP

#include <utility>
#include <vector>

#include "serf/dark_state.hpp"
#include "serf/retrieval.hpp"

namespace serf {

/// Storage -> dark time -> retrieval sequence parameters.
/// Sign convention: phi_a increases during dark time for omega_b > 0.
struct SequenceConfig {
    double t_store = 0.1;   // s
    double omega_b = 0.0;   // Larmor, rad/s
    double tau_s = 0.149;   // storage lifetime, s
    double t1 = 0.3;        // spin-destruction time, s
    double alpha = 0.0;     // ellipticity

    void validate() const;  // throws on t_store < 0 or tau_s <= 0
};

/// 1/tau_s = 1/t1 + kappa * r_se  (kappa = 0 for the orientation scheme).
double composed_lifetime(double t1, double kappa, double r_se);

/// phi_a advances by omega_b * t_store, eta_a decays by exp(-t/tau_s).
BlochOrientation dark_evolution(const BlochOrientation& bloch,
                                const SequenceConfig& cfg);

/// storage_map, then dark_evolution, then retrieval_map, composed with no
/// further approximation.
RetrievedLight full_transform_exact(double eta_l, double phi_l,
                                    const SequenceConfig& cfg);

/// First-order (in alpha) closed form of the composition:
///   phi_out = phi_l + wt - 6a - 2a cos(wt - 3a) cos(2 phi_l + wt)
///   eta_out = eta_l e^{-t/tau} (1 - 2a sin(2 phi_l + wt) cos(wt - 3a))
RetrievedLight full_transform_first_order(double eta_l, double phi_l,
                                          const SequenceConfig& cfg);

/// Magnetic field satisfying omega_b * t_store = 3 alpha - pi/2, the value
/// that cancels the elliptical distortion of the full transform. Negative
/// for alpha < pi/6.
double eraser_field(double alpha, double t_store);

/// (max - min)/mean of eta_l_out over a uniform phi_l grid (grid_size >= 64),
/// using full_transform_exact.
double transform_ellipticity(const SequenceConfig& cfg, int grid_size);

struct LifetimeFit {
    double tau_s = 0.0;
    double stderr_tau = 0.0;
    double amplitude = 0.0;
    int n_points = 0;
};

/// Least-squares fit of A exp(-t/tau): log-linear initialization followed by
/// damped Gauss-Newton (relative step < 1e-10 or 100 iterations). The
/// tau standard error comes from the fit covariance. Throws on fewer than
/// 3 samples, non-positive powers, degenerate times, or non-convergence.
LifetimeFit fit_lifetime(const std::vector<double>& t,
                         const std::vector<double>& power);

/// Faraday readout: theta(t) = C cos(omega_b t + phi_a) with C = beta |s_perp|.
struct MeasurementModel {
    double beta = 1.0;                      // rad per unit spin
    double omega_b_monitor = 1.4e3 * 2.0 * 3.14159265358979323846;  // rad/s
};

std::vector<std::pair<double, double>> faraday_trace(
    const BlochOrientation& bloch, const MeasurementModel& meas,
    const std::vector<double>& t_grid);

/// Quadrature demodulation at the monitor frequency; recovers (s_x, s_y).
/// Requires >= 2 modulation periods of span and >= 8 samples per period.
std::pair<double, double> demodulate_trace(
    const std::vector<std::pair<double, double>>& trace,
    const MeasurementModel& meas);

}  // namespace serf

#endif
