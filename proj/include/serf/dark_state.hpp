#ifndef SERF_DARK_STATE_HPP
#define SERF_DARK_STATE_HPP

#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "serf/cesium_params.hpp"

namespace serf {

/// Signal/control polarization state: E = E_c (z + i eta_l e^{i phi_l} y).
struct LightState {
    double eta_l = 0.0;
    double phi_l = 0.0;
    double control_amplitude = 1.0;

    /// The analytic maps assume eta_l << 1; this flags inputs outside that
    /// regime without rejecting them.
    bool large_signal() const { return eta_l > 0.1; }
};

/// Ordered basis (|g>, |r>, |e>, |p>).
enum Level : int { kG = 0, kR = 1, kE = 2, kP = 3 };

/// Unit-norm amplitudes over (g, r, e, p). For solver outputs, `eigenvalue`
/// carries the selected (complex) eigenvalue.
struct AtomicState4 {
    Eigen::Vector4cd amps = Eigen::Vector4cd::Zero();
    std::optional<std::complex<double>> eigenvalue;
};

/// Collective spin orientation: eta_a = sqrt(s_x^2+s_y^2)/s_z, phi_a the
/// azimuth, with s_z fixed at 1/2. phi_a is kept unwrapped (continuous),
/// not reduced mod 2pi.
struct BlochOrientation {
    double eta_a = 0.0;
    double phi_a = 0.0;

    double s_x() const;
    double s_y() const;
    double s_z() const { return 0.5; }

    static BlochOrientation from_transverse_spin(double s_x, double s_y);
};

/// Four-level non-Hermitian Hamiltonian, basis (g, r, e, p):
///   H0 = -i Gamma |e><e| + (Delta - i Gamma) |p><p|
///   V  = Omega_s |e><g| - Omega_c |e><r| + a Omega_c |p><g| - b Omega_s |p><r| + h.c.
/// The relative sign between the g- and r-couplings carries the
/// Clebsch-Gordan sign of the two lambda branches; with it, the
/// least-decaying eigenvector reproduces quasi_dark_state_analytic.
Eigen::Matrix4cd build_hamiltonian(double omega_c, std::complex<double> omega_s,
                                   const CesiumParams& params);

/// Eigenvector of H with the smallest |Im(lambda)| (least loss), unit norm,
/// gauge fixed so amp(g) is real positive. Throws NumericalError when the
/// two least-decaying eigenvalues are degenerate within 1e-12 relative.
AtomicState4 quasi_dark_state_numeric(const Eigen::Matrix4cd& hamiltonian);

/// First-order quasi-dark state:
///   |g> + sqrt(2) eta_l e^{-3 i alpha} [e^{i(phi_l-alpha)} - i alpha e^{-i(phi_l-alpha)}] |r>,
/// normalized, amp(e) = amp(p) = 0.
AtomicState4 quasi_dark_state_analytic(double eta_l, double phi_l, double alpha);

/// Light -> spin map. Amplitude and phase are those of the complex ratio
/// amp(r)/amp(g) of the analytic quasi-dark state, so the image of a phi_l
/// circle is an exact ellipse with semi-axes eta_l (1 +- alpha). phi_a is
/// continuous and strictly increasing in phi_l (|alpha| < 1).
BlochOrientation storage_map(double eta_l, double phi_l, double alpha);

/// Read (eta_a, phi_a) from amp(r)/amp(g) = sqrt(2) eta_a e^{i phi_a}.
/// Rejects amp(g) = 0.
BlochOrientation bloch_from_state(const AtomicState4& state);

/// Raised by eigensolvers and fitters on ill-posed numerical situations.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace serf

#endif
