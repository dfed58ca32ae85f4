#include "serf/dark_state.hpp"

#include <cmath>
#include <stdexcept>

#include "serf/angles.hpp"
#include "serf/constants.hpp"

namespace serf {

using std::complex;

double BlochOrientation::s_x() const { return 0.5 * eta_a * std::cos(phi_a); }
double BlochOrientation::s_y() const { return 0.5 * eta_a * std::sin(phi_a); }

BlochOrientation BlochOrientation::from_transverse_spin(double s_x, double s_y) {
    BlochOrientation b;
    b.eta_a = 2.0 * std::hypot(s_x, s_y);
    b.phi_a = (b.eta_a > 0.0) ? std::atan2(s_y, s_x) : 0.0;
    return b;
}

Eigen::Matrix4cd build_hamiltonian(double omega_c, complex<double> omega_s,
                                   const CesiumParams& params) {
    params.validate();
    Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
    h(kE, kE) = complex<double>(0.0, -params.gamma);
    h(kP, kP) = complex<double>(params.delta, -params.gamma);

    h(kE, kG) = omega_s;
    h(kE, kR) = -omega_c;
    h(kP, kG) = params.a_cs * omega_c;
    h(kP, kR) = -params.b_cs * omega_s;

    h(kG, kE) = std::conj(h(kE, kG));
    h(kR, kE) = std::conj(h(kE, kR));
    h(kG, kP) = std::conj(h(kP, kG));
    h(kR, kP) = std::conj(h(kP, kR));
    return h;
}

AtomicState4 quasi_dark_state_numeric(const Eigen::Matrix4cd& hamiltonian) {
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> solver(hamiltonian);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("quasi_dark_state_numeric: eigensolver failed");
    }
    const auto& evals = solver.eigenvalues();

    int best = 0, second = -1;
    for (int i = 1; i < 4; ++i) {
        if (std::abs(evals(i).imag()) < std::abs(evals(best).imag())) {
            second = best;
            best = i;
        } else if (second < 0 ||
                   std::abs(evals(i).imag()) < std::abs(evals(second).imag())) {
            second = i;
        }
    }
    const double m1 = std::abs(evals(best).imag());
    const double m2 = std::abs(evals(second).imag());
    const double scale = std::max({m1, m2, 1e-300});
    if ((m2 - m1) <= 1e-12 * scale) {
        throw NumericalError(
            "quasi_dark_state_numeric: degenerate least-decaying eigenvalue");
    }

    AtomicState4 state;
    state.amps = solver.eigenvectors().col(best);
    state.amps.normalize();
    const complex<double> g = state.amps(kG);
    if (std::abs(g) > 0.0) {
        state.amps *= std::polar(1.0, -std::arg(g));
        state.amps(kG) = complex<double>(std::abs(state.amps(kG)), 0.0);
    }
    state.eigenvalue = evals(best);
    return state;
}

namespace {

/// amp(r)/amp(g) of the first-order quasi-dark state, divided by sqrt(2):
/// w = eta_l e^{-3 i alpha} (e^{i u} - i alpha e^{-i u}), u = phi_l - alpha.
complex<double> storage_amplitude(double eta_l, double phi_l, double alpha) {
    const double u = phi_l - alpha;
    return eta_l * std::polar(1.0, -3.0 * alpha) *
           (std::polar(1.0, u) - complex<double>(0.0, alpha) * std::polar(1.0, -u));
}

}  // namespace

AtomicState4 quasi_dark_state_analytic(double eta_l, double phi_l, double alpha) {
    if (eta_l < 0.0 || alpha < 0.0) {
        throw std::invalid_argument("quasi_dark_state_analytic: eta_l, alpha >= 0");
    }
    AtomicState4 state;
    state.amps(kG) = 1.0;
    state.amps(kR) = std::sqrt(2.0) * storage_amplitude(eta_l, phi_l, alpha);
    state.amps.normalize();
    return state;
}

BlochOrientation storage_map(double eta_l, double phi_l, double alpha) {
    if (!(std::abs(alpha) < 1.0)) {
        throw std::invalid_argument("storage_map: |alpha| < 1 required");
    }
    const double u = phi_l - alpha;
    BlochOrientation out;
    out.eta_a = std::abs(storage_amplitude(eta_l, phi_l, alpha));
    // Same value as arg(storage_amplitude) but on the branch that is
    // continuous and monotone in phi_l.
    out.phi_a = -kPi / 4.0 - 3.0 * alpha +
                scaled_tan_angle((1.0 - alpha) / (1.0 + alpha), u + kPi / 4.0);
    return out;
}

BlochOrientation bloch_from_state(const AtomicState4& state) {
    const complex<double> g = state.amps(kG);
    if (std::abs(g) < 1e-300) {
        throw std::invalid_argument("bloch_from_state: amp(g) = 0");
    }
    const complex<double> ratio = state.amps(kR) / g;
    BlochOrientation b;
    b.eta_a = std::abs(ratio) / std::sqrt(2.0);
    b.phi_a = (b.eta_a > 0.0) ? std::arg(ratio) : 0.0;
    return b;
}

}  // namespace serf
