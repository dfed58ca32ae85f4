#include "serf/retrieval.hpp"

#include <cmath>
#include <stdexcept>

#include "serf/angles.hpp"
#include "serf/constants.hpp"

namespace serf {

using std::complex;

SusceptibilityTensor susceptibility_tensor(const BlochOrientation& bloch,
                                           const CesiumParams& params) {
    params.validate();
    const double eta = bloch.eta_a;
    const double god = params.gamma / params.delta;
    const double ab = params.a_cs * params.b_cs;
    const complex<double> i(0.0, 1.0);
    const complex<double> eip = std::polar(1.0, bloch.phi_a);
    const complex<double> eim = std::conj(eip);

    Eigen::Matrix2cd m;
    m(0, 0) = 1.0 - 2.0 * i * params.b_cs * params.b_cs * god * eta;
    m(0, 1) = -i * eta * (eip - i * ab * god * eim);
    m(1, 0) = i * eta * (eim - i * ab * god * eip);
    m(1, 1) = eta - 0.5 * i * params.a_cs * params.a_cs * god;

    SusceptibilityTensor out;
    out.chi = (i * params.d_cs * params.d_cs / params.gamma) * m;
    out.eta_a = bloch.eta_a;
    out.phi_a = bloch.phi_a;
    out.params = params;
    return out;
}

LightState retrieved_field_numeric(const SusceptibilityTensor& chi) {
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> solver(chi.chi);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("retrieved_field_numeric: eigensolver failed");
    }
    const auto& evals = solver.eigenvalues();
    const double m0 = std::abs(evals(0).imag());
    const double m1 = std::abs(evals(1).imag());
    const double scale = std::max({m0, m1, 1e-300});
    if (std::abs(m1 - m0) <= 1e-12 * scale) {
        throw NumericalError("retrieved_field_numeric: degenerate eigenvalues");
    }
    const int best = (m0 < m1) ? 0 : 1;
    Eigen::Vector2cd v = solver.eigenvectors().col(best);
    if (std::abs(v(1)) < 1e-300) {
        throw NumericalError("retrieved_field_numeric: vanishing control component");
    }
    v /= v(1);
    // E_y = i eta e^{i phi}
    const complex<double> w = complex<double>(0.0, -1.0) * v(0);
    LightState out;
    out.eta_l = std::abs(w);
    out.phi_l = (out.eta_l > 0.0) ? std::arg(w) : 0.0;
    out.control_amplitude = 1.0;
    return out;
}

RetrievedLight retrieval_map(double eta_a, double phi_a, double alpha) {
    if (!(std::abs(alpha) < 1.0)) {
        throw std::invalid_argument("retrieval_map: |alpha| < 1 required");
    }
    const complex<double> w =
        eta_a * std::polar(1.0, -2.0 * alpha) *
        (std::polar(1.0, phi_a) - complex<double>(0.0, alpha) * std::polar(1.0, -phi_a));
    RetrievedLight out;
    out.eta_l_out = std::abs(w);
    out.phi_l_out = -kPi / 4.0 - 2.0 * alpha +
                    scaled_tan_angle((1.0 - alpha) / (1.0 + alpha), phi_a + kPi / 4.0);
    return out;
}

StokesVector stokes_from_light(const LightState& light) {
    const complex<double> ez(light.control_amplitude, 0.0);
    const complex<double> ey =
        complex<double>(0.0, 1.0) * light.eta_l * std::polar(1.0, light.phi_l) * ez;
    const complex<double> cross = std::conj(ez) * ey;
    StokesVector s;
    s.s0 = std::norm(ez) + std::norm(ey);
    s.s1 = std::norm(ez) - std::norm(ey);
    s.s2 = 2.0 * cross.real();
    s.s3 = 2.0 * cross.imag();
    return s;
}

LightState light_from_stokes(const StokesVector& stokes, double control_amplitude) {
    const double denom = stokes.s0 + stokes.s1;  // 2 |E_z|^2
    if (!(denom > 0.0)) {
        throw std::invalid_argument("light_from_stokes: no control component");
    }
    const complex<double> zeta =
        complex<double>(stokes.s2, stokes.s3) / denom;   // E_y / E_z
    const complex<double> w = complex<double>(0.0, -1.0) * zeta;
    LightState out;
    out.eta_l = std::abs(w);
    out.phi_l = (out.eta_l > 0.0) ? std::arg(w) : 0.0;
    out.control_amplitude = control_amplitude;
    return out;
}

}  // namespace serf
