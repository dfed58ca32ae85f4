#ifndef SERF_RETRIEVAL_HPP
#define SERF_RETRIEVAL_HPP

#include <Eigen/Dense>

#include "serf/cesium_params.hpp"
#include "serf/dark_state.hpp"

namespace serf {

/// Mean transverse susceptibility <chi>_perp over the polarization basis
/// (y, z), including the overall i d^2/Gamma prefactor. Carries the inputs
/// it was built from.
struct SusceptibilityTensor {
    Eigen::Matrix2cd chi;
    double eta_a = 0.0;
    double phi_a = 0.0;
    CesiumParams params;
};

/// chi = (i d^2/Gamma) *
///   [ 1 - 2i b^2 (G/D) eta_a                  , -i eta_a (e^{i phi} - i a b (G/D) e^{-i phi}) ]
///   [ i eta_a (e^{-i phi} - i a b (G/D) e^{i phi}),  eta_a - (i/2) a^2 (G/D)                  ]
/// The lower-right eta_a enters without a phase factor, as printed in the
/// source expression; see README notes.
SusceptibilityTensor susceptibility_tensor(const BlochOrientation& bloch,
                                           const CesiumParams& params);

/// Least-decaying eigenvector of <chi>_perp (smallest Im eigenvalue),
/// normalized so the z (control) component is 1; (eta, phi) read from
/// E_y = i eta e^{i phi}. Degenerate eigenvalues raise NumericalError.
LightState retrieved_field_numeric(const SusceptibilityTensor& chi);

struct RetrievedLight {
    double eta_l_out = 0.0;
    double phi_l_out = 0.0;
};

/// Spin -> light map: amplitude and phase of
///   eta_a e^{-2 i alpha} (e^{i phi_a} - i alpha e^{-i phi_a}),
/// an exact ellipse over the phi_a circle with semi-axes eta_a (1 -+ alpha).
/// phi_l_out is continuous and monotone in phi_a.
RetrievedLight retrieval_map(double eta_a, double phi_a, double alpha);

/// Stokes parameters, convention
///   S0 = |E_z|^2 + |E_y|^2,  S1 = |E_z|^2 - |E_y|^2,
///   S2 = 2 Re(E_z* E_y),     S3 = 2 Im(E_z* E_y),
/// so control-only light sits at (S1,S2,S3)/S0 = (1,0,0).
struct StokesVector {
    double s0 = 1.0;
    double s1 = 1.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

StokesVector stokes_from_light(const LightState& light);

/// Inverse of stokes_from_light on the (eta_l, phi_l) parameters; the
/// control amplitude is not encoded in normalized Stokes parameters and is
/// supplied by the caller.
LightState light_from_stokes(const StokesVector& stokes,
                             double control_amplitude = 1.0);

}  // namespace serf

#endif
