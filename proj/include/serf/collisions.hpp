#ifndef SERF_COLLISIONS_HPP
#define SERF_COLLISIONS_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "serf/cesium_params.hpp"
#include "serf/sequence.hpp"

namespace serf {

/// Single-atom spin space: electron {up, down} x nuclear m_I in
/// {7/2, 5/2, 3/2}, index = 3*electron + nuclear. The truncation keeps the
/// three nuclear levels reached by the stored and reference coherences;
/// collisions conserve total m, so no population leaks past it at the
/// simulated orders.
inline constexpr int kSpinDim = 6;
inline constexpr int kPairDim = kSpinDim * kSpinDim;

using SpinVector = Eigen::Vector<std::complex<double>, kSpinDim>;
using SpinMatrix = Eigen::Matrix<std::complex<double>, kSpinDim, kSpinDim>;

struct SingleAtomSpinState {
    SpinVector amps = SpinVector::Zero();
};

/// Two-atom product space, index = 6*i + j (first atom major).
struct PairSpinState {
    Eigen::VectorXcd amps;  // kPairDim
};

struct CollisionEvent {
    double chi = 0.0;  // exchange phase, [0, 2pi)
    int i = 0;
    int j = 0;
    double time = 0.0;
};

/// Stored orientation state (1, sqrt(2) eta e^{i phi} q, sqrt(2) eta e^{i phi} p)
/// on (up 7/2, up 5/2, down 7/2), normalized.
SingleAtomSpinState stored_state(double eta_a, double phi_a,
                                 const CesiumParams& params);

/// |4,4> + sqrt(2) eta e^{i phi} |4,2>, with
/// |4,2> = sqrt(3/4) |up,3/2> + sqrt(1/4) |down,5/2>, normalized.
SingleAtomSpinState delta_m2_state(double eta, double phi);

/// F = 4 basis states of the truncated space.
SpinVector ket_44();
SpinVector ket_43(const CesiumParams& params);
SpinVector ket_42();

/// Electron-pair singlet projector on the 36-dim pair space
/// (identity on both nuclear factors). Entries are exact multiples of 1/2.
Eigen::MatrixXd singlet_projector_pair();

/// Triplet partner: identity - singlet.
Eigen::MatrixXd triplet_projector_pair();

PairSpinState pair_product(const SingleAtomSpinState& psi_i,
                           const SingleAtomSpinState& psi_j);

/// <psi_ij| P_S |psi_ij> for the product of the two (unit-norm) states.
double singlet_fraction(const SingleAtomSpinState& psi_i,
                        const SingleAtomSpinState& psi_j);

/// (P_T + e^{i chi} P_S) |pair>; unitary, so the norm is preserved.
PairSpinState apply_collision(const PairSpinState& pair, double chi);

enum class Scheme { kDeltaM1, kDeltaM2 };

std::string scheme_name(Scheme s);

struct McConfig {
    Scheme scheme = Scheme::kDeltaM1;
    double r_se = 1000.0;     // per-atom collision rate, 1/s
    double duration = 0.1;    // s
    int n_atoms = 200;
    double eta = 1e-2;
    double phi = 0.4;
    std::uint64_t seed = 0;
};

struct McResult {
    std::vector<std::pair<double, double>> trace;  // (t, |mean coherence|)
    LifetimeFit fit;
    double decay_rate = 0.0;  // 1/fit.tau_s
    bool fit_ok = false;
    std::string fit_error;
};

/// Ensemble spin-exchange relaxation experiment.
///
/// Pairwise collisions arrive as a global Poisson process at rate
/// n_atoms * r_se / 2 (each atom collides at rate r_se); partners are
/// uniform, chi is uniform on [0, 2pi). Atoms are carried as 6x6 density
/// operators. Each collision applies the exchange unitary to the pair
/// product state, restores the product form from the two reduced density
/// operators (molecular-chaos closure), and then removes coherences
/// between the F = 4 and F = 3 manifolds: between collisions the hyperfine
/// interaction precesses far faster than the collision rate, so those
/// cross-manifold coherences average away. Without that dephasing step a
/// single collision would strip the electron-down admixture once and the
/// remainder would sit in a trivially immune electron-up state.
///
/// The traced observable is |mean_i <4,4| rho_i |4,m>|, m = 3 or 2 by
/// scheme, logged after every collision. Results are a pure function of
/// (config, seed).
McResult mc_coherence_decay(const McConfig& config, const CesiumParams& params);

struct TripletCheckReport {
    int n_atoms = 0;
    int n_pairs = 0;
    double max_commutator_norm = 0.0;      // max |[P_T^{ij}, F_-]| entry
    double max_singlet_expectation = 0.0;  // max <R| P_S^{ij} |R>
    bool pass = false;
};

/// Builds |G> = prod |up, 7/2>, applies (alpha + beta F_-) with
/// F_- = (1/N) sum_i (s_-^i + i_-^i), and verifies that every pair's
/// triplet projector commutes with F_- and that |R> has no singlet
/// component. n_atoms in {2, 3, 4}.
TripletCheckReport collective_triplet_check(int n_atoms,
                                            std::complex<double> qubit_alpha,
                                            std::complex<double> qubit_beta);

}  // namespace serf

#endif
