#include "serf/collisions.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Sparse>

#include "serf/constants.hpp"
#include "serf/philox.hpp"

namespace serf {

using std::complex;

namespace {

inline int idx(int electron, int nuclear) { return 3 * electron + nuclear; }

// Rows of P_S in the pair basis have at most two entries: for electron pair
// (up,down) or (down,up) the row couples the state to itself (+1/2) and to
// its electron-swapped partner (-1/2); aligned electron pairs are annihilated.
struct SingletRow {
    int partner;
    bool active;
};

std::array<SingletRow, kPairDim> singlet_rows() {
    std::array<SingletRow, kPairDim> rows{};
    for (int e1 = 0; e1 < 2; ++e1)
        for (int n1 = 0; n1 < 3; ++n1)
            for (int e2 = 0; e2 < 2; ++e2)
                for (int n2 = 0; n2 < 3; ++n2) {
                    const int row = kSpinDim * idx(e1, n1) + idx(e2, n2);
                    rows[row].active = (e1 != e2);
                    rows[row].partner = kSpinDim * idx(e2, n1) + idx(e1, n2);
                }
    return rows;
}

const std::array<SingletRow, kPairDim>& rows() {
    static const auto r = singlet_rows();
    return r;
}

// y = P_S x without forming the 36x36 matrix.
void apply_singlet(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
    const auto& r = rows();
    for (int k = 0; k < kPairDim; ++k) {
        y(k) = r[k].active ? 0.5 * (x(k) - x(r[k].partner)) : complex<double>(0.0);
    }
}

// B = P_S A (row structure applied to every column).
void apply_singlet_left(const Eigen::MatrixXcd& a, Eigen::MatrixXcd& b) {
    const auto& r = rows();
    for (int k = 0; k < kPairDim; ++k) {
        if (r[k].active) {
            b.row(k) = 0.5 * (a.row(k) - a.row(r[k].partner));
        } else {
            b.row(k).setZero();
        }
    }
}

}  // namespace

SingleAtomSpinState stored_state(double eta_a, double phi_a,
                                 const CesiumParams& params) {
    params.validate();
    if (eta_a < 0.0) {
        throw std::invalid_argument("stored_state: eta_a must be >= 0");
    }
    const complex<double> c = std::sqrt(2.0) * eta_a * std::polar(1.0, phi_a);
    SingleAtomSpinState s;
    s.amps(idx(0, 0)) = 1.0;
    s.amps(idx(0, 1)) = c * params.q_coeff;
    s.amps(idx(1, 0)) = c * params.p_coeff;
    s.amps.normalize();
    return s;
}

SingleAtomSpinState delta_m2_state(double eta, double phi) {
    if (eta < 0.0) {
        throw std::invalid_argument("delta_m2_state: eta must be >= 0");
    }
    const complex<double> c = std::sqrt(2.0) * eta * std::polar(1.0, phi);
    SingleAtomSpinState s;
    s.amps(idx(0, 0)) = 1.0;
    s.amps(idx(0, 2)) = c * std::sqrt(3.0 / 4.0);
    s.amps(idx(1, 1)) = c * std::sqrt(1.0 / 4.0);
    s.amps.normalize();
    return s;
}

SpinVector ket_44() {
    SpinVector v = SpinVector::Zero();
    v(idx(0, 0)) = 1.0;
    return v;
}

SpinVector ket_43(const CesiumParams& params) {
    SpinVector v = SpinVector::Zero();
    v(idx(0, 1)) = params.q_coeff;
    v(idx(1, 0)) = params.p_coeff;
    return v;
}

SpinVector ket_42() {
    SpinVector v = SpinVector::Zero();
    v(idx(0, 2)) = std::sqrt(3.0 / 4.0);
    v(idx(1, 1)) = std::sqrt(1.0 / 4.0);
    return v;
}

Eigen::MatrixXd singlet_projector_pair() {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(kPairDim, kPairDim);
    const auto& r = rows();
    for (int k = 0; k < kPairDim; ++k) {
        if (!r[k].active) continue;
        p(k, k) = 0.5;
        p(k, r[k].partner) = -0.5;
    }
    return p;
}

Eigen::MatrixXd triplet_projector_pair() {
    return Eigen::MatrixXd::Identity(kPairDim, kPairDim) - singlet_projector_pair();
}

PairSpinState pair_product(const SingleAtomSpinState& psi_i,
                           const SingleAtomSpinState& psi_j) {
    PairSpinState pair;
    pair.amps.resize(kPairDim);
    for (int a = 0; a < kSpinDim; ++a)
        for (int b = 0; b < kSpinDim; ++b)
            pair.amps(kSpinDim * a + b) = psi_i.amps(a) * psi_j.amps(b);
    return pair;
}

double singlet_fraction(const SingleAtomSpinState& psi_i,
                        const SingleAtomSpinState& psi_j) {
    const PairSpinState pair = pair_product(psi_i, psi_j);
    Eigen::VectorXcd sv(kPairDim);
    apply_singlet(pair.amps, sv);
    // P_S is a projector, so <psi|P_S|psi> = |P_S psi|^2.
    return sv.squaredNorm();
}

PairSpinState apply_collision(const PairSpinState& pair, double chi) {
    if (pair.amps.size() != kPairDim) {
        throw std::invalid_argument("apply_collision: expected a 36-dim pair state");
    }
    Eigen::VectorXcd sv(kPairDim);
    apply_singlet(pair.amps, sv);
    PairSpinState out;
    out.amps = pair.amps + (std::polar(1.0, chi) - 1.0) * sv;
    return out;
}

std::string scheme_name(Scheme s) {
    return s == Scheme::kDeltaM1 ? "dm1" : "dm2";
}

namespace {

// Hyperfine-secular projector pair: P4 spans the truncated F = 4 states,
// P3 the orthogonal complement.
SpinMatrix f4_projector(const CesiumParams& params) {
    SpinMatrix p = SpinMatrix::Zero();
    const SpinVector kets[3] = {ket_44(), ket_43(params), ket_42()};
    for (const auto& k : kets) p += k * k.adjoint();
    return p;
}

struct McEngine {
    const CesiumParams& params;
    SpinMatrix p4;
    SpinMatrix p3;
    SpinVector coherence_ket;  // <44| rho |4m>: rho-sandwich partners
    SpinVector ket44v;

    explicit McEngine(const CesiumParams& prm, Scheme scheme) : params(prm) {
        p4 = f4_projector(prm);
        p3 = SpinMatrix::Identity() - p4;
        ket44v = ket_44();
        coherence_ket = (scheme == Scheme::kDeltaM1) ? ket_43(prm) : ket_42();
    }

    complex<double> coherence(const SpinMatrix& rho) const {
        return (ket44v.adjoint() * rho * coherence_ket)(0, 0);
    }

    void collide(SpinMatrix& rho_i, SpinMatrix& rho_j, double chi) const {
        // Pair density operator of the product state.
        Eigen::MatrixXcd pair(kPairDim, kPairDim);
        for (int a = 0; a < kSpinDim; ++a)
            for (int b = 0; b < kSpinDim; ++b)
                for (int c = 0; c < kSpinDim; ++c)
                    for (int d = 0; d < kSpinDim; ++d)
                        pair(kSpinDim * a + b, kSpinDim * c + d) =
                            rho_i(a, c) * rho_j(b, d);

        // U rho U+ with U = 1 + (e^{i chi} - 1) P_S, using P_S rho = A,
        // rho P_S = A+, P_S rho P_S = P_S A+.
        const complex<double> u = std::polar(1.0, chi) - 1.0;
        Eigen::MatrixXcd a(kPairDim, kPairDim), sas(kPairDim, kPairDim);
        apply_singlet_left(pair, a);
        Eigen::MatrixXcd ad = a.adjoint();
        apply_singlet_left(ad, sas);
        pair += u * a + std::conj(u) * ad + std::norm(u) * sas;

        // Reduced density operators (molecular-chaos closure).
        SpinMatrix ri = SpinMatrix::Zero(), rj = SpinMatrix::Zero();
        for (int a2 = 0; a2 < kSpinDim; ++a2)
            for (int c = 0; c < kSpinDim; ++c)
                for (int k = 0; k < kSpinDim; ++k) {
                    ri(a2, c) += pair(kSpinDim * a2 + k, kSpinDim * c + k);
                    rj(a2, c) += pair(kSpinDim * k + a2, kSpinDim * k + c);
                }

        // Hyperfine-secular step: drop F4-F3 cross coherences.
        ri = p4 * ri * p4 + p3 * ri * p3;
        rj = p4 * rj * p4 + p3 * rj * p3;

        // Restore exact hermiticity/trace (kron compounds roundoff drift).
        ri = 0.5 * (ri + ri.adjoint()).eval();
        rj = 0.5 * (rj + rj.adjoint()).eval();
        ri /= ri.trace().real();
        rj /= rj.trace().real();
        rho_i = ri;
        rho_j = rj;
    }
};

}  // namespace

McResult mc_coherence_decay(const McConfig& config, const CesiumParams& params) {
    params.validate();
    if (config.n_atoms < 2) {
        throw std::invalid_argument("mc_coherence_decay: n_atoms >= 2 required");
    }
    if (!(config.r_se > 0.0)) {
        throw std::invalid_argument("mc_coherence_decay: r_se must be > 0");
    }
    if (config.eta > 0.1) {
        throw std::invalid_argument("mc_coherence_decay: eta <= 0.1 required");
    }

    const McEngine engine(params, config.scheme);
    const SingleAtomSpinState psi0 =
        (config.scheme == Scheme::kDeltaM1)
            ? stored_state(config.eta, config.phi, params)
            : delta_m2_state(config.eta, config.phi);
    const SpinMatrix rho0 = psi0.amps * psi0.amps.adjoint();

    const int n = config.n_atoms;
    std::vector<SpinMatrix> rho(n, rho0);
    std::vector<complex<double>> coh(n, engine.coherence(rho0));
    complex<double> coh_sum = static_cast<double>(n) * coh[0];

    McResult result;
    result.trace.emplace_back(0.0, std::abs(coh_sum) / n);

    Philox4x64 rng(config.seed);
    const double pair_rate = n * config.r_se / 2.0;
    double t = 0.0;
    while (true) {
        t += rng.next_exponential(pair_rate);
        if (t > config.duration) break;
        const int i = static_cast<int>(rng.next_below(n));
        int j = static_cast<int>(rng.next_below(n - 1));
        if (j >= i) ++j;
        const double chi = kTwoPi * rng.next_double();

        engine.collide(rho[i], rho[j], chi);
        coh_sum -= coh[i] + coh[j];
        coh[i] = engine.coherence(rho[i]);
        coh[j] = engine.coherence(rho[j]);
        coh_sum += coh[i] + coh[j];
        result.trace.emplace_back(t, std::abs(coh_sum) / n);
    }

    std::vector<double> ts, ys;
    ts.reserve(result.trace.size());
    ys.reserve(result.trace.size());
    for (const auto& [tt, yy] : result.trace) {
        ts.push_back(tt);
        ys.push_back(yy);
    }
    try {
        result.fit = fit_lifetime(ts, ys);
        result.decay_rate = 1.0 / result.fit.tau_s;
        result.fit_ok = true;
    } catch (const std::exception& e) {
        result.fit_ok = false;
        result.fit_error = e.what();
    }
    return result;
}

namespace {

int pow_int(int base, int exp) {
    int v = 1;
    for (int k = 0; k < exp; ++k) v *= base;
    return v;
}

}  // namespace

TripletCheckReport collective_triplet_check(int n_atoms,
                                            complex<double> qubit_alpha,
                                            complex<double> qubit_beta) {
    if (n_atoms < 2 || n_atoms > 4) {
        throw std::invalid_argument("collective_triplet_check: n_atoms in {2,3,4}");
    }
    if (std::abs(std::norm(qubit_alpha) + std::norm(qubit_beta) - 1.0) > 1e-9) {
        throw std::invalid_argument(
            "collective_triplet_check: |alpha|^2 + |beta|^2 must be 1");
    }
    const int dim = pow_int(kSpinDim, n_atoms);
    using Sparse = Eigen::SparseMatrix<double>;
    using Triplet = Eigen::Triplet<double>;

    // F_- = (1/N) sum_k (s_-^k + i_-^k), assembled sparsely.
    const double spin_i = 3.5;
    const double c1 = std::sqrt(spin_i * (spin_i + 1.0) - 3.5 * 2.5);
    const double c2 = std::sqrt(spin_i * (spin_i + 1.0) - 2.5 * 1.5);
    std::vector<Triplet> lower_entries;
    for (int nn = 0; nn < 3; ++nn)
        lower_entries.emplace_back(idx(1, nn), idx(0, nn), 1.0);  // s_-
    for (int e = 0; e < 2; ++e) {
        lower_entries.emplace_back(idx(e, 1), idx(e, 0), c1);  // i_-: 7/2 -> 5/2
        lower_entries.emplace_back(idx(e, 2), idx(e, 1), c2);  // i_-: 5/2 -> 3/2
    }

    std::vector<Triplet> f_entries;
    std::vector<int> digits(n_atoms);
    for (int col = 0; col < dim; ++col) {
        int tmp = col;
        for (int k = n_atoms - 1; k >= 0; --k) {
            digits[k] = tmp % kSpinDim;
            tmp /= kSpinDim;
        }
        for (int atom = 0; atom < n_atoms; ++atom) {
            for (const auto& entry : lower_entries) {
                if (digits[atom] != entry.col()) continue;
                int row = 0;
                for (int k = 0; k < n_atoms; ++k) {
                    row = row * kSpinDim + ((k == atom) ? entry.row() : digits[k]);
                }
                f_entries.emplace_back(row, col, entry.value() / n_atoms);
            }
        }
    }
    Sparse f_minus(dim, dim);
    f_minus.setFromTriplets(f_entries.begin(), f_entries.end());

    Eigen::VectorXd ground = Eigen::VectorXd::Zero(dim);
    ground(0) = 1.0;  // every atom at index 0 = |up, 7/2>

    Eigen::VectorXcd r_state =
        qubit_alpha * ground.cast<complex<double>>() +
        qubit_beta * (f_minus * ground).cast<complex<double>>();
    r_state.normalize();

    TripletCheckReport report;
    report.n_atoms = n_atoms;

    for (int i = 0; i < n_atoms; ++i) {
        for (int j = i + 1; j < n_atoms; ++j) {
            ++report.n_pairs;
            std::vector<Triplet> ps_entries;
            for (int row = 0; row < dim; ++row) {
                int tmp = row;
                for (int k = n_atoms - 1; k >= 0; --k) {
                    digits[k] = tmp % kSpinDim;
                    tmp /= kSpinDim;
                }
                const int ei = digits[i] / 3, ni = digits[i] % 3;
                const int ej = digits[j] / 3, nj = digits[j] % 3;
                if (ei == ej) continue;
                ps_entries.emplace_back(row, row, 0.5);
                std::vector<int> swapped = digits;
                swapped[i] = 3 * ej + ni;
                swapped[j] = 3 * ei + nj;
                int col = 0;
                for (int k = 0; k < n_atoms; ++k) col = col * kSpinDim + swapped[k];
                ps_entries.emplace_back(row, col, -0.5);
            }
            Sparse ps_full(dim, dim);
            ps_full.setFromTriplets(ps_entries.begin(), ps_entries.end());

            // [P_T, F_-] = [1 - P_S, F_-] = -[P_S, F_-]; same norm.
            const Sparse comm = (ps_full * f_minus - f_minus * ps_full).pruned(0.0);
            double comm_norm = 0.0;
            for (int k = 0; k < comm.outerSize(); ++k) {
                for (Sparse::InnerIterator it(comm, k); it; ++it) {
                    comm_norm = std::max(comm_norm, std::abs(it.value()));
                }
            }
            const Eigen::VectorXcd ps_r =
                ps_full.cast<complex<double>>() * r_state;
            const double singlet_exp = r_state.dot(ps_r).real();
            report.max_commutator_norm =
                std::max(report.max_commutator_norm, comm_norm);
            report.max_singlet_expectation =
                std::max(report.max_singlet_expectation, std::abs(singlet_exp));
        }
    }
    report.pass = report.max_commutator_norm <= 1e-12 &&
                  report.max_singlet_expectation <= 1e-12;
    return report;
}

}  // namespace serf
