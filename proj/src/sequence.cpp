#include "serf/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "serf/constants.hpp"

namespace serf {

void SequenceConfig::validate() const {
    if (t_store < 0.0) throw std::invalid_argument("sequence: t_store must be >= 0");
    if (!(tau_s > 0.0)) throw std::invalid_argument("sequence: tau_s must be > 0");
}

double composed_lifetime(double t1, double kappa, double r_se) {
    if (!(t1 > 0.0)) throw std::invalid_argument("composed_lifetime: t1 must be > 0");
    if (kappa < 0.0 || r_se < 0.0) {
        throw std::invalid_argument("composed_lifetime: kappa, r_se must be >= 0");
    }
    return 1.0 / (1.0 / t1 + kappa * r_se);
}

BlochOrientation dark_evolution(const BlochOrientation& bloch,
                                const SequenceConfig& cfg) {
    cfg.validate();
    BlochOrientation out;
    out.eta_a = bloch.eta_a * std::exp(-cfg.t_store / cfg.tau_s);
    out.phi_a = bloch.phi_a + cfg.omega_b * cfg.t_store;
    return out;
}

RetrievedLight full_transform_exact(double eta_l, double phi_l,
                                    const SequenceConfig& cfg) {
    cfg.validate();
    const BlochOrientation stored = storage_map(eta_l, phi_l, cfg.alpha);
    const BlochOrientation evolved = dark_evolution(stored, cfg);
    return retrieval_map(evolved.eta_a, evolved.phi_a, cfg.alpha);
}

RetrievedLight full_transform_first_order(double eta_l, double phi_l,
                                          const SequenceConfig& cfg) {
    cfg.validate();
    if (!(std::abs(cfg.alpha) < 0.3)) {
        throw std::invalid_argument("full_transform_first_order: |alpha| < 0.3");
    }
    const double a = cfg.alpha;
    const double wt = cfg.omega_b * cfg.t_store;
    RetrievedLight out;
    out.phi_l_out = phi_l + wt - 6.0 * a -
                    2.0 * a * std::cos(wt - 3.0 * a) * std::cos(2.0 * phi_l + wt);
    out.eta_l_out = eta_l * std::exp(-cfg.t_store / cfg.tau_s) *
                    (1.0 - 2.0 * a * std::sin(2.0 * phi_l + wt) * std::cos(wt - 3.0 * a));
    return out;
}

double eraser_field(double alpha, double t_store) {
    if (!(t_store > 0.0)) {
        throw std::invalid_argument("eraser_field: t_store must be > 0");
    }
    return (3.0 * alpha - kPi / 2.0) / t_store;
}

double transform_ellipticity(const SequenceConfig& cfg, int grid_size) {
    if (grid_size < 64) {
        throw std::invalid_argument("transform_ellipticity: grid_size >= 64");
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double sum = 0.0;
    for (int i = 0; i < grid_size; ++i) {
        const double phi = kTwoPi * i / grid_size;
        const double eta = full_transform_exact(1e-3, phi, cfg).eta_l_out;
        lo = std::min(lo, eta);
        hi = std::max(hi, eta);
        sum += eta;
    }
    return (hi - lo) / (sum / grid_size);
}

LifetimeFit fit_lifetime(const std::vector<double>& t,
                         const std::vector<double>& power) {
    const int n = static_cast<int>(t.size());
    if (power.size() != t.size()) {
        throw std::invalid_argument("fit_lifetime: size mismatch");
    }
    if (n < 3) throw std::invalid_argument("fit_lifetime: need at least 3 samples");
    for (double y : power) {
        if (!(y > 0.0)) throw std::invalid_argument("fit_lifetime: powers must be positive");
    }
    const auto [tmin, tmax] = std::minmax_element(t.begin(), t.end());
    if (!(*tmax > *tmin)) {
        throw std::invalid_argument("fit_lifetime: need at least two distinct times");
    }

    // Log-linear initialization: ln y = ln A - t/tau.
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int i = 0; i < n; ++i) {
        const double ly = std::log(power[i]);
        st += t[i]; sy += ly; stt += t[i] * t[i]; sty += t[i] * ly;
    }
    const double det = n * stt - st * st;
    double slope = (n * sty - st * sy) / det;
    double intercept = (sy - slope * st) / n;
    double amp = std::exp(intercept);
    double tau = (slope < 0.0) ? -1.0 / slope : 10.0 * (*tmax - *tmin);

    auto cost = [&](double a, double b) {
        double c = 0.0;
        for (int i = 0; i < n; ++i) {
            const double r = a * std::exp(-t[i] / b) - power[i];
            c += r * r;
        }
        return c;
    };

    // Damped Gauss-Newton on (A, tau).
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
        Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
        for (int i = 0; i < n; ++i) {
            const double m = amp * std::exp(-t[i] / tau);
            const double r = m - power[i];
            const Eigen::Vector2d j(m / amp, m * t[i] / (tau * tau));
            jtj += j * j.transpose();
            jtr += j * r;
        }
        Eigen::Vector2d step = jtj.ldlt().solve(-jtr);
        if (!step.allFinite()) {
            throw NumericalError("fit_lifetime: singular normal equations");
        }
        const double c0 = cost(amp, tau);
        double lambda = 1.0;
        double a_new = amp, tau_new = tau;
        bool improved = false;
        for (int k = 0; k < 40; ++k) {
            a_new = amp + lambda * step(0);
            tau_new = tau + lambda * step(1);
            if (a_new > 0.0 && tau_new > 0.0 && cost(a_new, tau_new) <= c0) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        const double step_rel = std::max(std::abs(step(0) / amp),
                                         std::abs(step(1) / tau));
        if (!improved) {
            // No descent direction left: either at the numerical floor or a
            // vanishing proposed step. Both count as converged.
            converged = c0 <= n * (1e-13 * amp) * (1e-13 * amp) || step_rel <= 1e-10;
            break;
        }
        const double rel = lambda * step_rel;
        amp = a_new;
        tau = tau_new;
        if (rel < 1e-10) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NumericalError("fit_lifetime: no convergence in 100 iterations");
    }

    // Covariance from the converged Jacobian.
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    double rss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double m = amp * std::exp(-t[i] / tau);
        const double r = m - power[i];
        rss += r * r;
        const Eigen::Vector2d j(m / amp, m * t[i] / (tau * tau));
        jtj += j * j.transpose();
    }
    const double sigma2 = (n > 2) ? rss / (n - 2) : 0.0;
    const Eigen::Matrix2d cov = sigma2 * jtj.inverse();

    LifetimeFit fit;
    fit.tau_s = tau;
    fit.stderr_tau = std::sqrt(std::max(0.0, cov(1, 1)));
    fit.amplitude = amp;
    fit.n_points = n;
    return fit;
}

std::vector<std::pair<double, double>> faraday_trace(
    const BlochOrientation& bloch, const MeasurementModel& meas,
    const std::vector<double>& t_grid) {
    if (meas.beta == 0.0) {
        throw std::invalid_argument("faraday_trace: beta must be nonzero");
    }
    const double c = meas.beta * std::hypot(bloch.s_x(), bloch.s_y());
    std::vector<std::pair<double, double>> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        out.emplace_back(t, c * std::cos(meas.omega_b_monitor * t + bloch.phi_a));
    }
    return out;
}

std::pair<double, double> demodulate_trace(
    const std::vector<std::pair<double, double>>& trace,
    const MeasurementModel& meas) {
    if (meas.beta == 0.0) {
        throw std::invalid_argument("demodulate_trace: beta must be nonzero");
    }
    const int n = static_cast<int>(trace.size());
    if (n < 2) throw std::invalid_argument("demodulate_trace: trace too short");
    const double period = kTwoPi / meas.omega_b_monitor;
    const double span = trace.back().first - trace.front().first;
    if (span < 2.0 * period * (1.0 - 1e-9)) {
        throw std::invalid_argument("demodulate_trace: need >= 2 modulation periods");
    }
    double max_dt = 0.0;
    for (int i = 1; i < n; ++i) {
        max_dt = std::max(max_dt, trace[i].first - trace[i - 1].first);
    }
    if (max_dt > period / 8.0 * (1.0 + 1e-9)) {
        throw std::invalid_argument("demodulate_trace: need >= 8 samples per period");
    }

    // Least-squares projection on {cos(wt), sin(wt)}:
    // theta = C cos(wt + phi) = (C cos phi) cos wt - (C sin phi) sin wt.
    double scc = 0, sss = 0, scs = 0, syc = 0, sys = 0;
    for (const auto& [t, th] : trace) {
        const double c = std::cos(meas.omega_b_monitor * t);
        const double s = std::sin(meas.omega_b_monitor * t);
        scc += c * c; sss += s * s; scs += c * s;
        syc += th * c; sys += th * s;
    }
    const double det = scc * sss - scs * scs;
    if (!(std::abs(det) > 0.0)) {
        throw NumericalError("demodulate_trace: degenerate design matrix");
    }
    const double a = (sss * syc - scs * sys) / det;   // C cos phi
    const double b = (scc * sys - scs * syc) / det;   // -C sin phi
    return {a / meas.beta, -b / meas.beta};
}

}  // namespace serf
