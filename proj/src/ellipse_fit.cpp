#include "serf/ellipse_fit.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "serf/constants.hpp"

namespace serf {

EllipseFit fit_ellipse(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    if (y.size() != x.size() || n < 6) {
        throw std::invalid_argument("fit_ellipse: need >= 6 matched points");
    }

    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale += std::hypot(x[i], y[i]);
    scale /= n;
    if (!(scale > 0.0)) {
        throw std::invalid_argument("fit_ellipse: degenerate point set");
    }

    Eigen::MatrixXd design(n, 6);
    for (int i = 0; i < n; ++i) {
        const double xs = x[i] / scale;
        const double ys = y[i] / scale;
        design.row(i) << xs * xs, xs * ys, ys * ys, xs, ys, 1.0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(design, Eigen::ComputeThinV);
    const Eigen::VectorXd coeff = svd.matrixV().col(5);
    const double a = coeff(0), b = coeff(1), c = coeff(2);
    const double d = coeff(3), e = coeff(4), f = coeff(5);

    if (!(4.0 * a * c - b * b > 0.0)) {
        throw std::invalid_argument("fit_ellipse: best conic is not an ellipse");
    }

    Eigen::Matrix2d quad;
    quad << a, b / 2.0, b / 2.0, c;
    const Eigen::Vector2d lin(d, e);
    const Eigen::Vector2d center = quad.ldlt().solve(-0.5 * lin);
    const double f_centered = f + 0.5 * lin.dot(center);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(quad);
    const Eigen::Vector2d evals = es.eigenvalues();
    if (!(-f_centered / evals(0) > 0.0 && -f_centered / evals(1) > 0.0)) {
        throw std::invalid_argument("fit_ellipse: inconsistent ellipse parameters");
    }
    const double axis0 = std::sqrt(-f_centered / evals(0));
    const double axis1 = std::sqrt(-f_centered / evals(1));
    const double angle0 = std::atan2(es.eigenvectors()(1, 0), es.eigenvectors()(0, 0));
    const double angle1 = std::atan2(es.eigenvectors()(1, 1), es.eigenvectors()(0, 1));

    auto fold = [](double ang) {
        ang = std::fmod(ang, kPi);
        if (ang < 0.0) ang += kPi;
        return ang;
    };

    EllipseFit fit;
    if (axis0 >= axis1) {
        fit.semi_major = axis0 * scale;
        fit.semi_minor = axis1 * scale;
        fit.tilt_major = fold(angle0);
        fit.tilt_minor = fold(angle1);
    } else {
        fit.semi_major = axis1 * scale;
        fit.semi_minor = axis0 * scale;
        fit.tilt_major = fold(angle1);
        fit.tilt_minor = fold(angle0);
    }
    fit.center_x = center(0) * scale;
    fit.center_y = center(1) * scale;

    // Algebraic residual normalized to data units: |D c| scaled by the
    // gradient magnitude of the quadratic form at the mean radius.
    const double resid_scaled = (design * coeff).norm() / std::sqrt(double(n));
    const double grad = std::hypot(2.0 * a + b, 2.0 * c + b);  // order-of-magnitude
    fit.rms_residual = resid_scaled / std::max(grad, 1e-300) * scale;
    return fit;
}

}  // namespace serf
