#ifndef SERF_ELLIPSE_FIT_HPP
#define SERF_ELLIPSE_FIT_HPP

#include <vector>

namespace serf {

/// Algebraic least-squares conic fit, reduced to ellipse parameters.
struct EllipseFit {
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double tilt_major = 0.0;   // major-axis angle, in [0, pi)
    double tilt_minor = 0.0;   // minor-axis angle, in [0, pi)
    double center_x = 0.0;
    double center_y = 0.0;
    double rms_residual = 0.0;  // RMS orthogonal-ish algebraic residual, data units
};

/// Fits a x^2 + b xy + c y^2 + d x + e y + f = 0 by SVD on the scaled
/// design matrix (unit-norm coefficient constraint), then converts to
/// geometric parameters. Coordinates are pre-scaled by the mean radius, so
/// near-machine accuracy is reached for exact ellipse data regardless of
/// its absolute size. Throws std::invalid_argument for < 6 points or if
/// the best conic is not an ellipse.
EllipseFit fit_ellipse(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace serf

#endif
