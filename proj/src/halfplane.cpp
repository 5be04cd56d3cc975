#include "sle/halfplane.hpp"

#include "sle/errors.hpp"

#include <cmath>
#include <string>

namespace sle {

HalfPlanePoint::HalfPlanePoint(double re, double im) : value_(re, im) {
    if (!(im >= 0.0) || !std::isfinite(re) || !std::isfinite(im)) {
        throw ValidationError("point (" + std::to_string(re) + ", " + std::to_string(im) +
                              ") is not in the closed upper half-plane");
    }
}

Complex sqrt_upper(Complex w) {
    const double x = w.real();
    const double y = w.imag();
    if (x == 0.0 && y == 0.0) return {0.0, 0.0};
    const double r = std::hypot(x, y);
    if (x >= 0.0) {
        const double s = std::sqrt(0.5 * (r + x));
        const double t = y / (2.0 * s);
        // The pair (s, t) is the principal root; flip onto the upper branch.
        if (t < 0.0) return {-s, -t};
        return {s, t == 0.0 ? 0.0 : t};
    }
    const double t = std::sqrt(0.5 * (r - x));
    return {y / (2.0 * t), t};
}

double modulus(Complex z) { return std::abs(z); }

} // namespace sle
