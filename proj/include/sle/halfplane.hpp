#pragma once

#include <complex>

namespace sle {

using Complex = std::complex<double>;

/// A point of the closed upper half-plane {im >= 0}.
///
/// Construction from user input is checked; the flow maps below keep their
/// results in the half-plane, so hot paths work on plain Complex values and
/// only wrap at API boundaries.
class HalfPlanePoint {
public:
    HalfPlanePoint() = default;
    HalfPlanePoint(double re, double im);
    explicit HalfPlanePoint(Complex z) : HalfPlanePoint(z.real(), z.imag()) {}

    double re() const { return value_.real(); }
    double im() const { return value_.imag(); }
    Complex value() const { return value_; }
    operator Complex() const { return value_; }

    friend bool operator==(const HalfPlanePoint&, const HalfPlanePoint&) = default;

private:
    Complex value_{};
};

/// Square root on the branch with nonnegative imaginary part.
///
/// For w on the nonnegative real axis the nonnegative real root is returned.
/// Uses the half-angle form so neither component suffers cancellation.
Complex sqrt_upper(Complex w);

double modulus(Complex z);

} // namespace sle
