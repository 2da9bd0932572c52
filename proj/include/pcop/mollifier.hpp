#pragma once

namespace pcop::mollifier {

/// Standard mollifier C exp(-1 / (1 - x^2)) on (-1, 1), normalized to unit
/// integral; zero outside.
double phi(double x);

/// Derivative of phi.
double dphi(double x);

/// Smooth step: integral of phi over (-inf, t]. 0 for t <= -1, 1 for t >= 1.
double step(double t);

/// Smooth ramp: integral of step over (-inf, t]. 0 for t <= -1, t for t >= 1.
double ramp(double t);

/// Normalization constant C.
double normalization();

}  // namespace pcop::mollifier
