#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace rhc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Matrix-valued closed form evaluated at a point of one circle of a system.
using JumpFunction = std::function<Matrix(std::size_t circle, Complex z)>;

/// Matrix-valued closed form of a single complex variable.
using MatrixFunction = std::function<Matrix(Complex z)>;

using ScalarFunction = std::function<Complex(Complex z)>;

/// Boundary side of a contour: Omega_plus lies to the left of the orientation.
enum class Side { plus, minus };

inline const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

}  // namespace rhc
