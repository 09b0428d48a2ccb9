#pragma once
#include <cstdint>

#include "gblab/errors.hpp"

// Closed-form constants used throughout: odd double factorials, sphere
// volumes, and Gaussian moments.
namespace gblab::constants {

// (2m-1)!! = (2m)!/(2^m m!): the normalization constant relating the
// Pfaffian of a constant-curvature matrix to the volume form.
std::int64_t odd_double_factorial(int m);  // m >= 1, DomainError otherwise

// Volume of the unit (n-1)-sphere: 2 (sqrt.pi)^n / Gamma(n/2).
double sphere_volume(int n);  // n >= 1, DomainError otherwise

// int_{-inf}^{inf} t^{2k} e^{-t^2} dt = (sqrt.pi / 2^k) (2k-1)!!.
double gaussian_even_moment(int k);  // k >= 0

// int_0^inf t^j e^{-t^2} dt = Gamma((j+1)/2) / 2.
double gaussian_half_moment(int j);  // j >= 0

}  // namespace gblab::constants
