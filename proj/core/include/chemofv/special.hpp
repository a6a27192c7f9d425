#pragma once

namespace chemofv {

/// Bessel function of the first kind, order 0 or 1, for x >= 0.
double bessel_j(int order, double x);

/// Derivative of J_order by J_n' = (J_{n-1} - J_{n+1}) / 2, with J_{-1} = -J_1.
double bessel_j_prime(int order, double x);

inline constexpr double kBesselJ1PrimeRoot = 1.8412;  ///< first positive root of J_1'
inline constexpr double kBesselJ0PrimeRoot = 3.8317;  ///< first positive root of J_0'

}  // namespace chemofv
