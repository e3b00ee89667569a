#pragma once

// Special functions needed by the closed-form coverage expressions.
//
// All functions are pure. Out-of-domain arguments throw std::domain_error.
// The *_ext variants return the value together with an estimate of the
// absolute error, for callers that budget quadrature error.

namespace riseval::specfun {

struct SpecFunResult {
    double value = 0.0;
    double est_abs_error = 0.0;
};

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

/// Modified Bessel function of the second kind, order 0. Returns 0 once the
/// result drops below 1e-300.
double bessel_k0(double x);
SpecFunResult bessel_k0_ext(double x);

/// Order 1; used by the closed-form survival function of the product distance.
double bessel_k1(double x);

/// e^x K0(x) and e^x K1(x); finite for every x > 0.
double bessel_k0_scaled(double x);
double bessel_k1_scaled(double x);

/// Gauss hypergeometric 2F1(a, b; c; z) for z <= 0.
///
/// |z| <= 1/2 sums the defining series, -2 <= z < -1/2 uses the Pfaff
/// transform onto w = z/(z-1) in [1/3, 2/3], and z < -2 uses the 1/z
/// connection formula when a - b is not an integer (falls back to Pfaff
/// otherwise).
double gauss_2f1_negz(double a, double b, double c, double z);
SpecFunResult gauss_2f1_negz_ext(double a, double b, double c, double z);

namespace detail {
// Raw power series; converges for |z| < 1.
SpecFunResult hyp2f1_series(double a, double b, double c, double z);
// Pfaff transform: 2F1(a,b;c;z) = (1-z)^-b 2F1(c-a, b; c; z/(z-1)).
SpecFunResult hyp2f1_pfaff(double a, double b, double c, double z);
// Connection formula around z = -infinity; requires a - b non-integer.
SpecFunResult hyp2f1_large_negative(double a, double b, double c, double z);
}  // namespace detail

/// Exponential integral E1(z), z > 0.
double exp_integral_e1(double z);
SpecFunResult exp_integral_e1_ext(double z);
/// e^z E1(z).
double exp_integral_e1_scaled(double z);

/// Whittaker W_{-1/2,0}(z) = e^(z/2) sqrt(z) E1(z).
double whittaker_w_mhalf_zero(double z);
SpecFunResult whittaker_w_mhalf_zero_ext(double z);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);
SpecFunResult log_gamma_ext(double x);

}  // namespace riseval::specfun
