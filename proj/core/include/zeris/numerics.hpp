#ifndef ZERIS_NUMERICS_HPP
#define ZERIS_NUMERICS_HPP

namespace zeris::numerics {

/// Arguments of the regularized lower incomplete gamma function P(k, x).
struct RegularizedGammaArgs {
    double shape;  // k > 0
    double x;      // x >= 0
};

/// ln Gamma(x) for x > 0. Throws std::domain_error on x <= 0.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(k, x) = gamma(k, x) / Gamma(k),
/// monotone non-decreasing in x with P(k, 0) = 0 and P(k, inf) = 1.
double reg_lower_incomplete_gamma(const RegularizedGammaArgs& args);
double reg_lower_incomplete_gamma(double shape, double x);

/// Modified Bessel function of the first kind I_l(kappa), integer order
/// l >= 0, kappa >= 0, evaluated by the ascending power series truncated
/// once a term drops below 1e-18 of the running sum.
double bessel_i(int order, double kappa);

/// 2*sin(a*delta/2) / a, continuously extended to its limit `delta` at a = 0.
double sinc_like(double a, double delta);

}  // namespace zeris::numerics

#endif
