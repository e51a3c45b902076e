#pragma once

// Foundation layer: adaptive integration of weighted functions over the real
// line, bracketed root finding, and a dense real polynomial ring.

#include <optional>

#include "bandsign/common.hpp"

namespace bandsign {

// ---------------------------------------------------------------------------
// Polynomials (dense, ascending coefficients)
// ---------------------------------------------------------------------------

class RealPolynomial {
  public:
    RealPolynomial() = default;
    explicit RealPolynomial(std::vector<double> coeffs);

    // Polynomial in x^2: even_coeffs[k] multiplies x^{2k}. Odd slots are
    // forced to zero so even polynomials reuse this type.
    static RealPolynomial from_even_coeffs(const std::vector<double>& even_coeffs);

    int degree() const;  // 0 for the zero polynomial
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }
    RealPolynomial derivative() const;

  private:
    std::vector<double> coeffs_;  // no trailing zeros; empty means 0
    void normalize();
};

RealPolynomial poly_add(const RealPolynomial& p, const RealPolynomial& q);
RealPolynomial poly_sub(const RealPolynomial& p, const RealPolynomial& q);
RealPolynomial poly_mul(const RealPolynomial& p, const RealPolynomial& q);
double poly_eval(const RealPolynomial& p, double x);

// Quotient/remainder of p by a monic divisor (used as a test oracle and by
// the even-polynomial reductions).
struct PolyDivision {
    RealPolynomial quotient;
    RealPolynomial remainder;
};
PolyDivision poly_divide(const RealPolynomial& p, const RealPolynomial& divisor);

// ---------------------------------------------------------------------------
// Integration
// ---------------------------------------------------------------------------

struct IntegrateOptions {
    // Integrand behaves like |x|^q as x -> 0 with q in (-1, 0): panels are
    // refined geometrically toward the origin.
    double origin_exponent = 0.0;
    // The declared decay only holds beyond this |x|; the growing-tail
    // detector stays quiet for shells inside it.
    double decay_starts_at = 0.0;
    std::int64_t max_evaluations = 60'000'000;
    int max_depth = 48;
};

// Adaptive Gauss-Kronrod integration over a finite interval.
IntegralResult integrate_interval(const real_fn& f, double a, double b, double tol,
                                  const IntegrateOptions& opts = {});

// Integral of f(x)*weight(x) over the whole real line. The tail is handled
// according to the declared decay class: compact support truncates exactly,
// exponential tails use the x = tan(theta) substitution with panel doubling
// until the outermost panel contributes less than tol/10, and polynomial
// tails use doubling shells whose partial sums are extrapolated in the
// declared decay order.
IntegralResult integrate_weighted(const real_fn& f, const real_fn& weight,
                                  const DecayClass& decay, double tol,
                                  const IntegrateOptions& opts = {});

// Limit of partial sums S_k attached to dyadic cutoffs X_k = X0 * 2^k when
// the tail behaves like a power series in 1/X starting at exponent e0.
// Returns the extrapolated limit; *err_est (optional) receives the size of
// the last correction.
double richardson_limit(const std::vector<double>& partial_sums, double e0,
                        double* err_est = nullptr, int max_levels = 3);

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

// Hybrid bisection/secant on a sign-changing bracket. Bisection narrows the
// bracket to ~1e-8, then secant polishes; the result is accurate to tol in
// abscissa. Throws InvalidBracket when f has the same sign at both ends.
double find_root(const real_fn& f, const Interval& bracket, double tol = 1e-13);

}  // namespace bandsign
