#pragma once

// Sharp sign-uncertainty constants and their witnesses: the smallest positive
// zero of A, the closed-form optimal function A^2/(x^2 - xi1^2), machine
// certificates for class membership, even-polynomial reductions, a
// Rayleigh-quotient cross check, and the constructive refutation for
// measures with exponential moments.

#include <utility>

#include "bandsign/debranges.hpp"
#include "bandsign/measures.hpp"

namespace bandsign {

// ---------------------------------------------------------------------------
// Even polynomials
// ---------------------------------------------------------------------------

struct EvenPolynomial {
    std::vector<double> even_coeffs;  // coefficient of x^{2k} at index k

    double eval(double x) const;
    double operator()(double x) const { return eval(x); }
    int degree() const;  // degree in x
    RealPolynomial to_polynomial() const;
};

// Splits prod_k (x^2 - t_k^2) as (x^2 - r^2) Q(x) + R(x) with Q and R even
// and non-negative on the real line; requires 0 < t_1 < ... < t_n < r.
std::pair<EvenPolynomial, EvenPolynomial> poly_reduce(const std::vector<double>& t, double r);

// For F factored as prod_k (x^2 - t_k^2) (x^2 - r^2) F1(x) with F1 >= 0,
// returns G(x) = (x^2 - r^2) R(x) F1(x) <= F(x), which has its only sign
// change at r. Empty t leaves (x^2 - r^2) F1 unchanged.
real_fn one_sign_change_form(const std::vector<double>& t, double r, const real_fn& F1,
                             EvenPolynomial* R_out = nullptr);

// ---------------------------------------------------------------------------
// Sharp constant and extremizer
// ---------------------------------------------------------------------------

// Smallest positive zero of A. Throws NoZero when A has none in the scanned
// range (the degenerate E = a - ibz situation).
double sharp_constant(const HermiteBiehler& hb);

// F(x) = A(x)^2 / (x^2 - xi1^2), with a removable-singularity-safe
// evaluation near +-xi1. Negative inside (-xi1, xi1), non-negative outside.
real_fn extremizer(const HermiteBiehler& hb);
real_fn extremizer(const HermiteBiehler& hb, double xi1);

// H(x) = A(x)^2 / (x^2 - xi1^2)^2, the non-negative profile with
// extremizer = (x^2 - xi1^2) H.
real_fn extremizer_profile(const HermiteBiehler& hb, double xi1);

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

struct SignGrid {
    double lo = 0.0, hi = 0.0;
    int points = 0;
    double min_value = 0.0;  // min of F on the grid where F must be >= 0
};

struct Certificate {
    double xi1 = 0.0;
    double integral_value = 0.0;
    double integral_tol = 0.0;
    SignGrid sign_grid;
    double vanishing_check = 0.0;  // max of F on the interior grid where F <= 0 is claimed
    bool pass = false;
    std::string reasons;
};

// Audits membership of F in the competing class with r(F) = xi1 against mu:
// mu-integral <= tol, no sign violation on [xi1(1+1e-6), 20 xi1] at
// resolution xi1/500, and F <= tol on the interior grid. The exponential
// type bound is the caller's attestation, not a numerical check.
Certificate certify(const real_fn& F, const Measure& mu, double xi1, double delta, double tol,
                    std::optional<DecayClass> decay_override = std::nullopt);

std::string certificate_to_json(const Certificate& cert);

// ---------------------------------------------------------------------------
// Rayleigh cross check
// ---------------------------------------------------------------------------

// Minimizes ||x U|| / ||U|| over the span of kernel sections K(b, .) at the
// given real nodes b (zeros of A), with both Gram matrices assembled from
// node sums over the zeros of A inside the window; returns the square root
// of the smallest generalized eigenvalue.
double rayleigh_min(const HermiteBiehler& hb, const std::vector<double>& basis_nodes,
                    const Interval& window);

// ---------------------------------------------------------------------------
// Constructive refutation
// ---------------------------------------------------------------------------

struct CounterexampleResult {
    double r = 0.0;
    RealPolynomial poly;     // monomial form of P (for reporting)
    double objective = 0.0;  // integral of (x^2 - r^2) P(x)^2 dmu, negative on success
    double eta = 0.0;        // L^2((1+x^2) dmu) distance of P to the indicator of [-r, r]
    int degree = 0;
    real_fn poly_stable;     // P evaluated through the orthonormal recurrence
    real_fn witness;         // F(x) = (x^2 - r^2) P(x)^2
};

// Least-squares fit of the indicator of [-r, r] in L^2((1+x^2) dmu) by even
// polynomials of increasing degree; returns the first degree whose witness
// integral is negative. Requires an exponential-moment or compactly
// supported measure; degrees above 60 are refused. When objective_trace is
// given it receives (degree, objective) for every degree tried.
CounterexampleResult counterexample(const Measure& mu, double r, int max_degree,
                                    std::vector<std::pair<int, double>>* objective_trace = nullptr);

std::string counterexample_to_json(const CounterexampleResult& res);

}  // namespace bandsign
