#pragma once

// Structure functions E = A - iB with A even, B odd and only real zeros of
// the companion pair; the associated reproducing kernel, the one-parameter
// family T_alpha, its real zero sets, and node/weight quadrature rules.

#include <cstdint>

#include "bandsign/common.hpp"

namespace bandsign {

struct HermiteBiehler {
    complex_fn A, B, A_prime, B_prime;
    // Real-axis fast paths (set by the factories; wrap the complex
    // evaluators otherwise).
    real_fn A_real, B_real, A_prime_real, B_prime_real;
    double tau = 0.0;  // exponential type of E
    std::string label;

    cplx E(cplx z) const { return A(z) - cplx(0, 1) * B(z); }
    cplx E_star(cplx z) const { return A(z) + cplx(0, 1) * B(z); }
    double abs2_E(double x) const {
        const double a = A_real(x), b = B_real(x);
        return a * a + b * b;
    }
    // K(x,x) = (B'(x)A(x) - A'(x)B(x)) / pi on the real axis.
    double kernel_diag(double x) const;
};

// Fills missing real fast paths by evaluating the complex functions.
void finalize_real_paths(HermiteBiehler& hb);

// Structure function of the Lebesgue problem at type bound delta:
// A = cos(delta x / 2), B = sin(delta x / 2), |E| = 1 on the real axis.
HermiteBiehler paley_wiener_structure(double delta);

// Bessel pair A_nu, B_nu rescaled to type delta/2 and to amplitude such that
// |E(x)|^{-2} dx integrates non-negative type <= delta functions exactly like
// |x|^{2nu+1} dx does. nu = -1/2 reduces to the Lebesgue structure.
HermiteBiehler homogeneous_structure(double nu, double delta);

// Reproducing kernel [B(z)A(w*) - A(z)B(w*)] / (pi (z - w*)). Near the
// diagonal the numerator is expanded around the midpoint, which keeps only
// first derivatives while staying second-order accurate.
cplx kernel(const HermiteBiehler& hb, cplx w, cplx z);
double kernel(const HermiteBiehler& hb, double w, double x);

// T_alpha = [e^{i a} E - e^{-i a} E*] / (2i) = sin(a) A - cos(a) B.
cplx t_alpha(const HermiteBiehler& hb, double alpha, cplx z);
double t_alpha(const HermiteBiehler& hb, double alpha, double x);

// Smallest zero of T_alpha strictly above `from`, located by a phase-guided
// scan. Throws NoZero when no sign change appears before `horizon`.
double next_t_alpha_zero(const HermiteBiehler& hb, double alpha, double from, double horizon);

// All zeros of T_alpha inside the window, each simple. The scan step is
// bounded by the local phase derivative pi K(x,x)/|E(x)|^2; a step showing
// two sign changes halves the scan factor and retries (ScanTooCoarse after
// 20 halvings).
std::vector<double> t_alpha_zeros(const HermiteBiehler& hb, double alpha,
                                  const Interval& window);

struct QuadratureRule {
    double alpha;
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // 1 / K(node, node), positive
    Interval window;
};

QuadratureRule quadrature_rule(const HermiteBiehler& hb, double alpha, const Interval& window);

double apply_quadrature(const QuadratureRule& rule, const real_fn& F);

// Node sum over nested symmetric sub-windows window/2^k, extrapolated in the
// cutoff (tail ~ 1/X for integrands with 1/x^2 envelope). Used where the
// plain truncated sum would dominate the error budget.
double node_sum_extrapolated(const QuadratureRule& rule, const real_fn& F, int levels = 4);

std::string quadrature_rule_to_json(const QuadratureRule& rule);

struct HBReport {
    bool pass;
    double min_margin;  // min over samples of |E(z)| - |E*(z)|, Im z > 0
    int samples;
    std::uint64_t seed;
};

// Samples |E| - |E*| at random points with 0 < Im z <= 5, |Re z| <= 20.
HBReport verify_hb(const HermiteBiehler& hb, int samples, std::uint64_t seed);

}  // namespace bandsign
