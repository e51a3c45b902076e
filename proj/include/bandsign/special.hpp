#pragma once

// Normalized Bessel-type entire functions of order nu > -1:
//   A_nu(z) = Gamma(nu+1) (z/2)^{-nu} J_nu(z)      (even, A_nu(0) = 1)
//   B_nu(z) = Gamma(nu+1) (z/2)^{-nu} J_{nu+1}(z)  (odd,  B_nu(0) = 0)
// Both have exponential type 1. A_{-1/2} = cos, B_{-1/2} = sin.

#include "bandsign/common.hpp"

namespace bandsign {

struct BesselOrder {
    double nu;
    explicit BesselOrder(double nu_) : nu(nu_) {
        if (!(nu > -1.0)) throw DomainError("BesselOrder: requires nu > -1");
    }
};

cplx A_nu(const BesselOrder& order, cplx z);
cplx B_nu(const BesselOrder& order, cplx z);
cplx A_nu_prime(const BesselOrder& order, cplx z);
cplx B_nu_prime(const BesselOrder& order, cplx z);

// Real-axis fast paths. The power series loses precision for large |x|, so
// these switch to the large-argument amplitude/phase expansion.
double A_nu(const BesselOrder& order, double x);
double B_nu(const BesselOrder& order, double x);
double A_nu_prime(const BesselOrder& order, double x);
double B_nu_prime(const BesselOrder& order, double x);

// Smallest positive zero of A_nu (equivalently of J_nu), strictly increasing
// in nu. Throws NonConvergence when no sign change is found in the scanned
// range, which signals an evaluator bug.
double first_bessel_zero(const BesselOrder& order);

}  // namespace bandsign
