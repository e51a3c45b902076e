#include "bandsign/special.hpp"

#include <cmath>

#include "bandsign/numerics.hpp"

namespace bandsign {

namespace {

constexpr int kSeriesCap = 250;

// Power series sum_{n>=0} (-1)^n (z/2)^{2n} / (n! (nu+1)...(nu+n)),
// truncated when a term drops below 1e-17 of the running sum.
cplx a_series(double nu, cplx z) {
    const cplx q = -0.25 * z * z;
    cplx term{1.0, 0.0};
    cplx sum = term;
    for (int n = 1; n <= kSeriesCap; ++n) {
        term *= q / (static_cast<double>(n) * (nu + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double switch_radius(double nu) { return std::max(18.0, 0.5 * nu * nu + 10.0); }

// Large-argument form J_nu(x) ~ sqrt(2/(pi x)) (P cos w - Q sin w) with
// w = x - nu pi/2 - pi/4, assembled with the normalization of A_nu.
double a_asymptotic(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    const double w = x - 0.5 * nu * pi - 0.25 * pi;
    double p = 1.0, q = 0.0;
    double u = 1.0;
    double prev = std::abs(u);
    for (int k = 1; k <= 16; ++k) {
        const double odd = 2.0 * k - 1.0;
        u *= (mu - odd * odd) / (k * 8.0 * x);
        if (std::abs(u) > prev) break;  // expansion starts diverging
        prev = std::abs(u);
        const int phase = (k / 2) % 2;
        const double signed_u = phase ? -u : u;
        if (k % 2 == 0)
            p += signed_u;
        else
            q += signed_u;
        if (std::abs(u) < 1e-18) break;
    }
    const double envelope = std::sqrt(2.0 / (pi * x));
    const double j = envelope * (p * std::cos(w) - q * std::sin(w));
    return std::tgamma(nu + 1.0) * std::pow(0.5 * x, -nu) * j;
}

double a_real(double nu, double x) {
    const double ax = std::abs(x);
    if (ax < switch_radius(nu)) {
        // Real specialisation of the series.
        const double q = -0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int n = 1; n <= kSeriesCap; ++n) {
            term *= q / (static_cast<double>(n) * (nu + n));
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return sum;
    }
    return a_asymptotic(nu, ax);
}

}  // namespace

cplx A_nu(const BesselOrder& order, cplx z) {
    if (z.imag() == 0.0) return {a_real(order.nu, z.real()), 0.0};
    return a_series(order.nu, z);
}

cplx B_nu(const BesselOrder& order, cplx z) {
    // B_nu(z) = (z/2) A_{nu+1}(z) / (nu+1), term-by-term from the series.
    return 0.5 * z * A_nu(BesselOrder(order.nu + 1.0), z) / (order.nu + 1.0);
}

cplx A_nu_prime(const BesselOrder& order, cplx z) {
    return -0.5 * z * A_nu(BesselOrder(order.nu + 1.0), z) / (order.nu + 1.0);
}

cplx B_nu_prime(const BesselOrder& order, cplx z) {
    const double nu = order.nu;
    const cplx a1 = A_nu(BesselOrder(nu + 1.0), z);
    const cplx a2 = A_nu(BesselOrder(nu + 2.0), z);
    return a1 / (2.0 * (nu + 1.0)) - 0.25 * z * z * a2 / ((nu + 1.0) * (nu + 2.0));
}

double A_nu(const BesselOrder& order, double x) { return a_real(order.nu, x); }

double B_nu(const BesselOrder& order, double x) {
    return 0.5 * x * a_real(order.nu + 1.0, x) / (order.nu + 1.0);
}

double A_nu_prime(const BesselOrder& order, double x) {
    return -0.5 * x * a_real(order.nu + 1.0, x) / (order.nu + 1.0);
}

double B_nu_prime(const BesselOrder& order, double x) {
    const double nu = order.nu;
    const double a1 = a_real(nu + 1.0, x);
    const double a2 = a_real(nu + 2.0, x);
    return a1 / (2.0 * (nu + 1.0)) - 0.25 * x * x * a2 / ((nu + 1.0) * (nu + 2.0));
}

double first_bessel_zero(const BesselOrder& order) {
    const double nu = order.nu;
    auto f = [&](double x) { return a_real(nu, x); };
    const double step = 0.1 * (1.0 + std::sqrt(nu + 1.0));
    const double horizon = 3.0 * std::max(0.0, nu) + 25.0;
    double x0 = 0.0, f0 = f(0.0);
    for (double x1 = step; x1 <= horizon; x1 += step) {
        const double f1 = f(x1);
        if (f0 * f1 <= 0.0) return find_root(f, Interval(x0, x1), 1e-13);
        x0 = x1;
        f0 = f1;
    }
    throw NonConvergence("first_bessel_zero: no sign change found in scan range");
}

}  // namespace bandsign
