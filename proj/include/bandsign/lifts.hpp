#pragma once

// Dimension-shift utilities: even part in one variable, the coefficient
// lift of an even entire series to a radial function of d variables, and
// radial integration against the lifted measure.

#include "bandsign/measures.hpp"

namespace bandsign {

struct EvenEntireSeries {
    std::vector<double> c;         // coefficient of z^{2k} at index k
    double truncation_error_bound = 0.0;
    double radius = 0.0;           // disk on which the tail bound is certified

    double eval(double x) const;   // series value at real x (within the disk)
};

// x -> (F(x) + F(-x))/2; idempotent.
real_fn even_part(const real_fn& F);

using radial_fn = std::function<double(const std::vector<double>&)>;

// Lift of G to d variables: substitutes x_1^2 + ... + x_d^2 for z^2. Throws
// TruncationExceeded when the evaluation point leaves the certified disk.
radial_fn lift(const EvenEntireSeries& G, int d);

// Integral of the lifted G against the radial lift of mu:
// lift_factor(d) * mu_integral(mu, G).
double radial_mu_integral(const real_fn& G, const Measure& mu, int d, double tol,
                          std::optional<DecayClass> decay_override = std::nullopt);

// Monte Carlo estimate of the same integral from genuinely d-dimensional
// sample points (uniform directions, half-normal radii with importance
// weights). Validation tool; atoms are not supported here.
double radial_mc_integral(const radial_fn& lifted, const Measure& mu, int d,
                          std::int64_t samples, std::uint64_t seed, double proposal_sigma = 2.0);

}  // namespace bandsign
