#include "bandsign/lifts.hpp"

#include <cmath>
#include <random>

namespace bandsign {

double EvenEntireSeries::eval(double x) const {
    const double u = x * x;
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
    return acc;
}

real_fn even_part(const real_fn& F) {
    return [F](double x) { return 0.5 * (F(x) + F(-x)); };
}

radial_fn lift(const EvenEntireSeries& G, int d) {
    if (d < 1) throw DomainError("lift: requires d >= 1");
    return [G, d](const std::vector<double>& x) {
        if (static_cast<int>(x.size()) != d) throw DomainError("lift: dimension mismatch");
        double u = 0.0;
        for (double v : x) u += v * v;
        if (G.radius > 0.0 && u > G.radius * G.radius)
            throw TruncationExceeded("lift: point outside certified disk");
        double acc = 0.0;
        for (auto it = G.c.rbegin(); it != G.c.rend(); ++it) acc = acc * u + *it;
        return acc;
    };
}

double radial_mu_integral(const real_fn& G, const Measure& mu, int d, double tol,
                          std::optional<DecayClass> decay_override) {
    return lift_factor(d) * mu_integral(mu, G, tol, decay_override).value;
}

double radial_mc_integral(const radial_fn& lifted, const Measure& mu, int d,
                          std::int64_t samples, std::uint64_t seed, double proposal_sigma) {
    if (d < 1) throw DomainError("radial_mc_integral: requires d >= 1");
    if (!mu.atoms.empty())
        throw DomainError("radial_mc_integral: atoms not supported by the sampler");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double sigma = proposal_sigma;
    const double half_normal_const = std::sqrt(2.0 / pi) / sigma;
    // Surface area of S^{d-1}; two points for d = 1.
    const double omega = d == 1 ? 2.0 : 2.0 * lift_factor(d);
    double acc = 0.0;
    std::vector<double> point(d);
    for (std::int64_t s = 0; s < samples; ++s) {
        // Radius from a half-normal proposal, direction uniform on the sphere.
        double r = std::abs(gauss(rng)) * sigma;
        if (r == 0.0) r = 1e-12;
        double norm2 = 0.0;
        for (int k = 0; k < d; ++k) {
            point[k] = gauss(rng);
            norm2 += point[k] * point[k];
        }
        const double scale = r / std::sqrt(norm2);
        for (int k = 0; k < d; ++k) point[k] *= scale;
        const double q = half_normal_const * std::exp(-0.5 * r * r / (sigma * sigma));
        acc += lifted(point) * mu.density(r) / q;
    }
    return omega * acc / static_cast<double>(samples);
}

}  // namespace bandsign
