#include "bandsign/debranges.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bandsign/numerics.hpp"
#include "bandsign/special.hpp"

namespace bandsign {

namespace {
constexpr double kConfluentRadius = 1e-5;
}

double HermiteBiehler::kernel_diag(double x) const {
    return (B_prime_real(x) * A_real(x) - A_prime_real(x) * B_real(x)) / pi;
}

void finalize_real_paths(HermiteBiehler& hb) {
    if (!hb.A_real) hb.A_real = [A = hb.A](double x) { return A(cplx(x, 0)).real(); };
    if (!hb.B_real) hb.B_real = [B = hb.B](double x) { return B(cplx(x, 0)).real(); };
    if (!hb.A_prime_real)
        hb.A_prime_real = [Ap = hb.A_prime](double x) { return Ap(cplx(x, 0)).real(); };
    if (!hb.B_prime_real)
        hb.B_prime_real = [Bp = hb.B_prime](double x) { return Bp(cplx(x, 0)).real(); };
}

HermiteBiehler paley_wiener_structure(double delta) {
    if (!(delta > 0)) throw DomainError("paley_wiener_structure: requires delta > 0");
    const double c = 0.5 * delta;
    HermiteBiehler hb;
    hb.A = [c](cplx z) { return std::cos(c * z); };
    hb.B = [c](cplx z) { return std::sin(c * z); };
    hb.A_prime = [c](cplx z) { return -c * std::sin(c * z); };
    hb.B_prime = [c](cplx z) { return c * std::cos(c * z); };
    hb.A_real = [c](double x) { return std::cos(c * x); };
    hb.B_real = [c](double x) { return std::sin(c * x); };
    hb.A_prime_real = [c](double x) { return -c * std::sin(c * x); };
    hb.B_prime_real = [c](double x) { return c * std::cos(c * x); };
    hb.tau = c;
    std::ostringstream label;
    label << "paley-wiener(delta=" << delta << ")";
    hb.label = label.str();
    return hb;
}

HermiteBiehler homogeneous_structure(double nu, double delta) {
    if (!(delta > 0)) throw DomainError("homogeneous_structure: requires delta > 0");
    if (nu == -0.5) return paley_wiener_structure(delta);
    const BesselOrder order(nu);
    const double c = 0.5 * delta;
    // Amplitude matching |E(x)|^{-2} dx to |x|^{2nu+1} dx in the integral
    // sense: k^2 = pi 2^{-2nu-1} Gamma(nu+1)^{-2} (delta/2)^{2nu+1}.
    const double g = std::tgamma(nu + 1.0);
    const double k = std::sqrt(pi * std::pow(2.0, -2.0 * nu - 1.0) / (g * g) *
                               std::pow(c, 2.0 * nu + 1.0));
    HermiteBiehler hb;
    hb.A = [order, c, k](cplx z) { return k * A_nu(order, c * z); };
    hb.B = [order, c, k](cplx z) { return k * B_nu(order, c * z); };
    hb.A_prime = [order, c, k](cplx z) { return k * c * A_nu_prime(order, c * z); };
    hb.B_prime = [order, c, k](cplx z) { return k * c * B_nu_prime(order, c * z); };
    hb.A_real = [order, c, k](double x) { return k * A_nu(order, c * x); };
    hb.B_real = [order, c, k](double x) { return k * B_nu(order, c * x); };
    hb.A_prime_real = [order, c, k](double x) { return k * c * A_nu_prime(order, c * x); };
    hb.B_prime_real = [order, c, k](double x) { return k * c * B_nu_prime(order, c * x); };
    hb.tau = c;
    std::ostringstream label;
    label << "bessel(nu=" << nu << ",delta=" << delta << ")";
    hb.label = label.str();
    return hb;
}

cplx kernel(const HermiteBiehler& hb, cplx w, cplx z) {
    const cplx u = std::conj(w);
    const cplx d = z - u;
    if (std::abs(d) >= kConfluentRadius) {
        return (hb.B(z) * hb.A(u) - hb.A(z) * hb.B(u)) / (pi * d);
    }
    const cplx m = 0.5 * (z + u);
    return (hb.B_prime(m) * hb.A(m) - hb.A_prime(m) * hb.B(m)) / pi;
}

double kernel(const HermiteBiehler& hb, double w, double x) {
    const double d = x - w;
    if (std::abs(d) >= kConfluentRadius) {
        return (hb.B_real(x) * hb.A_real(w) - hb.A_real(x) * hb.B_real(w)) / (pi * d);
    }
    const double m = 0.5 * (x + w);
    return hb.kernel_diag(m);
}

cplx t_alpha(const HermiteBiehler& hb, double alpha, cplx z) {
    return std::sin(alpha) * hb.A(z) - std::cos(alpha) * hb.B(z);
}

double t_alpha(const HermiteBiehler& hb, double alpha, double x) {
    return std::sin(alpha) * hb.A_real(x) - std::cos(alpha) * hb.B_real(x);
}

namespace {

bool scan_zeros(const HermiteBiehler& hb, double alpha, const Interval& window, double factor,
                std::vector<double>& out) {
    out.clear();
    auto f = [&](double x) { return t_alpha(hb, alpha, x); };
    const double min_step = 1e-6 * window.width();
    double x = window.lo;
    double fx = f(x);
    while (x < window.hi) {
        const double dphi = pi * hb.kernel_diag(x) / hb.abs2_E(x);
        double step = factor * pi / std::max(dphi, 1e-12);
        step = std::clamp(step, min_step, 0.25 * window.width());
        double x1 = std::min(x + step, window.hi);
        const double xm = 0.5 * (x + x1);
        const double fm = f(xm);
        const double f1 = f(x1);
        const bool left_change = fx == 0.0 || fx * fm < 0.0;
        const bool right_change = fm == 0.0 ? f1 != 0.0 : fm * f1 < 0.0;
        if (left_change && right_change && fx * f1 > 0.0) return false;  // two roots in one step
        if (fx == 0.0) {
            out.push_back(x);
        } else if (fx * fm < 0.0) {
            out.push_back(find_root(f, Interval(x, xm)));
        } else if (fm == 0.0) {
            out.push_back(xm);
        } else if (fm * f1 < 0.0) {
            out.push_back(find_root(f, Interval(xm, x1)));
        }
        x = x1;
        fx = f1;
    }
    if (fx == 0.0) out.push_back(window.hi);
    // Merge near-duplicates from endpoint hits.
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [&](double a, double b) { return b - a < 1e-9; }),
              out.end());
    return true;
}

}  // namespace

double next_t_alpha_zero(const HermiteBiehler& hb, double alpha, double from, double horizon) {
    auto f = [&](double x) { return t_alpha(hb, alpha, x); };
    double x = from;
    double fx = f(x);
    while (x < horizon) {
        const double dphi = pi * hb.kernel_diag(x) / hb.abs2_E(x);
        const double step = std::clamp(0.45 * pi / std::max(dphi, 1e-12), 1e-9, 1.0);
        const double x1 = std::min(x + step, horizon);
        const double f1 = f(x1);
        if (fx == 0.0) return x;
        if (fx * f1 < 0.0) return find_root(f, Interval(x, x1));
        x = x1;
        fx = f1;
    }
    throw NoZero("next_t_alpha_zero: no sign change before horizon");
}

std::vector<double> t_alpha_zeros(const HermiteBiehler& hb, double alpha, const Interval& window) {
    double factor = 0.45;
    std::vector<double> zeros;
    for (int attempt = 0; attempt < 20; ++attempt) {
        if (scan_zeros(hb, alpha, window, factor, zeros)) return zeros;
        factor *= 0.5;
    }
    throw ScanTooCoarse("t_alpha_zeros: repeated double crossings while scanning");
}

QuadratureRule quadrature_rule(const HermiteBiehler& hb, double alpha, const Interval& window) {
    QuadratureRule rule{alpha, t_alpha_zeros(hb, alpha, window), {}, window};
    rule.weights.reserve(rule.nodes.size());
    for (double xi : rule.nodes) {
        const double k = hb.kernel_diag(xi);
        if (!(k > 0.0))
            throw ConstructionFailed("quadrature_rule: non-positive kernel diagonal at node");
        rule.weights.push_back(1.0 / k);
    }
    return rule;
}

double apply_quadrature(const QuadratureRule& rule, const real_fn& F) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * F(rule.nodes[i]);
    return sum;
}

double node_sum_extrapolated(const QuadratureRule& rule, const real_fn& F, int levels) {
    // Partial sums at dyadic node counts (ordered by |node|) have tails that
    // expand in powers of 1/count, unlike cuts at fixed abscissae whose
    // sums wobble with the fractional node position.
    std::vector<std::pair<double, double>> by_abs;  // (|node|, weight*F(node))
    by_abs.reserve(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        by_abs.emplace_back(std::abs(rule.nodes[i]), rule.weights[i] * F(rule.nodes[i]));
    std::sort(by_abs.begin(), by_abs.end());
    // Merge +-xi pairs into one shell so partial sums never split a pair.
    std::vector<std::pair<double, double>> shells;
    for (const auto& e : by_abs) {
        if (!shells.empty() && e.first - shells.back().first < 1e-9 * (1.0 + e.first))
            shells.back().second += e.second;
        else
            shells.push_back(e);
    }
    by_abs.swap(shells);
    const std::size_t n = by_abs.size();
    if (n == 0) return 0.0;
    // Exact ratio-2 counts keep the extrapolation factors honest; a few
    // outermost shells beyond base*2^L are simply not needed.
    int L = levels;
    while (L > 0 && (n >> L) < 8) --L;
    const std::size_t base = n >> L;
    std::vector<std::size_t> counts;
    for (int k = 0; k <= L; ++k) counts.push_back(base << k);
    std::vector<double> partial;
    double running = 0.0;
    std::size_t idx = 0;
    for (std::size_t c : counts) {
        while (idx < c) running += by_abs[idx++].second;
        partial.push_back(running);
    }
    if (partial.size() == 1) return partial[0];
    return richardson_limit(partial, 1.0);
}

std::string quadrature_rule_to_json(const QuadratureRule& rule) {
    nlohmann::ordered_json j;
    j["alpha"] = rule.alpha;
    j["nodes"] = rule.nodes;
    j["weights"] = rule.weights;
    j["window"] = {{"lo", rule.window.lo}, {"hi", rule.window.hi}};
    return j.dump();
}

HBReport verify_hb(const HermiteBiehler& hb, int samples, std::uint64_t seed) {
    if (samples <= 0) throw DomainError("verify_hb: samples must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-20.0, 20.0);
    std::uniform_real_distribution<double> im(0.0, 5.0);
    double min_margin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        double y = im(rng);
        if (y == 0.0) y = 1e-3;
        const cplx z(re(rng), y);
        const double margin = std::abs(hb.E(z)) - std::abs(hb.E_star(z));
        min_margin = std::min(min_margin, margin);
    }
    return {min_margin > 0.0, min_margin, samples, seed};
}

}  // namespace bandsign
