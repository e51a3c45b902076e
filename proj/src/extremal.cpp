#include "bandsign/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "bandsign/numerics.hpp"

namespace bandsign {

// ---------------------------------------------------------------------------
// Even polynomials
// ---------------------------------------------------------------------------

double EvenPolynomial::eval(double x) const {
    const double u = x * x;
    double acc = 0.0;
    for (auto it = even_coeffs.rbegin(); it != even_coeffs.rend(); ++it) acc = acc * u + *it;
    return acc;
}

int EvenPolynomial::degree() const {
    int top = -1;
    for (std::size_t k = 0; k < even_coeffs.size(); ++k)
        if (even_coeffs[k] != 0.0) top = static_cast<int>(k);
    return top <= 0 ? 0 : 2 * top;
}

RealPolynomial EvenPolynomial::to_polynomial() const {
    return RealPolynomial::from_even_coeffs(even_coeffs);
}

std::pair<EvenPolynomial, EvenPolynomial> poly_reduce(const std::vector<double>& t, double r) {
    if (t.empty()) throw DomainError("poly_reduce: needs at least one sign-change point");
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(t[k] > 0.0)) throw DomainError("poly_reduce: points must be positive");
        if (k > 0 && !(t[k] > t[k - 1])) throw DomainError("poly_reduce: points must increase");
    }
    if (!(r > t.back())) throw DomainError("poly_reduce: requires r > t_n");

    // Work in u = x^2. The recursion keeps Q and R non-negative:
    //   Q_1 = 1, R_1 = r^2 - t_1^2
    //   Q_k = R_{k-1} + (r^2 - t_k^2) Q_{k-1}
    //   R_k = (u - r^2)^2 Q_{k-1} + (r^2 - t_k^2) R_{k-1}
    const double r2 = r * r;
    const RealPolynomial shift_sq =
        poly_mul(RealPolynomial({-r2, 1.0}), RealPolynomial({-r2, 1.0}));
    RealPolynomial Q({1.0});
    RealPolynomial R({r2 - t[0] * t[0]});
    for (std::size_t k = 1; k < t.size(); ++k) {
        const double gap = r2 - t[k] * t[k];
        RealPolynomial Qn = poly_add(R, poly_mul(RealPolynomial({gap}), Q));
        RealPolynomial Rn = poly_add(poly_mul(shift_sq, Q), poly_mul(RealPolynomial({gap}), R));
        Q = std::move(Qn);
        R = std::move(Rn);
    }
    auto as_even = [](const RealPolynomial& p) {
        EvenPolynomial e;
        e.even_coeffs = p.coeffs();
        if (e.even_coeffs.empty()) e.even_coeffs.push_back(0.0);
        return e;
    };
    return {as_even(Q), as_even(R)};
}

real_fn one_sign_change_form(const std::vector<double>& t, double r, const real_fn& F1,
                             EvenPolynomial* R_out) {
    EvenPolynomial R;
    if (t.empty()) {
        R.even_coeffs = {1.0};
    } else {
        R = poly_reduce(t, r).second;
    }
    if (R_out) *R_out = R;
    const double r2 = r * r;
    return [R, r2, F1](double x) { return (x * x - r2) * R.eval(x) * F1(x); };
}

// ---------------------------------------------------------------------------
// Sharp constant and extremizer
// ---------------------------------------------------------------------------

double sharp_constant(const HermiteBiehler& hb) {
    const double horizon = 20.0 * pi / hb.tau + 20.0;
    try {
        return next_t_alpha_zero(hb, 0.5 * pi, 0.0, horizon);
    } catch (const NoZero&) {
        throw NoZero("sharp_constant: A has no positive zero up to the scan horizon");
    }
}

namespace {

// A(x)/(x - xi1) with the removable singularity evaluated through the
// midpoint derivative: A(x)/(x - xi1) = A'((x + xi1)/2) + O((x - xi1)^2).
double a_over_shift(const HermiteBiehler& hb, double x, double xi1) {
    const double d = x - xi1;
    if (std::abs(d) >= 1e-4) return hb.A_real(x) / d;
    return hb.A_prime_real(0.5 * (x + xi1));
}

}  // namespace

real_fn extremizer(const HermiteBiehler& hb) { return extremizer(hb, sharp_constant(hb)); }

real_fn extremizer(const HermiteBiehler& hb, double xi1) {
    return [hb, xi1](double x) {
        const double ax = std::abs(x);
        return a_over_shift(hb, ax, xi1) * hb.A_real(ax) / (ax + xi1);
    };
}

real_fn extremizer_profile(const HermiteBiehler& hb, double xi1) {
    return [hb, xi1](double x) {
        const double ax = std::abs(x);
        const double g = a_over_shift(hb, ax, xi1) / (ax + xi1);
        return g * g;
    };
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

Certificate certify(const real_fn& F, const Measure& mu, double xi1, double delta, double tol,
                    std::optional<DecayClass> decay_override) {
    if (!(xi1 > 0.0)) throw DomainError("certify: xi1 must be positive");
    if (!(delta > 0.0)) throw DomainError("certify: delta must be positive");
    Certificate cert;
    cert.xi1 = xi1;
    cert.integral_tol = tol;

    DecayClass decay = decay_override.value_or(
        mu.decay.kind == DecayClass::Kind::Polynomial ? DecayClass::polynomial(2.0) : mu.decay);
    cert.integral_value = mu_integral(mu, F, 0.5 * tol, decay).value;

    const int points = 500;
    cert.sign_grid.lo = xi1 * (1.0 + 1e-6);
    cert.sign_grid.hi = 20.0 * xi1;
    cert.sign_grid.points = points * 10;  // grid step xi1/500 over [xi1, 20 xi1]
    const double h = xi1 / points;
    double min_outer = std::numeric_limits<double>::infinity();
    for (double x = cert.sign_grid.lo; x <= cert.sign_grid.hi; x += h)
        min_outer = std::min(min_outer, F(x));
    cert.sign_grid.min_value = min_outer;

    double max_inner = -std::numeric_limits<double>::infinity();
    for (int k = 1; k < points; ++k) max_inner = std::max(max_inner, F(xi1 * k / points));
    cert.vanishing_check = max_inner;

    std::ostringstream why;
    bool pass = true;
    if (!(cert.integral_value <= tol)) {
        pass = false;
        why << "mu-integral above tolerance; ";
    }
    if (!(min_outer >= -tol)) {
        pass = false;
        why << "sign violation beyond xi1; ";
    }
    if (!(max_inner <= tol)) {
        pass = false;
        why << "positive value inside (-xi1, xi1); ";
    }
    cert.pass = pass;
    cert.reasons = pass ? "ok" : why.str();
    return cert;
}

std::string certificate_to_json(const Certificate& cert) {
    nlohmann::ordered_json j;
    j["xi1"] = cert.xi1;
    j["integral_value"] = cert.integral_value;
    j["integral_tol"] = cert.integral_tol;
    j["sign_grid"] = {{"lo", cert.sign_grid.lo},
                      {"hi", cert.sign_grid.hi},
                      {"points", cert.sign_grid.points},
                      {"min_value", cert.sign_grid.min_value}};
    j["vanishing_check"] = cert.vanishing_check;
    j["verdict"] = cert.pass ? "pass" : "fail";
    j["reasons"] = cert.reasons;
    return j.dump();
}

// ---------------------------------------------------------------------------
// Rayleigh cross check
// ---------------------------------------------------------------------------

double rayleigh_min(const HermiteBiehler& hb, const std::vector<double>& basis_nodes,
                    const Interval& window) {
    if (basis_nodes.empty()) throw DomainError("rayleigh_min: needs at least one basis node");
    const std::vector<double> nodes = t_alpha_zeros(hb, 0.5 * pi, window);
    if (nodes.empty()) throw DomainError("rayleigh_min: no quadrature nodes in window");
    const int m = static_cast<int>(basis_nodes.size());

    Eigen::MatrixXd plain = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> kvals(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const double kd = hb.kernel_diag(nodes[k]);
        if (!(kd > 0.0)) throw IllConditioned("rayleigh_min: non-positive kernel diagonal");
        kvals[k] = kd;
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double s0 = 0.0, s1 = 0.0;
            for (std::size_t k = 0; k < nodes.size(); ++k) {
                const double ki = kernel(hb, basis_nodes[i], nodes[k]);
                const double kj = kernel(hb, basis_nodes[j], nodes[k]);
                const double term = ki * kj / kvals[k];
                s0 += term;
                s1 += nodes[k] * nodes[k] * term;
            }
            plain(i, j) = plain(j, i) = s0;
            weighted(i, j) = weighted(j, i) = s1;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(plain);
    if (check.eigenvalues()(0) <= 0.0)
        throw IllConditioned("rayleigh_min: node-sum Gram not positive definite");
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(weighted, plain);
    if (ges.info() != Eigen::Success)
        throw IllConditioned("rayleigh_min: generalized eigensolve failed");
    return std::sqrt(std::max(0.0, ges.eigenvalues()(0)));
}

// ---------------------------------------------------------------------------
// Constructive refutation
// ---------------------------------------------------------------------------

namespace {

// Fixed composite Gauss-Legendre quadrature for the measure, with +-r/2 and
// +-r among the panel edges so the indicator of [-r, r] integrates cleanly.
struct MeasureQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;  // includes density values and atom masses
};

constexpr int kGLPoints = 40;

void gl40(double a, double b, const real_fn& density, MeasureQuadrature& q) {
    // 40-point Gauss-Legendre via eigenvalues of the Jacobi matrix.
    static Eigen::VectorXd x0, w0;
    if (x0.size() == 0) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(kGLPoints, kGLPoints);
        for (int k = 1; k < kGLPoints; ++k) {
            const double bk = k / std::sqrt(4.0 * k * k - 1.0);
            J(k, k - 1) = J(k - 1, k) = bk;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
        x0 = es.eigenvalues();
        w0.resize(kGLPoints);
        for (int k = 0; k < kGLPoints; ++k) {
            const double v = es.eigenvectors()(0, k);
            w0(k) = 2.0 * v * v;
        }
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int k = 0; k < kGLPoints; ++k) {
        const double x = mid + half * x0(k);
        q.nodes.push_back(x);
        q.weights.push_back(half * w0(k) * density(x));
    }
}

MeasureQuadrature measure_quadrature(const Measure& mu, double r, int max_degree) {
    double extent;
    if (mu.decay.kind == DecayClass::Kind::Compact) {
        extent = mu.decay.param;
    } else {
        // x^{2 max_degree + 4} e^{-eps x} is negligible past the peak plus a
        // generous multiple of its width.
        const double eps = mu.decay.param;
        const double p = 2.0 * max_degree + 4.0;
        extent = (p + 12.0 * std::sqrt(p) + 60.0) / eps;
    }
    std::vector<double> edges{0.0, 0.5 * r, r};
    double e = r;
    while (e < extent) {
        e = std::min(extent, std::max(e * 1.5, e + 0.5 * r));
        edges.push_back(e);
    }
    MeasureQuadrature q;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        gl40(edges[k], edges[k + 1], mu.density, q);
        gl40(-edges[k + 1], -edges[k], mu.density, q);
    }
    for (const auto& atom : mu.atoms) {
        q.nodes.push_back(atom.location);
        q.weights.push_back(atom.mass);
    }
    return q;
}

}  // namespace

CounterexampleResult counterexample(const Measure& mu, double r, int max_degree,
                                    std::vector<std::pair<int, double>>* objective_trace) {
    if (!(r > 0.0)) throw DomainError("counterexample: r must be positive");
    if (mu.decay.kind == DecayClass::Kind::Polynomial)
        throw DomainError("counterexample: measure must carry an exponential or compact decay tag");
    if (max_degree > 60)
        throw DomainError("counterexample: degrees above 60 are refused (moment conditioning)");

    const MeasureQuadrature q = measure_quadrature(mu, r, max_degree);
    const std::size_t npts = q.nodes.size();
    Eigen::Map<const Eigen::VectorXd> x(q.nodes.data(), npts);
    Eigen::Map<const Eigen::VectorXd> w(q.weights.data(), npts);
    // Weights of mu_1 = (1 + x^2) dmu.
    const Eigen::VectorXd w1 = w.array() * (1.0 + x.array().square());

    // Orthonormal polynomials of mu_1: p_{k+1} = (x p_k - sum_j proj_{kj} p_j)
    // / norm_k, with values carried on the quadrature nodes and full
    // reorthogonalization. The projection coefficients are recorded so the
    // same recurrence can evaluate every p_k at arbitrary points without the
    // cancellation that a monomial expansion would suffer; monomial
    // coefficients are still accumulated for reporting.
    const int kmax = max_degree;
    std::vector<Eigen::VectorXd> pvals;
    std::vector<std::vector<double>> pcoef;      // monomial form (reporting only)
    std::vector<std::vector<double>> rec_proj;   // rec_proj[k][j]: projection onto p_j
    std::vector<double> rec_norm;                // norm_k
    double p0_norm;
    auto dot1 = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
        return (u.array() * v.array() * w1.array()).sum();
    };
    {
        Eigen::VectorXd p0 = Eigen::VectorXd::Ones(npts);
        p0_norm = std::sqrt(dot1(p0, p0));
        pvals.push_back(p0 / p0_norm);
        pcoef.push_back({1.0 / p0_norm});
    }
    for (int k = 0; k < kmax; ++k) {
        Eigen::VectorXd u = x.array() * pvals[k].array();
        std::vector<double> c(pcoef[k].size() + 1, 0.0);
        for (std::size_t j = 0; j < pcoef[k].size(); ++j) c[j + 1] = pcoef[k][j];
        std::vector<double> proj_total(pvals.size(), 0.0);
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = static_cast<int>(pvals.size()) - 1; j >= 0; --j) {
                const double proj = dot1(u, pvals[j]);
                u -= proj * pvals[j];
                proj_total[j] += proj;
                for (std::size_t i = 0; i < pcoef[j].size(); ++i) c[i] -= proj * pcoef[j][i];
            }
        }
        const double nn = std::sqrt(dot1(u, u));
        if (!(nn > 1e-140))
            throw IllConditioned("counterexample: orthonormal recurrence broke down");
        pvals.push_back(u / nn);
        rec_proj.push_back(std::move(proj_total));
        rec_norm.push_back(nn);
        for (auto& v : c) v /= nn;
        pcoef.push_back(std::move(c));
    }

    // Expansion coefficients of the indicator of [-r, r] in L^2(mu_1).
    Eigen::ArrayXd inside = (x.array().abs() <= r).cast<double>();
    const double indicator_norm2 = (inside * w1.array()).sum();
    std::vector<double> coef(pvals.size());
    for (std::size_t k = 0; k < pvals.size(); ++k)
        coef[k] = (inside * pvals[k].array() * w1.array()).sum();

    const Eigen::ArrayXd obj_weight = w.array() * (x.array().square() - r * r);
    Eigen::VectorXd P = Eigen::VectorXd::Zero(npts);
    double captured = 0.0;
    for (int deg = 0; deg <= max_degree; deg += 2) {
        // Even truncation of the expansion: the least-squares fit of the
        // indicator among even polynomials of this degree.
        P += coef[deg] * pvals[deg];
        captured += coef[deg] * coef[deg];
        const double objective = (obj_weight * P.array().square()).sum();
        if (objective_trace) objective_trace->emplace_back(deg, objective);
        if (objective < 0.0) {
            CounterexampleResult res;
            res.r = r;
            res.degree = deg;
            res.objective = objective;
            res.eta = std::sqrt(std::max(0.0, indicator_norm2 - captured));
            std::vector<double> mono(deg + 1, 0.0);
            std::vector<double> acc(deg + 1, 0.0);
            for (int k = 0; k <= deg; k += 2) acc[k] = coef[k];
            for (int k = 0; k <= deg; ++k)
                for (std::size_t i = 0; i < pcoef[k].size(); ++i) mono[i] += acc[k] * pcoef[k][i];
            res.poly = RealPolynomial(mono);
            // Evaluation through the recorded orthogonalization recurrence:
            // values of the p_k stay moderate on the support, unlike the
            // monomial form whose coefficients cancel at high degree.
            auto state = std::make_shared<std::tuple<std::vector<std::vector<double>>,
                                                     std::vector<double>, double,
                                                     std::vector<double>>>(
                rec_proj, rec_norm, p0_norm, acc);
            res.poly_stable = [state, deg](double t) {
                const auto& [proj, norms, n0, weights_used] = *state;
                std::vector<double> p(deg + 1);
                p[0] = 1.0 / n0;
                for (int k = 0; k < deg; ++k) {
                    double u = t * p[k];
                    for (int j = 0; j <= k; ++j) u -= proj[k][j] * p[j];
                    p[k + 1] = u / norms[k];
                }
                double value = 0.0;
                for (int k = 0; k <= deg; ++k) value += weights_used[k] * p[k];
                return value;
            };
            const double r2 = r * r;
            auto ps = res.poly_stable;
            res.witness = [ps, r2](double t) {
                const double p = ps(t);
                return (t * t - r2) * p * p;
            };
            return res;
        }
    }
    throw BudgetExhausted("counterexample: no degree up to the budget made the integral negative");
}

std::string counterexample_to_json(const CounterexampleResult& res) {
    nlohmann::ordered_json j;
    j["r"] = res.r;
    j["degree"] = res.degree;
    j["objective"] = res.objective;
    j["eta"] = res.eta;
    j["poly_coeffs"] = res.poly.coeffs();
    return j.dump();
}

}  // namespace bandsign
