#include <doctest.h>

#include <cmath>
#include <random>

#include "bandsign/extremal.hpp"
#include "bandsign/numerics.hpp"
#include "bandsign/special.hpp"
#include "oracles.hpp"

using namespace bandsign;

TEST_CASE("sharp_constant: exponential structures give pi/delta") {
    for (double delta : {1.0, pi, 2.0 * pi}) {
        const HermiteBiehler hb = paley_wiener_structure(delta);
        CHECK(sharp_constant(hb) == doctest::Approx(pi / delta).epsilon(1e-12));
    }
}

TEST_CASE("sharp_constant: scaled Bessel structures give 2 j_{nu,1}/delta") {
    const double delta = 2.0;
    for (double nu : {-0.5, 0.0, 1.0, 2.5}) {
        const HermiteBiehler hb = homogeneous_structure(nu, delta);
        const double expected = 2.0 * first_bessel_zero(BesselOrder(nu)) / delta;
        CHECK(sharp_constant(hb) == doctest::Approx(expected).epsilon(1e-11));
    }
    CHECK(sharp_constant(homogeneous_structure(0.0, 2.0)) ==
          doctest::Approx(2.404825557695773).epsilon(1e-11));
}

TEST_CASE("extremizer: closed form at distinguished points") {
    const HermiteBiehler hb = paley_wiener_structure(2.0);  // xi1 = pi/2
    const double xi1 = sharp_constant(hb);
    const real_fn F = extremizer(hb, xi1);
    CHECK(F(0.0) == doctest::Approx(-4.0 / (pi * pi)).epsilon(1e-12));
    CHECK(std::abs(F(xi1)) < 1e-12);
    CHECK(std::abs(F(xi1 + 1e-9)) < 1e-8);
    CHECK(F(2.0 * xi1) >= 0.0);
    for (double x = 0.05; x < xi1; x += 0.05) CHECK(F(x) < 0.0);
    // Even symmetry.
    CHECK(F(-1.3) == doctest::Approx(F(1.3)).epsilon(1e-14));
}

TEST_CASE("extremizer: smooth through the removable singularity") {
    const HermiteBiehler hb = homogeneous_structure(1.0, 2.0);
    const double xi1 = sharp_constant(hb);
    const real_fn F = extremizer(hb, xi1);
    // Values just inside/outside the guard radius line up.
    const double a = F(xi1 + 0.99e-4), b = F(xi1 + 1.01e-4);
    CHECK(a == doctest::Approx(b).epsilon(1e-5));
}

TEST_CASE("certify: exponential-structure extremizer against Lebesgue") {
    const double delta = pi;
    const HermiteBiehler hb = paley_wiener_structure(delta);
    const double xi1 = sharp_constant(hb);
    const real_fn F = extremizer(hb, xi1);
    const Certificate cert = certify(F, lebesgue(), xi1, delta, 1e-8);
    CHECK(cert.pass);
    CHECK(std::abs(cert.integral_value) < 1e-8);
    CHECK(cert.sign_grid.min_value >= -1e-8);
    CHECK(cert.vanishing_check <= 1e-8);
}

TEST_CASE("certify: claiming a smaller radius fails with positive integral") {
    const HermiteBiehler hb = paley_wiener_structure(2.0);
    const double xi1 = sharp_constant(hb);
    const double lam = 0.9;
    const real_fn H = extremizer_profile(hb, xi1);
    auto G = [&](double x) { return (x * x - lam * lam * xi1 * xi1) * H(x); };
    const Certificate cert = certify(G, lebesgue(), lam * xi1, 2.0, 1e-8);
    CHECK(!cert.pass);
    CHECK(cert.integral_value > 0.0);
}

TEST_CASE("certify: power weight order zero, both integral routes") {
    const double delta = 2.0;
    const HermiteBiehler hb = homogeneous_structure(0.0, delta);
    const double xi1 = sharp_constant(hb);
    const real_fn F = extremizer(hb, xi1);
    const Measure mu = power_weight(0.0);
    const Certificate cert = certify(F, mu, xi1, delta, 1e-7);
    CHECK(cert.pass);
    CHECK(std::abs(cert.integral_value) < 1e-7);
    // Node-sum route over the alpha = 0 rule must agree.
    const QuadratureRule rule = quadrature_rule(hb, 0.0, Interval(-1024.0, 1024.0));
    const double node_val = node_sum_extrapolated(rule, F);
    CHECK(std::abs(node_val) < 1e-7);
    // alpha = pi/2 rule: the extremizer vanishes at every node.
    const QuadratureRule rule_a = quadrature_rule(hb, 0.5 * pi, Interval(-64.0, 64.0));
    CHECK(std::abs(apply_quadrature(rule_a, F)) < 1e-15);
}

TEST_CASE("minimality probe: shrinking the claimed radius turns the integral positive") {
    const HermiteBiehler hb = paley_wiener_structure(2.0);
    const double xi1 = sharp_constant(hb);
    const real_fn H = extremizer_profile(hb, xi1);
    for (double lam : {0.9, 0.95, 0.99}) {
        auto G = [&](double x) { return (x * x - lam * lam * xi1 * xi1) * H(x); };
        const double v =
            mu_integral(lebesgue(), G, 1e-9, DecayClass::polynomial(2.0)).value;
        CHECK(v > 0.0);
    }
}

TEST_CASE("poly_reduce: base case and the two-point case") {
    {
        const auto [Q, R] = poly_reduce({1.0}, 2.0);
        CHECK(Q.even_coeffs == std::vector<double>{1.0});
        CHECK(R.even_coeffs == std::vector<double>{3.0});  // r^2 - t1^2
    }
    {
        const double t1 = 1.0, t2 = 2.0, r = 3.0;
        const auto [Q, R] = poly_reduce({t1, t2}, r);
        // Q2 = (r^2-t1^2) + (r^2-t2^2), constant.
        CHECK(Q.degree() == 0);
        CHECK(Q.even_coeffs[0] == doctest::Approx((r * r - t1 * t1) + (r * r - t2 * t2)));
        // R2 = (x^2-r^2)^2 + (r^2-t2^2)(r^2-t1^2)
        CHECK(R.degree() == 4);
        const double x = 1.7;
        const double expect = std::pow(x * x - r * r, 2) + (r * r - t2 * t2) * (r * r - t1 * t1);
        CHECK(R.eval(x) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("poly_reduce: identity against the division oracle, degrees, nonnegativity") {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int n = 1; n <= 6; ++n) {
        for (int rep = 0; rep < 4; ++rep) {
            std::vector<double> t(n);
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                acc += u(rng);
                t[k] = acc;
            }
            const double r = acc + u(rng) + 0.1;
            const auto [Q, R] = poly_reduce(t, r);

            // Degrees: deg Q = 2n-2 (n odd) / 2n-4 (n even); deg R = 2n-2 / 2n.
            const int expected_q = n % 2 == 1 ? 2 * n - 2 : 2 * n - 4;
            const int expected_r = n % 2 == 1 ? 2 * n - 2 : 2 * n;
            CHECK(Q.degree() == expected_q);
            CHECK(R.degree() == expected_r);

            // P = (x^2 - r^2) Q + R identically, against long division of P.
            RealPolynomial P({1.0});
            for (double tk : t) P = poly_mul(P, RealPolynomial({-tk * tk, 0.0, 1.0}));
            double pmax = 0.0;
            for (int g = 0; g <= 100; ++g) {
                const double x = -2.0 * r + 4.0 * r * g / 100.0;
                pmax = std::max(pmax, std::abs(P.eval(x)));
            }
            for (int g = 0; g <= 100; ++g) {
                const double x = -2.0 * r + 4.0 * r * g / 100.0;
                const double recon = (x * x - r * r) * Q.eval(x) + R.eval(x);
                CHECK(std::abs(recon - P.eval(x)) <= 1e-9 * std::max(1.0, pmax));
                CHECK(Q.eval(x) >= -1e-12 * std::max(1.0, pmax));
                CHECK(R.eval(x) >= -1e-12 * std::max(1.0, pmax));
            }
            // Division by (x^2 - r^2) is an independent route to the same
            // identity: quotient/remainder reconstruct P as well, though the
            // split differs (the reduction trades remainder degree for
            // nonnegativity).
            const auto div = poly_divide(P, RealPolynomial({-r * r, 0.0, 1.0}));
            for (double x : {-1.3 * r, 0.4 * r, 0.9 * r}) {
                const double via_division =
                    (x * x - r * r) * div.quotient.eval(x) + div.remainder.eval(x);
                const double via_reduction = (x * x - r * r) * Q.eval(x) + R.eval(x);
                CHECK(via_division ==
                      doctest::Approx(via_reduction).epsilon(1e-9).scale(std::max(1.0, pmax)));
            }
        }
    }
}

TEST_CASE("poly_reduce: rejects bad input") {
    CHECK_THROWS_AS(poly_reduce({}, 1.0), DomainError);
    CHECK_THROWS_AS(poly_reduce({1.0, 0.5}, 2.0), DomainError);
    CHECK_THROWS_AS(poly_reduce({1.0, 2.0}, 1.5), DomainError);
}

TEST_CASE("one_sign_change_form: pointwise domination and explicit zeros") {
    auto F1 = [](double) { return 1.0; };
    {
        auto G = one_sign_change_form({}, 2.0, F1);
        CHECK(G(1.0) == doctest::Approx((1.0 - 4.0)));
        CHECK(G(2.0) == doctest::Approx(0.0));
    }
    {
        EvenPolynomial R;
        auto G = one_sign_change_form({1.0}, 2.0, F1, &R);
        CHECK(R.even_coeffs == std::vector<double>{3.0});
        for (double x = -4.0; x <= 4.0; x += 0.1) {
            const double original = (x * x - 1.0) * (x * x - 4.0);
            CHECK(G(x) <= original + 1e-12);
            CHECK(G(x) == doctest::Approx(3.0 * (x * x - 4.0)).epsilon(1e-13));
        }
        CHECK(std::abs(G(2.0)) < 1e-12);
        CHECK(std::abs(G(-2.0)) < 1e-12);
    }
}

TEST_CASE("rayleigh_min: exponential structure brackets pi/2 from above") {
    const HermiteBiehler hb = paley_wiener_structure(2.0);
    const Interval w20(-20.0, 20.0), w40(-40.0, 40.0);
    const auto nodes20 = t_alpha_zeros(hb, 0.5 * pi, w20);
    const auto nodes40 = t_alpha_zeros(hb, 0.5 * pi, w40);
    const double v20 = rayleigh_min(hb, nodes20, w20);
    const double v40 = rayleigh_min(hb, nodes40, w40);
    CHECK(v20 >= 0.5 * pi - 1e-10);
    CHECK(v20 <= 0.5 * pi + 5e-3);
    CHECK(v40 <= v20 + 1e-9);  // non-increasing in the window
    CHECK(v40 >= 0.5 * pi - 1e-3);
}

TEST_CASE("rayleigh_min: order-zero structure approaches the first Bessel zero") {
    const HermiteBiehler hb = homogeneous_structure(0.0, 2.0);
    const Interval w(-40.0, 40.0);
    const auto nodes = t_alpha_zeros(hb, 0.5 * pi, w);
    REQUIRE(nodes.size() >= 6);
    const double v = rayleigh_min(hb, nodes, w);
    CHECK(v == doctest::Approx(2.404825557695773).epsilon(5e-3));
    CHECK(v >= 2.404825557695773 - 1e-3);
}

TEST_CASE("rayleigh_min: single-node basis returns that node") {
    const HermiteBiehler hb = paley_wiener_structure(2.0);
    const double node = 1.5 * pi;  // second positive zero of cos
    const double v = rayleigh_min(hb, {node}, Interval(-20.0, 20.0));
    CHECK(v == doctest::Approx(node).epsilon(1e-10));
}

TEST_CASE("counterexample: exponential measure admits a negative witness") {
    const Measure mu = exp_decay_measure(1.0);
    std::vector<std::pair<int, double>> trace;
    const auto res = counterexample(mu, 1.0, 30, &trace);
    CHECK(res.objective < 0.0);
    CHECK(res.degree <= 30);
    CHECK(res.eta >= 0.0);
    // Witness sanity: F = (x^2 - r^2) P^2, negative integral by construction;
    // recheck by direct integration of the stable witness.
    const double direct = mu_integral(mu, res.witness, 1e-8).value;
    CHECK(direct < 0.0);
    CHECK(direct == doctest::Approx(res.objective).epsilon(1e-6));
    // The monomial report agrees with the stable evaluation at low degree.
    if (res.degree <= 14) {
        for (double x : {-1.5, -0.4, 0.0, 0.7, 2.0})
            CHECK(res.poly.eval(x) == doctest::Approx(res.poly_stable(x)).epsilon(1e-8));
    }
}

TEST_CASE("counterexample: compact measure succeeds at low degree") {
    Measure mu = lebesgue();
    mu.label = "box";
    mu.decay = DecayClass::compact(1.0);
    const auto res = counterexample(mu, 0.5, 20);
    CHECK(res.objective < 0.0);
    CHECK(res.degree <= 12);
}

TEST_CASE("counterexample: r beyond the support needs only degree zero") {
    Measure mu = lebesgue();
    mu.label = "box";
    mu.decay = DecayClass::compact(1.0);
    // int (x^2 - r^2) dmu = 2/3 - 2 r^2 < 0 for r = 1.5.
    const auto res = counterexample(mu, 1.5, 10);
    CHECK(res.degree == 0);
    CHECK(res.objective < 0.0);
}

TEST_CASE("counterexample: rejects measures without the moment tag and huge degrees") {
    CHECK_THROWS_AS(counterexample(power_weight(0.0), 1.0, 20), DomainError);
    CHECK_THROWS_AS(counterexample(exp_decay_measure(1.0), 1.0, 80), DomainError);
}
