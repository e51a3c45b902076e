#include <doctest.h>

#include <cmath>

#include "bandsign/extremal.hpp"
#include "bandsign/kernelbuild.hpp"

using namespace bandsign;

TEST_CASE("build_gram: Lebesgue weight gives the scaled identity") {
    WeightedPWSpace space{pi, lebesgue(), 3, 0.0};
    const BuiltKernel bk = build_gram(space, 1e-10);
    REQUIRE(bk.dim() == 7);
    for (int m = 0; m < 7; ++m)
        for (int n = 0; n < 7; ++n)
            CHECK(bk.gram(m, n) == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-12));
    CHECK(bk.diagnostics.condition_number == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(bk.diagnostics.reproducing_residual < 1e-12);
}

TEST_CASE("build_gram: sinc-entry fast path matches direct integration") {
    WeightedPWSpace space{pi, katz_sarnak(Symmetry::Sp), 4, 0.0};
    const BuiltKernel bk = build_gram(space, 1e-11);
    // Spot-check a few entries against per-entry integrals.
    for (auto [m, n] : std::vector<std::pair<int, int>>{{0, 0}, {1, 3}, {-2, 2}, {4, -4}, {0, 1}}) {
        auto f = [&](double x) { return bk.basis(m, x) * bk.basis(n, x); };
        const double direct =
            mu_integral(space.mu, f, 1e-10, DecayClass::polynomial(2.0)).value;
        CHECK(bk.gram(m + 4, n + 4) == doctest::Approx(direct).epsilon(5e-8));
    }
}

TEST_CASE("build_gram: atom contributes a rank-one update at the center entry") {
    WeightedPWSpace space{pi, katz_sarnak(Symmetry::O), 3, 0.0};
    const BuiltKernel bk = build_gram(space, 1e-10);
    for (int m = -3; m <= 3; ++m)
        for (int n = -3; n <= 3; ++n) {
            const double expect = (m == n ? 1.0 : 0.0) + (m == 0 && n == 0 ? 0.5 : 0.0);
            CHECK(bk.gram(m + 3, n + 3) == doctest::Approx(expect).epsilon(1e-10));
        }
}

TEST_CASE("built_kernel_eval: matches the closed-form sine kernel for Lebesgue") {
    WeightedPWSpace space{pi, lebesgue(), 40, 0.0};
    const BuiltKernel bk = build_gram(space, 1e-10);
    auto exact = [&](double w, double x) {
        const double d = x - w;
        if (std::abs(d) < 1e-10) return 1.0;
        return std::sin(pi * d) / (pi * d);
    };
    for (auto [w, x] : std::vector<std::pair<double, double>>{{0.2, 0.7}, {-1.3, 2.4}, {0.0, 0.0}}) {
        CHECK(bk.eval(w, x) == doctest::Approx(exact(w, x)).epsilon(5e-3));
    }
    // Positive diagonal and even-measure symmetry.
    CHECK(bk.eval(0.4, 0.4) > 0.0);
    const cplx w(0.5, 0.3), z(1.2, -0.1);
    CHECK(std::abs(bk.eval(-w, -z) - bk.eval(w, z)) < 1e-10);
}

TEST_CASE("structure_function: Lebesgue pipeline reproduces pi/(2 tau)") {
    WeightedPWSpace space{pi, lebesgue(), 40, 0.0};
    const BuiltKernel bk = build_gram(space, 1e-10);
    const HermiteBiehler hb = structure_function(bk);
    CHECK(hb.tau == doctest::Approx(pi));
    const double xi_raw = sharp_constant(hb);
    CHECK(xi_raw == doctest::Approx(0.5).epsilon(2e-2));  // raw value carries the 1/N bias
    const PipelineResult res = kernel_pipeline_xi1(lebesgue(), pi, 40, 1e-10);
    CHECK(res.xi1 == doctest::Approx(0.5).epsilon(1e-4));
    REQUIRE(res.table.size() == 3);
    CHECK(res.table[2].first == 40);
}

TEST_CASE("structure_function: Hermite-Biehler gate and parity on a 1 + sinc weight") {
    WeightedPWSpace space{pi, katz_sarnak(Symmetry::SOeven), 16, 0.0};
    const BuiltKernel bk = build_gram(space, 1e-11);
    const HermiteBiehler hb = structure_function(bk);
    const HBReport rep = verify_hb(hb, 150, 4242);
    CHECK(rep.pass);
    for (double x : {0.3, 1.1, 2.7}) {
        CHECK(hb.A_real(-x) == doctest::Approx(hb.A_real(x)).epsilon(1e-9));
        CHECK(hb.B_real(-x) == doctest::Approx(-hb.B_real(x)).epsilon(1e-9));
    }
    // Derivatives are consistent with central differences.
    for (double x : {0.37, 1.42}) {
        const double h = 1e-6;
        CHECK(hb.A_prime_real(x) ==
              doctest::Approx((hb.A_real(x + h) - hb.A_real(x - h)) / (2 * h)).epsilon(1e-6));
        CHECK(hb.B_prime_real(x) ==
              doctest::Approx((hb.B_real(x + h) - hb.B_real(x - h)) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("validate_c4: Lebesgue and Sp weights") {
    {
        WeightedPWSpace space{pi, lebesgue(), 16, 0.0};
        const BuiltKernel bk = build_gram(space, 1e-10);
        const HermiteBiehler hb = structure_function(bk);
        const C4Report rep = validate_c4(bk, hb, 2, 1e-3, 11);
        CHECK(rep.pass);
        CHECK(rep.max_rel_gap < 1e-3);
    }
    {
        WeightedPWSpace space{pi, katz_sarnak(Symmetry::Sp), 16, 0.0};
        const BuiltKernel bk = build_gram(space, 1e-11);
        const HermiteBiehler hb = structure_function(bk);
        const C4Report rep = validate_c4(bk, hb, 2, 5e-3, 13);
        CHECK(rep.pass);
    }
}

TEST_CASE("diagnostics serialize to json") {
    WeightedPWSpace space{pi, lebesgue(), 8, 0.0};
    const BuiltKernel bk = build_gram(space, 1e-10);
    const std::string j = diagnostics_to_json(bk);
    CHECK(j.find("\"N\":8") != std::string::npos);
    CHECK(j.find("condition_number") != std::string::npos);
    CHECK(j.find("reproducing_residual") != std::string::npos);
}

TEST_CASE("build_gram: input validation") {
    CHECK_THROWS_AS(build_gram(WeightedPWSpace{pi, lebesgue(), 2, 0.0}, 1e-10), DomainError);
    CHECK_THROWS_AS(build_gram(WeightedPWSpace{-1.0, lebesgue(), 8, 0.0}, 1e-10), DomainError);
}
