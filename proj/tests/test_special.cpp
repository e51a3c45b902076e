#include <doctest.h>

#include <cmath>
#include <random>

#include "bandsign/special.hpp"
#include "oracles.hpp"

using namespace bandsign;

TEST_CASE("A_nu: order -1/2 is cosine") {
    const BesselOrder half(-0.5);
    CHECK(A_nu(half, 1.0) == doctest::Approx(std::cos(1.0)).epsilon(1e-14));
    CHECK(A_nu(half, cplx(0.3, 0.4)).real() ==
          doctest::Approx(std::cos(cplx(0.3, 0.4)).real()).epsilon(1e-13));
    // Large-argument path must agree with cosine too.
    CHECK(A_nu(half, 47.25) == doctest::Approx(std::cos(47.25)).epsilon(1e-11));
}

TEST_CASE("A_nu: normalization and first zeros") {
    for (double nu : {-0.9, -0.5, 0.0, 1.0, 2.5, 5.0})
        CHECK(A_nu(BesselOrder(nu), 0.0) == doctest::Approx(1.0));

    CHECK(std::abs(A_nu(BesselOrder(0.0), 2.404825557695773)) < 1e-10);
    const double j01 = first_bessel_zero(BesselOrder(0.0));
    const double j01_oracle =
        oracles::bisect([](double x) { return oracles::a_series_oracle(0.0, x); }, 2.0, 3.0);
    CHECK(j01 == doctest::Approx(j01_oracle).epsilon(1e-12));
    CHECK(j01 == doctest::Approx(2.404825557695773).epsilon(1e-12));

    const double j11 = first_bessel_zero(BesselOrder(1.0));
    CHECK(j11 == doctest::Approx(3.8317059702075125).epsilon(1e-9));
    CHECK(first_bessel_zero(BesselOrder(-0.5)) == doctest::Approx(0.5 * pi).epsilon(1e-13));
}

TEST_CASE("B_nu: sine case and odd symmetry") {
    CHECK(B_nu(BesselOrder(-0.5), 1.0) == doctest::Approx(std::sin(1.0)).epsilon(1e-14));
    CHECK(B_nu(BesselOrder(1.3), 0.0) == 0.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-8.0, 8.0), unu(-0.9, 4.0);
    for (int t = 0; t < 30; ++t) {
        const double nu = unu(rng), x = ux(rng);
        CHECK(B_nu(BesselOrder(nu), -x) ==
              doctest::Approx(-B_nu(BesselOrder(nu), x)).epsilon(1e-12));
    }
}

TEST_CASE("derivatives match central differences") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ux(0.2, 12.0), unu(-0.9, 3.0);
    for (int t = 0; t < 20; ++t) {
        const BesselOrder order(unu(rng));
        const double x = ux(rng);
        const double h = 1e-5;
        const double da = (A_nu(order, x + h) - A_nu(order, x - h)) / (2.0 * h);
        const double db = (B_nu(order, x + h) - B_nu(order, x - h)) / (2.0 * h);
        CHECK(A_nu_prime(order, x) == doctest::Approx(da).epsilon(1e-7));
        CHECK(B_nu_prime(order, x) == doctest::Approx(db).epsilon(1e-7));
    }
}

TEST_CASE("series/asymptotic crossover is seamless") {
    for (double nu : {-0.5, 0.0, 1.0, 2.5}) {
        const BesselOrder order(nu);
        // Compare just below and above the internal switch against the
        // long-sum oracle evaluated with extra terms.
        for (double x : {17.0, 18.5, 21.0, 26.0}) {
            const double oracle = oracles::a_series_oracle(nu, x, 200);
            CHECK(A_nu(order, x) == doctest::Approx(oracle).epsilon(1e-8));
        }
    }
}

TEST_CASE("Hermite-Biehler inequality for E_nu on random upper half-plane points") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ure(-20.0, 20.0), uim(1e-3, 5.0), unu(-0.9, 4.0);
    for (int t = 0; t < 200; ++t) {
        const BesselOrder order(unu(rng));
        const cplx z(ure(rng), uim(rng));
        const cplx e = A_nu(order, z) - cplx(0, 1) * B_nu(order, z);
        const cplx estar = A_nu(order, z) + cplx(0, 1) * B_nu(order, z);
        CHECK(std::abs(estar) < std::abs(e));
    }
}

TEST_CASE("interlacing of A and B zeros (order 0)") {
    const BesselOrder order(0.0);
    // Scan [0.5, 14] for sign changes of both functions on a fine grid.
    std::vector<std::pair<double, int>> zeros;
    double pa = A_nu(order, 0.5), pb = B_nu(order, 0.5);
    for (double x = 0.5 + 1e-3; x <= 14.0; x += 1e-3) {
        const double ca = A_nu(order, x), cb = B_nu(order, x);
        if (pa * ca < 0) zeros.emplace_back(x, 0);
        if (pb * cb < 0) zeros.emplace_back(x, 1);
        pa = ca;
        pb = cb;
    }
    REQUIRE(zeros.size() >= 6);
    for (std::size_t k = 1; k < zeros.size(); ++k) CHECK(zeros[k].second != zeros[k - 1].second);
}

TEST_CASE("first zero increases with the order") {
    double prev = 0.0;
    for (double nu : {-0.9, -0.5, 0.0, 1.0, 2.5, 5.0}) {
        const double j = first_bessel_zero(BesselOrder(nu));
        CHECK(j > prev);
        prev = j;
    }
}

TEST_CASE("diagonal positivity B'A - A'B > 0") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> ux(-30.0, 30.0), unu(-0.9, 3.0);
    for (int t = 0; t < 50; ++t) {
        const BesselOrder order(unu(rng));
        const double x = ux(rng);
        const double w = B_nu_prime(order, x) * A_nu(order, x) -
                         A_nu_prime(order, x) * B_nu(order, x);
        CHECK(w > 0.0);
    }
}

TEST_CASE("order domain") {
    CHECK_THROWS_AS(BesselOrder(-1.0), DomainError);
    CHECK_THROWS_AS(BesselOrder(-1.5), DomainError);
}
