#include <doctest.h>

#include <cmath>

#include "kgsolve/gaussian.hpp"
#include "kgsolve/model.hpp"
#include "kgsolve/quadrature.hpp"
#include "kgsolve/rng.hpp"

using namespace kgsolve;

namespace {

ModelSpec basic_model(std::size_t d, double sigma) {
    ModelSpec m;
    m.d = d;
    m.spectrum = default_spectrum(d);
    m.sigma = sigma;
    m.horizon_T = 1.0;
    m.x0.assign(d, 1.0);
    return m;
}

// Independent quadrature oracle for Q_t = int_0^t sigma^2 e^{-2 s a} ds.
double qt_by_quadrature(double t, double a, double sigma) {
    const GaussLegendre gl = gauss_legendre(64);
    double acc = 0.0;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        acc += gl.weights[q] * sigma * sigma * std::exp(-2.0 * t * gl.nodes[q] * a);
    }
    return acc * t;
}

} // namespace

TEST_CASE("qt_diag closed form against the quadrature oracle") {
    const ModelSpec m1 = basic_model(1, 1.0);
    // frozen: (1 - e^-2) / 2
    CHECK(qt_diag(1.0, 1, m1) == doctest::Approx(0.43233235838169365).epsilon(1e-14));
    CHECK(qt_diag(1.0, 1, m1) == doctest::Approx(qt_by_quadrature(1.0, 1.0, 1.0)).epsilon(1e-12));

    const ModelSpec m2 = basic_model(2, 2.0);
    // frozen: (4/8)(1 - e^-8) at a_2 = 4, sigma = 2
    CHECK(qt_diag(1.0, 2, m2) == doctest::Approx(0.49983226868604874).epsilon(1e-14));
    CHECK(qt_diag(1.0, 2, m2) == doctest::Approx(qt_by_quadrature(1.0, 4.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("qt_diag long-time limit is the stationary variance") {
    const ModelSpec m = basic_model(3, 1.5);
    for (std::size_t k = 1; k <= 3; ++k) {
        const double a = m.spectrum[k - 1];
        CHECK(qt_diag(50.0, k, m) ==
              doctest::Approx(m.sigma * m.sigma / (2.0 * a)).epsilon(1e-13));
    }
}

TEST_CASE("lambda_diag value and the qt cross-check") {
    const ModelSpec m = basic_model(1, 1.0);
    CHECK(lambda_diag(1.0, 1, m) == doctest::Approx(0.559495563431321).epsilon(1e-14));
    // Lambda = Q_t^{-1/2} e^{tA}
    CHECK(lambda_diag(1.0, 1, m) ==
          doctest::Approx(qt_inv_sqrt_diag(1.0, 1, m) * semigroup_diag(1.0, 1, m)).epsilon(1e-14));
    CHECK(qt_inv_sqrt_diag(1.0, 1, m) == doctest::Approx(1.520866623178815).epsilon(1e-14));
}

TEST_CASE("Lambda = Q^{-1/2} semigroup on random (t, k)") {
    const ModelSpec m = basic_model(8, 0.7);
    std::uint64_t rs = 123;
    for (int i = 0; i < 1000; ++i) {
        const double t = 1e-5 + 3.0 * static_cast<double>(splitmix64(rs) >> 11) * 0x1.0p-53;
        const std::size_t k = 1 + splitmix64(rs) % m.d;
        const double lhs = lambda_diag(t, k, m);
        const double rhs = qt_inv_sqrt_diag(t, k, m) * semigroup_diag(t, k, m);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
}

TEST_CASE("Xi = sigma Q^{-1/2} Lambda on random (t, k)") {
    const ModelSpec m = basic_model(10, 1.3);
    std::uint64_t rs = 321;
    for (int i = 0; i < 1000; ++i) {
        const double t = 1e-5 + 2.0 * static_cast<double>(splitmix64(rs) >> 11) * 0x1.0p-53;
        const std::size_t k = 1 + splitmix64(rs) % m.d;
        const double xi = xi_diag(t, k, m);
        const double via = m.sigma * qt_inv_sqrt_diag(t, k, m) * lambda_diag(t, k, m);
        CHECK(std::abs(xi - via) <= 1e-12 * std::abs(xi));
    }
}

TEST_CASE("semigroup at t = 0 is the identity") {
    const ModelSpec m = basic_model(4, 1.0);
    for (std::size_t k = 1; k <= 4; ++k) CHECK(semigroup_diag(0.0, k, m) == 1.0);
}

TEST_CASE("monotonicity on a 100-point grid") {
    const ModelSpec m = basic_model(2, 1.0);
    double prev_q = 0.0;
    double prev_l = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 100; ++i) {
        const double t = 0.01 * i;
        const double q = qt_diag(t, 1, m);
        const double l = lambda_diag(t, 1, m);
        CHECK(q > prev_q);
        CHECK(l < prev_l);
        prev_q = q;
        prev_l = l;
    }
}

TEST_CASE("sqrt(t) Lambda approaches 1/sigma at the delta = 1/2 rate") {
    for (double sigma : {1.0, 2.0}) {
        ModelSpec m = basic_model(3, sigma);
        for (std::size_t k = 1; k <= 3; ++k) {
            double worst = 0.0;
            for (double t = 1e-6; t <= 1.0; t *= 1.35) {
                if (t > 1e-3) continue;
                worst = std::max(worst,
                                 std::abs(std::sqrt(t) * lambda_diag(t, k, m) - 1.0 / sigma));
            }
            CHECK(worst <= 1e-2);
        }
    }
}

TEST_CASE("kernels reject t <= 0 where Q_t is singular") {
    const ModelSpec m = basic_model(2, 1.0);
    CHECK_THROWS_AS(qt_diag(0.0, 1, m), std::domain_error);
    CHECK_THROWS_AS(qt_diag(-1.0, 1, m), std::domain_error);
    CHECK_THROWS_AS(lambda_diag(0.0, 1, m), std::domain_error);
    CHECK_THROWS_AS(qt_inv_sqrt_diag(0.0, 2, m), std::domain_error);
    CHECK_THROWS_AS(xi_diag(0.0, 1, m), std::domain_error);
    CHECK_THROWS_AS(semigroup_diag(-0.1, 1, m), std::domain_error);
    CHECK_THROWS_AS(qt_diag(1.0, 0, m), std::out_of_range);
    CHECK_THROWS_AS(qt_diag(1.0, 3, m), std::out_of_range);
}
