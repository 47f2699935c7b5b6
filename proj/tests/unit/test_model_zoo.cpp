#include <doctest.h>

#include <cmath>

#include "kgsolve/errors.hpp"
#include "kgsolve/model_zoo.hpp"
#include "kgsolve/rng.hpp"

using namespace kgsolve;

namespace {

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

std::vector<double> random_point(std::uint64_t& rs, std::size_t d, double scale) {
    std::vector<double> x(d);
    for (auto& v : x) {
        v = scale * (2.0 * static_cast<double>(splitmix64(rs) >> 11) * 0x1.0p-53 - 1.0);
    }
    return x;
}

} // namespace

TEST_CASE("sine vanishes at the origin") {
    const auto nl = Nonlinearity::sine();
    const std::vector<double> x(5, 0.0);
    for (double v : eval_B(nl, x)) CHECK(v == 0.0);
}

TEST_CASE("poly_bounded vanishes at the attractor") {
    const std::vector<double> ybar{2.0, 2.0, 2.0};
    const auto nl = Nonlinearity::poly_bounded(ybar, 2.0);
    for (double v : eval_B(nl, ybar)) CHECK(v == 0.0);
}

TEST_CASE("sine_skew hand example at (pi/2, pi/2, pi/2)") {
    const auto nl = Nonlinearity::sine_skew();
    const double p2 = M_PI / 2.0;
    const std::vector<double> x{p2, p2, p2};
    const auto b = eval_B(nl, x);
    // sin(pi/2) * (B_m x)_i with B_m x = (pi, 0, -pi)
    CHECK(b[0] == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(b[1] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(b[2] == doctest::Approx(-M_PI).epsilon(1e-14));
}

TEST_CASE("sine_skew matrix is exactly skew-symmetric") {
    const auto nl = Nonlinearity::sine_skew();
    std::uint64_t rs = 77;
    for (int rep = 0; rep < 200; ++rep) {
        const auto x = random_point(rs, 7, 3.0);
        // <B_m x, x> = 0; recover B_m x by dividing out sin(x_i) where safe
        double total = 0.0, prefix = 0.0;
        for (double v : x) total += v;
        double pairing = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            prefix += x[i];
            const double bmx = total - 2.0 * prefix + x[i];
            pairing += bmx * x[i];
            scale += std::abs(bmx * x[i]);
        }
        CHECK(std::abs(pairing) <= 1e-12 * std::max(1.0, scale));
    }
}

TEST_CASE("poly_bounded norm never exceeds ||ybar||") {
    std::uint64_t rs = 99;
    const std::vector<double> ybar{2.0, 2.0, 2.0, 2.0};
    const double ny = norm2(ybar);
    for (double p : {1.0, 2.0, 3.0}) {
        const auto nl = Nonlinearity::poly_bounded(ybar, p);
        for (int rep = 0; rep < 10000 / 3; ++rep) {
            const auto x = random_point(rs, 4, 25.0);
            CHECK(norm2(eval_B(nl, x)) <= ny * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("eval_B is pure: identical input gives identical bits") {
    std::uint64_t rs = 5;
    const auto x = random_point(rs, 6, 2.0);
    for (const auto& nl : {Nonlinearity::sine(), Nonlinearity::sine_skew(),
                           Nonlinearity::poly_bounded(std::vector<double>(6, 2.0), 2.0)}) {
        const auto b1 = eval_B(nl, x);
        const auto b2 = eval_B(nl, x);
        for (std::size_t i = 0; i < b1.size(); ++i) CHECK(b1[i] == b2[i]);
    }
}

TEST_CASE("threshold datum") {
    const auto u0 = InitialDatum::threshold(1.0);
    const std::vector<double> ones(10, 1.0); // ||x|| = sqrt(10) >= 1
    CHECK(eval_u0(u0, ones) == 1.0);
    const std::vector<double> zero(10, 0.0);
    CHECK(eval_u0(u0, zero) == 0.0);
    CHECK(u0.sup_norm() == 1.0);
}

TEST_CASE("trig datum with h = 0 is identically 1") {
    const auto u0 = InitialDatum::trig(std::vector<double>(4, 0.0));
    std::uint64_t rs = 11;
    for (int rep = 0; rep < 50; ++rep) {
        CHECK(eval_u0(u0, random_point(rs, 4, 10.0)) == 1.0);
    }
}

TEST_CASE("sup_norm_B per kind") {
    CHECK(*sup_norm_B(Nonlinearity::zero(), 7) == 0.0);
    CHECK(*sup_norm_B(Nonlinearity::sine(), 9) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK_FALSE(sup_norm_B(Nonlinearity::sine_skew(), 5).has_value());
    const std::vector<double> b{0.3, 0.4};
    CHECK(*sup_norm_B(Nonlinearity::constant(b), 2) == doctest::Approx(0.5).epsilon(1e-15));
    const std::vector<double> ybar(4, 2.0);
    CHECK(*sup_norm_B(Nonlinearity::poly_bounded(ybar, 2.0), 4) ==
          doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("dimension mismatches and broken invariants are rejected") {
    const std::vector<double> x3(3, 1.0);
    CHECK_THROWS_AS(eval_B(Nonlinearity::constant({1.0, 2.0}), x3), ConfigError);
    CHECK_THROWS_AS(eval_u0(InitialDatum::trig({1.0, 1.0}), x3), ConfigError);
    auto bad = Nonlinearity::poly_bounded(std::vector<double>(3, 0.0), 2.0);
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    auto badp = Nonlinearity::poly_bounded(std::vector<double>(3, 1.0), 0.5);
    CHECK_THROWS_AS(badp.validate(), ConfigError);
}
