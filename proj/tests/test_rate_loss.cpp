#include <doctest.h>

#include <cmath>
#include <numbers>

#include "risnet/errors.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/rate_loss.hpp"
#include "risnet/spatial_rate.hpp"

using namespace risnet;
using std::numbers::pi;

TEST_CASE("ideal phases lose nothing") {
    for (double n : {1.0, 10.0, 1e4}) CHECK(rate_loss(n, 0.0, 0.05, 10) == 0.0);
    CHECK(rate_loss(1.0, 0.7, 0.05, 10) == doctest::Approx(0.0));
}

TEST_CASE("random phases grow like log N") {
    const double pa = association_probability(0.05, 10);
    for (double n : {2.0, 50.0, 1e3, 1e6}) {
        const double expect = pa * std::log2(pi * pi / 16 * n + 1 - pi * pi / 16);
        CHECK(rate_loss(n, 1.0, 0.05, 10) == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK_THROWS_AS(rate_loss_asymptote(1.0, 0.05, 10), DomainError);
}

TEST_CASE("bounded errors saturate") {
    const double target = -std::expm1(-5 * pi) * std::log2(pi * pi / 4);
    CHECK(target == doctest::Approx(1.303).epsilon(1e-3));
    CHECK(rate_loss_asymptote(0.5, 0.05, 10) == doctest::Approx(target).epsilon(1e-14));
    CHECK(std::abs(rate_loss(1e4, 0.5, 0.05, 10) - target) < 1e-3);
    CHECK(std::abs(rate_loss(1e6, 0.25, 0.05, 10) - rate_loss_asymptote(0.25, 0.05, 10)) < 1e-4);
    CHECK(rate_loss_asymptote(0.25, 0.05, 10) == doctest::Approx(0.303).epsilon(1e-3));
    CHECK(rate_loss_asymptote(0.6, 0.05, 10) == doctest::Approx(1.974).epsilon(1e-3));
}

TEST_CASE("loss is monotone in N and rho") {
    for (double rho : {0.1, 0.25, 0.5, 0.6, 0.9, 1.0}) {
        double prev = -1;
        for (double n = 1; n <= 4096; n *= 2) {
            const double v = rate_loss(n, rho, 0.05, 10);
            CHECK(v >= prev);
            prev = v;
            if (rho < 1.0) CHECK(v <= rate_loss_asymptote(rho, 0.05, 10) + 1e-12);
        }
    }
    for (double n : {4.0, 64.0, 1000.0}) {
        double prev = -1;
        for (double rho = 0; rho <= 1.0; rho += 0.05) {
            const double v = rate_loss(n, rho, 0.05, 10);
            CHECK(v >= prev - 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("loss equals the H difference") {
    for (double rho : {0.25, 0.5, 1.0})
        for (double n : {3.0, 40.0, 500.0})
            CHECK(rate_loss(n, rho, 0.005, 12) ==
                  doctest::Approx(h_term(n, pi / 4, 0.005, 12) - h_term(n, mu(rho), 0.005, 12)).epsilon(1e-12));
}

TEST_CASE("small mu behaves like random phases below the knee") {
    // rho near 1: knee 1/mu^2 - 1 is large
    const double rho = 0.98;
    const double knee = 1 / (mu(rho) * mu(rho)) - 1;
    const double n = 0.1 * knee;
    CHECK(std::abs(rate_loss(n, rho, 0.05, 10) / rate_loss(n, 1.0, 0.05, 10) - 1) < 0.05);
}

TEST_CASE("regime classification") {
    CHECK(rate_loss_regime(1e4, 0.5, 0.05, 10).regime == LossRegime::saturating);
    CHECK(rate_loss_regime(5, 0.5, 0.05, 10).regime == LossRegime::mixed);
    CHECK(rate_loss_regime(5, 1.0, 0.05, 10).regime == LossRegime::log_growth);
    CHECK(rate_loss_regime(2, 0.98, 0.05, 10).regime == LossRegime::log_growth);
    CHECK(rate_loss_regime(1e4, 0.5, 0.05, 10).value == rate_loss(1e4, 0.5, 0.05, 10));
    CHECK_THROWS_AS(rate_loss(0.5, 0.5, 0.05, 10), DomainError);
    CHECK_THROWS_AS(rate_loss(10, 1.5, 0.05, 10), DomainError);
}
