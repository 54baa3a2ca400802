#include <doctest.h>

#include <cmath>
#include <numbers>

#include "risnet/deployment_optimizer.hpp"
#include "risnet/errors.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/random_stream.hpp"

using namespace risnet;
using std::numbers::pi;

namespace {

SystemParams anchor(double a3 = 2.0, double C = 3.0) {
    SystemParams p = default_params(15.0);
    p.alpha_ris_ue = a3;
    p.serve_radius = C;
    return p;
}

void check_budget(const DeploymentOptimum& o, double eta) {
    CHECK(o.lambda_star <= eta);
    CHECK(o.lambda_star > 0.0);
    CHECK(static_cast<std::int64_t>(std::ceil(eta / o.lambda_star)) == o.n_star);
}

}  // namespace

TEST_CASE("high SNR D constant") {
    const SystemParams p = anchor();
    CHECK(d_constant(p, SnrRegime::high) == doctest::Approx(7.64626309290002).epsilon(1e-12));
    CHECK(std::exp2(d_constant(p, SnrRegime::high)) == doctest::Approx(200.3).epsilon(1e-3));
}

TEST_CASE("low SNR D constant equals its separately assembled addends") {
    SystemParams p = default_params(3.0);
    const double eld = std::log2(220.0) + 0.5 * std::log2(std::exp(1.0)) *
                                              ((220.0 * 220.0 * std::log(220.0) - 180.0 * 180.0 * std::log(180.0)) /
                                                   (220.0 * 220.0 - 180.0 * 180.0) -
                                               std::log(220.0)) * 2.0 -
                       0.5 / std::numbers::ln2;
    const double snr = p.tx_power / p.noise_power;
    const double t1 = std::log2(snr * 1e-6);
    const double t2 = -2.0 * eld;
    const double t3 = -snr * 1e-3 / std::numbers::ln2 * 2.0 * (std::log(220.0) - std::log(180.0)) /
                      (220.0 * 220.0 - 180.0 * 180.0) * 0.0;
    // alpha_1 = 3: integral of d^{-2} over [180, 220]
    const double t3b = -snr * 1e-3 / std::numbers::ln2 * 2.0 * (1.0 / 180.0 - 1.0 / 220.0) /
                       (220.0 * 220.0 - 180.0 * 180.0);
    CHECK(d_constant(p, SnrRegime::low) == doctest::Approx(t1 + t2 + t3 + t3b).epsilon(1e-12));
}

TEST_CASE("budget anchor: N* = 45") {
    const auto o = optimize_density(10.0, anchor(), 1.0, SnrRegime::high);
    CHECK(o.n_star == 45);
    CHECK(o.branch == Branch::lemma2);
    CHECK(o.lambda_continuous == doctest::Approx(std::exp2(o.d_constant) / 9.0 * 1e-3 * 10.0).epsilon(1e-14));
    check_budget(o, 10.0);
    CHECK(grid_search_oracle(10.0, anchor(), 1.0, SnrRegime::high, 500).n_star == 45);
}

TEST_CASE("random phases with alpha_3 above 2 favour one element per RIS") {
    for (double a3 : {2.5, 3.0, 3.5}) {
        const auto o = optimize_density(10.0, anchor(a3), 1.0, SnrRegime::high);
        CAPTURE(a3);
        CHECK(o.n_star == 1);
        CHECK(o.lambda_star == 10.0);
        CHECK(o.branch == Branch::lemma3);
        CHECK(grid_search_oracle(10.0, anchor(a3), 1.0, SnrRegime::high, 2000).n_star == 1);
    }
}

TEST_CASE("single-element threshold implies J >= 0 on (0, eta]") {
    RandomStream rs(51);
    for (int i = 0; i < 20; ++i) {
        SystemParams p = anchor(rs.uniform(2.05, 4.0), rs.uniform(1.0, 12.0));
        const double eta = single_element_eta_threshold(p, SnrRegime::high) * rs.uniform(1.0, 3.0);
        for (int k = 1; k <= 1000; ++k) {
            const double lambda = eta * k / 1000.0;
            CHECK(j_function_scaled(lambda, eta, p, 1.0, SnrRegime::high) >= -1e-9);
        }
    }
    CHECK(std::isinf(single_element_eta_threshold(anchor(2.0), SnrRegime::high)));
}

TEST_CASE("objective is nondecreasing for random phases at alpha_3 = 2.5") {
    const SystemParams p = anchor(2.5);
    double prev = -INFINITY;
    for (int k = 1; k <= 2000; ++k) {
        const double f = objective_f(10.0 * k / 2000.0, 10.0, p, 1.0, SnrRegime::high);
        CHECK(f >= prev - 1e-12);
        prev = f;
    }
}

TEST_CASE("alpha_3 = 4 closed form with bounded phases") {
    for (double rho : {0.0, 0.2, 0.5}) {
        for (double eta : {1.0, 10.0, 250.0}) {
            const SystemParams p = anchor(4.0, 6.0);
            const auto o = optimize_density(eta, p, rho, SnrRegime::high);
            REQUIRE(o.closed_form_lambda.has_value());
            const double m = mu(rho);
            const double D = o.d_constant;
            const double lam = m * eta / 36.0 * std::sqrt(std::exp2(D) * 1e-3);
            const double n = 36.0 / m * std::sqrt(std::exp2(-D) / 1e-3);
            CHECK(lam * n == doctest::Approx(eta).epsilon(1e-14));
            CHECK(*o.closed_form_lambda == doctest::Approx(std::min(lam, eta)).epsilon(1e-14));
            // the stationary point is local; the returned optimum never scores below it
            CHECK(o.objective >= objective_f(*o.closed_form_lambda, eta, p, rho, SnrRegime::high));
            CHECK(o.lambda_star * (eta / o.lambda_star) == eta);
            check_budget(o, eta);
        }
    }
}

TEST_CASE("alpha_3 = 4 stationary point solves J = 0 in the large-N form") {
    for (double rho : {0.0, 0.3}) {
        const SystemParams p = anchor(4.0, 6.0);
        const double eta = 10.0;
        const auto o = optimize_density(eta, p, rho, SnrRegime::high);
        const double lam = *o.closed_form_lambda;
        const double m = mu(rho);
        const double n = eta / lam;
        // log term of J vanishes when N q is replaced by mu^2 N^2
        CHECK(std::log(std::exp2(o.d_constant) / std::pow(6.0, 4.0) * 1e-3 * m * m * n * n) ==
              doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("closed-form N* grows with C and shrinks with mu") {
    auto closed_n = [](double C, double rho) {
        const auto o = optimize_density(1e4, anchor(4.0, C), rho, SnrRegime::high);
        return static_cast<std::int64_t>(std::ceil(1e4 / *o.closed_form_lambda * (1 - 1e-12)));
    };
    for (double rho : {0.0, 0.25, 0.5, 0.75}) {
        std::int64_t prev = 0;
        for (double C = 1; C <= 20; C += 1) {
            const auto n = closed_n(C, rho);
            CHECK(n >= prev);
            prev = n;
        }
    }
    for (double C : {2.0, 8.0, 15.0}) {
        std::int64_t prev = 0;
        // mu falls as rho rises
        for (double rho = 0.0; rho < 0.95; rho += 0.05) {
            const auto n = closed_n(C, rho);
            CHECK(n >= prev);
            prev = n;
        }
    }
}

TEST_CASE("high SNR J at alpha_3 = 2 with random phases") {
    const SystemParams p = anchor();
    const double D = d_constant(p, SnrRegime::high);
    for (double lambda : {0.01, 0.1, 1.0, 5.0}) {
        const double x = pi * lambda * 9.0;
        const double expect = x * std::log(std::exp2(D) / 9.0 * 1e-3 * 10.0 / lambda);
        CHECK(j_function(lambda, 10.0, p, 1.0, SnrRegime::high) == doctest::Approx(expect).epsilon(1e-10));
    }
    const double root = std::exp2(D) / 9.0 * 1e-3 * 10.0;
    CHECK(std::abs(j_function(root, 10.0, p, 1.0, SnrRegime::high)) < 1e-12);
}

TEST_CASE("J vanishes at the origin for bounded phases") {
    for (double rho : {0.0, 0.3, 0.7})
        CHECK(std::abs(j_function(1e-12, 10.0, anchor(2.7, 5.0), rho, SnrRegime::high)) < 1e-6);
}

TEST_CASE("sign bridge: J against finite differences of F") {
    RandomStream rs(61);
    int compared = 0;
    for (int i = 0; i < 100; ++i) {
        const bool high = i % 2 == 0;
        SystemParams p = default_params(high ? rs.uniform(15, 30) : rs.uniform(0, 5));
        p.alpha_ris_ue = rs.uniform(2.0, 4.0);
        p.serve_radius = rs.uniform(2.0, 12.0);
        const double eta = rs.uniform(1.0, 20.0);
        const double rho = i % 3 == 0 ? 1.0 : rs.uniform(0.0, 0.9);
        const double lambda = eta * std::pow(10.0, rs.uniform(-4.0, 0.0)) * 0.999;
        const SnrRegime snr = high ? SnrRegime::high : SnrRegime::low;
        const double h = 1e-6 * lambda;
        const double fd = (objective_f(lambda + h, eta, p, rho, snr) - objective_f(lambda - h, eta, p, rho, snr)) / (2 * h);
        const double an = j_function_scaled(lambda, eta, p, rho, snr) / (lambda * std::numbers::ln2);
        if (std::abs(an) * lambda < 1e-6) continue;
        ++compared;
        CAPTURE(i);
        CHECK(std::signbit(fd) == std::signbit(an));
        CHECK(fd == doctest::Approx(an).epsilon(0.01));
    }
    CHECK(compared >= 90);
}

TEST_CASE("dispatched optimum against the integer grid") {
    RandomStream rs(71);
    for (int i = 0; i < 40; ++i) {
        const bool high = i % 2 == 0;
        SystemParams p = default_params(high ? rs.uniform(15, 25) : rs.uniform(0, 5));
        p.alpha_ris_ue = i % 5 == 0 ? 4.0 : rs.uniform(2.0, 4.0);
        p.serve_radius = rs.uniform(3.0, 12.0);
        const double eta = rs.uniform(5.0, 10.0);
        const double rho = i % 4 == 1 ? 1.0 : rs.uniform(0.0, 0.5);
        const SnrRegime snr = high ? SnrRegime::high : SnrRegime::low;
        const auto o = optimize_density(eta, p, rho, snr);
        const auto g = grid_search_oracle(eta, p, rho, snr, 2000);
        CAPTURE(i);
        CHECK(o.objective >= g.objective - 0.02);
        check_budget(o, eta);
    }
}

TEST_CASE("low SNR never takes the single-element shortcut") {
    SystemParams p = default_params(3.0);
    p.alpha_ris_ue = 3.0;
    p.serve_radius = 3.0;
    const auto o = optimize_density(1e6, p, 1.0, SnrRegime::low);
    CHECK(o.branch != Branch::lemma3);
}

TEST_CASE("grid oracle edge cases") {
    const auto one = grid_search_oracle(10.0, anchor(), 1.0, SnrRegime::high, 1);
    CHECK(one.n_star == 1);
    CHECK(one.lambda_star == 10.0);
    CHECK(one.branch == Branch::grid);
    CHECK_THROWS_AS(grid_search_oracle(10.0, anchor(), 1.0, SnrRegime::high, 0), DomainError);
}

TEST_CASE("optimizer domain errors") {
    CHECK_THROWS_AS(optimize_density(0.0, anchor(), 1.0, SnrRegime::high), DomainError);
    CHECK_THROWS_AS(optimize_density(-1.0, anchor(), 1.0, SnrRegime::high), DomainError);
    CHECK_THROWS_AS(optimize_density(10.0, anchor(), 1.5, SnrRegime::high), DomainError);
    CHECK_THROWS_AS(objective_f(11.0, 10.0, anchor(), 1.0, SnrRegime::high), DomainError);
    CHECK_THROWS_AS(objective_f(0.0, 10.0, anchor(), 1.0, SnrRegime::high), DomainError);
}

TEST_CASE("objective is continuous on a log grid") {
    const SystemParams p = anchor(2.7, 6.0);
    for (double rho : {0.0, 0.4, 1.0}) {
        std::vector<double> f;
        std::vector<double> lam;
        for (int k = 0; k <= 10000; ++k) {
            lam.push_back(10.0 * std::pow(10.0, -6.0 + 6.0 * k / 10000.0));
            f.push_back(objective_f(lam.back(), 10.0, p, rho, SnrRegime::high));
        }
        for (int k = 1; k + 1 < 10000; ++k) {
            const double jump = std::abs(f[k + 1] - f[k]);
            const double slope = std::abs(f[k] - f[k - 1]) + std::abs(f[k + 2 > 10000 ? k + 1 : k + 2] - f[k + 1]);
            CHECK(jump <= 10 * slope + 1e-12);
        }
    }
}
