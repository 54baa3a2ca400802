#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "risnet/errors.hpp"
#include "risnet/monte_carlo.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/rate_bounds.hpp"
#include "risnet/spatial_rate.hpp"

using namespace risnet;
using std::numbers::pi;

namespace {

const Tolerance tight{1e-300, 1e-15, 100000};

SystemParams eval_params(double tx_dbm, double C) {
    SystemParams p = default_params(tx_dbm);
    p.serve_radius = C;
    return p;
}

double oracle_log2_r(double lambda, double C) {
    // integrand has a log singularity at 0, tanh-sinh handles it
    return oracle::tanh_sinh(
        [&](double r) { return std::log2(r) * nearest_ris_pdf(lambda, r); }, 0.0, C);
}

double oracle_log2_d(double D1, double D2) {
    return oracle::tanh_sinh([&](double d) { return std::log2(d) * 2 * d / (D2 * D2 - D1 * D1); }, D1, D2);
}

}  // namespace

TEST_CASE("nearest RIS density and association probability") {
    CHECK(association_probability(0.005, 12) == doctest::Approx(0.8959).epsilon(1e-4));
    CHECK(association_probability(0.005, 16) == doctest::Approx(0.9820).epsilon(1e-4));
    CHECK(std::round(association_probability(0.005, 12) * 1000) == 896);
    CHECK(std::round(association_probability(0.005, 16) * 1000) == 982);
    CHECK(association_probability(0.005, 1e-6) < 1e-9);
    CHECK(association_probability(10.0, 10) == 1.0);
    for (double lambda : {0.001, 0.005, 0.05}) {
        const double total = oracle::to_infinity([&](double r) { return nearest_ris_pdf(lambda, r); }, 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        const double part = oracle::kronrod([&](double r) { return nearest_ris_pdf(lambda, r); }, 0.0, 10.0);
        CHECK(part == doctest::Approx(association_probability(lambda, 10)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(association_probability(0.0, 10), DomainError);
    CHECK_THROWS_AS(association_probability(0.005, -1), DomainError);
}

TEST_CASE("log expectations against quadrature") {
    CHECK(expected_log2_d(180, 220) == doctest::Approx(7.64626309290002).epsilon(1e-13));
    CHECK(expected_log2_r_truncated(0.005, 10, tight) == doctest::Approx(1.82426517602213758).epsilon(1e-12));
    CHECK(expected_log2_r_truncated(0.05, 10, tight) == doctest::Approx(0.918842386921302489).epsilon(1e-12));
    CHECK(expected_log2_r_truncated(0.005, 30, tight) == doctest::Approx(2.57980334959384840).epsilon(1e-12));

    // 20-point grid
    for (double lambda : {0.001, 0.005, 0.02, 0.05, 0.3})
        for (double C : {0.5, 3.0, 10.0, 25.0}) {
            CAPTURE(lambda);
            CAPTURE(C);
            CHECK(std::abs(expected_log2_r_truncated(lambda, C) - oracle_log2_r(lambda, C)) < 1e-8);
        }
    for (double D1 : {1.0, 50.0, 180.0, 400.0})
        for (double w : {1e-3, 0.5, 1.0, 40.0, 1000.0}) {
            CAPTURE(D1);
            CAPTURE(w);
            CHECK(std::abs(expected_log2_d(D1, D1 + w) - oracle_log2_d(D1, D1 + w)) < 1e-8);
        }

    // lambda = 1/pi, C large: -E0 / (2 ln 2)
    CHECK(expected_log2_r_truncated(1 / pi, 1e3) ==
          doctest::Approx(-std::numbers::egamma / (2 * std::numbers::ln2)).epsilon(1e-12));
    // small pi lambda C^2 makes the partial expectation negative
    CHECK(expected_log2_r_truncated(0.5, 0.5) < 0.0);
    CHECK(oracle_log2_r(0.5, 0.5) < 0.0);
}

TEST_CASE("log2 d sampling oracle") {
    McConfig mc;
    mc.trials = 1000000;
    mc.master_seed = 5;
    const auto m = run_trials(mc, 1, [](RandomStream& s, double* out) {
        out[0] = std::log2(sample_cell_edge_distance(180, 220, s));
    });
    CHECK(std::abs(m[0].mean - expected_log2_d(180, 220)) <= 3 * m[0].std_error);
}

TEST_CASE("kappa constants") {
    const SystemParams p = default_params();
    CHECK(kappa(1, p) == doctest::Approx(0.0706811598851932).epsilon(1e-13));
    CHECK(kappa(2, p) == doctest::Approx(0.005).epsilon(1e-13));
    CHECK(kappa(3, p) == doctest::Approx(40400.0).epsilon(1e-13));
    const double A = 220.0 * 220.0 - 180.0 * 180.0;
    const double e1 = (p.alpha_bs_ris - p.alpha_direct) / 2;
    const double e2 = p.alpha_bs_ris - p.alpha_direct;
    CHECK(kappa(1, p) == doctest::Approx(oracle::kronrod([&](double d) { return std::pow(d, e1) * 2 * d / A; }, 180, 220)).epsilon(1e-9));
    CHECK(kappa(2, p) == doctest::Approx(oracle::kronrod([&](double d) { return std::pow(d, e2) * 2 * d / A; }, 180, 220)).epsilon(1e-9));
    CHECK(kappa(3, p) == doctest::Approx(oracle::kronrod([&](double d) { return std::pow(d, p.alpha_bs_ris) * 2 * d / A; }, 180, 220)).epsilon(1e-9));

    SystemParams same = p;
    same.alpha_direct = same.alpha_bs_ris;
    CHECK(kappa(2, same) == doctest::Approx(1.0).epsilon(1e-14));
    // degenerate exponents: alpha_2 - alpha_1 + 2 = 0 and alpha_2 - alpha_1 + 4 = 0
    SystemParams deg = p;
    deg.alpha_direct = 4.0;
    const double k2 = kappa(2, deg);
    deg.alpha_direct = 4.0 + 1e-7;
    CHECK(std::abs(kappa(2, deg) - k2) < 1e-6 * k2);
    deg.alpha_direct = 6.0;
    const double k1 = kappa(1, deg);
    deg.alpha_direct = 6.0 - 1e-7;
    CHECK(std::abs(kappa(1, deg) - k1) < 1e-6 * k1);
    CHECK_THROWS_AS(kappa(4, p), DomainError);
}

TEST_CASE("h_term and array gain") {
    CHECK(array_gain_ratio(200, 0.0) == 1.0);
    CHECK(array_gain_ratio(1, 0.7) == doctest::Approx(1.0));
    const double x = pi * 0.005 * 100;
    CHECK(h_term(200, pi / 4, 0.005, 10) ==
          doctest::Approx(std::log2(200 * (pi * pi / 16 * 200 + 1 - pi * pi / 16)) * (1 - std::exp(-x))).epsilon(1e-14));
    CHECK(h_term(1, 0.3, 0.005, 10) == doctest::Approx(0.0));
}

TEST_CASE("breakdowns re-sum to the total") {
    RandomStream rs(31);
    for (int i = 0; i < 30; ++i) {
        const SystemParams p = eval_params(rs.uniform(0, 30), rs.uniform(2, 20));
        const DeploymentParams dep{rs.uniform(0.001, 0.05), std::floor(rs.uniform(8, 400)), {}};
        const double rho = rs.uniform(0, 1);
        for (auto m : {SpatialMethod::high, SpatialMethod::low, SpatialMethod::integral}) {
            const auto b = spatial_rate(p, dep, rho, m);
            CHECK(std::abs(b.resum() - b.total) <= 1e-9);
            CHECK(b.assoc_probability == doctest::Approx(association_probability(dep.density, p.serve_radius)));
            CHECK(b.g_bar_low_term.has_value() == (m == SpatialMethod::low));
        }
    }
}

TEST_CASE("integral form against Monte Carlo spatial bound") {
    for (double tx : {3.0, 20.0})
        for (double n : {20.0, 200.0})
            for (double rho : {0.0, 0.5}) {
                const SystemParams p = eval_params(tx, 10);
                const DeploymentParams dep{0.005, n, {}};
                const auto q = spatial_rate_integral(p, dep, rho);
                McConfig mc;
                mc.trials = 200000;
                mc.master_seed = 77;
                const auto sim = simulate_spatial_bound(p, dep, rho, mc);
                CAPTURE(tx);
                CAPTURE(n);
                CAPTURE(rho);
                CHECK(std::abs(q.total - sim.value) <= 3 * *sim.std_error + 1e-6);
                CHECK(q.error_estimate <= 1e-8 * std::max(1.0, q.total));
            }
}

TEST_CASE("integral limits") {
    SystemParams p = eval_params(20, 10);
    p.tx_power = 1e-20;
    CHECK(std::abs(spatial_rate_integral(p, {0.005, 200, {}}, 0.0).total) < 1e-8);

    // C -> 0+: only the direct link remains
    SystemParams tiny = eval_params(20, 1e-6);
    const auto b = spatial_rate_integral(tiny, {0.005, 200, {}}, 0.0);
    CHECK(b.assoc_probability < 1e-9);
    CHECK(std::abs(b.h_term) < 1e-9);
    const double direct_only = oracle::kronrod(
        [&](double d) { return rate_bound_direct(tiny, d).value * 2 * d / (220.0 * 220.0 - 180.0 * 180.0); }, 180, 220);
    CHECK(b.total == doctest::Approx(direct_only).epsilon(1e-8));

    // lambda large: full coverage
    const auto hi = spatial_rate_high_snr(eval_params(20, 10), {5.0, 200, {}}, 0.0);
    CHECK(hi.assoc_probability == 1.0);
    CHECK(std::abs(hi.direct_term) < 1e-12);
}

TEST_CASE("closed form agrees with the integral when the linearized term is small") {
    // holds whenever g_bar <= 0.05 h, at direct-link SNR >= 100
    int checked = 0;
    for (double tx : {41.0, 50.0})
        for (double n : {50.0, 200.0, 1000.0})
            for (double rho : {0.0, 0.5, 0.9})
                for (double C : {5.0, 10.0}) {
                    const SystemParams p = eval_params(tx, C);
                    REQUIRE(p.direct_snr(p.d_max) >= 100);
                    const DeploymentParams dep{0.005, n, {}};
                    const auto h = spatial_rate_high_snr(p, dep, rho);
                    if (h.g_bar_term > 0.05 * h.h_term) continue;
                    ++checked;
                    CAPTURE(tx);
                    CAPTURE(n);
                    CAPTURE(rho);
                    CAPTURE(C);
                    CHECK(std::abs(h.total - spatial_rate_integral(p, dep, rho).total) <= 0.1);
                }
    CHECK(checked >= 20);
}

TEST_CASE("linearized term shrinks relative to H as N grows") {
    for (double rho : {0.0, 0.5, 0.9})
        for (double C : {5.0, 10.0, 16.0}) {
            const SystemParams p = eval_params(20, C);
            double prev = INFINITY;
            for (double n : {32.0, 64.0, 128.0, 256.0, 1000.0, 4000.0}) {
                const auto b = spatial_rate_high_snr(p, {0.005, n, {}}, rho);
                const double ratio = b.g_bar_term / b.h_term;
                CHECK(ratio < prev);
                prev = ratio;
            }
            CHECK(prev <= 0.02);
        }
}

TEST_CASE("rate grows with C and levels off past C = 16") {
    const DeploymentParams dep{0.005, 200, {}};
    double prev = -INFINITY;
    for (double C = 2; C <= 24; C += 2) {
        const double v = spatial_rate_integral(eval_params(20, C), dep, 0.0).total;
        CHECK(v >= prev);
        prev = v;
    }
    const double i16 = spatial_rate_integral(eval_params(20, 16), dep, 0.0).total;
    const double i20 = spatial_rate_integral(eval_params(20, 20), dep, 0.0).total;
    CHECK(i20 - i16 <= 0.05);
}

TEST_CASE("low SNR direct term is continuous at alpha_1 = 2") {
    SystemParams p = eval_params(3, 10);
    p.alpha_direct = 2.0;
    const DeploymentParams dep{0.005, 200, {}};
    const double at = spatial_rate_low_snr(p, dep, 0.0).total;
    for (double eps : {1e-6, 1e-7}) {
        p.alpha_direct = 2.0 + eps;
        CHECK(std::abs(spatial_rate_low_snr(p, dep, 0.0).total - at) < 1e-4);
    }
    SystemParams q = eval_params(3, 10);
    q.tx_power = 1e-25;
    const auto b = spatial_rate_low_snr(q, dep, 0.0);
    CHECK(std::abs(b.direct_term) < 1e-12);
}

TEST_CASE("method dispatch and warnings") {
    CHECK(parse_spatial_method("high") == SpatialMethod::high);
    CHECK(parse_spatial_method("auto") == SpatialMethod::automatic);
    CHECK_THROWS_AS(parse_spatial_method("medium"), DomainError);
    CHECK(resolve_spatial_method(eval_params(50, 10), SpatialMethod::automatic) == SpatialMethod::high);
    CHECK(resolve_spatial_method(eval_params(0, 10), SpatialMethod::automatic) == SpatialMethod::low);
    CHECK(resolve_spatial_method(eval_params(20, 10), SpatialMethod::automatic) == SpatialMethod::integral);
    CHECK(resolve_spatial_method(eval_params(0, 10), SpatialMethod::high) == SpatialMethod::high);

    CHECK_FALSE(spatial_rate_high_snr(eval_params(20, 10), {0.005, 4, {}}, 0.0).warnings.empty());
    CHECK(spatial_rate_high_snr(eval_params(50, 10), {0.005, 200, {}}, 0.0).warnings.empty());
    CHECK_FALSE(spatial_rate_low_snr(eval_params(40, 10), {0.005, 200, {}}, 0.0).warnings.empty());
}

TEST_CASE("tolerance failure surfaces as a numeric error") {
    Tolerance t;
    t.abs_tol = 1e-300;
    t.rel_tol = 1e-300;
    t.max_iterations = 2;
    CHECK_THROWS_AS(spatial_rate_integral(eval_params(20, 10), {0.005, 200, {}}, 0.0, t), NumericError);
}
