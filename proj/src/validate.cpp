#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <sstream>

#include "risnet/commands.hpp"
#include "risnet/deployment_optimizer.hpp"
#include "risnet/monte_carlo.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/rate_bounds.hpp"
#include "risnet/rate_loss.hpp"
#include "risnet/spatial_rate.hpp"

namespace risnet {

namespace {

constexpr double pi = std::numbers::pi;

struct CheckResult {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

struct Context {
    Tolerance tol;
    std::uint64_t seed;
    std::int64_t trials;  // 0 = per-check default
    int workers;

    McConfig mc(std::int64_t default_trials) const {
        McConfig m;
        m.trials = trials > 0 ? trials : default_trials;
        m.master_seed = seed;
        m.workers = workers;
        return m;
    }
};

struct Check {
    const char* id;
    bool statistical;
    std::function<CheckResult(const Context&)> run;
};

std::string fmt(double v) { return format_number(v); }

double quad(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-13);
}

SystemParams eval_params(double p_dbm, double C = 10.0) {
    SystemParams p = default_params(p_dbm);
    p.serve_radius = C;
    return p;
}

std::vector<Check> checks() {
    std::vector<Check> c;
    c.push_back({"special_math.ei_vs_quadrature", false, [](const Context& ctx) {
                     CheckResult r;
                     boost::math::quadrature::exp_sinh<double> tail;
                     for (double x : {-0.05, -0.5, -1.0, -2.261947, -5.0, -16.0, -30.0}) {
                         const double oracle = -tail.integrate([](double u) { return std::exp(-u) / u; }, -x,
                                                               std::numeric_limits<double>::infinity());
                         const double got = exp_integral_ei(x, ctx.tol);
                         r.expect(std::abs(got - oracle) <= 1e-9, "Ei(" + fmt(x) + ") off by " + fmt(got - oracle));
                     }
                     return r;
                 }});
    c.push_back({"special_math.gamma_vs_quadrature", false, [](const Context& ctx) {
                     CheckResult r;
                     for (double a : {0.5, 1.5, 2.25, 3.0})
                         for (double x : {0.3, 1.5, 5.0, 20.0}) {
                             boost::math::quadrature::tanh_sinh<double> ts;
                             const double oracle =
                                 ts.integrate([a](double t) { return std::exp(-t) * std::pow(t, a - 1.0); }, 0.0, x);
                             const double got = lower_incomplete_gamma(a, x, ctx.tol);
                             r.expect(std::abs(got - oracle) <= 1e-9,
                                      "gamma(" + fmt(a) + "," + fmt(x) + ") off by " + fmt(got - oracle));
                         }
                     return r;
                 }});
    c.push_back({"special_math.power_integral_continuity", false, [](const Context&) {
                     CheckResult r;
                     for (auto [a, b] : {std::pair{180.0, 220.0}, std::pair{0.5, 7.0}, std::pair{2.0, 2.5}})
                         for (double dp : {-1e-9, 1e-9, -1e-7, 1e-7})
                             r.expect(std::abs(power_integral(-1.0 + dp, a, b) - std::log(b / a)) < 1e-6,
                                      "jump at p=-1 for [" + fmt(a) + "," + fmt(b) + "]");
                     return r;
                 }});
    c.push_back({"phase_error.mu_identities", false, [](const Context&) {
                     CheckResult r;
                     r.expect(std::abs(mu(0.0) - pi / 4) < 1e-15, "mu(0)");
                     r.expect(std::abs(mu(0.5) - 0.5) < 1e-15, "mu(0.5)");
                     r.expect(mu(1.0) == 0.0, "mu(1)");
                     for (double rho = 0.0; rho <= 1.0; rho += 0.05) {
                         const double m = mu(rho);
                         r.expect(std::abs(expected_cos_diff(rho) - 16.0 * m * m / (pi * pi)) < 1e-14,
                                  "cos-diff identity at rho=" + fmt(rho));
                     }
                     return r;
                 }});
    c.push_back({"rate_bounds.ordering", false, [](const Context&) {
                     CheckResult r;
                     const SystemParams p = eval_params(10.0);
                     const LinkGeometry g{200, 200, 10};
                     double prev = std::numeric_limits<double>::infinity();
                     for (double rho = 0.0; rho <= 1.0; rho += 0.1) {
                         const double v = rate_bound_ris(p, g, 200, rho).value;
                         r.expect(v <= prev + 1e-12, "bound increases with rho at " + fmt(rho));
                         prev = v;
                     }
                     double last = 0.0;
                     for (int n = 1; n <= 512; n *= 2) {
                         const double v = rate_bound_ris(p, g, n, 0.25).value;
                         r.expect(v >= last, "bound decreases with N at " + std::to_string(n));
                         last = v;
                     }
                     return r;
                 }});
    c.push_back({"rate_bounds.compensation_values", false, [](const Context&) {
                     CheckResult r;
                     const auto a = compensation(0.0, 0.25);
                     const auto b = compensation(0.0, 0.5);
                     r.expect(std::abs(a.element_factor - pi / (2 * std::numbers::sqrt2)) < 1e-12, "2-bit factor");
                     r.expect(std::abs(a.power_delta_db - 0.912) < 5e-4, "2-bit dB " + fmt(a.power_delta_db));
                     r.expect(std::abs(b.element_factor - pi / 2) < 1e-12, "1-bit factor");
                     r.expect(std::abs(b.power_delta_db - 3.922) < 5e-4, "1-bit dB " + fmt(b.power_delta_db));
                     return r;
                 }});
    c.push_back({"spatial_rate.association_values", false, [](const Context&) {
                     CheckResult r;
                     r.expect(std::round(association_probability(0.005, 12) * 1000) == 896, "C=12");
                     r.expect(std::round(association_probability(0.005, 16) * 1000) == 982, "C=16");
                     return r;
                 }});
    c.push_back({"spatial_rate.log_expectations_vs_quadrature", false, [](const Context& ctx) {
                     CheckResult r;
                     for (auto [lambda, C] : {std::pair{0.005, 10.0}, std::pair{0.05, 10.0}, std::pair{0.005, 30.0}}) {
                         const double oracle = quad(
                             [lambda](double x) { return x > 0 ? std::log2(x) * nearest_ris_pdf(lambda, x) : 0.0; },
                             0.0, C);
                         const double got = expected_log2_r_truncated(lambda, C, ctx.tol);
                         r.expect(std::abs(got - oracle) <= 1e-8,
                                  "E[log2 r] at (" + fmt(lambda) + "," + fmt(C) + ") off by " + fmt(got - oracle));
                     }
                     const double od = quad([](double x) { return std::log2(x) * 2 * x / 16000.0; }, 180, 220);
                     r.expect(std::abs(expected_log2_d(180, 220) - od) <= 1e-9, "E[log2 d]");
                     return r;
                 }});
    c.push_back({"spatial_rate.breakdown_resum", false, [](const Context& ctx) {
                     CheckResult r;
                     const DeploymentParams dep{0.005, 200, std::nullopt};
                     for (double pdbm : {3.0, 20.0}) {
                         const SystemParams p = eval_params(pdbm);
                         for (const auto& b : {spatial_rate_high_snr(p, dep, 0.25, ctx.tol),
                                               spatial_rate_low_snr(p, dep, 0.25, ctx.tol)}) {
                             r.expect(std::abs(b.total - b.resum()) <= 1e-9, "re-sum");
                             r.expect(std::abs(b.assoc_probability - (1 - std::exp(-pi * 0.005 * 100))) <= 1e-12,
                                      "association");
                         }
                     }
                     return r;
                 }});
    c.push_back({"optimizer.budget_anchor_n45", false, [](const Context& ctx) {
                     CheckResult r;
                     SystemParams p = eval_params(15.0, 3.0);
                     p.alpha_ris_ue = 2.0;
                     const auto o = optimize_density(10.0, p, 1.0, SnrRegime::high, ctx.tol);
                     r.expect(o.n_star == 45, "n_star=" + std::to_string(o.n_star));
                     return r;
                 }});
    c.push_back({"optimizer.random_phase_n1", false, [](const Context& ctx) {
                     CheckResult r;
                     for (double a3 : {2.5, 3.0, 3.5}) {
                         SystemParams p = eval_params(15.0, 3.0);
                         p.alpha_ris_ue = a3;
                         const auto o = optimize_density(10.0, p, 1.0, SnrRegime::high, ctx.tol);
                         r.expect(o.n_star == 1, "alpha_3=" + fmt(a3) + " n_star=" + std::to_string(o.n_star));
                     }
                     return r;
                 }});
    c.push_back({"optimizer.grid_agreement", false, [](const Context& ctx) {
                     CheckResult r;
                     RandomStream rs(2024);
                     for (int k = 0; k < 8; ++k) {
                         const bool high = k % 2 == 0;
                         SystemParams p = eval_params(high ? rs.uniform(15, 25) : rs.uniform(0, 5), rs.uniform(3, 12));
                         p.alpha_ris_ue = rs.uniform(2, 4);
                         const double rho = k % 4 < 2 ? rs.uniform(0, 0.5) : 1.0;
                         const double eta = rs.uniform(5, 10);
                         const auto snr = high ? SnrRegime::high : SnrRegime::low;
                         const auto o = optimize_density(eta, p, rho, snr, ctx.tol);
                         const auto g = grid_search_oracle(eta, p, rho, snr, 4000, ctx.tol);
                         r.expect(o.objective >= g.objective - 0.02, "draw " + std::to_string(k) + " gap " +
                                                                          fmt(g.objective - o.objective));
                     }
                     return r;
                 }});
    c.push_back({"optimizer.sign_bridge", false, [](const Context& ctx) {
                     CheckResult r;
                     RandomStream rs(77);
                     for (int k = 0; k < 40; ++k) {
                         SystemParams p = eval_params(k % 2 ? 20.0 : 3.0, rs.uniform(3, 12));
                         p.alpha_ris_ue = rs.uniform(2, 4);
                         const double rho = k % 4 < 2 ? rs.uniform(0, 0.9) : 1.0;
                         const auto snr = k % 2 ? SnrRegime::high : SnrRegime::low;
                         const double eta = 10.0;
                         const double lambda = eta * std::pow(10.0, rs.uniform(-4, -0.01));
                         const double h = 1e-6 * lambda;
                         const double fd = (objective_f(lambda + h, eta, p, rho, snr, ctx.tol) -
                                            objective_f(lambda - h, eta, p, rho, snr, ctx.tol)) / (2 * h);
                         // dF/dlambda = e^-x J / (lambda ln 2)
                         const double an = j_function_scaled(lambda, eta, p, rho, snr, ctx.tol) /
                                           (lambda * std::numbers::ln2);
                         r.expect(std::abs(fd - an) <= 0.01 * std::abs(an) + 1e-7,
                                  "draw " + std::to_string(k) + " fd " + fmt(fd) + " vs " + fmt(an));
                     }
                     return r;
                 }});
    c.push_back({"rate_loss.saturation", false, [](const Context&) {
                     CheckResult r;
                     const double target = -std::expm1(-5 * pi) * std::log2(pi * pi / 4);
                     r.expect(std::abs(rate_loss(1e4, 0.5, 0.05, 10) - target) < 1e-3, "N=1e4 loss");
                     r.expect(std::abs(rate_loss_asymptote(0.5, 0.05, 10) - target) < 1e-12, "asymptote");
                     const SystemParams p = eval_params(20.0);
                     for (double n : {10.0, 100.0, 1000.0}) {
                         const DeploymentParams dep{0.05, n, std::nullopt};
                         const double dh = spatial_rate_high_snr(p, dep, 0.0).h_term -
                                           spatial_rate_high_snr(p, dep, 0.5).h_term;
                         r.expect(std::abs(dh - rate_loss(n, 0.5, 0.05, 10)) < 1e-12, "H consistency");
                     }
                     return r;
                 }});

    c.push_back({"monte_carlo.fixed_rate_tightness", true, [](const Context& ctx) {
                     CheckResult r;
                     const SystemParams p = eval_params(10.0);
                     const LinkGeometry g{200, 200, 10};
                     for (double rho : {0.0, 0.5}) {
                         const double b = rate_bound_ris(p, g, 200, rho).value;
                         const auto m = simulate_fixed_rate(p, g, 200, rho, ctx.mc(20000));
                         r.expect(m.value <= b + 3 * *m.std_error, "Jensen violated at rho=" + fmt(rho));
                         r.expect(b - m.value <= 0.3, "gap " + fmt(b - m.value) + " at rho=" + fmt(rho));
                     }
                     return r;
                 }});
    c.push_back({"monte_carlo.spatial_bound_vs_quadrature", true, [](const Context& ctx) {
                     CheckResult r;
                     const SystemParams p = eval_params(20.0);
                     const DeploymentParams dep{0.005, 200, std::nullopt};
                     const double q = spatial_rate_integral(p, dep, 0.0, ctx.tol).total;
                     const auto m = simulate_spatial_bound(p, dep, 0.0, ctx.mc(50000));
                     r.expect(std::abs(q - m.value) <= 3 * *m.std_error,
                              "quadrature " + fmt(q) + " vs mc " + fmt(m.value) + " +- " + fmt(*m.std_error));
                     return r;
                 }});
    c.push_back({"monte_carlo.reflection_moments", true, [](const Context& ctx) {
                     CheckResult r;
                     const auto m = estimate_reflection_moments(16, 0.5, ctx.mc(100000));
                     r.expect(std::abs(m.mean_re_z - 8.0) <= 3 * m.stderr_re_z, "E Re z " + fmt(m.mean_re_z));
                     r.expect(std::abs(m.mean_abs_z_sq - 76.0) <= 3 * m.stderr_abs_z_sq,
                              "E |z|^2 " + fmt(m.mean_abs_z_sq));
                     return r;
                 }});
    c.push_back({"monte_carlo.cos_diff", true, [](const Context& ctx) {
                     CheckResult r;
                     const auto m = estimate_cos_diff(0.3, ctx.mc(200000));
                     r.expect(std::abs(m.mean - expected_cos_diff(0.3)) <= 3 * m.std_error, "mean " + fmt(m.mean));
                     return r;
                 }});
    c.push_back({"monte_carlo.sampler_ks", true, [](const Context& ctx) {
                     CheckResult r;
                     const double lambda = 0.005;
                     const std::size_t n = 20000;
                     std::vector<double> a(n), b(n);
                     for (std::size_t i = 0; i < n; ++i) {
                         RandomStream s1 = RandomStream::substream(ctx.seed, 2 * i);
                         RandomStream s2 = RandomStream::substream(ctx.seed, 2 * i + 1);
                         a[i] = sample_nearest_distance(lambda, s1);
                         auto v = sample_hppp_nearest(lambda, auto_disk_radius(lambda, 12), s2);
                         b[i] = v ? *v : std::numeric_limits<double>::infinity();
                     }
                     const double d = ks_statistic(a, b);
                     r.expect(d < ks_critical_value(n, n, 0.01), "KS " + fmt(d));
                     return r;
                 }});
    c.push_back({"monte_carlo.association_frequency", true, [](const Context& ctx) {
                     CheckResult r;
                     for (double C : {12.0, 16.0}) {
                         auto m = run_trials(ctx.mc(200000), 1, [C](RandomStream& rs, double* out) {
                             out[0] = sample_nearest_distance(0.005, rs) <= C ? 1.0 : 0.0;
                         });
                         r.expect(std::abs(m[0].mean - association_probability(0.005, C)) <= 3 * m[0].std_error,
                                  "C=" + fmt(C) + " freq " + fmt(m[0].mean));
                     }
                     return r;
                 }});
    return c;
}

}  // namespace

CommandOutput cmd_validate(const RunConfig& cfg) {
    const auto points = cfg.series_points();
    const Point& q = points.front();
    Context ctx{cfg.tolerance(), static_cast<std::uint64_t>(q.at("seed")),
                cfg.has("trials") ? static_cast<std::int64_t>(q.at("trials")) : 0,
                static_cast<int>(q.at("workers"))};
    const int seeds = static_cast<int>(q.at("seeds"));

    std::ostringstream report;
    nlohmann::json summary;
    summary["seeds"] = seeds;
    summary["checks"] = nlohmann::json::array();
    int failed = 0, flaky = 0, passed = 0;
    for (const auto& check : checks()) {
        const int runs = check.statistical ? seeds : 1;
        int fails = 0;
        std::string detail;
        for (int s = 0; s < runs; ++s) {
            Context c = ctx;
            c.seed = ctx.seed + static_cast<std::uint64_t>(s);
            CheckResult res;
            try {
                res = check.run(c);
            } catch (const std::exception& e) {
                res.pass = false;
                res.detail = std::string("exception: ") + e.what();
            }
            if (!res.pass) {
                ++fails;
                if (detail.empty()) detail = "seed " + std::to_string(c.seed) + ": " + res.detail;
            }
        }
        // one miss in several seeds is what 3-sigma bands predict; two or more is a failure
        std::string status = "pass";
        if (fails == 1 && runs > 1) status = "flake";
        else if (fails > 0) status = "fail";
        if (status == "pass") ++passed;
        else if (status == "flake") ++flaky;
        else ++failed;

        std::string label = status == "pass" ? "PASS " : status == "flake" ? "FLAKE" : "FAIL ";
        report << label << " " << check.id;
        if (runs > 1) report << " (" << runs - fails << "/" << runs << " seeds)";
        if (!detail.empty()) report << "  " << detail;
        report << "\n";
        summary["checks"].push_back({{"id", check.id}, {"status", status}, {"statistical", check.statistical},
                                     {"runs", runs}, {"failures", fails}, {"detail", detail}});
    }
    summary["passed"] = passed;
    summary["flaky"] = flaky;
    summary["failed"] = failed;
    report << "summary: " << passed << " passed, " << flaky << " flaky, " << failed << " failed\n";
    return {summary.dump(2) + "\n", report.str(), failed ? exit_validation_failed : exit_ok};
}

}  // namespace risnet
