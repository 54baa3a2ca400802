#include "risnet/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "risnet/deployment_optimizer.hpp"
#include "risnet/monte_carlo.hpp"
#include "risnet/phase_error.hpp"
#include "risnet/rate_bounds.hpp"
#include "risnet/rate_loss.hpp"
#include "risnet/spatial_rate.hpp"

namespace risnet {

namespace {

class Csv {
public:
    void comment(const std::string& text) { out_ << "# " << text << "\n"; }
    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

std::string num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_number(v);
}

Point with_axis(const Point& base, const std::string& axis, double v) {
    Point q = base;
    q[axis] = v;
    if (axis == "rho") q.erase("quant_bits");
    return q;
}

void forbid_rho_conflict(const RunConfig& cfg) {
    if (cfg.sweep() && cfg.sweep()->axis == "rho" && cfg.has("quant_bits"))
        throw ConfigError(ConfigErrorKind::conflict, "quant_bits", "", "cannot sweep rho while quant_bits is set");
}

// The configured sweep, or a one-point sweep over the first allowed axis holding a single value.
SweepSpec resolved_sweep(const RunConfig& cfg, const std::vector<std::string>& allowed) {
    if (cfg.sweep()) {
        cfg.require_sweep(allowed);
        return *cfg.sweep();
    }
    for (const auto& axis : allowed)
        if (cfg.has(axis) && cfg.list(axis).size() == 1) {
            const double v = cfg.list(axis).front();
            return SweepSpec{axis, v, v, 1, false};
        }
    throw ConfigError(ConfigErrorKind::missing_key, allowed.front(), "", "required key is not set");
}

std::vector<std::string> series_header(const RunConfig& cfg, const std::string& axis) {
    std::vector<std::string> h{axis};
    for (const auto& k : cfg.series_keys()) h.push_back(k);
    return h;
}

std::vector<std::string> series_cells(const RunConfig& cfg, const std::string& axis, const Point& q) {
    std::vector<std::string> c{num(q.at(axis))};
    for (const auto& k : cfg.series_keys()) c.push_back(num(q.at(k)));
    return c;
}

void echo_linear(Csv& csv, const std::string& command, const RunConfig& cfg, const Point& first) {
    csv.comment(command);
    Point q = first;
    if (cfg.sweep()) q = with_axis(first, cfg.sweep()->axis, sweep_values(*cfg.sweep()).front());
    csv.comment("linear: " + describe_linear(system_params_at(q)));
}

}  // namespace

CommandOutput cmd_rate_fixed(const RunConfig& cfg) {
    cfg.require({"tx_power_dbm", "elements", "distance_d", "distance_r"});
    const SweepSpec sw = resolved_sweep(cfg, {"elements", "tx_power_dbm", "rho", "distance_d", "distance_r"});
    forbid_rho_conflict(cfg);
    const auto points = cfg.series_points();
    const auto values = sweep_values(sw);
    const std::string axis = sw.axis;

    Csv csv;
    echo_linear(csv, "rate-fixed", cfg, points.front());
    auto header = series_header(cfg, axis);
    for (const char* c : {"bound", "mc_mean", "mc_stderr"}) header.push_back(c);
    csv.row(header);
    for (const auto& base : points) {
        for (double v : values) {
            const Point q = with_axis(base, axis, v);
            const SystemParams p = system_params_at(q);
            const double d = q.at("distance_d");
            const LinkGeometry g{d, q.count("distance_l") ? q.at("distance_l") : d, q.at("distance_r")};
            const double rho = rho_at(q);
            const int n = static_cast<int>(q.at("elements"));
            const auto bound = rate_bound_ris(p, g, n, rho);
            const auto mc = simulate_fixed_rate(p, g, n, rho, cfg.mc_config(q));
            auto cells = series_cells(cfg, axis, q);
            cells.push_back(num(bound.value));
            cells.push_back(num(mc.value));
            cells.push_back(num(*mc.std_error));
            csv.row(cells);
        }
    }
    return {csv.str(), "", exit_ok};
}

CommandOutput cmd_rate_spatial(const RunConfig& cfg) {
    cfg.require({"tx_power_dbm", "density", "elements", "serve_radius"});
    const SweepSpec sw = resolved_sweep(cfg, {"serve_radius", "density", "tx_power_dbm", "elements", "rho"});
    forbid_rho_conflict(cfg);
    const SpatialMethod requested = parse_spatial_method(cfg.text("regime", "auto"));
    const Tolerance tol = cfg.tolerance();
    const auto points = cfg.series_points();
    const auto values = sweep_values(sw);
    const std::string axis = sw.axis;

    Csv csv;
    echo_linear(csv, "rate-spatial", cfg, points.front());
    auto header = series_header(cfg, axis);
    for (const char* c : {"regime", "closed_form", "quadrature", "mc_bound", "mc_bound_stderr", "mc_exact",
                          "mc_exact_stderr"})
        header.push_back(c);
    csv.row(header);
    for (const auto& base : points) {
        for (double v : values) {
            const Point q = with_axis(base, axis, v);
            const SystemParams p = system_params_at(q);
            const DeploymentParams dep{q.at("density"), q.at("elements"), std::nullopt};
            const double rho = rho_at(q);
            const SpatialMethod used = resolve_spatial_method(p, requested);
            const auto quad = spatial_rate_integral(p, dep, rho, tol);
            const double closed = used == SpatialMethod::integral ? quad.total
                                                                  : spatial_rate(p, dep, rho, used, tol).total;
            const McConfig mc = cfg.mc_config(q);
            const auto bound = simulate_spatial_bound(p, dep, rho, mc);
            const auto exact = simulate_spatial_exact(p, dep, rho, mc);
            auto cells = series_cells(cfg, axis, q);
            cells.push_back(to_string(used));
            for (double x : {closed, quad.total, bound.value, *bound.std_error, exact.value, *exact.std_error})
                cells.push_back(num(x));
            csv.row(cells);
        }
    }
    return {csv.str(), "", exit_ok};
}

CommandOutput cmd_optimize(const RunConfig& cfg) {
    cfg.require({"tx_power_dbm", "element_budget", "serve_radius"});
    const std::string regime = cfg.text("regime", "high");
    if (regime != "high" && regime != "low")
        throw ConfigError(ConfigErrorKind::bad_value, "regime", "", "optimize supports only high or low");
    const SnrRegime snr = regime == "high" ? SnrRegime::high : SnrRegime::low;
    const Tolerance tol = cfg.tolerance();
    const auto points = cfg.series_points();
    const auto series = cfg.series_keys();

    std::ostringstream report;
    Csv csv;
    csv.comment("optimize");
    csv.comment("linear: " + describe_linear(system_params_at(points.front())));
    std::vector<std::string> header(series.begin(), series.end());
    for (const char* c : {"n", "lambda", "objective"}) header.push_back(c);
    csv.row(header);

    for (const auto& q : points) {
        const SystemParams p = system_params_at(q);
        const double eta = q.at("element_budget");
        const double rho = rho_at(q);
        const auto opt = optimize_density(eta, p, rho, snr, tol);
        const int n_max = q.count("n_max") ? static_cast<int>(q.at("n_max"))
                                           : static_cast<int>(std::max<std::int64_t>(100, 2 * opt.n_star));
        const auto grid = grid_search_oracle(eta, p, rho, snr, n_max, tol);

        for (const auto& k : series) report << k << "=" << num(q.at(k)) << " ";
        report << "regime=" << regime << " eta=" << num(eta) << " rho=" << num(rho)
               << " lambda_star=" << num(opt.lambda_star) << " n_star=" << opt.n_star
               << " branch=" << to_string(opt.branch) << " objective=" << num(opt.objective)
               << " d_constant=" << num(opt.d_constant) << " lambda_continuous=" << num(opt.lambda_continuous)
               << " floor_scores_higher=" << (opt.floor_scores_higher ? "true" : "false");
        if (opt.closed_form_lambda) report << " closed_form_lambda=" << num(*opt.closed_form_lambda);
        report               << " grid_n_star=" << grid.n_star << " grid_objective=" << num(grid.objective) << "\n";

        std::vector<std::string> prefix;
        for (const auto& k : series) prefix.push_back(num(q.at(k)));
        for (int n = 1; n <= n_max; ++n) {
            const double lambda = eta / n;
            auto cells = prefix;
            cells.push_back(std::to_string(n));
            cells.push_back(num(lambda));
            cells.push_back(num(objective_f(lambda, eta, p, rho, snr, tol)));
            csv.row(cells);
        }
    }
    return {csv.str(), report.str(), exit_ok};
}

CommandOutput cmd_rate_loss(const RunConfig& cfg) {
    cfg.require({"density", "serve_radius", "rho"});
    const SweepSpec sw = resolved_sweep(cfg, {"elements"});
    for (const auto& k : cfg.series_keys())
        if (k != "rho" && k != "quant_bits")
            throw ConfigError(ConfigErrorKind::bad_value, k, "", "rate-loss accepts a list only for rho");
    const auto points = cfg.series_points();
    const auto values = sweep_values(sw);
    const bool spatial = cfg.has("tx_power_dbm");
    const Tolerance tol = cfg.tolerance();
    const double lambda = points.front().at("density");
    const double C = points.front().at("serve_radius");

    Csv csv;
    csv.comment("rate-loss");
    csv.comment("linear: density=" + num(lambda) + " C=" + num(C) +
                (spatial ? " " + describe_linear(system_params_at(points.front())) : ""));
    std::vector<std::string> header{"elements"};
    for (const auto& q : points) {
        const std::string tag = "[rho=" + num(rho_at(q)) + "]";
        header.push_back("loss" + tag);
        header.push_back("asymptote" + tag);
        if (spatial) header.push_back("spatial_loss" + tag);
    }
    csv.row(header);
    for (double n : values) {
        std::vector<std::string> cells{num(n)};
        for (const auto& q : points) {
            const double rho = rho_at(q);
            cells.push_back(num(rate_loss(n, rho, lambda, C)));
            cells.push_back(mu(rho) > 0.0 ? num(rate_loss_asymptote(rho, lambda, C))
                                          : num(std::numeric_limits<double>::infinity()));
            if (spatial) {
                const SystemParams p = system_params_at(q);
                const DeploymentParams dep{lambda, n, std::nullopt};
                cells.push_back(num(spatial_rate_integral(p, dep, 0.0, tol).total -
                                    spatial_rate_integral(p, dep, rho, tol).total));
            }
        }
        csv.row(cells);
    }
    return {csv.str(), "", exit_ok};
}

std::string dump_linear(const RunConfig& cfg) {
    std::ostringstream os;
    for (const auto& q : cfg.series_points()) {
        Point r = q;
        if (cfg.sweep()) r = with_axis(q, cfg.sweep()->axis, sweep_values(*cfg.sweep()).front());
        if (!r.count("tx_power_dbm")) {
            os << "tx_power_dbm not set; linear parameters unavailable\n";
            continue;
        }
        os << describe_linear(system_params_at(r)) << " rho=" << num(rho_at(r)) << "\n";
    }
    return os.str();
}

}  // namespace risnet
