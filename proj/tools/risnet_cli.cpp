#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "risnet/commands.hpp"
#include "risnet/errors.hpp"

using namespace risnet;

namespace {

struct Options {
    std::string config;
    std::string seed;
    std::string trials;
    std::string out;
    std::string sweep;
    std::string regime;
    bool dump_linear = false;
};

int run(const std::string& name, const Options& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : RunConfig::parse_file(o.config);
    if (!o.seed.empty()) cfg.set("seed", o.seed, "--seed");
    if (!o.trials.empty()) cfg.set("trials", o.trials, "--trials");
    if (!o.sweep.empty()) cfg.set("sweep", o.sweep, "--sweep");
    if (!o.regime.empty()) cfg.set("regime", o.regime, "--regime");
    if (!o.out.empty()) cfg.set("out", o.out, "--out");

    if (o.dump_linear) std::cerr << dump_linear(cfg);

    CommandOutput result;
    if (name == "rate-fixed") result = cmd_rate_fixed(cfg);
    else if (name == "rate-spatial") result = cmd_rate_spatial(cfg);
    else if (name == "optimize") result = cmd_optimize(cfg);
    else if (name == "rate-loss") result = cmd_rate_loss(cfg);
    else result = cmd_validate(cfg);

    std::cout << result.report;
    const std::string path = cfg.text("out", "");
    if (path.empty()) {
        std::cout << result.data;
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ConfigError(ConfigErrorKind::bad_value, "out", "", "cannot write '" + path + "'");
        f << result.data;
    }
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed RIS rate analysis: bounds, spatial averages, deployment optimum"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"rate-fixed", "Fixed-location rate bound against Monte Carlo, as CSV"},
        {"rate-spatial", "Spatially averaged rate: closed form, quadrature, Monte Carlo, as CSV"},
        {"optimize", "Density / array-size optimum under an element budget"},
        {"rate-loss", "Rate loss from phase errors versus array size, as CSV"},
        {"validate", "Run the invariant suite; exits 1 on any failure"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", o.config, "key = value configuration file");
        sub->add_option("--seed", o.seed, "master seed for Monte Carlo");
        sub->add_option("--trials", o.trials, "Monte Carlo trials");
        sub->add_option("--out", o.out, "output path (default stdout)");
        sub->add_option("--sweep", o.sweep, "AXIS:MIN:MAX:POINTS[:log]");
        sub->add_option("--regime", o.regime, "high, low, auto or integral");
        sub->add_flag("--dump-linear", o.dump_linear, "print linear-unit parameters to stderr");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }
    try {
        return run(app.get_subcommands().front()->get_name(), o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const DomainError& e) {
        std::cerr << "config error: out_of_domain: " << e.what() << "\n";
        return exit_config_error;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << " (last iterate " << e.last_iterate() << ", error "
                  << e.error_estimate() << ")\n";
        return exit_numeric_error;
    }
}
