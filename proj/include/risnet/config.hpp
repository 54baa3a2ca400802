#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "risnet/deployment_optimizer.hpp"
#include "risnet/monte_carlo.hpp"
#include "risnet/params.hpp"
#include "risnet/spatial_rate.hpp"
#include "risnet/special_math.hpp"

namespace risnet {

enum class ConfigErrorKind { syntax, unknown_key, missing_key, bad_value, out_of_domain, conflict };

const char* to_string(ConfigErrorKind k);

class ConfigError : public std::runtime_error {
public:
    ConfigError(ConfigErrorKind kind, std::string key, std::string source, const std::string& msg);

    ConfigErrorKind kind() const noexcept { return kind_; }
    const std::string& key() const noexcept { return key_; }
    const std::string& source() const noexcept { return source_; }

private:
    ConfigErrorKind kind_;
    std::string key_;
    std::string source_;
};

struct SweepSpec {
    std::string axis;
    double min = 0.0;
    double max = 0.0;
    int points = 1;
    bool log_scale = false;

    static SweepSpec parse(const std::string& text);
    std::vector<double> values() const;
};

// One resolved combination of scalar values (a sweep point within a series).
using Point = std::map<std::string, double>;

// Flat key = value configuration. Numeric keys may hold comma-separated lists;
// commands expand lists into series. Later assignments override earlier ones,
// so flags applied after the file take precedence.
class RunConfig {
public:
    static RunConfig parse_text(const std::string& text, const std::string& source = "<config>");
    static RunConfig parse_file(const std::string& path);

    void set(const std::string& key, const std::string& value, const std::string& source);

    bool has(const std::string& key) const;
    const std::vector<double>& list(const std::string& key) const;
    double scalar(const std::string& key) const;
    std::string text(const std::string& key, const std::string& fallback) const;
    const std::optional<SweepSpec>& sweep() const { return sweep_; }

    // Throws missing_key for the first absent key; a swept key counts as present.
    void require(const std::vector<std::string>& keys) const;
    void require_sweep(const std::vector<std::string>& allowed_axes) const;

    // Numeric keys with more than one value, excluding the sweep axis.
    std::vector<std::string> series_keys() const;
    // Cartesian product over series keys, with defaults filled in.
    std::vector<Point> series_points() const;

    Tolerance tolerance() const;
    McConfig mc_config(const Point& pt) const;

private:
    std::map<std::string, std::vector<double>> numbers_;
    std::map<std::string, std::string> texts_;
    std::map<std::string, std::string> sources_;
    std::optional<SweepSpec> sweep_;
};

bool is_known_key(const std::string& key);
std::vector<std::string> known_keys();

// Resolution of a point into model types; cross-key problems raise out_of_domain.
SystemParams system_params_at(const Point& pt);
double rho_at(const Point& pt);
// Sweep values rounded and checked like a value of the axis key.
std::vector<double> sweep_values(const SweepSpec& s);

std::string format_number(double v);
std::string describe_linear(const SystemParams& p);

}  // namespace risnet
