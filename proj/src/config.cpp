#include "risnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "risnet/errors.hpp"

namespace risnet {

namespace {

enum class ValueType { real, integer, text };

struct KeySpec {
    ValueType type;
    std::optional<double> default_value;
    std::function<bool(double)> in_domain;
    const char* domain_text;
};

bool any_finite(double v) { return std::isfinite(v); }
bool positive(double v) { return v > 0.0 && std::isfinite(v); }
bool at_least_one(double v) { return v >= 1.0 && std::isfinite(v); }
bool nonnegative(double v) { return v >= 0.0 && std::isfinite(v); }

const std::map<std::string, KeySpec>& key_table() {
    static const std::map<std::string, KeySpec> table{
        {"tx_power_dbm", {ValueType::real, std::nullopt, any_finite, "a finite dBm value"}},
        {"noise_dbm", {ValueType::real, -80.0, any_finite, "a finite dBm value"}},
        {"beta_db", {ValueType::real, -30.0, any_finite, "a finite dB value"}},
        {"alpha_direct", {ValueType::real, 3.0, [](double v) { return v >= 2.0 && v < 1e3; }, ">= 2"}},
        {"alpha_bs_ris", {ValueType::real, 2.0, [](double v) { return v >= 2.0 && v < 1e3; }, ">= 2"}},
        {"alpha_ris_ue", {ValueType::real, 2.5, [](double v) { return v >= 2.0 && v <= 4.0; }, "in [2, 4]"}},
        {"d_min", {ValueType::real, 180.0, positive, "> 0"}},
        {"d_max", {ValueType::real, 220.0, positive, "> 0"}},
        {"serve_radius", {ValueType::real, std::nullopt, positive, "> 0"}},
        {"density", {ValueType::real, std::nullopt, positive, "> 0"}},
        {"elements", {ValueType::integer, std::nullopt, at_least_one, ">= 1"}},
        {"element_budget", {ValueType::real, std::nullopt, positive, "> 0"}},
        {"rho", {ValueType::real, std::nullopt, [](double v) { return v >= 0.0 && v <= 1.0; }, "in [0, 1]"}},
        {"quant_bits", {ValueType::integer, std::nullopt, [](double v) { return v >= 1.0 && v <= 60.0; }, "in 1..60"}},
        {"distance_d", {ValueType::real, std::nullopt, positive, "> 0"}},
        {"distance_l", {ValueType::real, std::nullopt, positive, "> 0"}},
        {"distance_r", {ValueType::real, std::nullopt, positive, "> 0"}},
        {"trials", {ValueType::integer, 100000.0, at_least_one, ">= 1"}},
        {"seed", {ValueType::integer, 1.0, [](double v) { return v >= 0.0 && v < 0x1p63; }, "a nonnegative integer"}},
        {"workers", {ValueType::integer, 0.0, [](double v) { return v >= 0.0 && v <= 1024.0; }, "in 0..1024"}},
        {"n_max", {ValueType::integer, std::nullopt, at_least_one, ">= 1"}},
        {"abs_tol", {ValueType::real, 1e-12, positive, "> 0"}},
        {"rel_tol", {ValueType::real, 1e-10, positive, "> 0"}},
        {"max_iterations", {ValueType::integer, 10000.0, at_least_one, ">= 1"}},
        {"seeds", {ValueType::integer, 1.0, [](double v) { return v >= 1.0 && v <= 1000.0; }, "in 1..1000"}},
        {"disk_radius", {ValueType::real, 0.0, nonnegative, ">= 0 (0 = automatic)"}},
        {"regime", {ValueType::text, std::nullopt, nullptr, "high, low, auto or integral"}},
        {"window", {ValueType::text, std::nullopt, nullptr, "direct_nearest or full_hppp"}},
        {"sweep", {ValueType::text, std::nullopt, nullptr, "AXIS:MIN:MAX:POINTS[:log]"}},
        {"out", {ValueType::text, std::nullopt, nullptr, "a path"}},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::optional<double> parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

void check_value(const std::string& key, const KeySpec& spec, double v, const std::string& source) {
    if (spec.type == ValueType::integer && v != std::floor(v))
        throw ConfigError(ConfigErrorKind::bad_value, key, source, "expected an integer");
    if (!spec.in_domain(v))
        throw ConfigError(ConfigErrorKind::out_of_domain, key, source,
                          "value " + format_number(v) + " out of domain: must be " + spec.domain_text);
}

double get(const Point& pt, const std::string& key) {
    auto it = pt.find(key);
    if (it == pt.end()) throw ConfigError(ConfigErrorKind::missing_key, key, "", "required key is not set");
    return it->second;
}

}  // namespace

const char* to_string(ConfigErrorKind k) {
    switch (k) {
        case ConfigErrorKind::syntax: return "syntax";
        case ConfigErrorKind::unknown_key: return "unknown_key";
        case ConfigErrorKind::missing_key: return "missing_key";
        case ConfigErrorKind::bad_value: return "bad_value";
        case ConfigErrorKind::out_of_domain: return "out_of_domain";
        case ConfigErrorKind::conflict: return "conflict";
    }
    return "?";
}

ConfigError::ConfigError(ConfigErrorKind kind, std::string key, std::string source, const std::string& msg)
    : std::runtime_error(std::string(to_string(kind)) + ": " + (source.empty() ? "" : source + ": ") +
                         (key.empty() ? "" : "'" + key + "': ") + msg),
      kind_(kind),
      key_(std::move(key)),
      source_(std::move(source)) {}

SweepSpec SweepSpec::parse(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(trim(part));
    if (parts.size() != 4 && parts.size() != 5)
        throw ConfigError(ConfigErrorKind::syntax, "sweep", "", "expected AXIS:MIN:MAX:POINTS[:log]");
    SweepSpec s;
    s.axis = parts[0];
    auto lo = parse_double(parts[1]);
    auto hi = parse_double(parts[2]);
    auto pts = parse_double(parts[3]);
    if (!lo || !hi || !pts || *pts != std::floor(*pts) || *pts < 1.0)
        throw ConfigError(ConfigErrorKind::bad_value, "sweep", "", "bad MIN, MAX or POINTS in '" + text + "'");
    s.min = *lo;
    s.max = *hi;
    s.points = static_cast<int>(*pts);
    if (parts.size() == 5) {
        if (parts[4] == "log")
            s.log_scale = true;
        else if (parts[4] != "linear")
            throw ConfigError(ConfigErrorKind::bad_value, "sweep", "", "scale must be log or linear");
    }
    if (s.log_scale && !(s.min > 0.0 && s.max > 0.0))
        throw ConfigError(ConfigErrorKind::out_of_domain, "sweep", "", "log sweep needs positive bounds");
    if (!is_known_key(s.axis) || key_table().at(s.axis).type == ValueType::text)
        throw ConfigError(ConfigErrorKind::unknown_key, s.axis, "sweep", "not a numeric configuration key");
    return s;
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        v[i] = log_scale ? min * std::pow(max / min, t) : min + t * (max - min);
    }
    if (points > 1) v.back() = max;
    return v;
}

std::vector<double> sweep_values(const SweepSpec& s) {
    const KeySpec& spec = key_table().at(s.axis);
    std::vector<double> out = s.values();
    for (double& v : out) {
        if (spec.type == ValueType::integer) v = std::round(v);
        check_value(s.axis, spec, v, "sweep");
    }
    return out;
}

bool is_known_key(const std::string& key) { return key_table().count(key) > 0; }

std::vector<std::string> known_keys() {
    std::vector<std::string> out;
    for (const auto& [k, _] : key_table()) out.push_back(k);
    return out;
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& source) {
    auto it = key_table().find(key);
    if (it == key_table().end())
        throw ConfigError(ConfigErrorKind::unknown_key, key, source, "unknown key");
    const KeySpec& spec = it->second;
    sources_[key] = source;
    if (spec.type == ValueType::text) {
        if (key == "sweep") {
            try {
                sweep_ = SweepSpec::parse(value);
            } catch (const ConfigError& e) {
                throw ConfigError(e.kind(), e.key(), source, e.what());
            }
        } else if (key == "regime") {
            try {
                parse_spatial_method(value);
            } catch (const DomainError& e) {
                throw ConfigError(ConfigErrorKind::bad_value, key, source, e.what());
            }
        } else if (key == "window" && value != "direct_nearest" && value != "full_hppp") {
            throw ConfigError(ConfigErrorKind::bad_value, key, source, "expected direct_nearest or full_hppp");
        }
        texts_[key] = value;
        return;
    }
    std::vector<double> values;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');) {
        auto v = parse_double(trim(item));
        if (!v) throw ConfigError(ConfigErrorKind::bad_value, key, source, "not a number: '" + trim(item) + "'");
        check_value(key, spec, *v, source);
        values.push_back(*v);
    }
    if (values.empty()) throw ConfigError(ConfigErrorKind::bad_value, key, source, "empty value");
    numbers_[key] = values;
}

RunConfig RunConfig::parse_text(const std::string& text, const std::string& source) {
    RunConfig cfg;
    std::stringstream ss(text);
    int line_no = 0;
    for (std::string line; std::getline(ss, line);) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(ConfigErrorKind::syntax, "", where, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(ConfigErrorKind::syntax, "", where, "empty key");
        cfg.set(key, value, where);
    }
    return cfg;
}

RunConfig RunConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigErrorKind::syntax, "", path, "cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

bool RunConfig::has(const std::string& key) const {
    return numbers_.count(key) > 0 || texts_.count(key) > 0;
}

const std::vector<double>& RunConfig::list(const std::string& key) const {
    auto it = numbers_.find(key);
    if (it == numbers_.end()) throw ConfigError(ConfigErrorKind::missing_key, key, "", "required key is not set");
    return it->second;
}

double RunConfig::scalar(const std::string& key) const {
    auto it = numbers_.find(key);
    if (it != numbers_.end()) {
        if (it->second.size() != 1)
            throw ConfigError(ConfigErrorKind::bad_value, key, sources_.at(key), "expected a single value");
        return it->second.front();
    }
    const auto& spec = key_table().at(key);
    if (spec.default_value) return *spec.default_value;
    throw ConfigError(ConfigErrorKind::missing_key, key, "", "required key is not set");
}

std::string RunConfig::text(const std::string& key, const std::string& fallback) const {
    auto it = texts_.find(key);
    return it == texts_.end() ? fallback : it->second;
}

void RunConfig::require(const std::vector<std::string>& keys) const {
    for (const auto& k : keys) {
        if (has(k) || (sweep_ && sweep_->axis == k)) continue;
        if (k == "rho" && has("quant_bits")) continue;
        throw ConfigError(ConfigErrorKind::missing_key, k, "", "required key is not set");
    }
}

void RunConfig::require_sweep(const std::vector<std::string>& allowed_axes) const {
    if (!sweep_) throw ConfigError(ConfigErrorKind::missing_key, "sweep", "", "this command needs a sweep axis");
    if (std::find(allowed_axes.begin(), allowed_axes.end(), sweep_->axis) == allowed_axes.end()) {
        std::string allowed;
        for (const auto& a : allowed_axes) allowed += (allowed.empty() ? "" : ", ") + a;
        throw ConfigError(ConfigErrorKind::bad_value, "sweep", sources_.count("sweep") ? sources_.at("sweep") : "",
                          "axis '" + sweep_->axis + "' not supported here (allowed: " + allowed + ")");
    }
}

std::vector<std::string> RunConfig::series_keys() const {
    std::vector<std::string> keys;
    for (const auto& [k, v] : numbers_)
        if (v.size() > 1 && !(sweep_ && sweep_->axis == k)) keys.push_back(k);
    return keys;
}

std::vector<Point> RunConfig::series_points() const {
    if (has("rho") && has("quant_bits"))
        throw ConfigError(ConfigErrorKind::conflict, "quant_bits", sources_.at("quant_bits"),
                          "set either rho or quant_bits, not both");
    Point base;
    for (const auto& [k, spec] : key_table()) {
        if (spec.type == ValueType::text) continue;
        auto it = numbers_.find(k);
        if (it != numbers_.end())
            base[k] = it->second.front();
        else if (spec.default_value)
            base[k] = *spec.default_value;
    }
    std::vector<Point> points{base};
    for (const auto& k : series_keys()) {
        std::vector<Point> next;
        for (const auto& p : points)
            for (double v : numbers_.at(k)) {
                Point q = p;
                q[k] = v;
                next.push_back(q);
            }
        points = std::move(next);
    }
    return points;
}

Tolerance RunConfig::tolerance() const {
    return {scalar("abs_tol"), scalar("rel_tol"), static_cast<int>(scalar("max_iterations"))};
}

McConfig RunConfig::mc_config(const Point& pt) const {
    McConfig mc;
    mc.trials = static_cast<std::int64_t>(get(pt, "trials"));
    mc.master_seed = static_cast<std::uint64_t>(get(pt, "seed"));
    mc.workers = static_cast<int>(get(pt, "workers"));
    mc.window = text("window", "direct_nearest") == "full_hppp" ? WindowPolicy::full_hppp
                                                                : WindowPolicy::direct_nearest;
    mc.disk_radius = get(pt, "disk_radius");
    return mc;
}

SystemParams system_params_at(const Point& pt) {
    auto opt = [&](const char* k, double fallback) {
        auto it = pt.find(k);
        return it == pt.end() ? fallback : it->second;
    };
    SystemParams p{dbm_to_watts(get(pt, "tx_power_dbm")),
                   dbm_to_watts(get(pt, "noise_dbm")),
                   db_to_linear(get(pt, "beta_db")),
                   get(pt, "alpha_direct"),
                   get(pt, "alpha_bs_ris"),
                   get(pt, "alpha_ris_ue"),
                   get(pt, "d_min"),
                   get(pt, "d_max"),
                   opt("serve_radius", 1.0)};
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(ConfigErrorKind::out_of_domain, "", "", e.what());
    }
    return p;
}

double rho_at(const Point& pt) {
    auto b = pt.find("quant_bits");
    if (b != pt.end()) return std::ldexp(1.0, -static_cast<int>(b->second));
    auto r = pt.find("rho");
    return r == pt.end() ? 0.0 : r->second;
}

std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string describe_linear(const SystemParams& p) {
    std::ostringstream os;
    os << "tx_power_w=" << format_number(p.tx_power) << " noise_w=" << format_number(p.noise_power)
       << " beta=" << format_number(p.beta_ref) << " alpha=(" << format_number(p.alpha_direct) << ","
       << format_number(p.alpha_bs_ris) << "," << format_number(p.alpha_ris_ue) << ") D=("
       << format_number(p.d_min) << "," << format_number(p.d_max) << ") C="
       << format_number(p.serve_radius);
    return os.str();
}

}  // namespace risnet
