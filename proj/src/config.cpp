#include "biphoton/config.hpp"

#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

#include "biphoton/error.hpp"

namespace biphoton {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

struct Suffix {
    const char* name;
    double scale;
};

constexpr Suffix kTimeSuffixes[] = {{"fs", 1e-15}, {"ps", 1e-12}, {"ns", 1e-9}, {"s", 1.0}};
constexpr Suffix kLengthSuffixes[] = {{"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3},
                                      {"cm", 1e-2}, {"m", 1.0}};

}  // namespace

double parse_quantity(std::string_view text, Dimension dim) {
    auto s = trim(text);
    if (s.empty()) throw ValidationError("empty quantity");
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc())
        throw ValidationError("cannot parse number in '" + std::string(s) + "'");
    auto unit = trim(std::string_view(ptr, s.data() + s.size() - ptr));
    if (!std::isfinite(value)) throw ValidationError("non-finite quantity '" + std::string(s) + "'");
    if (unit.empty()) return value;
    if (dim == Dimension::Time) {
        for (const auto& sfx : kTimeSuffixes)
            if (unit == sfx.name) return value * sfx.scale;
    } else if (dim == Dimension::Length) {
        for (const auto& sfx : kLengthSuffixes)
            if (unit == sfx.name) return value * sfx.scale;
    }
    throw ValidationError("unknown unit '" + std::string(unit) + "' in '" + std::string(s) + "'");
}

PhysicalConfig parse_config(std::string_view text) {
    PhysicalConfig cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        auto val = line.substr(eq + 1);
        try {
            if (key == "A")
                cfg.A = parse_quantity(val, Dimension::Dimensionless);
            else if (key == "B")
                cfg.B = parse_quantity(val, Dimension::Dimensionless);
            else if (key == "L")
                cfg.L = parse_quantity(val, Dimension::Length);
            else if (key == "lambda0")
                cfg.lambda0 = parse_quantity(val, Dimension::Length);
            else if (key == "tau")
                cfg.tau = parse_quantity(val, Dimension::Time);
            else
                throw ValidationError("unknown key '" + std::string(key) + "'");
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

PhysicalConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const PhysicalConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "A = %.17g\nB = %.17g\nL = %.17g m\nlambda0 = %.17g m\ntau = %.17g s\n",
                  cfg.A, cfg.B, cfg.L, cfg.lambda0, cfg.tau);
    return buf;
}

}  // namespace biphoton
