#pragma once

// Flat key=value configuration. Every accepted key has a default; files and
// command-line overrides may only set known keys. Problems are collected and
// reported together by check().

#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace symmkit::app {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::vector<std::string>& problems)
        : std::runtime_error(join(problems)), problems_(problems) {}
    [[nodiscard]] const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& p) {
        std::string s;
        for (const auto& x : p) s += (s.empty() ? "" : "\n") + x;
        return s;
    }
    std::vector<std::string> problems_;
};

using Defaults = std::vector<std::pair<std::string, std::string>>;

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

class Params {
public:
    Params(std::string context, const Defaults& defaults) : context_(std::move(context)) {
        for (const auto& [k, v] : defaults) values_[k] = v;
    }

    /// key=value lines; '#' starts a comment.
    void load(std::istream& in, const std::string& name) {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                problems_.push_back(name + ":" + std::to_string(lineno) + ": expected key=value");
                continue;
            }
            set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), name + ":" + std::to_string(lineno));
        }
    }

    void set(const std::string& key, const std::string& value, const std::string& origin) {
        if (!values_.count(key)) {
            problems_.push_back(origin + ": unknown key '" + key + "' for " + context_);
            return;
        }
        values_[key] = value;
    }

    [[nodiscard]] bool known(const std::string& key) const { return values_.count(key) > 0; }
    [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

    std::string text(const std::string& key) const { return values_.at(key); }

    std::string choice(const std::string& key, const std::vector<std::string>& allowed) {
        const auto v = text(key);
        for (const auto& a : allowed)
            if (a == v) return v;
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : "|") + a;
        problems_.push_back(key + ": '" + v + "' is not one of " + list);
        return allowed.front();
    }

    double real(const std::string& key, double lo = -INFINITY, double hi = INFINITY) {
        const auto v = text(key);
        double x = 0;
        if (!parse_real(v, x)) {
            problems_.push_back(key + ": '" + v + "' is not a number");
            return lo > -INFINITY ? lo : 0.0;
        }
        if (!(x >= lo && x <= hi)) problems_.push_back(key + ": " + v + " outside [" + num(lo) + ", " + num(hi) + "]");
        return x;
    }

    int integer(const std::string& key, long long lo, long long hi) {
        const auto v = text(key);
        long long x = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size()) {
            problems_.push_back(key + ": '" + v + "' is not an integer");
            return static_cast<int>(lo);
        }
        if (x < lo || x > hi) {
            problems_.push_back(key + ": " + v + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            return static_cast<int>(lo);
        }
        return static_cast<int>(x);
    }

    std::uint64_t seed(const std::string& key) {
        const auto v = text(key);
        std::uint64_t x = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size()) problems_.push_back(key + ": '" + v + "' is not an unsigned integer");
        return x;
    }

    bool flag(const std::string& key) {
        const auto v = text(key);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        problems_.push_back(key + ": '" + v + "' is not true/false");
        return false;
    }

    /// Comma-separated reals; empty text gives an empty list.
    std::vector<double> reals(const std::string& key) {
        std::vector<double> out;
        std::istringstream in(text(key));
        std::string cell;
        while (std::getline(in, cell, ',')) {
            cell = trim(cell);
            if (cell.empty()) continue;
            double x = 0;
            if (!parse_real(cell, x)) {
                problems_.push_back(key + ": '" + cell + "' is not a number");
                continue;
            }
            out.push_back(x);
        }
        return out;
    }

    void problem(const std::string& p) { problems_.push_back(p); }

    void check() const {
        if (!problems_.empty()) throw ConfigError(problems_);
    }

private:
    static bool parse_real(const std::string& s, double& x) {
        if (s.empty()) return false;
        char* end = nullptr;
        x = std::strtod(s.c_str(), &end);
        return end == s.c_str() + s.size() && std::isfinite(x);
    }
    static std::string num(double x) {
        std::ostringstream o;
        o << x;
        return o.str();
    }

    std::string context_;
    std::map<std::string, std::string> values_;
    std::vector<std::string> problems_;
};

}  // namespace symmkit::app
