#pragma once

// Machine-readable run reports. Every check carries the claim it verifies,
// its measured value and the tolerance it was judged against. Only the
// "timings" object varies between runs with identical inputs.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace jhkit::report {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

enum class Comparison { AtMost, AtLeast, AbsWithin, InsideOpen, Flag };

inline const char* to_string(Comparison c) {
    switch (c) {
        case Comparison::AtMost:
            return "<=";
        case Comparison::AtLeast:
            return ">=";
        case Comparison::AbsWithin:
            return "abs_within";
        case Comparison::InsideOpen:
            return "inside_open";
        case Comparison::Flag:
            return "flag";
    }
    return "?";
}

struct Check {
    std::string name;
    std::string anchor;
    Comparison comparison = Comparison::AtMost;
    double measured = 0.0;
    /// Threshold for AtMost / AtLeast, allowed |measured - target| for AbsWithin.
    double tolerance = 0.0;
    double target = 0.0;
    /// Open interval for InsideOpen.
    double lower = 0.0;
    double upper = 0.0;
    bool pass = false;
    /// Informational checks are reported but do not change the exit code.
    bool gating = true;
};

inline Check at_most(std::string name, std::string anchor, double measured, double limit) {
    Check c{std::move(name), std::move(anchor), Comparison::AtMost, measured, limit};
    c.pass = measured <= limit;
    return c;
}

inline Check at_least(std::string name, std::string anchor, double measured, double limit) {
    Check c{std::move(name), std::move(anchor), Comparison::AtLeast, measured, limit};
    c.pass = measured >= limit;
    return c;
}

inline Check abs_within(std::string name, std::string anchor, double measured, double target, double tol) {
    Check c{std::move(name), std::move(anchor), Comparison::AbsWithin, measured, tol, target};
    c.pass = std::abs(measured - target) <= tol;
    return c;
}

inline Check inside_open(std::string name, std::string anchor, double measured, double lo, double hi) {
    Check c{std::move(name), std::move(anchor), Comparison::InsideOpen, measured};
    c.lower = lo;
    c.upper = hi;
    c.pass = lo < measured && measured < hi;
    return c;
}

/// Boolean property; measured is 1 or 0.
inline Check flag(std::string name, std::string anchor, bool holds) {
    Check c{std::move(name), std::move(anchor), Comparison::Flag, holds ? 1.0 : 0.0, 1.0};
    c.pass = holds;
    return c;
}

inline Check informational(Check c) {
    c.gating = false;
    return c;
}

/// JSON cannot hold inf / NaN; they are written as strings.
inline json number(double x) {
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    return x;
}

inline json to_json(const Check& c) {
    json j{{"name", c.name},
           {"anchor", c.anchor},
           {"comparison", to_string(c.comparison)},
           {"measured", number(c.measured)},
           {"pass", c.pass},
           {"gating", c.gating}};
    switch (c.comparison) {
        case Comparison::AbsWithin:
            j["target"] = number(c.target);
            j["tolerance"] = number(c.tolerance);
            j["slack"] = number(c.tolerance - std::abs(c.measured - c.target));
            break;
        case Comparison::InsideOpen:
            j["tolerance"] = json::array({number(c.lower), number(c.upper)});
            j["slack"] = number(std::min(c.measured - c.lower, c.upper - c.measured));
            break;
        case Comparison::AtMost:
            j["tolerance"] = number(c.tolerance);
            j["slack"] = number(c.tolerance - c.measured);
            break;
        case Comparison::AtLeast:
            j["tolerance"] = number(c.tolerance);
            j["slack"] = number(c.measured - c.tolerance);
            break;
        case Comparison::Flag:
            j["tolerance"] = number(c.tolerance);
            break;
    }
    return j;
}

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct Report {
    std::string command;
    json inputs = json::object();
    json results = json::object();
    std::vector<Check> checks;
    std::map<std::string, double> timings;

    bool passed() const {
        for (const auto& c : checks) {
            if (c.gating && !c.pass) {
                return false;
            }
        }
        return true;
    }

    std::string config_hash() const { return fnv1a_hex(command + "\n" + inputs.dump()); }

    /// Folds another report in under `prefix`: results nest, check names and
    /// timings are prefixed.
    void absorb(const std::string& prefix, const Report& other) {
        results[prefix] = other.results;
        for (auto c : other.checks) {
            c.name = prefix + "." + c.name;
            checks.push_back(std::move(c));
        }
        for (const auto& [k, v] : other.timings) {
            timings[prefix + "." + k] = v;
        }
    }
};

inline json to_json(const Report& r) {
    json checks = json::array();
    std::size_t failed = 0;
    for (const auto& c : r.checks) {
        checks.push_back(to_json(c));
        failed += (c.gating && !c.pass) ? 1 : 0;
    }
    json timings = json::object();
    for (const auto& [k, v] : r.timings) {
        timings[k] = v;
    }
    return json{{"schema_version", kSchemaVersion},
                {"tool_version", kToolVersion},
                {"command", r.command},
                {"config_hash", r.config_hash()},
                {"inputs", r.inputs},
                {"results", r.results},
                {"checks", checks},
                {"summary", {{"checks", r.checks.size()}, {"failed", failed}, {"pass", r.passed()}}},
                {"timings", timings}};
}

/// Checks as CSV: name,anchor,comparison,measured,tolerance,pass,gating.
inline std::string checks_csv(const Report& r) {
    auto quote = [](const std::string& s) {
        std::string out = "\"";
        for (char ch : s) {
            out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        }
        return out + "\"";
    };
    auto num = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    std::string out = "name,anchor,comparison,measured,tolerance,pass,gating\n";
    for (const auto& c : r.checks) {
        const std::string tol = c.comparison == Comparison::InsideOpen ? "(" + num(c.lower) + " " + num(c.upper) + ")"
                                : c.comparison == Comparison::AbsWithin ? num(c.target) + "+-" + num(c.tolerance)
                                                                        : num(c.tolerance);
        out += quote(c.name) + "," + quote(c.anchor) + "," + to_string(c.comparison) + "," + num(c.measured) + "," +
               quote(tol) + "," + (c.pass ? "true" : "false") + "," + (c.gating ? "true" : "false") + "\n";
    }
    return out;
}

}  // namespace jhkit::report
