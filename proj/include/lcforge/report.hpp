#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lcforge {

using Json = nlohmann::ordered_json;

/// Which deterministic rule produced a check.
enum class Rule {
    Presence,
    Type,
    WordCount,
    Language,
    ListItem,
    Length,
    Structure,
    Format,
    Policy,
    Grounding,
    Parse,
    Content,
};

inline constexpr std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::Presence: return "presence";
        case Rule::Type: return "type";
        case Rule::WordCount: return "word_count";
        case Rule::Language: return "language";
        case Rule::ListItem: return "list_item";
        case Rule::Length: return "length";
        case Rule::Structure: return "structure";
        case Rule::Format: return "format";
        case Rule::Policy: return "policy";
        case Rule::Grounding: return "grounding";
        case Rule::Parse: return "parse";
        case Rule::Content: return "content";
    }
    return "unknown";
}

inline Rule rule_from_name(std::string_view name) {
    for (Rule r : {Rule::Presence, Rule::Type, Rule::WordCount, Rule::Language, Rule::ListItem,
                   Rule::Length, Rule::Structure, Rule::Format, Rule::Policy, Rule::Grounding,
                   Rule::Parse, Rule::Content}) {
        if (rule_name(r) == name) return r;
    }
    return Rule::Content;
}

struct Check {
    std::string path;
    Rule rule = Rule::Content;
    bool pass = true;
    std::string detail;

    friend bool operator==(const Check&, const Check&) = default;
};

/// Ordered list of check outcomes. Warnings are recorded but never affect pass().
struct ValidationReport {
    std::vector<Check> checks;
    std::vector<Check> warnings;

    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }

    bool empty() const { return checks.empty(); }

    std::size_t passed() const {
        return static_cast<std::size_t>(
            std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }));
    }

    std::size_t failed() const { return checks.size() - passed(); }

    void add(std::string path, Rule rule, bool ok, std::string detail = {}) {
        checks.push_back(Check{std::move(path), rule, ok, std::move(detail)});
    }

    void warn(std::string path, Rule rule, std::string detail) {
        warnings.push_back(Check{std::move(path), rule, false, std::move(detail)});
    }

    void merge(const ValidationReport& other) {
        checks.insert(checks.end(), other.checks.begin(), other.checks.end());
        warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
    }

    bool has_rule(Rule r) const {
        return std::any_of(checks.begin(), checks.end(), [r](const Check& c) { return c.rule == r; });
    }

    bool has_failure(Rule r) const {
        return std::any_of(checks.begin(), checks.end(),
                           [r](const Check& c) { return c.rule == r && !c.pass; });
    }

    /// One line per failing check; used as regeneration feedback.
    std::string failure_summary() const {
        std::string out;
        for (const auto& c : checks) {
            if (c.pass) continue;
            if (!out.empty()) out += '\n';
            out += "- ";
            out += c.detail.empty() ? std::string(rule_name(c.rule)) + " check failed at " + c.path : c.detail;
        }
        return out;
    }

    friend bool operator==(const ValidationReport&, const ValidationReport&) = default;
};

inline Json check_to_json(const Check& c) {
    Json j = Json::object();
    j["path"] = c.path;
    j["rule"] = std::string(rule_name(c.rule));
    j["pass"] = c.pass;
    j["detail"] = c.detail;
    return j;
}

inline Json report_to_json(const ValidationReport& r) {
    Json j = Json::object();
    j["pass"] = r.pass();
    j["checks"] = Json::array();
    for (const auto& c : r.checks) j["checks"].push_back(check_to_json(c));
    j["warnings"] = Json::array();
    for (const auto& c : r.warnings) j["warnings"].push_back(check_to_json(c));
    return j;
}

inline ValidationReport report_from_json(const Json& j) {
    ValidationReport r;
    auto read = [](const Json& c) {
        return Check{c.value("path", std::string{}), rule_from_name(c.value("rule", std::string{})),
                     c.value("pass", false), c.value("detail", std::string{})};
    };
    if (j.contains("checks")) {
        for (const auto& c : j.at("checks")) r.checks.push_back(read(c));
    }
    if (j.contains("warnings")) {
        for (const auto& c : j.at("warnings")) r.warnings.push_back(read(c));
    }
    return r;
}

}  // namespace lcforge
