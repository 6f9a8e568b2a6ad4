#pragma once

#include <cstdio>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lcforge/core.hpp"
#include "lcforge/report.hpp"
#include "lcforge/templating.hpp"
#include "lcforge/text.hpp"

namespace lcforge {

struct PiiPattern {
    std::string name;
    std::string pattern;
    std::regex compiled;

    PiiPattern(std::string n, std::string p)
        : name(std::move(n)), pattern(std::move(p)), compiled(pattern, std::regex::ECMAScript | std::regex::icase) {}
};

inline std::vector<PiiPattern> default_pii_patterns() {
    return {
        PiiPattern("email", R"([A-Za-z0-9._%+-]+@[A-Za-z0-9-]+(\.[A-Za-z0-9-]+)*\.[A-Za-z]{2,})"),
        PiiPattern("url", R"((https?://|www\.)[^\s"'<>]+)"),
    };
}

/// Content policy applied to every generated text.
struct PolicyConfig {
    std::vector<std::string> banned_substrings{"Austin", "Texas", "Denver"};
    std::set<Script> forbid_scripts{Script::Han, Script::Hiragana, Script::Katakana, Script::Hangul};
    std::vector<PiiPattern> pii_patterns = default_pii_patterns();
    std::vector<std::string> toxicity_words;  // hook; empty by default
    std::size_t max_total_tokens = 1'000'000;
    std::optional<std::size_t> per_turn_max;

    static PolicyConfig from_json(const Json& j) {
        PolicyConfig p;
        if (j.contains("banned_substrings")) {
            p.banned_substrings = j["banned_substrings"].get<std::vector<std::string>>();
        }
        if (j.contains("forbid_scripts")) {
            p.forbid_scripts.clear();
            for (const auto& s : j["forbid_scripts"]) {
                auto script = script_from_name(s.get<std::string>());
                if (!script) throw ConfigError("unknown script name: " + s.get<std::string>());
                p.forbid_scripts.insert(*script);
            }
        }
        if (j.contains("pii_patterns")) {
            p.pii_patterns.clear();
            std::size_t i = 0;
            for (const auto& s : j["pii_patterns"]) {
                try {
                    if (s.is_object()) {
                        p.pii_patterns.emplace_back(s.value("name", "pattern" + std::to_string(i)),
                                                    s.at("pattern").get<std::string>());
                    } else {
                        p.pii_patterns.emplace_back("pattern" + std::to_string(i), s.get<std::string>());
                    }
                } catch (const std::regex_error& e) {
                    throw ConfigError(std::string("invalid PII pattern: ") + e.what());
                }
                ++i;
            }
        }
        if (j.contains("toxicity_words")) p.toxicity_words = j["toxicity_words"].get<std::vector<std::string>>();
        p.max_total_tokens = j.value("max_total_tokens", p.max_total_tokens);
        if (p.max_total_tokens == 0) throw ConfigError("max_total_tokens must be positive");
        if (j.contains("per_turn_max") && !j["per_turn_max"].is_null()) {
            p.per_turn_max = j["per_turn_max"].get<std::size_t>();
        }
        return p;
    }

    Json to_json() const {
        Json j = Json::object();
        j["banned_substrings"] = banned_substrings;
        j["forbid_scripts"] = Json::array();
        for (auto s : forbid_scripts) j["forbid_scripts"].push_back(std::string(script_name(s)));
        j["pii_patterns"] = Json::array();
        for (const auto& p : pii_patterns) j["pii_patterns"].push_back({{"name", p.name}, {"pattern", p.pattern}});
        j["toxicity_words"] = toxicity_words;
        j["max_total_tokens"] = max_total_tokens;
        if (per_turn_max) j["per_turn_max"] = *per_turn_max;
        return j;
    }
};

struct PolicyContext {
    std::string path = "text";
    // Noisy user turns may legitimately carry emails and URLs.
    bool pii_as_warning = false;
};

inline std::string codepoint_label(char32_t cp) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
    return buf;
}

inline ValidationReport check_policy(std::string_view text, const PolicyConfig& policy, const PolicyContext& ctx = {}) {
    ValidationReport r;
    const std::string& p = ctx.path;

    bool banned_found = false;
    for (const auto& s : policy.banned_substrings) {
        if (!s.empty() && text.find(s) != std::string_view::npos) {
            banned_found = true;
            r.add(p + ":banned:" + s, Rule::Policy, false, p + " contains banned location \"" + s + "\"");
        }
    }
    if (!banned_found) r.add(p + ":banned", Rule::Policy, true);

    std::map<Script, char32_t> found;
    for (char32_t cp : decode_utf8(text)) {
        if (auto s = classify_script(cp); s && policy.forbid_scripts.count(*s) && !found.count(*s)) found[*s] = cp;
    }
    for (const auto& [script, cp] : found) {
        r.add(p + ":script:" + std::string(script_name(script)), Rule::Policy, false,
              p + " contains non-English " + std::string(script_name(script)) + " characters (" +
                  codepoint_label(cp) + "); output must be in English only");
    }
    if (found.empty()) r.add(p + ":scripts", Rule::Policy, true);

    bool pii_failed = false;
    const std::string owned(text);
    for (const auto& pat : policy.pii_patterns) {
        std::smatch m;
        if (std::regex_search(owned, m, pat.compiled)) {
            std::string detail = p + " contains " + pat.name + "-like content \"" + m.str() + "\"";
            if (ctx.pii_as_warning) {
                r.warn(p + ":pii:" + pat.name, Rule::Policy, detail);
            } else {
                pii_failed = true;
                r.add(p + ":pii:" + pat.name, Rule::Policy, false, detail);
            }
        }
    }
    if (!pii_failed) r.add(p + ":pii", Rule::Policy, true);

    bool toxic = false;
    for (const auto& w : policy.toxicity_words) {
        if (contains_word_ci(text, w)) {
            toxic = true;
            r.add(p + ":toxicity:" + w, Rule::Policy, false, p + " contains blocked word \"" + w + "\"");
        }
    }
    if (!toxic) r.add(p + ":toxicity", Rule::Policy, true);
    return r;
}

inline ValidationReport check_length(const Conversation& conv, const TokenBudget& budget, const TokenCounter& counter = {}) {
    ValidationReport r;
    std::size_t total = 0;
    std::vector<std::size_t> sizes;
    for (const auto& m : conv.messages) {
        sizes.push_back(counter(m.content));
        total += sizes.back();
    }
    const bool in_window = total >= budget.min && total <= budget.max;
    r.add("total_tokens", Rule::Length, in_window,
          in_window ? std::string{}
                    : "conversation has " + std::to_string(total) + " tokens; required range is [" +
                          std::to_string(budget.min) + ", " + std::to_string(budget.max) + "]");
    if (budget.per_turn_max) {
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const bool ok = sizes[i] <= *budget.per_turn_max;
            r.add("messages[" + std::to_string(i) + "]", Rule::Length, ok,
                  ok ? std::string{}
                     : "message " + std::to_string(i) + " has " + std::to_string(sizes[i]) +
                           " tokens; per-turn maximum is " + std::to_string(*budget.per_turn_max));
        }
    }
    return r;
}

inline ValidationReport check_structure(const Conversation& conv) {
    ValidationReport r;
    const std::size_t expected = conv.expected_messages();
    const bool count_ok = conv.messages.size() == expected;
    r.add("message_count", Rule::Structure, count_ok,
          count_ok ? std::string{}
                   : "expected exactly " + std::to_string(expected) + " messages (N=" + std::to_string(conv.segments) +
                         " x K=" + std::to_string(conv.turns_per_segment) + "), found " +
                         std::to_string(conv.messages.size()));

    bool alternation_ok = true;
    bool content_ok = true;
    bool index_ok = true;
    for (std::size_t i = 0; i < conv.messages.size(); ++i) {
        const auto& m = conv.messages[i];
        const std::string path = "messages[" + std::to_string(i) + "]";
        const Role want = i % 2 == 0 ? Role::User : Role::Assistant;
        if (m.role != want) {
            alternation_ok = false;
            r.add(path, Rule::Structure, false,
                  "role alternation broken at message " + std::to_string(i) + ": expected " +
                      std::string(role_name(want)) + ", found " + std::string(role_name(m.role)));
        }
        if (trim(m.content).empty()) {
            content_ok = false;
            r.add(path, Rule::Structure, false, "message " + std::to_string(i) + " is empty");
        }
        const bool idx_valid = m.role == Role::Assistant
                                   ? (m.assistant_index && *m.assistant_index >= 1 && *m.assistant_index <= conv.n_assistants)
                                   : !m.assistant_index.has_value();
        if (!idx_valid) {
            index_ok = false;
            r.add(path, Rule::Structure, false,
                  "message " + std::to_string(i) + " has an invalid assistant index for n=" + std::to_string(conv.n_assistants));
        }
    }
    if (alternation_ok) r.add("alternation", Rule::Structure, true);
    if (content_ok) r.add("non_empty", Rule::Structure, true);
    if (index_ok) r.add("assistant_index", Rule::Structure, true);
    return r;
}

struct FormatRules {
    std::vector<std::string> required_prefixes;
    std::vector<std::string> required_suffixes;
    std::vector<std::string> forbidden_markers{"[truncated"};

    static FormatRules from_json(const Json& j) {
        FormatRules f;
        if (j.contains("required_prefixes")) f.required_prefixes = j["required_prefixes"].get<std::vector<std::string>>();
        if (j.contains("required_suffixes")) f.required_suffixes = j["required_suffixes"].get<std::vector<std::string>>();
        if (j.contains("forbidden_markers")) f.forbidden_markers = j["forbidden_markers"].get<std::vector<std::string>>();
        return f;
    }
};

namespace detail {

inline void format_residue(ValidationReport& r, std::string_view text, const std::string& path, const FormatRules& rules) {
    const bool residue = text.find("{{") != std::string_view::npos || text.find("}}") != std::string_view::npos;
    r.add(path + ":placeholders", Rule::Format, !residue,
          residue ? path + " contains an unresolved placeholder (\"{{\" or \"}}\")" : std::string{});
    for (const auto& marker : rules.forbidden_markers) {
        const bool hit = text.find(marker) != std::string_view::npos;
        r.add(path + ":marker", Rule::Format, !hit, hit ? path + " contains marker \"" + marker + "\"" : std::string{});
    }
}

inline void format_affixes(ValidationReport& r, std::string_view text, const std::string& path, const FormatRules& rules) {
    const std::string_view t = trim(text);
    for (const auto& pre : rules.required_prefixes) {
        const bool ok = t.substr(0, pre.size()) == pre;
        r.add(path + ":prefix", Rule::Format, ok, ok ? std::string{} : path + " is missing required prefix \"" + pre + "\"");
    }
    for (const auto& suf : rules.required_suffixes) {
        const bool ok = t.size() >= suf.size() && t.substr(t.size() - suf.size()) == suf;
        r.add(path + ":suffix", Rule::Format, ok, ok ? std::string{} : path + " is missing required suffix \"" + suf + "\"");
    }
}

}  // namespace detail

inline ValidationReport check_format(std::string_view text, const FormatRules& rules = {}, const std::string& path = "text") {
    ValidationReport r;
    detail::format_affixes(r, text, path, rules);
    detail::format_residue(r, text, path, rules);
    return r;
}

/// Residue checks on every message; prefix/suffix rules apply to assistant turns.
inline ValidationReport check_format(const Conversation& conv, const FormatRules& rules = {}) {
    ValidationReport r;
    for (std::size_t i = 0; i < conv.messages.size(); ++i) {
        const auto& m = conv.messages[i];
        const std::string path = "messages[" + std::to_string(i) + "]";
        if (m.role == Role::Assistant) detail::format_affixes(r, m.content, path, rules);
        detail::format_residue(r, m.content, path, rules);
    }
    if (r.checks.empty()) r.add("format", Rule::Format, true);
    return r;
}

// ---------------------------------------------------------------------------
// Record-level validation

inline std::string record_type(const DataRecord& record) {
    return record.metadata.is_object() ? record.metadata.value("record_type", std::string("chat")) : "chat";
}

/// Rebuilds the structural view of a chat record from its transcript and metadata.
inline Conversation conversation_from_record(const DataRecord& record, const TokenCounter& counter = {}) {
    Conversation c;
    c.messages = record.conversation;
    const Json& m = record.metadata;
    c.scenario_id = m.value("scenario_id", std::string{});
    c.n_assistants = m.value("n_assistants", 1);
    c.segments = m.value("segments", 1);
    c.turns_per_segment = m.value("turns_per_segment", static_cast<int>(record.conversation.size()));
    if (m.contains("seeds") && m["seeds"].is_object()) c.seed = m["seeds"].value("record", std::uint64_t{0});
    c.recount(counter);
    return c;
}

/// Length, structure (chat only), format and policy. Never short-circuits; attaches
/// the report to metadata.validator_logs.
inline ValidationReport run_all(DataRecord& record, const TokenBudget& budget, const PolicyConfig& policy,
                                const FormatRules& format = {}, const TokenCounter& counter = {}) {
    ValidationReport r;
    const std::string type = record_type(record);
    const Conversation conv = conversation_from_record(record, counter);

    if (type == "chat") {
        r.merge(check_length(conv, budget, counter));
        r.merge(check_structure(conv));
    } else {
        const std::string document = record.metadata.value("document", std::string{});
        const std::size_t n = counter(document);
        const bool ok = n >= budget.min && n <= budget.max;
        r.add("document_tokens", Rule::Length, ok,
              ok ? std::string{}
                 : "document has " + std::to_string(n) + " tokens; required range is [" + std::to_string(budget.min) +
                       ", " + std::to_string(budget.max) + "]");
    }
    const bool under_cap = conv.token_count <= policy.max_total_tokens;
    r.add("max_total_tokens", Rule::Length, under_cap,
          under_cap ? std::string{} : "record exceeds max_total_tokens " + std::to_string(policy.max_total_tokens));

    r.merge(check_format(conv, format));

    const bool noisy_user = record.metadata.value("user_tone", std::string{}) == "disorganized";
    for (std::size_t i = 0; i < conv.messages.size(); ++i) {
        const auto& m = conv.messages[i];
        PolicyContext ctx{"messages[" + std::to_string(i) + "]", noisy_user && m.role == Role::User};
        r.merge(check_policy(m.content, policy, ctx));
    }
    record.metadata["validator_logs"] = report_to_json(r);
    return r;
}

}  // namespace lcforge
