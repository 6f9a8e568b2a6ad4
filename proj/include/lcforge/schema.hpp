#pragma once

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lcforge/core.hpp"
#include "lcforge/error.hpp"
#include "lcforge/report.hpp"
#include "lcforge/text.hpp"

namespace lcforge {

inline constexpr std::size_t kUnboundedWords = 99999;

enum class FieldKind { Str, List, Int, Float, Bool, Date, Object };

inline constexpr std::string_view field_kind_name(FieldKind k) {
    switch (k) {
        case FieldKind::Str: return "STRING";
        case FieldKind::List: return "LIST";
        case FieldKind::Int: return "INT";
        case FieldKind::Float: return "FLOAT";
        case FieldKind::Bool: return "BOOL";
        case FieldKind::Date: return "DATE";
        case FieldKind::Object: return "OBJECT";
    }
    return "";
}

inline std::optional<FieldKind> field_kind_from_name(std::string_view s) {
    for (FieldKind k : {FieldKind::Str, FieldKind::List, FieldKind::Int, FieldKind::Float, FieldKind::Bool,
                        FieldKind::Date}) {
        if (field_kind_name(k) == s) return k;
    }
    return std::nullopt;
}

using WordBounds = std::pair<std::size_t, std::size_t>;

/// One node of a compiled verifiable schema. Leaves carry is_metadata = true, objects false.
struct FieldSpec {
    FieldKind kind = FieldKind::Str;
    bool is_metadata = true;
    std::optional<std::string> language;  // "en" for Str
    std::optional<WordBounds> num_words;  // inclusive; Str only
    std::shared_ptr<const FieldSpec> item_type;
    std::vector<std::pair<std::string, FieldSpec>> fields;  // Object only, in input order

    static FieldSpec str(std::size_t lo = 0, std::size_t hi = kUnboundedWords) {
        FieldSpec f;
        f.kind = FieldKind::Str;
        f.language = "en";
        f.num_words = WordBounds{lo, hi};
        return f;
    }

    static FieldSpec leaf(FieldKind k) {
        if (k == FieldKind::Str) return str();
        FieldSpec f;
        f.kind = k;
        return f;
    }

    static FieldSpec list(std::optional<FieldSpec> item = std::nullopt) {
        FieldSpec f;
        f.kind = FieldKind::List;
        if (item) f.item_type = std::make_shared<const FieldSpec>(std::move(*item));
        return f;
    }

    static FieldSpec object(std::vector<std::pair<std::string, FieldSpec>> children = {}) {
        FieldSpec f;
        f.kind = FieldKind::Object;
        f.is_metadata = false;
        f.fields = std::move(children);
        return f;
    }

    const FieldSpec* field(std::string_view key) const {
        for (const auto& [k, v] : fields) {
            if (k == key) return &v;
        }
        return nullptr;
    }

    friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
        if (a.kind != b.kind || a.is_metadata != b.is_metadata || a.language != b.language ||
            a.num_words != b.num_words || a.fields != b.fields) {
            return false;
        }
        if (!a.item_type || !b.item_type) return !a.item_type && !b.item_type;
        return *a.item_type == *b.item_type;
    }
};

// ---------------------------------------------------------------------------
// Placeholder grammar
//
//   spec       := part [part]             first part names the type, second the bound
//   part       := '<' body '>' | body
//   type       := string | str | text | list | array | int | integer | float | number
//               | double | bool | boolean | date
//   bound      := [qualifier] NUM [('-' | '–' | 'to') NUM] ['words' | 'word']
//   qualifier  := under | less than | fewer than | at most | up to | max | maximum | '≤' | '<='
//               | at least | atleast | over | more than | min | minimum | '≥' | '>='
//               | exactly
//
// Matching is case-insensitive and whitespace-tolerant; all qualifiers are inclusive.

namespace detail {

enum class PTok { Open, Close, Le, Ge, Dash, Num, Word, End };

struct PToken {
    PTok kind;
    std::string text;
    std::size_t value = 0;
};

inline std::vector<PToken> lex_placeholder(std::string_view raw) {
    std::vector<PToken> out;
    std::size_t i = 0;
    auto starts = [&](std::string_view s) { return raw.substr(i, s.size()) == s; };
    while (i < raw.size()) {
        const char c = raw[i];
        if (is_space(c) || c == ',' || c == '\'' || c == '"') {
            ++i;
        } else if (starts("<=") || starts("\xE2\x89\xA4")) {  // ≤
            out.push_back({PTok::Le, "<="});
            i += raw[i] == '<' ? 2 : 3;
        } else if (starts(">=") || starts("\xE2\x89\xA5")) {  // ≥
            out.push_back({PTok::Ge, ">="});
            i += raw[i] == '>' ? 2 : 3;
        } else if (c == '<') {
            out.push_back({PTok::Open, "<"});
            ++i;
        } else if (c == '>') {
            out.push_back({PTok::Close, ">"});
            ++i;
        } else if (c == '-') {
            out.push_back({PTok::Dash, "-"});
            ++i;
        } else if (starts("\xE2\x80\x93") || starts("\xE2\x80\x94")) {  // en/em dash
            out.push_back({PTok::Dash, "-"});
            i += 3;
        } else if (c >= '0' && c <= '9') {
            std::size_t v = 0;
            const std::size_t start = i;
            while (i < raw.size() && raw[i] >= '0' && raw[i] <= '9') {
                v = v * 10 + static_cast<std::size_t>(raw[i] - '0');
                if (v > 10'000'000) throw UnrecognizedSpec(std::string(raw));
                ++i;
            }
            out.push_back({PTok::Num, std::string(raw.substr(start, i - start)), v});
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = i;
            while (i < raw.size() && (std::isalpha(static_cast<unsigned char>(raw[i])) || raw[i] == '_')) ++i;
            out.push_back({PTok::Word, to_lower_ascii(raw.substr(start, i - start))});
        } else {
            throw UnrecognizedSpec(std::string(raw));
        }
    }
    out.push_back({PTok::End, ""});
    return out;
}

class PlaceholderParser {
public:
    explicit PlaceholderParser(std::string_view raw) : raw_(raw), toks_(lex_placeholder(raw)) {}

    FieldSpec parse() {
        const bool bracketed = accept(PTok::Open);
        const FieldKind kind = parse_type();
        if (bracketed) expect(PTok::Close);
        if (peek().kind == PTok::End) return FieldSpec::leaf(kind);
        if (kind != FieldKind::Str) fail();

        const bool bound_bracketed = accept(PTok::Open);
        const WordBounds b = parse_bound();
        if (bound_bracketed) expect(PTok::Close);
        expect(PTok::End);
        return FieldSpec::str(b.first, b.second);
    }

private:
    enum class Qual { None, AtMost, AtLeast, Exactly };

    const PToken& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }

    bool accept(PTok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }

    bool accept_word(std::string_view w) {
        if (peek().kind != PTok::Word || peek().text != w) return false;
        ++pos_;
        return true;
    }

    void expect(PTok k) {
        if (!accept(k)) fail();
    }

    [[noreturn]] void fail() const { throw UnrecognizedSpec(std::string(raw_)); }

    FieldKind parse_type() {
        if (peek().kind != PTok::Word) fail();
        const std::string w = peek().text;
        ++pos_;
        if (w == "string" || w == "str" || w == "text") return FieldKind::Str;
        if (w == "list" || w == "array") return FieldKind::List;
        if (w == "int" || w == "integer") return FieldKind::Int;
        if (w == "float" || w == "number" || w == "double" || w == "decimal") return FieldKind::Float;
        if (w == "bool" || w == "boolean") return FieldKind::Bool;
        if (w == "date") return FieldKind::Date;
        fail();
    }

    Qual parse_qualifier() {
        if (accept(PTok::Le)) return Qual::AtMost;
        if (accept(PTok::Ge)) return Qual::AtLeast;
        if (accept_word("under") || accept_word("max") || accept_word("maximum")) return Qual::AtMost;
        if (accept_word("atleast") || accept_word("min") || accept_word("minimum") || accept_word("over")) {
            return Qual::AtLeast;
        }
        if (accept_word("exactly")) return Qual::Exactly;
        if (peek().kind == PTok::Word && peek(1).kind == PTok::Word) {
            const std::string a = peek().text;
            const std::string b = peek(1).text;
            Qual q = Qual::None;
            if ((a == "at" && b == "most") || (a == "up" && b == "to") || (a == "less" && b == "than") ||
                (a == "fewer" && b == "than")) {
                q = Qual::AtMost;
            } else if ((a == "at" && b == "least") || (a == "more" && b == "than")) {
                q = Qual::AtLeast;
            }
            if (q != Qual::None) {
                pos_ += 2;
                return q;
            }
        }
        return Qual::None;
    }

    WordBounds parse_bound() {
        const Qual q = parse_qualifier();
        if (peek().kind != PTok::Num) fail();
        const std::size_t a = peek().value;
        ++pos_;
        WordBounds b{a, a};
        if (q == Qual::None && (accept(PTok::Dash) || accept_word("to"))) {
            if (peek().kind != PTok::Num) fail();
            b.second = peek().value;
            ++pos_;
            if (b.first > b.second) fail();
        } else if (q == Qual::AtMost) {
            b = {0, a};
        } else if (q == Qual::AtLeast) {
            b = {a, kUnboundedWords};
        }
        if (!accept_word("words")) accept_word("word");
        if (b.second == 0) fail();
        return b;
    }

    std::string_view raw_;
    std::vector<PToken> toks_;
    std::size_t pos_ = 0;
};

inline std::string child_path(const std::string& parent, std::string_view key) {
    if (parent.empty() || parent == "$") return std::string(key);
    return parent + "." + std::string(key);
}

inline std::string index_path(const std::string& parent, std::size_t i) {
    return (parent.empty() ? std::string("$") : parent) + "[" + std::to_string(i) + "]";
}

}  // namespace detail

inline FieldSpec parse_placeholder(std::string_view raw) {
    if (trim(raw).empty()) throw UnrecognizedSpec(std::string(raw));
    return detail::PlaceholderParser(raw).parse();
}

// ---------------------------------------------------------------------------
// Compilation

namespace detail {

inline FieldSpec compile_node(const Json& node, const std::string& path);

inline void merge_object_fields(FieldSpec& into, const FieldSpec& from, const std::string& path) {
    for (const auto& [k, v] : from.fields) {
        if (const FieldSpec* existing = into.field(k)) {
            if (!(*existing == v)) throw UnrecognizedSpec("conflicting definitions for key " + k, path);
            continue;
        }
        into.fields.emplace_back(k, v);
    }
}

inline FieldSpec compile_array(const Json& node, const std::string& path) {
    if (node.empty()) return FieldSpec::list();
    if (std::all_of(node.begin(), node.end(), [](const Json& e) { return e.is_object(); })) {
        // Element objects describe one item shape; their keys merge in order.
        FieldSpec item = FieldSpec::object();
        for (std::size_t i = 0; i < node.size(); ++i) {
            merge_object_fields(item, compile_node(node[i], index_path(path, i)), index_path(path, i));
        }
        return FieldSpec::list(std::move(item));
    }
    if (std::all_of(node.begin(), node.end(), [](const Json& e) { return e.is_string(); })) {
        FieldSpec item = compile_node(node[0], index_path(path, 0));
        for (std::size_t i = 1; i < node.size(); ++i) {
            if (!(compile_node(node[i], index_path(path, i)) == item)) {
                throw UnrecognizedSpec(dump_compact(node), path);
            }
        }
        return FieldSpec::list(std::move(item));
    }
    throw UnrecognizedSpec(dump_compact(node), path);
}

inline FieldSpec compile_node(const Json& node, const std::string& path) {
    if (node.is_string()) {
        try {
            return parse_placeholder(node.get<std::string>());
        } catch (const UnrecognizedSpec&) {
            throw UnrecognizedSpec(node.get<std::string>(), path);
        }
    }
    if (node.is_object()) {
        FieldSpec obj = FieldSpec::object();
        for (const auto& [k, v] : node.items()) obj.fields.emplace_back(k, compile_node(v, child_path(path, k)));
        return obj;
    }
    if (node.is_array()) return compile_array(node, path);
    throw UnrecognizedSpec(dump_compact(node), path);
}

}  // namespace detail

/// Compiles a JSON structure of placeholder strings into a schema tree, preserving key order.
inline FieldSpec compile_schema(const Json& input) { return detail::compile_node(input, "$"); }

// ---------------------------------------------------------------------------
// JSON form of the metadata dialect

inline Json schema_to_json(const FieldSpec& f) {
    Json j = Json::object();
    j["is_metadata"] = f.is_metadata;
    if (f.kind == FieldKind::Object) {
        for (const auto& [k, v] : f.fields) j[k] = schema_to_json(v);
        return j;
    }
    j["type"] = std::string(field_kind_name(f.kind));
    if (f.language) j["language"] = *f.language;
    if (f.num_words) j["num_words"] = Json::array({f.num_words->first, f.num_words->second});
    if (f.item_type) j["item_type"] = schema_to_json(*f.item_type);
    return j;
}

namespace detail {

inline FieldSpec schema_node_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw UnrecognizedSpec(dump_compact(j), path);
    if (j.contains("type") && j["type"].is_string()) {
        const std::string t = j["type"].get<std::string>();
        auto kind = field_kind_from_name(t);
        if (!kind) throw UnrecognizedSpec(t, path);
        FieldSpec f = FieldSpec::leaf(*kind);
        f.is_metadata = j.value("is_metadata", true);
        if (*kind == FieldKind::Str) {
            f.language = j.value("language", std::string("en"));
            if (j.contains("num_words")) {
                const Json& nw = j["num_words"];
                if (!nw.is_array() || nw.size() != 2 || !nw[0].is_number_unsigned() || !nw[1].is_number_unsigned()) {
                    throw UnrecognizedSpec(dump_compact(nw), child_path(path, "num_words"));
                }
                f.num_words = WordBounds{nw[0].get<std::size_t>(), nw[1].get<std::size_t>()};
                if (f.num_words->first > f.num_words->second) {
                    throw UnrecognizedSpec(dump_compact(nw), child_path(path, "num_words"));
                }
            }
        }
        if (*kind == FieldKind::List && j.contains("item_type")) {
            f.item_type = std::make_shared<const FieldSpec>(schema_node_from_json(j["item_type"], child_path(path, "item_type")));
        }
        return f;
    }
    FieldSpec obj = FieldSpec::object();
    for (const auto& [k, v] : j.items()) {
        if (k == "is_metadata") continue;
        obj.fields.emplace_back(k, schema_node_from_json(v, child_path(path, k)));
    }
    return obj;
}

}  // namespace detail

/// Reads a schema in the metadata dialect. Nodes without "type" are objects.
inline FieldSpec schema_from_json(const Json& j) { return detail::schema_node_from_json(j, "$"); }

// ---------------------------------------------------------------------------
// Response validation

inline bool is_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    auto num = [&](std::size_t at, std::size_t n) {
        int v = 0;
        for (std::size_t i = at; i < at + n; ++i) v = v * 10 + (s[i] - '0');
        return v;
    };
    const int y = num(0, 4), m = num(5, 2), d = num(8, 2);
    if (m < 1 || m > 12 || d < 1) return false;
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return d <= kDays[m - 1] + (m == 2 && leap ? 1 : 0);
}

/// First forbidden CJK/Hangul code point in the text, if any.
inline std::optional<char32_t> first_cjk(std::string_view text) {
    for (char32_t cp : decode_utf8(text)) {
        if (classify_script(cp)) return cp;
    }
    return std::nullopt;
}

namespace detail {

inline const char* json_type_label(const Json& v) {
    switch (v.type()) {
        case Json::value_t::object: return "object";
        case Json::value_t::array: return "array";
        case Json::value_t::string: return "string";
        case Json::value_t::boolean: return "boolean";
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned: return "integer";
        case Json::value_t::number_float: return "number";
        case Json::value_t::null: return "null";
        default: return "value";
    }
}

inline bool type_matches(FieldKind k, const Json& v) {
    switch (k) {
        case FieldKind::Str: return v.is_string();
        case FieldKind::List: return v.is_array();
        case FieldKind::Int: return v.is_number_integer();
        case FieldKind::Float: return v.is_number();
        case FieldKind::Bool: return v.is_boolean();
        case FieldKind::Date: return v.is_string() && is_iso_date(v.get<std::string>());
        case FieldKind::Object: return v.is_object();
    }
    return false;
}

inline std::string expected_label(FieldKind k) {
    switch (k) {
        case FieldKind::Date: return "date string YYYY-MM-DD";
        case FieldKind::Object: return "object";
        default: return std::string(field_kind_name(k));
    }
}

inline void validate_node(const FieldSpec& spec, const Json* value, const std::string& path, ValidationReport& r) {
    const std::string shown = path.empty() ? "$" : path;
    if (!value) {
        r.add(shown, Rule::Presence, false, "missing key " + shown);
        for (const auto& [k, child] : spec.fields) validate_node(child, nullptr, child_path(path, k), r);
        return;
    }
    if (!path.empty()) r.add(shown, Rule::Presence, true);

    const bool typed = type_matches(spec.kind, *value);
    r.add(shown, Rule::Type, typed,
          typed ? std::string{}
                : shown + " must be " + expected_label(spec.kind) + ", found " + json_type_label(*value));

    if (spec.kind == FieldKind::Object) {
        const Json* obj = typed ? value : nullptr;
        for (const auto& [k, child] : spec.fields) {
            const Json* v = obj && obj->contains(k) ? &(*obj)[k] : nullptr;
            validate_node(child, v, child_path(path, k), r);
        }
        if (obj) {
            for (const auto& [k, v] : obj->items()) {
                if (!spec.field(k)) r.warn(child_path(path, k), Rule::Presence, "unexpected key " + child_path(path, k));
            }
        }
        return;
    }
    if (!typed) return;

    if (spec.kind == FieldKind::Str) {
        const std::string text = value->get<std::string>();
        if (spec.num_words) {
            const std::size_t n = count_words(text);
            const auto [lo, hi] = *spec.num_words;
            const bool ok = n >= lo && n <= hi;
            r.add(shown, Rule::WordCount, ok,
                  ok ? std::string{}
                     : shown + " has " + std::to_string(n) + " words; allowed range is [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]");
        }
        const auto cjk = first_cjk(text);
        r.add(shown, Rule::Language, !cjk,
              cjk ? shown + " contains non-English characters (" + std::string(script_name(*classify_script(*cjk))) + ")"
                  : std::string{});
    } else if (spec.kind == FieldKind::List && spec.item_type) {
        for (std::size_t i = 0; i < value->size(); ++i) {
            ValidationReport item;
            const std::string ip = index_path(path, i);
            validate_node(*spec.item_type, &(*value)[i], ip, item);
            const bool ok = item.pass();
            r.merge(item);
            r.add(ip, Rule::ListItem, ok, ok ? std::string{} : ip + " does not match the list item schema");
        }
    }
}

}  // namespace detail

/// Field-by-field conformance report. Total: never throws, and every schema leaf yields a check.
inline ValidationReport validate_response(const FieldSpec& schema, const Json& response) {
    ValidationReport r;
    detail::validate_node(schema, &response, "", r);
    return r;
}

/// Fraction of passing checks.
inline double score_reward(const ValidationReport& report) {
    if (report.checks.empty()) throw EmptyReport();
    return static_cast<double>(report.passed()) / static_cast<double>(report.checks.size());
}

}  // namespace lcforge
