#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lcforge/core.hpp"
#include "lcforge/default_templates.hpp"
#include "lcforge/error.hpp"

namespace lcforge {

using Bindings = std::map<std::string, std::string, std::less<>>;

namespace detail {

inline bool is_slot_char(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

/// A `{{ name }}` occurrence within a body.
struct SlotMatch {
    std::size_t begin = 0;
    std::size_t end = 0;  // one past the closing braces
    std::string name;
};

/// Scans for the next well-formed slot at or after `from`. Stray braces are literal text.
inline std::optional<SlotMatch> next_slot(std::string_view body, std::size_t from) {
    for (std::size_t open = body.find("{{", from); open != std::string_view::npos;
         open = body.find("{{", open + 1)) {
        std::size_t i = open + 2;
        while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
        const std::size_t name_start = i;
        while (i < body.size() && is_slot_char(body[i])) ++i;
        if (i == name_start) continue;
        const std::size_t name_end = i;
        while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) ++i;
        if (body.substr(i, 2) != "}}") continue;
        return SlotMatch{open, i + 2, std::string(body.substr(name_start, name_end - name_start))};
    }
    return std::nullopt;
}

}  // namespace detail

/// A prompt body with `{{ name }}` slots.
struct Template {
    std::string id;
    std::string body;
    std::set<std::string> required_slots;

    static Template parse(std::string id, std::string body) {
        Template t{std::move(id), std::move(body), {}};
        std::size_t pos = 0;
        while (auto m = detail::next_slot(t.body, pos)) {
            t.required_slots.insert(m->name);
            pos = m->end;
        }
        return t;
    }
};

inline bool has_unresolved_slot(std::string_view text) {
    return detail::next_slot(text, 0).has_value();
}

struct RenderOptions {
    bool reject_unknown = false;  // throw UnknownSlot for bindings the template never uses
};

/// Single-pass substitution; substituted values are never rescanned.
inline std::string render(const Template& t, const Bindings& bindings, RenderOptions opts = {}) {
    for (const auto& slot : t.required_slots) {
        if (bindings.find(slot) == bindings.end()) throw MissingSlot(slot);
    }
    if (opts.reject_unknown) {
        for (const auto& [name, value] : bindings) {
            if (!t.required_slots.count(name)) throw UnknownSlot(name);
        }
    }
    std::string out;
    out.reserve(t.body.size());
    std::size_t pos = 0;
    while (auto m = detail::next_slot(t.body, pos)) {
        out.append(t.body, pos, m->begin - pos);
        out += bindings.find(m->name)->second;
        pos = m->end;
    }
    out.append(t.body, pos, std::string::npos);
    return out;
}

/// Bindings the template does not reference.
inline std::vector<std::string> unknown_slots(const Template& t, const Bindings& bindings) {
    std::vector<std::string> out;
    for (const auto& [name, value] : bindings) {
        if (!t.required_slots.count(name)) out.push_back(name);
    }
    return out;
}

/// Templates keyed by id. Built once, then read-only.
///
/// Alternate phrasings of a template are registered as `<id>.<variant>`; pick_variant()
/// chooses among the base id and its variants deterministically.
class TemplateRegistry {
public:
    static TemplateRegistry defaults() {
        TemplateRegistry r;
        for (const auto& [id, body] : detail::kDefaultTemplates) {
            r.add(Template::parse(std::string(id), std::string(body)));
        }
        return r;
    }

    /// Every `*.txt` file in `dir` is registered (or overrides a default) under its stem.
    void load_directory(const std::filesystem::path& dir) {
        std::error_code ec;
        if (!std::filesystem::is_directory(dir, ec)) {
            throw IoFailure("template directory not found: " + dir.string());
        }
        std::vector<std::filesystem::path> files;
        for (const auto& entry : std::filesystem::directory_iterator(dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            std::ifstream in(f, std::ios::binary);
            if (!in) throw IoFailure("cannot read template: " + f.string());
            std::ostringstream ss;
            ss << in.rdbuf();
            add(Template::parse(f.stem().string(), ss.str()));
        }
    }

    void add(Template t) { templates_[t.id] = std::move(t); }

    bool contains(std::string_view id) const { return templates_.find(id) != templates_.end(); }

    const Template& get(std::string_view id) const {
        auto it = templates_.find(id);
        if (it == templates_.end()) throw ConfigError("unknown template id: " + std::string(id));
        return it->second;
    }

    std::vector<std::string> ids() const {
        std::vector<std::string> out;
        for (const auto& [id, t] : templates_) out.push_back(id);
        return out;
    }

    std::vector<std::string> variants(std::string_view base) const {
        std::vector<std::string> out;
        const std::string prefix = std::string(base) + ".";
        for (const auto& [id, t] : templates_) {
            if (id == base || id.rfind(prefix, 0) == 0) out.push_back(id);
        }
        return out;
    }

    const Template& pick_variant(std::string_view base, std::uint64_t seed) const {
        auto ids = variants(base);
        if (ids.empty()) throw ConfigError("unknown template id: " + std::string(base));
        Rng rng(derive_seed(seed, "template-variant"));
        return get(ids[rng.uniform_index(ids.size())]);
    }

    std::string render(std::string_view id, const Bindings& bindings) const {
        return lcforge::render(get(id), bindings);
    }

private:
    std::map<std::string, Template, std::less<>> templates_;
};

// ---------------------------------------------------------------------------
// Controlled-variation directives

enum class VariationKind { SynonymSubstitution, SentenceRestructuring, PhraseReordering, MildRedundancy };

struct VariationDirective {
    VariationKind kind;
    std::string_view rendered_text;

    friend bool operator==(const VariationDirective&, const VariationDirective&) = default;
};

inline constexpr std::array<VariationDirective, 4> kVariationDirectives = {{
    {VariationKind::SynonymSubstitution,
     "**Synonym Substitutions** – Replace at least **five key words** with appropriate synonyms while "
     "preserving meaning."},
    {VariationKind::SentenceRestructuring,
     "**Sentence Restructuring** – Modify the structure of at least **two sentences** while keeping intent "
     "intact."},
    {VariationKind::PhraseReordering,
     "**Reordering Phrases** – Slightly alter the order of key phrases without changing the scenario’s "
     "meaning."},
    {VariationKind::MildRedundancy,
     "**Mild Redundancy** – Introduce an occasional **extra descriptive phrase** or clarification to add "
     "variation."},
}};

inline constexpr std::string_view variation_kind_name(VariationKind k) {
    switch (k) {
        case VariationKind::SynonymSubstitution: return "synonym_substitution";
        case VariationKind::SentenceRestructuring: return "sentence_restructuring";
        case VariationKind::PhraseReordering: return "phrase_reordering";
        case VariationKind::MildRedundancy: return "mild_redundancy";
    }
    return "";
}

/// k distinct directives, uniform without replacement, returned in canonical kind order.
inline std::vector<VariationDirective> select_variation_directives(std::uint64_t rng_seed, std::size_t k) {
    if (k < 2 || k > kVariationDirectives.size()) {
        throw InvalidCount("variation directive count must be in [2, 4], got " + std::to_string(k));
    }
    Rng rng(derive_seed(rng_seed, "variation"));
    auto picked = rng.sample_indices(kVariationDirectives.size(), k);
    std::sort(picked.begin(), picked.end());
    std::vector<VariationDirective> out;
    for (auto i : picked) out.push_back(kVariationDirectives[i]);
    return out;
}

inline std::string render_variation_block(const std::vector<VariationDirective>& directives) {
    std::string out = "### Selected Variations for This Response:\nApply these transformations:\n";
    for (std::size_t i = 0; i < directives.size(); ++i) {
        out += "    " + std::to_string(i + 1) + ". " + std::string(directives[i].rendered_text) + "\n";
    }
    return out;
}

}  // namespace lcforge
