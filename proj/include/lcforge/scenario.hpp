#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "lcforge/context.hpp"
#include "lcforge/core.hpp"
#include "lcforge/error.hpp"
#include "lcforge/rules.hpp"
#include "lcforge/templating.hpp"

namespace lcforge {

struct ScenarioSeed {
    std::string business_scenario;
    std::string text_generation_guidance;
    std::string guidance_explanation;
    std::string country;

    void validate() const {
        if (trim(country).empty()) throw ConfigError("scenario seed has an empty country");
        for (const auto* f : {&business_scenario, &text_generation_guidance, &guidance_explanation, &country}) {
            if (f->find("{{") != std::string::npos || f->find("}}") != std::string::npos) {
                throw ConfigError("scenario seed field contains an unresolved placeholder: " + *f);
            }
        }
    }

    friend bool operator==(const ScenarioSeed&, const ScenarioSeed&) = default;
};

inline Json seed_to_json(const ScenarioSeed& s) {
    return Json{{"business_scenario", s.business_scenario},
                {"text_generation_guidance", s.text_generation_guidance},
                {"guidance_explanation", s.guidance_explanation},
                {"country", s.country}};
}

inline ScenarioSeed seed_from_json(const Json& j) {
    ScenarioSeed s;
    s.business_scenario = j.value("business_scenario", std::string{});
    s.text_generation_guidance = j.value("text_generation_guidance", std::string{});
    s.guidance_explanation =
        j.value("guidance_explanation", j.value("text_generation_guidance_explanation", std::string{}));
    s.country = j.value("country", std::string{});
    s.validate();
    return s;
}

/// Scenario database: one seed object per JSONL line. Blank lines are skipped.
inline std::vector<ScenarioSeed> load_scenario_db(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read scenario database: " + path.string());
    std::vector<ScenarioSeed> db;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (trim(line).empty()) continue;
        try {
            db.push_back(seed_from_json(Json::parse(line)));
        } catch (const nlohmann::json::exception& e) {
            throw ParseFailure(n, e.what());
        } catch (const ConfigError& e) {
            throw ParseFailure(n, e.what());
        }
    }
    return db;
}

inline const ScenarioSeed& sample_seed(const std::vector<ScenarioSeed>& db, std::uint64_t rng_seed) {
    if (db.empty()) throw EmptyDatabase();
    Rng rng(derive_seed(rng_seed, "scenario-seed"));
    return db[rng.uniform_index(db.size())];
}

/// s (complexified = false) or s′ (complexified = true).
struct ScenarioText {
    std::string text;
    ScenarioSeed seed;
    bool complexified = false;
    std::string scenario_id;
    std::vector<std::string> variation_directives;  // kinds applied when generating this text
};

inline std::string make_scenario_id(const ScenarioSeed& seed, const std::string& text) {
    Json body = Json{{"seed", seed_to_json(seed)}, {"text", text}};
    return sha256_hex(detail::sorted_copy(body).dump());
}

inline Bindings seed_bindings(const ScenarioSeed& s) {
    return {{"business_scenario", s.business_scenario},
            {"text_generation_guidance", s.text_generation_guidance},
            {"text_generation_guidance_explanation", s.guidance_explanation},
            {"country", s.country}};
}

inline std::vector<std::string> directive_names(const std::vector<VariationDirective>& ds) {
    std::vector<std::string> out;
    for (const auto& d : ds) out.emplace_back(variation_kind_name(d.kind));
    return out;
}

/// Policy, placeholder residue and non-emptiness checks shared by every scenario stage.
inline ValidationReport check_scenario_text(const std::string& text, const PolicyConfig& policy) {
    ValidationReport r;
    const bool non_empty = !trim(text).empty();
    r.add("scenario", Rule::Content, non_empty, non_empty ? std::string{} : "scenario text is empty");
    r.merge(check_format(text, {}, "scenario"));
    r.merge(check_policy(text, policy, {"scenario", false}));
    return r;
}

inline ScenarioText generate_scenario(const ScenarioSeed& seed, const GenerationContext& ctx, std::uint64_t rng_seed = 0,
                                      std::size_t variation_count = 2) {
    seed.validate();
    const auto directives = select_variation_directives(derive_seed(rng_seed, "scenario-variation"), variation_count);
    const std::string prompt = render(ctx.templates.pick_variant("create_scenario", rng_seed), seed_bindings(seed));
    const auto full = prompt + "\n\n" + render_variation_block(directives);
    auto out = ctx.run(ctx.request(full),
                       [&](const std::string& text) { return check_scenario_text(text, ctx.policy); },
                       "generate_scenario");
    ScenarioText s;
    s.text = std::string(trim(out.text));
    s.seed = seed;
    s.complexified = false;
    s.scenario_id = make_scenario_id(seed, s.text);
    s.variation_directives = directive_names(directives);
    return s;
}

inline constexpr std::array<std::string_view, 2> kForbiddenScenarioHeaders = {"Complex Scenario", "Transformed Scenario"};

inline ScenarioText complexify_scenario(const ScenarioText& s, const GenerationContext& ctx, std::uint64_t rng_seed = 0,
                                        std::size_t variation_count = 2) {
    if (s.complexified) throw ConfigError("scenario is already complexified");
    const auto directives = select_variation_directives(derive_seed(rng_seed, "complexify-variation"), variation_count);
    const std::string prompt = render(ctx.templates.pick_variant("create_scenario_complex", rng_seed),
                                      {{"scenario", s.text}, {"country", s.seed.country}}) +
                               "\n\n" + render_variation_block(directives);
    const std::size_t base_tokens = ctx.counter(s.text);
    auto check = [&](const std::string& text) {
        ValidationReport r = check_scenario_text(text, ctx.policy);
        const std::size_t n = ctx.counter(text);
        const bool grew = n > base_tokens;
        r.add("scenario:growth", Rule::Length, grew,
              grew ? std::string{}
                   : "complexified scenario has " + std::to_string(n) + " tokens; it must be longer than the " +
                         std::to_string(base_tokens) + "-token input scenario");
        for (auto header : kForbiddenScenarioHeaders) {
            const bool hit = contains_ci(text, header);
            r.add("scenario:header", Rule::Format, !hit,
                  hit ? "scenario contains the forbidden phrase \"" + std::string(header) + "\"" : std::string{});
        }
        return r;
    };
    auto out = ctx.run(ctx.request(prompt, 0, static_cast<int>(base_tokens) + 1), check, "complexify_scenario");
    ScenarioText c;
    c.text = std::string(trim(out.text));
    c.seed = s.seed;
    c.complexified = true;
    c.scenario_id = make_scenario_id(s.seed, c.text);
    c.variation_directives = directive_names(directives);
    return c;
}

}  // namespace lcforge
