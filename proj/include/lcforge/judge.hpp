#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lcforge/core.hpp"
#include "lcforge/docgen.hpp"
#include "lcforge/error.hpp"
#include "lcforge/gateway.hpp"
#include "lcforge/report.hpp"
#include "lcforge/templating.hpp"

namespace lcforge {

enum class AxisName {
    FactualGrounding,
    InstructionCompliance,
    SemanticRelevance,
    ToneFidelity,
    ReasoningValidity,
    SchemaCompliance,
    Conciseness,
    SafetyPolicy,
};

inline constexpr std::array<AxisName, 8> kAllAxes = {
    AxisName::FactualGrounding, AxisName::InstructionCompliance, AxisName::SemanticRelevance, AxisName::ToneFidelity,
    AxisName::ReasoningValidity, AxisName::SchemaCompliance,     AxisName::Conciseness,       AxisName::SafetyPolicy,
};

/// Key used in verdict JSON and metadata.
inline constexpr std::string_view axis_key(AxisName a) {
    switch (a) {
        case AxisName::FactualGrounding: return "factual_grounding";
        case AxisName::InstructionCompliance: return "instruction_compliance";
        case AxisName::SemanticRelevance: return "semantic_relevance";
        case AxisName::ToneFidelity: return "tone_fidelity";
        case AxisName::ReasoningValidity: return "reasoning_validity";
        case AxisName::SchemaCompliance: return "schema_compliance";
        case AxisName::Conciseness: return "conciseness";
        case AxisName::SafetyPolicy: return "safety_policy";
    }
    return "";
}

inline std::optional<AxisName> axis_from_key(std::string_view key) {
    for (AxisName a : kAllAxes) {
        if (axis_key(a) == key) return a;
    }
    return std::nullopt;
}

inline constexpr std::string_view axis_title(AxisName a) {
    switch (a) {
        case AxisName::FactualGrounding: return "Factual Grounding";
        case AxisName::InstructionCompliance: return "Instruction Compliance";
        case AxisName::SemanticRelevance: return "Semantic Relevance and Coherence";
        case AxisName::ToneFidelity: return "Tone Fidelity";
        case AxisName::ReasoningValidity: return "Reasoning Validity";
        case AxisName::SchemaCompliance: return "Schema Compliance";
        case AxisName::Conciseness: return "Conciseness and Redundancy";
        case AxisName::SafetyPolicy: return "Safety and Policy Adherence";
    }
    return "";
}

inline constexpr std::string_view axis_default_instruction(AxisName a) {
    switch (a) {
        case AxisName::FactualGrounding:
            return "Is every claim, figure, date and name in the response supported by the context? Penalize anything invented.";
        case AxisName::InstructionCompliance:
            return "Does the response satisfy the instruction's task, format, length and structural constraints?";
        case AxisName::SemanticRelevance:
            return "Is the response on topic and internally consistent, without drift or contradictions?";
        case AxisName::ToneFidelity:
            return "Do the assistant turns keep the expected tone for the situation, including with difficult users?";
        case AxisName::ReasoningValidity:
            return "Is each reasoning step logically sound and does the final answer follow from the steps?";
        case AxisName::SchemaCompliance:
            return "Does the response match the declared schema: field presence, types and word limits?";
        case AxisName::Conciseness:
            return "Is the response free of repetition, filler and unnecessary padding?";
        case AxisName::SafetyPolicy:
            return "Is the response free of unsafe, biased or non-compliant content, including personal data and toxicity?";
    }
    return "";
}

struct JudgeAxis {
    AxisName name;
    bool enabled = true;
    std::string instruction_text;
};

/// All eight axes enabled; applicability narrows them per record.
inline std::vector<JudgeAxis> default_axes() {
    std::vector<JudgeAxis> out;
    for (AxisName a : kAllAxes) out.push_back({a, true, std::string(axis_default_instruction(a))});
    return out;
}

/// Axes that apply to the record's shape. Returns the reason when not applicable.
inline std::optional<std::string> axis_inapplicable(AxisName a, const DataRecord& r) {
    const Json& m = r.metadata;
    switch (a) {
        case AxisName::ToneFidelity:
            if (record_type(r) != "chat") return "tone_fidelity disabled: record is not a chat";
            break;
        case AxisName::ReasoningValidity:
            if (!m.contains("reasoning_trace")) return "reasoning_validity disabled: record has no reasoning trace";
            break;
        case AxisName::SchemaCompliance:
            if (!m.contains("verifiable_json_schema")) return "schema_compliance disabled: record has no schema";
            break;
        default: break;
    }
    return std::nullopt;
}

/// Enabled, applicable axes in declaration order. Notes collect the auto-disabled ones.
inline std::vector<JudgeAxis> applicable_axes(const DataRecord& r, const std::vector<JudgeAxis>& axes,
                                              std::vector<std::string>* notes = nullptr) {
    std::vector<JudgeAxis> out;
    for (const auto& a : axes) {
        if (!a.enabled) continue;
        if (auto why = axis_inapplicable(a.name, r)) {
            if (notes) notes->push_back(*why);
            continue;
        }
        out.push_back(a);
    }
    if (out.empty()) throw NoAxesEnabled();
    return out;
}

inline constexpr std::array<std::string_view, 6> kQualityKeys = {"instruction_following", "accuracy", "completeness",
                                                                  "clarity", "relevance", "conciseness"};

struct JudgeVerdict {
    std::vector<std::pair<AxisName, int>> scores;  // exactly the evaluated axes, in order
    std::vector<std::pair<AxisName, std::string>> rationales;
    double aggregate = 0.0;
    std::string judge_model;
    std::optional<double> confidence;
    Json quality = Json::object();  // quality_characteristics.LLM_based
    std::vector<std::string> warnings;

    std::optional<int> score(AxisName a) const {
        for (const auto& [k, v] : scores) {
            if (k == a) return v;
        }
        return std::nullopt;
    }
};

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

/// Unweighted mean rounded to two decimals.
inline double aggregate_scores(const std::vector<std::pair<AxisName, int>>& scores) {
    if (scores.empty()) throw NoAxesEnabled();
    double sum = 0;
    for (const auto& [a, s] : scores) sum += s;
    return round2(sum / static_cast<double>(scores.size()));
}

namespace detail {

inline std::string render_transcript(const DataRecord& r) {
    std::string out;
    for (const auto& m : r.conversation) {
        out += m.speaker_name.empty() ? std::string(role_name(m.role)) : m.speaker_name + " (" + std::string(role_name(m.role)) + ")";
        out += ": " + m.content + "\n";
    }
    return out;
}

inline std::string meta_string(const Json& m, const char* key) {
    auto it = m.find(key);
    return it != m.end() && it->is_string() ? it->get<std::string>() : std::string{};
}

inline Json output_shape(const std::vector<JudgeAxis>& axes) {
    Json scores = Json::object(), rationales = Json::object(), quality = Json::object();
    for (const auto& a : axes) {
        scores[std::string(axis_key(a.name))] = 0;
        rationales[std::string(axis_key(a.name))] = "<one line>";
    }
    for (auto k : kQualityKeys) quality[std::string(k)] = 0;
    return Json{{"scores", scores}, {"rationales", rationales}, {"quality", quality}, {"confidence", 0.0}};
}

inline int clamp_score(const Json& v, const std::string& where, std::vector<std::string>& warnings) {
    if (!v.is_number_integer()) throw UnparseableVerdict(where + " must be an integer");
    const auto raw = v.get<long long>();
    const int s = static_cast<int>(std::clamp<long long>(raw, 1, 5));
    if (s != raw) warnings.push_back(where + " = " + std::to_string(raw) + " clamped to " + std::to_string(s));
    return s;
}

}  // namespace detail

inline std::string build_judge_prompt(const DataRecord& record, const std::vector<JudgeAxis>& axes,
                                      const TemplateRegistry& templates) {
    if (std::none_of(axes.begin(), axes.end(), [](const JudgeAxis& a) { return a.enabled; })) throw NoAxesEnabled();
    const Json& m = record.metadata;
    const std::string type = record_type(record);

    std::string context = type == "chat" ? detail::render_transcript(record) : detail::meta_string(m, "document");
    if (context.empty()) context = detail::meta_string(m, "scenario");
    std::string instruction = detail::meta_string(m, "instruction");
    std::string response = detail::meta_string(m, "response");
    if (instruction.empty() && !record.conversation.empty()) instruction = record.conversation.front().content;
    if (response.empty() && !record.conversation.empty()) response = record.conversation.back().content;

    std::string schema_block;
    std::string axes_block;
    for (const auto& a : axes) {
        if (!a.enabled) continue;
        axes_block += "- " + std::string(axis_key(a.name)) + " (" + std::string(axis_title(a.name)) + "): " +
                      (a.instruction_text.empty() ? std::string(axis_default_instruction(a.name)) : a.instruction_text) + "\n";
        if (a.name == AxisName::SchemaCompliance && m.contains("verifiable_json_schema")) {
            schema_block = "\nDeclared schema:\n" + m["verifiable_json_schema"].dump(2) + "\n";
        }
        if (a.name == AxisName::ReasoningValidity && m.contains("reasoning_trace")) {
            schema_block += "\nReasoning steps:\n";
            int i = 1;
            for (const auto& s : m["reasoning_trace"]) schema_block += std::to_string(i++) + ". " + s.get<std::string>() + "\n";
        }
    }
    std::vector<JudgeAxis> enabled;
    std::copy_if(axes.begin(), axes.end(), std::back_inserter(enabled), [](const JudgeAxis& a) { return a.enabled; });
    return templates.render("judge_prompt", {{"record_type", type},
                                             {"context", context},
                                             {"instruction", instruction},
                                             {"response", response},
                                             {"schema_block", schema_block},
                                             {"axes_block", axes_block},
                                             {"output_format", detail::output_shape(enabled).dump(2)}});
}

/// Parses {"scores", "rationales", "confidence", "quality"}. Scores must cover every axis;
/// extra axes are dropped and out-of-range values clamped, each with a warning.
inline JudgeVerdict parse_verdict(std::string_view text, const std::vector<JudgeAxis>& axes) {
    const auto parsed = parse_json_response(text);
    if (!parsed || !parsed->is_object()) throw UnparseableVerdict("verdict is not a JSON object");
    const Json& j = *parsed;
    if (!j.contains("scores") || !j["scores"].is_object()) throw UnparseableVerdict("verdict has no \"scores\" object");

    JudgeVerdict v;
    const Json& scores = j["scores"];
    const Json rationales = j.contains("rationales") && j["rationales"].is_object() ? j["rationales"] : Json::object();
    for (const auto& a : axes) {
        if (!a.enabled) continue;
        const std::string key(axis_key(a.name));
        if (!scores.contains(key)) throw UnparseableVerdict("verdict is missing a score for " + key);
        v.scores.emplace_back(a.name, detail::clamp_score(scores[key], "scores." + key, v.warnings));
        v.rationales.emplace_back(a.name, rationales.contains(key) && rationales[key].is_string()
                                              ? rationales[key].get<std::string>()
                                              : std::string{});
    }
    if (v.scores.empty()) throw NoAxesEnabled();
    for (const auto& [k, _] : scores.items()) {
        const auto a = axis_from_key(k);
        if (!a || !v.score(*a)) v.warnings.push_back("ignored score for axis not evaluated: " + k);
    }
    if (j.contains("confidence")) {
        if (!j["confidence"].is_number()) throw UnparseableVerdict("confidence must be a number");
        const double c = j["confidence"].get<double>();
        v.confidence = std::clamp(c, 0.0, 1.0);
        if (*v.confidence != c) v.warnings.push_back("confidence clamped to [0, 1]");
    }
    if (j.contains("quality") && j["quality"].is_object()) {
        for (auto k : kQualityKeys) {
            const std::string key(k);
            if (j["quality"].contains(key)) v.quality[key] = detail::clamp_score(j["quality"][key], "quality." + key, v.warnings);
        }
    } else {
        v.warnings.push_back("verdict has no quality characteristics");
    }
    v.aggregate = aggregate_scores(v.scores);
    return v;
}

struct JudgeOptions {
    std::string judge_model = "mock-judge";
    double threshold = 3.0;  // aggregate < threshold => rejected
    RegenerationPolicy regen{};
    std::vector<JudgeAxis> axes = default_axes();
};

inline bool accepted(double aggregate, double threshold) { return aggregate >= threshold; }

/// Writes judge_model, judge_score, quality_characteristics.LLM_based and the per-axis detail.
inline void attach_verdict(DataRecord& r, const JudgeVerdict& v, double threshold,
                           const std::vector<std::string>& notes = {}) {
    Json& m = r.metadata;
    m["judge_model"] = v.judge_model;
    m["judge_score"] = v.aggregate;
    m["quality_characteristics"] = Json{{"LLM_based", v.quality}};
    Json axes = Json::object(), rationales = Json::object();
    for (const auto& [a, s] : v.scores) axes[std::string(axis_key(a))] = s;
    for (const auto& [a, t] : v.rationales) rationales[std::string(axis_key(a))] = t;
    m["judge_axes"] = axes;
    m["judge_rationales"] = rationales;
    if (v.confidence) m["judge_confidence"] = *v.confidence;
    m["judge_status"] = accepted(v.aggregate, threshold) ? "accepted" : "rejected";
    Json all_notes = notes;
    for (const auto& w : v.warnings) all_notes.push_back(w);
    m["judge_notes"] = all_notes;
}

/// The judge must be a different model from the one that generated the record.
inline JudgeVerdict evaluate(DataRecord& record, Gateway& gateway, const TemplateRegistry& templates,
                             const JudgeOptions& opts = {}) {
    const std::string gen_model = detail::meta_string(record.metadata, "model");
    if (!gen_model.empty() && gen_model == opts.judge_model) throw ModelRoleConflict(opts.judge_model);
    std::vector<std::string> notes;
    const auto axes = applicable_axes(record, opts.axes, &notes);

    CompletionRequest req;
    req.prompt = build_judge_prompt(record, axes, templates);
    req.model = opts.judge_model;
    req.temperature = 0.0;
    req.max_output_tokens = 1024;
    auto check = [&](const std::string& text) {
        ValidationReport r;
        try {
            parse_verdict(text, axes);
            r.add("verdict", Rule::Parse, true);
        } catch (const UnparseableVerdict& e) {
            r.add("verdict", Rule::Parse, false, std::string("the verdict could not be parsed: ") + e.what());
        }
        return r;
    };
    ValidatedCompletion out;
    try {
        out = gateway.complete_validated(req, check, opts.regen);
    } catch (const Exhausted& e) {
        throw Exhausted(e.report(), e.attempts(), "judge");
    }
    JudgeVerdict v = parse_verdict(out.text, axes);
    v.judge_model = opts.judge_model;
    attach_verdict(record, v, opts.threshold, notes);
    return v;
}

struct Agreement {
    bool agreed = false;
    double spread = 0.0;
};

inline Agreement ensemble_agreement(const std::vector<JudgeVerdict>& verdicts, double tolerance = 1.0) {
    if (verdicts.size() < 2) throw TooFewVerdicts();
    auto [lo, hi] = std::minmax_element(verdicts.begin(), verdicts.end(),
                                        [](const JudgeVerdict& a, const JudgeVerdict& b) { return a.aggregate < b.aggregate; });
    const double spread = round2(hi->aggregate - lo->aggregate);
    return {spread <= tolerance + 1e-9, spread};
}

/// Runs each judge model in turn; the record keeps the first verdict plus ensemble fields.
/// Disagreement marks the record for review.
inline std::vector<JudgeVerdict> evaluate_ensemble(DataRecord& record, Gateway& gateway, const TemplateRegistry& templates,
                                                   const std::vector<std::string>& judge_models, const JudgeOptions& base = {},
                                                   double tolerance = 1.0) {
    std::vector<JudgeVerdict> out;
    DataRecord first = record;
    for (std::size_t i = 0; i < judge_models.size(); ++i) {
        JudgeOptions o = base;
        o.judge_model = judge_models[i];
        DataRecord scratch = record;
        out.push_back(evaluate(scratch, gateway, templates, o));
        if (i == 0) first = std::move(scratch);
    }
    const Agreement ag = ensemble_agreement(out, tolerance);
    record = std::move(first);
    Json scores = Json::array();
    for (const auto& v : out) scores.push_back(Json{{"judge_model", v.judge_model}, {"judge_score", v.aggregate}});
    record.metadata["judge_ensemble"] = Json{{"verdicts", scores}, {"spread", ag.spread}, {"agreed", ag.agreed}};
    if (!ag.agreed) record.metadata["judge_status"] = "review";
    return out;
}

}  // namespace lcforge
