#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lcforge/context.hpp"
#include "lcforge/core.hpp"
#include "lcforge/error.hpp"
#include "lcforge/rules.hpp"
#include "lcforge/scenario.hpp"
#include "lcforge/schema.hpp"
#include "lcforge/templating.hpp"

namespace lcforge {

// ---------------------------------------------------------------------------
// Grounding

/// Literal kinds that must occur in the source document.
enum class LiteralKind { Number, Date, Quoted };

inline constexpr std::string_view literal_kind_name(LiteralKind k) {
    switch (k) {
        case LiteralKind::Number: return "number";
        case LiteralKind::Date: return "date";
        case LiteralKind::Quoted: return "quoted";
    }
    return "";
}

struct Literal {
    LiteralKind kind;
    std::string text;  // normalized

    friend bool operator==(const Literal&, const Literal&) = default;
};

/// Removes thousands separators: a comma with a digit on both sides.
inline std::string normalize_grounding(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        const bool digit_comma = s[i] == ',' && i > 0 && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
                                 std::isdigit(static_cast<unsigned char>(s[i + 1]));
        if (!digit_comma) out += s[i];
    }
    return out;
}

/// Dates (YYYY-MM-DD), double-quoted strings, then numbers not glued to a word, in that
/// order. Dates are masked before numbers are scanned. Duplicates are dropped.
inline std::vector<Literal> extract_literals(std::string_view text) {
    static const std::regex kDate(R"((^|[^0-9])([0-9]{4}-[0-9]{2}-[0-9]{2})(?![0-9]))");
    static const std::regex kQuoted(R"delim("([^"]+)")delim");
    static const std::regex kNumber(R"((^|[^A-Za-z0-9_])([0-9]+(?:[.,][0-9]+)*))");

    std::vector<Literal> out;
    auto push = [&](LiteralKind k, std::string v) {
        Literal lit{k, normalize_grounding(v)};
        if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(std::move(lit));
    };

    std::string masked(text);
    for (auto it = std::sregex_iterator(masked.begin(), masked.end(), kDate); it != std::sregex_iterator(); ++it) {
        push(LiteralKind::Date, (*it)[2].str());
    }
    std::string scan = masked;
    for (auto it = std::sregex_iterator(masked.begin(), masked.end(), kDate); it != std::sregex_iterator(); ++it) {
        const auto pos = static_cast<std::size_t>((*it).position(2));
        std::fill(scan.begin() + static_cast<std::ptrdiff_t>(pos), scan.begin() + static_cast<std::ptrdiff_t>(pos + 10), ' ');
    }
    for (auto it = std::sregex_iterator(masked.begin(), masked.end(), kQuoted); it != std::sregex_iterator(); ++it) {
        push(LiteralKind::Quoted, (*it)[1].str());
    }
    for (auto it = std::sregex_iterator(scan.begin(), scan.end(), kNumber); it != std::sregex_iterator(); ++it) {
        push(LiteralKind::Number, (*it)[2].str());
    }
    return out;
}

namespace detail {

inline void collect_leaves(const Json& j, std::string& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) collect_leaves(v, out);
    } else if (j.is_array()) {
        for (const auto& v : j) collect_leaves(v, out);
    } else if (j.is_string()) {
        out += j.get<std::string>();
        out += '\n';
    } else if (j.is_number()) {
        out += j.dump();
        out += '\n';
    }
}

}  // namespace detail

/// Strips a surrounding Markdown code fence, if any.
inline std::string strip_code_fence(std::string_view text) {
    std::string_view t = trim(text);
    if (t.substr(0, 3) != "```") return std::string(t);
    const auto first_nl = t.find('\n');
    const auto close = t.rfind("```");
    if (first_nl == std::string_view::npos || close <= first_nl) return std::string(t);
    return std::string(trim(t.substr(first_nl + 1, close - first_nl - 1)));
}

inline std::optional<Json> parse_json_response(std::string_view text) {
    try {
        return Json::parse(strip_code_fence(text));
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
}

/// Text the grounding check scans: JSON string and number leaves (keys excluded) when the
/// response is JSON, otherwise the raw text.
inline std::string grounding_surface(std::string_view response) {
    if (auto j = parse_json_response(response); j && (j->is_object() || j->is_array())) {
        std::string out;
        detail::collect_leaves(*j, out);
        return out;
    }
    return std::string(response);
}

/// Every literal in `surface` must occur (after comma normalization) in the document.
inline ValidationReport check_literals(std::string_view document, std::string_view surface) {
    ValidationReport r;
    const std::string doc = normalize_grounding(document);
    const auto literals = extract_literals(surface);
    for (const auto& lit : literals) {
        const bool ok = doc.find(lit.text) != std::string::npos;
        const std::string path = "grounding:" + std::string(literal_kind_name(lit.kind)) + ":" + lit.text;
        r.add(path, Rule::Grounding, ok,
              ok ? std::string{}
                 : "response cites " + std::string(literal_kind_name(lit.kind)) + " \"" + lit.text +
                       "\", which does not occur in the document");
    }
    if (literals.empty()) r.add("grounding", Rule::Grounding, true);
    return r;
}

inline ValidationReport check_grounding(std::string_view document, std::string_view response) {
    return check_literals(document, grounding_surface(response));
}


// ---------------------------------------------------------------------------
// Documents

struct DocumentResult {
    std::string text;
    int attempts = 0;
    int expansions = 0;
};

inline std::string length_directive(const TokenBudget& b) {
    return "### Length Requirement:\nWrite a complete, self-contained document of about " + std::to_string(b.target) +
           " words and never fewer than " + std::to_string(b.min) + " or more than " + std::to_string(b.max) + " words.\n";
}

/// Drafts a document and expands or condenses it until its token count lies in
/// [budget.min, budget.max]. Every call, drafts and expansions alike, counts toward max_attempts.
inline DocumentResult generate_document(const ScenarioText& scenario, const TokenBudget& budget,
                                        const GenerationContext& ctx, std::uint64_t rng_seed = 0) {
    budget.validate();
    ctx.regen.validate();
    const auto directives = select_variation_directives(derive_seed(rng_seed, "document-variation"), 2);
    const std::string base = render(ctx.templates.pick_variant("create_long_context_doc", rng_seed),
                                    {{"final_scenario", scenario.text}, {"country", scenario.seed.country}}) +
                             "\n\n" + render_variation_block(directives) + "\n" + length_directive(budget);

    DocumentResult result;
    ValidationReport last;
    std::string prompt = base;
    const int max_out = static_cast<int>(budget.max);
    for (int attempt = 0; attempt < ctx.regen.max_attempts; ++attempt) {
        CompletionRequest req = ctx.request(prompt, max_out, attempt == 0 ? 0 : static_cast<int>(budget.min));
        req.attempt = attempt;
        const std::string text(trim(ctx.gateway.complete(req)));
        result.attempts = attempt + 1;

        last = ValidationReport{};
        const bool non_empty = !text.empty();
        last.add("document", Rule::Content, non_empty, non_empty ? std::string{} : "the document is empty");
        last.merge(check_format(text, {}, "document"));
        last.merge(check_policy(text, ctx.policy, {"document", false}));
        const std::size_t n = ctx.counter(text);
        const bool long_enough = n >= budget.min;
        const bool short_enough = n <= budget.max;
        last.add("document", Rule::Length, long_enough && short_enough,
                 long_enough && short_enough
                     ? std::string{}
                     : "the document has " + std::to_string(n) + " tokens; required range is [" +
                           std::to_string(budget.min) + ", " + std::to_string(budget.max) + "]");
        if (last.pass()) {
            result.text = text;
            return result;
        }

        const bool only_length = std::all_of(last.checks.begin(), last.checks.end(),
                                             [](const Check& c) { return c.pass || c.rule == Rule::Length; });
        if (only_length && !long_enough) {
            ++result.expansions;
            prompt = base + "\n### Current Draft:\n" + text + "\n\n### Expansion Request:\nThe draft has " +
                     std::to_string(n) + " words but needs at least " + std::to_string(budget.min) +
                     " (target " + std::to_string(budget.target) +
                     "). Expand it by adding sections, examples, or appendices, and return the complete expanded "
                     "document.\n";
        } else if (only_length) {
            prompt = base + "\n### Current Draft:\n" + text + "\n\n### Condense Request:\nThe draft has " +
                     std::to_string(n) + " words but must not exceed " + std::to_string(budget.max) +
                     ". Condense it and return the complete document.\n";
        } else {
            prompt = feedback_prompt(base, last, attempt + 1);
        }
    }
    throw Exhausted(std::move(last), ctx.regen.max_attempts, "generate_document");
}

// ---------------------------------------------------------------------------
// Instructions and responses

/// Which listing pair drives instruction/response generation.
enum class SourceKind { Document, Conversation };

struct InstructionOptions {
    bool canonicalize = true;  // enables the vague-phrase ban
    SourceKind source = SourceKind::Document;
};

inline const std::vector<std::string>& vague_phrases() {
    static const std::vector<std::string> v = {"about", "roughly", "approximately", "around"};
    return v;
}

inline const std::vector<std::string>& source_reference_terms() {
    static const std::vector<std::string> v = {"document", "text", "given", "provided", "source", "conversation", "passage"};
    return v;
}

inline ValidationReport check_instruction(const std::string& text, const PolicyConfig& policy, const InstructionOptions& opts) {
    ValidationReport r;
    const bool non_empty = !trim(text).empty();
    r.add("instruction", Rule::Content, non_empty, non_empty ? std::string{} : "the instruction is empty");
    const bool json = text.find("JSON") != std::string::npos;
    r.add("instruction:json", Rule::Content, json,
          json ? std::string{} : "the instruction must explicitly ask for the output in JSON format");
    const bool grounded = std::any_of(source_reference_terms().begin(), source_reference_terms().end(),
                                      [&](const std::string& t) { return contains_word_ci(text, t); });
    r.add("instruction:source", Rule::Content, grounded,
          grounded ? std::string{} : "the instruction must reference the given text as the sole source of truth");
    if (opts.canonicalize) {
        bool clean = true;
        for (const auto& v : vague_phrases()) {
            if (contains_word_ci(text, v)) {
                clean = false;
                r.add("instruction:vague", Rule::Content, false,
                      "the instruction uses the vague phrase \"" + v + "\"; state exact quantities");
            }
        }
        if (clean) r.add("instruction:vague", Rule::Content, true);
    }
    r.merge(check_format(text, {}, "instruction"));
    r.merge(check_policy(text, policy, {"instruction", false}));
    return r;
}

inline std::string generate_instruction(const std::string& source_text, const GenerationContext& ctx,
                                        const InstructionOptions& opts = {}, std::uint64_t rng_seed = 0) {
    if (trim(source_text).empty()) throw ConfigError("instruction source text is empty");
    const std::string prompt =
        opts.source == SourceKind::Document
            ? render(ctx.templates.pick_variant("create_long_context_doc_instr", rng_seed), {{"text", source_text}})
            : render(ctx.templates.pick_variant("create_conversation_instr", rng_seed), {{"conversation", source_text}});
    auto out = ctx.run(ctx.request(prompt), [&](const std::string& t) { return check_instruction(std::string(trim(t)), ctx.policy, opts); },
                       "generate_instruction");
    return std::string(trim(out.text));
}

struct ResponseOptions {
    bool require_json = true;
    const FieldSpec* schema = nullptr;  // validated when present
    SourceKind source = SourceKind::Document;
    std::size_t max_tokens = 0;         // 0 = ctx.max_output_tokens
};

inline ValidationReport check_response(const std::string& document, const std::string& text, const GenerationContext& ctx,
                                       const ResponseOptions& opts) {
    ValidationReport r;
    const bool non_empty = !trim(text).empty();
    r.add("response", Rule::Content, non_empty, non_empty ? std::string{} : "the response is empty");
    if (opts.require_json) {
        const auto parsed = parse_json_response(text);
        r.add("response:json", Rule::Parse, parsed.has_value(),
              parsed ? std::string{} : "the response is not parseable JSON");
        if (parsed && opts.schema) r.merge(validate_response(*opts.schema, *parsed));
    }
    r.merge(check_grounding(document, text));
    const std::size_t limit = opts.max_tokens ? opts.max_tokens : static_cast<std::size_t>(ctx.max_output_tokens);
    const std::size_t n = ctx.counter(text);
    r.add("response:length", Rule::Length, n <= limit,
          n <= limit ? std::string{}
                     : "the response has " + std::to_string(n) + " tokens; the limit is " + std::to_string(limit));
    r.merge(check_format(text, {}, "response"));
    r.merge(check_policy(text, ctx.policy, {"response", false}));
    return r;
}

inline std::string generate_response(const std::string& document, const std::string& instruction,
                                     const GenerationContext& ctx, const ResponseOptions& opts = {},
                                     std::uint64_t rng_seed = 0) {
    if (trim(document).empty() || trim(instruction).empty()) throw ConfigError("response inputs must be non-empty");
    const std::string prompt =
        opts.source == SourceKind::Document
            ? render(ctx.templates.pick_variant("create_long_context_doc_instr_resp", rng_seed),
                     {{"text", document}, {"instructions", instruction}})
            : render(ctx.templates.pick_variant("create_conversation_resp", rng_seed),
                     {{"conversation", document}, {"instructions", instruction}});
    auto out = ctx.run(ctx.request(prompt), [&](const std::string& t) { return check_response(document, t, ctx, opts); },
                       "generate_response");
    return strip_code_fence(out.text);
}

// ---------------------------------------------------------------------------
// Triplets

struct Triplet {
    std::string document;
    std::string instruction;
    std::string response;
    ScenarioText scenario;
    ValidationReport grounding_report;
    int document_attempts = 0;
    int expansions = 0;
};

inline Triplet generate_triplet(const ScenarioText& scenario, const TokenBudget& budget, const GenerationContext& ctx,
                                std::uint64_t rng_seed = 0, const InstructionOptions& iopts = {}) {
    Triplet t;
    t.scenario = scenario;
    auto doc = generate_document(scenario, budget, ctx, rng_seed);
    t.document = std::move(doc.text);
    t.document_attempts = doc.attempts;
    t.expansions = doc.expansions;
    t.instruction = generate_instruction(t.document, ctx, iopts, rng_seed);
    t.response = generate_response(t.document, t.instruction, ctx, {}, rng_seed);
    t.grounding_report = check_grounding(t.document, t.response);
    return t;
}

// ---------------------------------------------------------------------------
// Reasoning

struct ReasoningTrace {
    std::vector<std::string> steps;
    std::string final_answer;
};

struct ReasoningRecord {
    Triplet triplet;
    std::vector<std::string> trace;
    std::string final_answer;
};

inline constexpr std::string_view kStepByStepHint =
    "Think step-by-step. Write each reasoning step on its own numbered line (1., 2., 3., ...), citing figures "
    "exactly as they appear in the text, then finish with a line that starts with \"Final answer:\".";

/// Steps are lines starting "N." or "N)"; unnumbered lines continue the previous step.
/// The answer follows "Final answer:" (case-insensitive) and runs to the end of the text.
inline std::optional<ReasoningTrace> parse_trace(std::string_view text) {
    static const std::regex kStep(R"(^\s*[0-9]+[.)]\s+(.*\S)\s*$)");
    ReasoningTrace t;
    bool in_answer = false;
    bool saw_answer = false;
    for (auto line_view : split_lines(text)) {
        const std::string line(line_view);
        if (in_answer) {
            if (!trim(line).empty()) t.final_answer += (t.final_answer.empty() ? "" : "\n") + std::string(trim(line));
            continue;
        }
        const std::string lowered = to_lower_ascii(trim(line));
        if (lowered.rfind("final answer:", 0) == 0) {
            saw_answer = in_answer = true;
            t.final_answer = std::string(trim(std::string_view(trim(line)).substr(13)));
            continue;
        }
        std::smatch m;
        if (std::regex_match(line, m, kStep)) {
            t.steps.push_back(m[1].str());
        } else if (!trim(line).empty() && !t.steps.empty()) {
            t.steps.back() += " " + std::string(trim(line));
        }
    }
    if (t.steps.empty() || !saw_answer) return std::nullopt;
    return t;
}

inline ValidationReport check_trace(const std::string& document, const std::string& text, const PolicyConfig& policy) {
    ValidationReport r;
    const auto trace = parse_trace(text);
    r.add("trace", Rule::Parse, trace.has_value(),
          trace ? std::string{} : "the reasoning trace must use numbered steps followed by a \"Final answer:\" line");
    if (!trace) return r;
    const bool enough = trace->steps.size() >= 2;
    r.add("trace:steps", Rule::Structure, enough,
          enough ? std::string{} : "the reasoning trace needs at least two steps");
    bool distinct = true;
    for (std::size_t i = 1; i < trace->steps.size(); ++i) {
        if (to_lower_ascii(trim(trace->steps[i])) == to_lower_ascii(trim(trace->steps[i - 1]))) {
            distinct = false;
            r.add("trace:step" + std::to_string(i + 1), Rule::Content, false,
                  "step " + std::to_string(i + 1) + " repeats step " + std::to_string(i));
        }
    }
    if (distinct) r.add("trace:redundancy", Rule::Content, true);
    const bool answered = !trim(trace->final_answer).empty();
    r.add("trace:answer", Rule::Content, answered, answered ? std::string{} : "the final answer is empty");
    std::string surface;
    for (const auto& step : trace->steps) surface += step + "\n";
    surface += grounding_surface(trace->final_answer);
    r.merge(check_literals(document, surface));
    r.merge(check_format(text, {}, "trace"));
    r.merge(check_policy(text, policy, {"trace", false}));
    return r;
}

inline ReasoningRecord generate_reasoning_record(const ScenarioText& scenario, const TokenBudget& budget,
                                                 const GenerationContext& ctx, std::uint64_t rng_seed = 0) {
    ReasoningRecord rec;
    rec.triplet.scenario = scenario;
    auto doc = generate_document(scenario, budget, ctx, rng_seed);
    rec.triplet.document = std::move(doc.text);
    rec.triplet.document_attempts = doc.attempts;
    rec.triplet.expansions = doc.expansions;
    rec.triplet.instruction = generate_instruction(rec.triplet.document, ctx, {}, rng_seed) + "\n\n" + std::string(kStepByStepHint);

    const std::string prompt = render(ctx.templates.pick_variant("create_long_context_doc_instr_resp", rng_seed),
                                      {{"text", rec.triplet.document}, {"instructions", rec.triplet.instruction}});
    ValidatedCompletion out;
    try {
        out = ctx.gateway.complete_validated(
            ctx.request(prompt), [&](const std::string& t) { return check_trace(rec.triplet.document, t, ctx.policy); },
            ctx.regen);
    } catch (const Exhausted& e) {
        if (e.report().has_failure(Rule::Parse)) {
            throw TraceUnparseable("no parseable reasoning trace after " + std::to_string(e.attempts()) + " attempt(s)");
        }
        throw Exhausted(e.report(), e.attempts(), "generate_reasoning_record");
    }
    rec.triplet.response = std::string(trim(out.text));
    auto trace = parse_trace(rec.triplet.response);
    rec.triplet.grounding_report = check_trace(rec.triplet.document, rec.triplet.response, ctx.policy);
    rec.trace = trace->steps;
    rec.final_answer = trace->final_answer;
    return rec;
}

// ---------------------------------------------------------------------------
// Verifiable instruction-schema pairs

struct VerifiableResult {
    Triplet triplet;
    Json placeholder_schema;  // model-written <type> <bound> structure
    FieldSpec schema;         // compiled metadata schema
    ValidationReport schema_report;
    double reward = 0.0;
};

/// Derives a placeholder schema from an instruction/response pair, compiles it and requires
/// the response to conform. Returns the compiled schema.
inline std::pair<Json, FieldSpec> derive_schema(const std::string& instruction, const std::string& response,
                                                const GenerationContext& ctx, std::uint64_t rng_seed = 0) {
    const auto parsed_response = parse_json_response(response);
    if (!parsed_response) throw ConfigError("response must be JSON to derive a schema");
    const std::string prompt = render(ctx.templates.pick_variant("create_verifiable_instruction", rng_seed),
                                      {{"instructions", instruction}, {"response_json", strip_code_fence(response)}});
    auto check = [&](const std::string& text) {
        ValidationReport r;
        const auto j = parse_json_response(text);
        r.add("schema:json", Rule::Parse, j.has_value(), j ? std::string{} : "the schema is not parseable JSON");
        if (!j) return r;
        try {
            const FieldSpec spec = compile_schema(*j);
            r.add("schema:compile", Rule::Parse, true);
            r.merge(validate_response(spec, *parsed_response));
        } catch (const UnrecognizedSpec& e) {
            r.add("schema:compile", Rule::Parse, false, e.what());
        }
        return r;
    };
    auto out = ctx.run(ctx.request(prompt), check, "derive_schema");
    Json placeholders = *parse_json_response(out.text);
    FieldSpec spec = compile_schema(placeholders);
    return {std::move(placeholders), std::move(spec)};
}

inline VerifiableResult generate_verifiable(const ScenarioText& scenario, const TokenBudget& budget,
                                            const GenerationContext& ctx, std::uint64_t rng_seed = 0) {
    VerifiableResult v;
    v.triplet = generate_triplet(scenario, budget, ctx, rng_seed);
    auto [placeholders, spec] = derive_schema(v.triplet.instruction, v.triplet.response, ctx, rng_seed);
    v.placeholder_schema = std::move(placeholders);
    v.schema = std::move(spec);
    v.schema_report = validate_response(v.schema, *parse_json_response(v.triplet.response));
    v.reward = score_reward(v.schema_report);
    return v;
}

// ---------------------------------------------------------------------------
// Records

inline DataRecord triplet_record(const Triplet& t, const std::string& record_type, const GenerationContext& ctx) {
    DataRecord r;
    r.conversation = {Message{Role::User, "", std::nullopt, t.instruction},
                      Message{Role::Assistant, "", 1, t.response}};
    Json& m = r.metadata;
    m["record_type"] = record_type;
    m["business_scenario"] = t.scenario.seed.business_scenario;
    m["text_generation_guidance"] = t.scenario.seed.text_generation_guidance;
    m["instruction"] = t.instruction;
    m["response"] = t.response;
    m["model"] = ctx.model;
    m["input_token_length"] = ctx.counter(t.document) + ctx.counter(t.instruction);
    m["document"] = t.document;
    m["scenario"] = t.scenario.text;
    m["scenario_id"] = t.scenario.scenario_id;
    m["country"] = t.scenario.seed.country;
    m["n_assistants"] = 1;
    m["segments"] = 1;
    m["turns_per_segment"] = 2;
    m["token_counter"] = ctx.counter.name;
    m["document_token_count"] = ctx.counter(t.document);
    m["token_count"] = ctx.counter(t.instruction) + ctx.counter(t.response);
    m["document_attempts"] = t.document_attempts;
    m["expansions"] = t.expansions;
    m["grounding_report"] = report_to_json(t.grounding_report);
    m["variation_directives"] = t.scenario.variation_directives;
    return r;
}

inline DataRecord reasoning_record(const ReasoningRecord& rr, const GenerationContext& ctx) {
    DataRecord r = triplet_record(rr.triplet, "reasoning", ctx);
    r.metadata["reasoning_trace"] = rr.trace;
    r.metadata["final_answer"] = rr.final_answer;
    return r;
}

inline DataRecord verifiable_record(const VerifiableResult& v, const GenerationContext& ctx) {
    DataRecord r = triplet_record(v.triplet, "verifiable", ctx);
    r.metadata["verifiable_json_schema"] = schema_to_json(v.schema);
    r.metadata["placeholder_schema"] = v.placeholder_schema;
    r.metadata["schema_reward"] = v.reward;
    return r;
}

}  // namespace lcforge
