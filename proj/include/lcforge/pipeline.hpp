#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "lcforge/chat.hpp"
#include "lcforge/context.hpp"
#include "lcforge/core.hpp"
#include "lcforge/docgen.hpp"
#include "lcforge/error.hpp"
#include "lcforge/gateway.hpp"
#include "lcforge/http_backend.hpp"
#include "lcforge/judge.hpp"
#include "lcforge/rules.hpp"
#include "lcforge/scenario.hpp"
#include "lcforge/store.hpp"
#include "lcforge/templating.hpp"

namespace lcforge {

enum class Modality { Chat, Doc, Verifiable, Reasoning };
enum class BackendKind { Mock, Http };

inline constexpr std::string_view modality_name(Modality m) {
    switch (m) {
        case Modality::Chat: return "chat";
        case Modality::Doc: return "doc";
        case Modality::Verifiable: return "verifiable";
        case Modality::Reasoning: return "reasoning";
    }
    return "";
}

inline Modality modality_from_name(std::string_view s) {
    for (Modality m : {Modality::Chat, Modality::Doc, Modality::Verifiable, Modality::Reasoning}) {
        if (modality_name(m) == s) return m;
    }
    throw ConfigError("unknown modality: " + std::string(s));
}

inline BackendKind backend_from_name(std::string_view s) {
    if (s == "mock") return BackendKind::Mock;
    if (s == "http") return BackendKind::Http;
    throw ConfigError("unknown backend: " + std::string(s));
}

/// Exit codes shared by the pipeline and the CLI.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitConfig = 2, kExitExhausted = 3 };

struct RunConfig {
    Modality modality = Modality::Chat;
    int count = 1;
    std::uint64_t seed = 0;
    BackendKind backend = BackendKind::Mock;
    std::string playbook;   // mock
    std::string endpoint;   // http
    std::string model = "mock-generator";
    ChatConfig chat{};
    TokenBudget budget{600, 400, 900, std::nullopt};  // documents
    PolicyConfig policy{};
    FormatRules format{};
    bool judge_enabled = false;
    std::string judge_model = "mock-judge";
    double judge_threshold = 3.0;
    std::string output_path = "out.jsonl";
    int workers = 1;
    std::string scenario_db;
    std::string templates_dir;  // optional overrides on top of the built-in templates
    bool complexify = true;
    int max_attempts = 3;

    void validate() const {
        if (count < 1) throw ConfigError("count must be positive");
        if (workers < 1) throw ConfigError("workers must be positive");
        if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
        if (backend == BackendKind::Mock && playbook.empty()) throw ConfigError("backend=mock requires a playbook path");
        if (backend == BackendKind::Http) {
            if (endpoint.empty()) throw ConfigError("backend=http requires an endpoint URL");
            const char* key = std::getenv(kApiKeyEnv);
            if (key == nullptr || *key == '\0') throw ConfigError(std::string("backend=http requires ") + kApiKeyEnv);
        }
        if (scenario_db.empty()) throw ConfigError("scenario_db is required");
        if (output_path.empty()) throw ConfigError("output_path is required");
        if (judge_enabled && judge_model == model) throw ModelRoleConflict(judge_model);
        budget.validate();
        if (modality == Modality::Chat) chat.validate();
    }
};

inline RunConfig run_config_from_json(const Json& j, RunConfig c = {}) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    try {
        if (j.contains("modality")) c.modality = modality_from_name(j["modality"].get<std::string>());
        c.count = j.value("count", c.count);
        c.seed = j.value("seed", c.seed);
        if (j.contains("backend")) c.backend = backend_from_name(j["backend"].get<std::string>());
        c.playbook = j.value("playbook", c.playbook);
        c.endpoint = j.value("endpoint", c.endpoint);
        c.model = j.value("model", c.model);
        if (j.contains("chat")) c.chat = chat_config_from_json(j["chat"], c.chat);
        if (j.contains("budget")) c.budget = budget_from_json(j["budget"], c.budget);
        if (j.contains("policy")) c.policy = PolicyConfig::from_json(j["policy"]);
        if (j.contains("format")) c.format = FormatRules::from_json(j["format"]);
        c.judge_enabled = j.value("judge_enabled", c.judge_enabled);
        c.judge_model = j.value("judge_model", c.judge_model);
        c.judge_threshold = j.value("judge_threshold", c.judge_threshold);
        c.output_path = j.value("output_path", c.output_path);
        c.workers = j.value("workers", c.workers);
        c.scenario_db = j.value("scenario_db", c.scenario_db);
        c.templates_dir = j.value("templates_dir", c.templates_dir);
        c.complexify = j.value("complexify", c.complexify);
        c.max_attempts = j.value("max_attempts", c.max_attempts);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    return c;
}

inline Json run_config_to_json(const RunConfig& c) {
    return Json{{"modality", modality_name(c.modality)},
                {"count", c.count},
                {"seed", c.seed},
                {"backend", c.backend == BackendKind::Mock ? "mock" : "http"},
                {"playbook", c.playbook},
                {"endpoint", c.endpoint},
                {"model", c.model},
                {"chat", chat_config_to_json(c.chat)},
                {"budget", budget_to_json(c.budget)},
                {"policy", c.policy.to_json()},
                {"judge_enabled", c.judge_enabled},
                {"judge_model", c.judge_model},
                {"judge_threshold", c.judge_threshold},
                {"output_path", c.output_path},
                {"workers", c.workers},
                {"scenario_db", c.scenario_db},
                {"templates_dir", c.templates_dir},
                {"complexify", c.complexify},
                {"max_attempts", c.max_attempts}};
}

inline std::shared_ptr<Backend> make_backend(const RunConfig& c) {
    if (c.backend == BackendKind::Mock) return std::make_shared<MockBackend>(Playbook::load(c.playbook));
    return std::make_shared<HttpBackend>(HttpBackend::from_env(c.endpoint));
}

inline TemplateRegistry make_templates(const RunConfig& c) {
    TemplateRegistry t = TemplateRegistry::defaults();
    if (!c.templates_dir.empty()) t.load_directory(c.templates_dir);
    return t;
}

/// Budget that run_all checks for this modality.
inline const TokenBudget& validation_budget(const RunConfig& c) {
    return c.modality == Modality::Chat ? c.chat.budget : c.budget;
}

/// One record through its modality pipeline, validated and (optionally) judged. The record
/// seed is derive_seed(config.seed, index); nothing else feeds randomness.
inline DataRecord generate_record(const RunConfig& cfg, std::size_t index, const std::vector<ScenarioSeed>& db,
                                  const GenerationContext& ctx) {
    const std::uint64_t rs = derive_seed(cfg.seed, static_cast<std::uint64_t>(index));
    const ScenarioSeed& seed = sample_seed(db, rs);
    ScenarioText scenario = generate_scenario(seed, ctx, derive_seed(rs, "scenario"));
    if (cfg.complexify) scenario = complexify_scenario(scenario, ctx, derive_seed(rs, "complexify"));

    DataRecord record;
    switch (cfg.modality) {
        case Modality::Chat: {
            ChatConfig c = cfg.chat;
            c.rng_seed = rs;
            c.format = cfg.format;
            record = chat_record(generate_conversation(scenario, c, ctx), scenario, c, ctx);
            break;
        }
        case Modality::Doc:
            record = triplet_record(generate_triplet(scenario, cfg.budget, ctx, rs), "document", ctx);
            break;
        case Modality::Verifiable:
            record = verifiable_record(generate_verifiable(scenario, cfg.budget, ctx, rs), ctx);
            break;
        case Modality::Reasoning:
            record = reasoning_record(generate_reasoning_record(scenario, cfg.budget, ctx, rs), ctx);
            break;
    }
    record.metadata["seeds"] = Json{{"run", cfg.seed}, {"index", index}, {"record", rs}};

    auto report = run_all(record, validation_budget(cfg), cfg.policy, cfg.format, ctx.counter);
    if (!report.pass()) throw ValidationFailed(std::move(report));

    if (cfg.judge_enabled) {
        JudgeOptions jo;
        jo.judge_model = cfg.judge_model;
        jo.threshold = cfg.judge_threshold;
        jo.regen = ctx.regen;
        evaluate(record, ctx.gateway, ctx.templates, jo);
    }
    assign_id(record);
    return record;
}

struct RecordFailure {
    std::size_t index = 0;
    std::string kind;  // "validation" | "exhausted" | "error"
    std::string message;
};

struct RunSummary {
    std::size_t requested = 0;
    std::size_t produced = 0;
    std::vector<RecordFailure> failures;
    CorpusStats stats;

    int exit_code() const {
        bool exhausted = false, invalid = false;
        for (const auto& f : failures) {
            if (f.kind == "exhausted") exhausted = true;
            else invalid = true;
        }
        if (exhausted) return kExitExhausted;
        if (invalid) return kExitValidation;
        return kExitOk;
    }
};

inline Json summary_to_json(const RunSummary& s) {
    Json failures = Json::array();
    for (const auto& f : s.failures) failures.push_back(Json{{"index", f.index}, {"kind", f.kind}, {"message", f.message}});
    return Json{{"requested", s.requested},
                {"produced", s.produced},
                {"exit_code", s.exit_code()},
                {"failures", failures},
                {"stats", stats_to_json(s.stats)}};
}

/// Generates `count` records on a worker pool and appends them to the output in index order.
/// Records that fail are reported, not stored.
inline RunSummary run_pipeline(const RunConfig& cfg, Gateway& gateway, const TemplateRegistry& templates) {
    cfg.validate();
    const auto db = load_scenario_db(cfg.scenario_db);
    if (db.empty()) throw EmptyDatabase();

    GenerationContext ctx{gateway, templates};
    ctx.regen.max_attempts = cfg.max_attempts;
    ctx.policy = cfg.policy;
    ctx.model = cfg.model;

    const auto n = static_cast<std::size_t>(cfg.count);
    std::vector<std::variant<std::monostate, DataRecord, RecordFailure>> slots(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                slots[i] = generate_record(cfg, i, db, ctx);
            } catch (const Exhausted& e) {
                slots[i] = RecordFailure{i, "exhausted", e.what()};
            } catch (const ValidationFailed& e) {
                slots[i] = RecordFailure{i, "validation", e.what()};
            } catch (const Error& e) {
                slots[i] = RecordFailure{i, "error", e.what()};
            }
        }
    };
    std::vector<std::thread> pool;
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), n);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    RunSummary summary;
    summary.requested = n;
    JsonlStore store(cfg.output_path, StoreMode::Append);
    std::vector<DataRecord> produced;
    for (std::size_t i = 0; i < n; ++i) {
        auto& slot = slots[i];
        if (auto* r = std::get_if<DataRecord>(&slot)) {
            try {
                store.append(*r);
                produced.push_back(std::move(*r));
            } catch (const DuplicateId& e) {
                summary.failures.push_back({i, "error", e.what()});
            }
        } else if (auto* f = std::get_if<RecordFailure>(&slot)) {
            summary.failures.push_back(std::move(*f));
        }
    }
    summary.produced = produced.size();
    summary.stats = stats(produced);
    return summary;
}

}  // namespace lcforge
