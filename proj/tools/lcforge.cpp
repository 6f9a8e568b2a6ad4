#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lcforge/lcforge.hpp"

namespace {

using namespace lcforge;

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoFailure("cannot write " + path);
    out << text;
}

int report_error(const std::string& kind, const std::string& message, int code) {
    std::cerr << dump_compact(Json{{"error", kind}, {"message", message}, {"exit_code", code}}) << "\n";
    return code;
}

/// Flags shared by subcommands that talk to a backend. Unset flags leave the config untouched.
struct BackendFlags {
    std::string config;
    std::optional<std::string> backend, playbook, endpoint, model, judge_model, scenarios, templates;
    std::optional<int> max_attempts;

    void attach(CLI::App* app) {
        app->add_option("--config", config, "JSON config mirroring RunConfig");
        app->add_option("--backend", backend, "mock | http")->check(CLI::IsMember({"mock", "http"}));
        app->add_option("--playbook", playbook, "mock backend playbook (JSON)");
        app->add_option("--endpoint", endpoint, "chat-completions URL for the http backend");
        app->add_option("--model", model, "generation model id");
        app->add_option("--judge-model", judge_model, "judge model id");
        app->add_option("--scenarios", scenarios, "scenario seed database (JSONL)");
        app->add_option("--templates", templates, "directory of template overrides");
        app->add_option("--max-attempts", max_attempts, "regeneration attempts per stage");
    }

    RunConfig resolve() const {
        RunConfig c = config.empty() ? RunConfig{} : run_config_from_json(read_json_file(config));
        if (backend) c.backend = backend_from_name(*backend);
        if (playbook) c.playbook = *playbook;
        if (endpoint) c.endpoint = *endpoint;
        if (model) c.model = *model;
        if (judge_model) c.judge_model = *judge_model;
        if (scenarios) c.scenario_db = *scenarios;
        if (templates) c.templates_dir = *templates;
        if (max_attempts) c.max_attempts = *max_attempts;
        return c;
    }
};

/// Accepts the metadata dialect or, failing that, a placeholder structure.
FieldSpec load_schema(const std::string& path) {
    const Json j = read_json_file(path);
    try {
        return schema_from_json(j);
    } catch (const UnrecognizedSpec&) {
        return compile_schema(j);
    }
}

int cmd_gen(const std::string& modality, const BackendFlags& flags, std::optional<int> count,
            std::optional<std::uint64_t> seed, std::optional<std::string> out, std::optional<int> workers, bool judge) {
    RunConfig c = flags.resolve();
    c.modality = modality_from_name(modality);
    if (count) c.count = *count;
    if (seed) c.seed = *seed;
    if (out) c.output_path = *out;
    if (workers) c.workers = *workers;
    if (judge || flags.judge_model) c.judge_enabled = true;
    c.validate();

    Gateway gateway(make_backend(c));
    const TemplateRegistry templates = make_templates(c);
    const RunSummary summary = run_pipeline(c, gateway, templates);
    std::cout << summary_to_json(summary).dump(2) << "\n";
    return summary.exit_code();
}

int cmd_schema_compile(const std::string& in, const std::string& out) {
    const std::string text = schema_to_json(compile_schema(read_json_file(in))).dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        write_text(out, text);
    }
    return kExitOk;
}

int cmd_validate(const std::string& records_path, const std::string& schema_path, const std::string& config_path) {
    const RunConfig c = config_path.empty() ? RunConfig{} : run_config_from_json(read_json_file(config_path));
    std::optional<FieldSpec> schema;
    if (!schema_path.empty()) schema = load_schema(schema_path);

    auto records = load_records(records_path);
    std::size_t failed = 0;
    for (auto& r : records) {
        const TokenBudget& budget = record_type(r) == "chat" ? c.chat.budget : c.budget;
        ValidationReport rep = run_all(r, budget, c.policy, c.format);
        if (schema) {
            const auto response = parse_json_response(r.metadata.value("response", std::string{}));
            if (response) {
                rep.merge(validate_response(*schema, *response));
            } else {
                rep.add("response", Rule::Parse, false, "response is not JSON");
            }
        }
        const bool ok = rep.pass();
        if (!ok) ++failed;
        std::string first;
        for (const auto& ch : rep.checks) {
            if (!ch.pass) {
                first = ch.path + ": " + ch.detail;
                break;
            }
        }
        std::cout << (r.id.empty() ? std::string("(no id)") : r.id.substr(0, 12)) << "\t" << (ok ? "PASS" : "FAIL") << "\t"
                  << rep.passed() << "/" << rep.checks.size() << (first.empty() ? "" : "\t" + first) << "\n";
    }
    std::cout << "records: " << records.size() << "  failed: " << failed << "\n";
    return failed ? kExitValidation : kExitOk;
}

int cmd_judge(const std::string& records_path, const std::string& out, const BackendFlags& flags,
              std::optional<double> threshold) {
    RunConfig c = flags.resolve();
    if (threshold) c.judge_threshold = *threshold;
    if (c.backend == BackendKind::Mock && c.playbook.empty()) throw ConfigError("backend=mock requires a playbook path");
    Gateway gateway(make_backend(c));
    const TemplateRegistry templates = make_templates(c);
    JudgeOptions jo;
    jo.judge_model = c.judge_model;
    jo.threshold = c.judge_threshold;
    jo.regen.max_attempts = c.max_attempts;

    auto records = load_records(records_path);
    JsonlStore store(out, StoreMode::Append);
    std::size_t rejected = 0;
    for (auto& r : records) {
        const JudgeVerdict v = evaluate(r, gateway, templates, jo);
        if (!accepted(v.aggregate, jo.threshold)) ++rejected;
        std::cout << r.id.substr(0, 12) << "\t" << v.aggregate << "\t" << r.metadata["judge_status"].get<std::string>() << "\n";
        store.append(r);
    }
    std::cout << "judged: " << records.size() << "  rejected: " << rejected << "\n";
    return kExitOk;
}

int cmd_stats(const std::string& records_path) {
    std::cout << stats_to_json(stats(load_records(records_path))).dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lcforge: synthetic long-context data generation"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate records for one modality");
    std::string modality;
    BackendFlags gen_flags;
    std::optional<int> count, workers;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool judge = false;
    gen->add_option("modality", modality, "chat | doc | verifiable | reasoning")
        ->required()
        ->check(CLI::IsMember({"chat", "doc", "verifiable", "reasoning"}));
    gen_flags.attach(gen);
    gen->add_option("--count", count, "records to generate");
    gen->add_option("--seed", seed, "run seed");
    gen->add_option("--out", out, "output JSONL (appended)");
    gen->add_option("--workers", workers, "worker threads");
    gen->add_flag("--judge", judge, "judge each record before storing");

    auto* schema = app.add_subcommand("schema", "schema utilities");
    schema->require_subcommand(1);
    auto* compile = schema->add_subcommand("compile", "compile a placeholder structure into a metadata schema");
    std::string schema_in, schema_out;
    compile->add_option("--in", schema_in, "placeholder JSON")->required();
    compile->add_option("--out", schema_out, "write here instead of stdout");

    auto* validate = app.add_subcommand("validate", "run rule validators over stored records");
    std::string v_records, v_schema, v_config;
    validate->add_option("--records", v_records, "records JSONL")->required();
    validate->add_option("--schema", v_schema, "metadata schema or placeholder structure");
    validate->add_option("--config", v_config, "config supplying budget, policy and format rules");

    auto* judge_cmd = app.add_subcommand("judge", "score stored records with the judge model");
    std::string j_records, j_out;
    BackendFlags judge_flags;
    std::optional<double> threshold;
    judge_cmd->add_option("--records", j_records, "records JSONL")->required();
    judge_cmd->add_option("--out", j_out, "judged records JSONL")->required();
    judge_cmd->add_option("--threshold", threshold, "minimum accepted judge_score");
    judge_flags.attach(judge_cmd);

    auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
    std::string s_records;
    stats_cmd->add_option("--records", s_records, "records JSONL")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*gen) return cmd_gen(modality, gen_flags, count, seed, out, workers, judge);
        if (*compile) return cmd_schema_compile(schema_in, schema_out);
        if (*validate) return cmd_validate(v_records, v_schema, v_config);
        if (*judge_cmd) return cmd_judge(j_records, j_out, judge_flags, threshold);
        if (*stats_cmd) return cmd_stats(s_records);
    } catch (const Exhausted& e) {
        return report_error("Exhausted", e.what(), kExitExhausted);
    } catch (const ValidationFailed& e) {
        return report_error("ValidationFailed", e.what(), kExitValidation);
    } catch (const UnrecognizedSpec& e) {
        return report_error("UnrecognizedSpec", e.what(), kExitConfig);
    } catch (const BackendError& e) {
        return report_error("BackendError", e.what(), kExitExhausted);
    } catch (const Error& e) {
        return report_error("Error", e.what(), kExitConfig);
    }
    return kExitConfig;
}
