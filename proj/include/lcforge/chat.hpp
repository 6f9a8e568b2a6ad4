#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lcforge/context.hpp"
#include "lcforge/core.hpp"
#include "lcforge/error.hpp"
#include "lcforge/names.hpp"
#include "lcforge/rules.hpp"
#include "lcforge/scenario.hpp"
#include "lcforge/templating.hpp"

namespace lcforge {

enum class UserTone { Clear, Confused, Abusive, Disorganized };
enum class ChatType { UserAssistant, PeerChat, EscalationHandoff };

inline constexpr std::string_view user_tone_name(UserTone t) {
    switch (t) {
        case UserTone::Clear: return "clear";
        case UserTone::Confused: return "confused";
        case UserTone::Abusive: return "abusive";
        case UserTone::Disorganized: return "disorganized";
    }
    return "";
}

inline UserTone user_tone_from_name(std::string_view s) {
    for (UserTone t : {UserTone::Clear, UserTone::Confused, UserTone::Abusive, UserTone::Disorganized}) {
        if (user_tone_name(t) == s) return t;
    }
    throw ConfigError("unknown user_tone: " + std::string(s));
}

inline constexpr std::string_view chat_type_name(ChatType t) {
    switch (t) {
        case ChatType::UserAssistant: return "user_assistant";
        case ChatType::PeerChat: return "peer_chat";
        case ChatType::EscalationHandoff: return "escalation_handoff";
    }
    return "";
}

inline ChatType chat_type_from_name(std::string_view s) {
    for (ChatType t : {ChatType::UserAssistant, ChatType::PeerChat, ChatType::EscalationHandoff}) {
        if (chat_type_name(t) == s) return t;
    }
    throw ConfigError("unknown chat_type: " + std::string(s));
}

struct ChatConfig {
    int n_assistants = 1;
    int segments = 1;           // N
    int turns_per_segment = 2;  // K
    TokenBudget budget{400, 0, 4000, std::nullopt};
    UserTone user_tone = UserTone::Clear;
    bool chat_awareness = true;
    bool solution_status = true;
    std::string locale = "en_GB";
    std::string country;  // defaults to the locale's country
    std::uint64_t rng_seed = 0;
    ChatType chat_type = ChatType::UserAssistant;
    std::optional<int> handoff_segment;  // escalation: last segment served by assistant-1
    FormatRules format{};

    int total_messages() const { return segments * turns_per_segment; }
    int assistant_turns() const { return total_messages() / 2; }

    /// Segments 1..h are served by assistant-1; defaults to ceil(N/2).
    int effective_handoff_segment() const { return handoff_segment.value_or((segments + 1) / 2); }

    void validate() const {
        if (n_assistants < 1) throw ConfigError("n_assistants must be >= 1");
        if (segments < 1) throw ConfigError("segments (N) must be >= 1");
        if (turns_per_segment < 2 || turns_per_segment % 2 != 0) {
            throw ConfigError("turns_per_segment (K) must be a positive even number");
        }
        budget.validate();
        detail::locale_table(locale);
        if (chat_type == ChatType::EscalationHandoff) {
            if (n_assistants < 2) throw ConfigError("escalation_handoff needs n_assistants >= 2");
            if (assistant_turns() < 2) throw ConfigError("escalation_handoff needs at least two assistant turns");
            if (segments > 1) {
                const int h = effective_handoff_segment();
                if (h < 1 || h >= segments) throw ConfigError("handoff_segment must be in [1, N-1]");
            }
        }
    }
};

inline Json chat_config_to_json(const ChatConfig& c) {
    Json j = Json::object();
    j["n_assistants"] = c.n_assistants;
    j["segments"] = c.segments;
    j["turns_per_segment"] = c.turns_per_segment;
    j["budget"] = budget_to_json(c.budget);
    j["user_tone"] = std::string(user_tone_name(c.user_tone));
    j["chat_awareness"] = c.chat_awareness;
    j["solution_status"] = c.solution_status;
    j["locale"] = c.locale;
    j["country"] = c.country;
    j["rng_seed"] = c.rng_seed;
    j["chat_type"] = std::string(chat_type_name(c.chat_type));
    if (c.handoff_segment) j["handoff_segment"] = *c.handoff_segment;
    return j;
}

inline ChatConfig chat_config_from_json(const Json& j, ChatConfig c = {}) {
    c.n_assistants = j.value("n_assistants", c.n_assistants);
    c.segments = j.value("segments", c.segments);
    c.turns_per_segment = j.value("turns_per_segment", c.turns_per_segment);
    if (j.contains("budget")) c.budget = budget_from_json(j["budget"], c.budget);
    if (j.contains("user_tone")) c.user_tone = user_tone_from_name(j["user_tone"].get<std::string>());
    c.chat_awareness = j.value("chat_awareness", c.chat_awareness);
    c.solution_status = j.value("solution_status", c.solution_status);
    c.locale = j.value("locale", c.locale);
    c.country = j.value("country", c.country);
    c.rng_seed = j.value("rng_seed", c.rng_seed);
    if (j.contains("chat_type")) c.chat_type = chat_type_from_name(j["chat_type"].get<std::string>());
    if (j.contains("handoff_segment") && !j["handoff_segment"].is_null()) {
        c.handoff_segment = j["handoff_segment"].get<int>();
    }
    if (j.contains("format")) c.format = FormatRules::from_json(j["format"]);
    return c;
}

/// Which assistant (1-based) speaks the a-th assistant turn (0-based) of segment s (0-based).
inline int assistant_for_turn(const ChatConfig& c, int segment, int assistant_turn) {
    if (c.chat_type == ChatType::EscalationHandoff) {
        if (c.segments == 1) return assistant_turn < (c.assistant_turns() + 1) / 2 ? 1 : 2;
        return segment < c.effective_handoff_segment() ? 1 : 2;
    }
    return segment % c.n_assistants + 1;
}

// ---------------------------------------------------------------------------
// Turn function

/// Who speaks next and under which constraints.
struct TurnSpec {
    Role role = Role::User;
    std::string speaker_name;
    std::optional<int> assistant_index;
    std::string role_label;
    std::vector<std::string> directives;
    std::size_t min_words = 1;  // requested length range
    std::size_t max_words = 1;
    std::size_t cap = 1;        // hard per-turn limit
    bool enforce_min = false;   // expansion turns must reach min_words
};

/// Fixed inputs shared by every turn of one conversation.
struct ChatPlan {
    ScenarioText scenario;
    ChatConfig config;
    Participants participants;
    std::string base_prompt;  // rendered create_conversation
};

inline std::string tone_directive(UserTone t) {
    switch (t) {
        case UserTone::Clear: return "Write clearly and get to the point.";
        case UserTone::Confused:
            return "Sound confused: mix up details, second-guess yourself, and ask for clarification.";
        case UserTone::Abusive:
            return "Sound angry and impatient; use harsh, pushy language to demand what you want, without slurs.";
        case UserTone::Disorganized:
            return "Be disorganized: give unordered details, make spelling mistakes, and add noise such as an "
                   "email address, a URL, or irrelevant text.";
    }
    return "";
}

inline std::string role_label(const ChatConfig& c, Role role, std::optional<int> idx) {
    if (role == Role::User) return "user";
    if (c.chat_type == ChatType::PeerChat) return "peer " + std::to_string(*idx);
    if (c.chat_type == ChatType::EscalationHandoff) {
        return *idx == 1 ? "assistant-1 (L1 support)" : "assistant-" + std::to_string(*idx) + " (L2 support)";
    }
    return "assistant-" + std::to_string(*idx);
}

/// History as `"name": "utterance"` lines, the listing's output format.
inline std::string render_history(const Conversation& h) {
    if (h.messages.empty()) return "(no messages yet)";
    std::string out;
    for (const auto& m : h.messages) {
        if (!out.empty()) out += '\n';
        out += "\"" + m.speaker_name + "\": \"" + m.content + "\"";
    }
    return out;
}

/// Drops a leading speaker label and wrapping quotes the model may echo back.
inline std::string clean_turn_text(std::string_view raw, const std::vector<std::string>& names) {
    std::string_view t = trim(raw);
    for (const auto& name : names) {
        for (const std::string& label : {"\"" + name + "\":", name + ":"}) {
            if (t.substr(0, label.size()) == label) {
                t = trim(t.substr(label.size()));
                break;
            }
        }
    }
    if (!t.empty() && t.back() == ',') t = trim(t.substr(0, t.size() - 1));
    if (t.size() >= 2 && t.front() == '"' && t.back() == '"') t = trim(t.substr(1, t.size() - 2));
    return std::string(t);
}

inline std::string build_chat_base_prompt(const ChatPlan& plan, const TemplateRegistry& templates) {
    const auto& p = plan.participants;
    const auto& c = plan.config;
    Bindings b{
        {"country", c.country.empty() ? locale_country(c.locale) : c.country},
        {"conversation_scenario", plan.scenario.text},
        {"user_tone", std::string(user_tone_name(c.user_tone))},
        {"chat_awareness", c.chat_awareness ? "True" : "False"},
        {"solution_status", c.solution_status ? "True" : "False"},
        {"user_name", p.user_name},
        {"assistant_1_name", p.assistant_names.at(0)},
        {"assistant_2_name", p.assistant_names.size() > 1 ? p.assistant_names[1] : p.assistant_names[0]},
    };
    return render(templates.pick_variant("create_conversation", c.rng_seed), b);
}

inline std::string turn_prompt(const Conversation& history, const TurnSpec& spec, const ChatPlan& plan,
                               const TemplateRegistry& templates) {
    std::string directives;
    for (const auto& d : spec.directives) directives += "- " + d + "\n";
    Bindings b{
        {"chat_type", std::string(chat_type_name(plan.config.chat_type))},
        {"history", render_history(history)},
        {"speaker_name", spec.speaker_name},
        {"speaker_role", spec.role_label},
        {"turn_directives", directives.empty() ? "" : "Directives:\n" + directives},
        {"min_words", std::to_string(spec.min_words)},
        {"max_words", std::to_string(spec.max_words)},
    };
    return plan.base_prompt + "\n\n" + templates.render("chat_turn", b);
}

inline ValidationReport check_turn(const std::string& text, const TurnSpec& spec, const ChatPlan& plan,
                                   const GenerationContext& ctx) {
    ValidationReport r;
    const std::string path = "turn";
    const bool non_empty = !trim(text).empty();
    r.add(path, Rule::Structure, non_empty, non_empty ? std::string{} : "the message is empty");
    const std::size_t n = ctx.counter(text);
    const bool under = n <= spec.cap;
    r.add(path, Rule::Length, under,
          under ? std::string{}
                : "the message has " + std::to_string(n) + " tokens; shorten it to at most " +
                      std::to_string(spec.cap));
    if (spec.enforce_min) {
        const bool over = n >= spec.min_words;
        r.add(path, Rule::Length, over,
              over ? std::string{}
                   : "the message has " + std::to_string(n) + " tokens; expand it to at least " +
                         std::to_string(spec.min_words));
    }
    FormatRules fmt = plan.config.format;
    if (spec.role == Role::User) fmt.required_prefixes.clear(), fmt.required_suffixes.clear();
    r.merge(check_format(text, fmt, path));
    const bool noisy = spec.role == Role::User && plan.config.user_tone == UserTone::Disorganized;
    r.merge(check_policy(text, ctx.policy, {path, noisy}));
    return r;
}

/// m_{t+1} = g(H_t, r). The caller appends the result to the history.
inline Message next_turn(const Conversation& history, const TurnSpec& spec, const ChatPlan& plan,
                         const GenerationContext& ctx) {
    if (history.messages.empty() ? spec.role != Role::User : history.messages.back().role == spec.role) {
        throw RoleViolation("turn " + std::to_string(history.messages.size()) + " must not be spoken by the " +
                            std::string(role_name(spec.role)));
    }
    if ((spec.role == Role::Assistant) != spec.assistant_index.has_value()) {
        throw RoleViolation("assistant_index must be set exactly for assistant turns");
    }
    if (spec.cap < 1) throw BudgetOverflow("no token budget left for turn " + std::to_string(history.messages.size()));
    const auto names = plan.participants.all();
    auto req = ctx.request(turn_prompt(history, spec, plan, ctx.templates), static_cast<int>(spec.max_words),
                           static_cast<int>(spec.min_words));
    auto out = ctx.run(
        req, [&](const std::string& raw) { return check_turn(clean_turn_text(raw, names), spec, plan, ctx); },
        "next_turn");
    return Message{spec.role, spec.speaker_name, spec.assistant_index, clean_turn_text(out.text, names)};
}

// ---------------------------------------------------------------------------
// Segments and conversations

namespace detail {

inline std::size_t ceil_div(std::size_t a, std::size_t b) { return b == 0 ? 0 : (a + b - 1) / b; }

inline std::size_t turn_cap(const ChatConfig& c, const PolicyConfig& policy) {
    std::size_t cap = c.budget.max;
    if (c.budget.per_turn_max) cap = std::min(cap, *c.budget.per_turn_max);
    if (policy.per_turn_max) cap = std::min(cap, *policy.per_turn_max);
    return cap;
}

/// Upper bound for the message at `index` given tokens already used by the others,
/// reserving one token for each later message.
inline std::size_t remaining_cap(const ChatConfig& c, const PolicyConfig& policy, std::size_t used_by_others,
                                 std::size_t later_messages) {
    const std::size_t reserve = used_by_others + later_messages;
    if (reserve >= c.budget.max) return 0;
    return std::min(turn_cap(c, policy), c.budget.max - reserve);
}

/// Assistant index (1-based) of the assistant message at `message_index`.
inline int assistant_at(const ChatConfig& c, std::size_t message_index) {
    return assistant_for_turn(c, static_cast<int>(message_index) / c.turns_per_segment,
                              static_cast<int>(message_index / 2));
}

inline TurnSpec plan_turn(const Conversation& h, const ChatPlan& plan, const PolicyConfig& policy) {
    const ChatConfig& c = plan.config;
    const auto& p = plan.participants;
    const std::size_t index = h.messages.size();
    const std::size_t total = static_cast<std::size_t>(c.total_messages());
    const std::size_t remaining = total - index;  // including this one
    const bool escalation = c.chat_type == ChatType::EscalationHandoff;

    TurnSpec spec;
    spec.role = index % 2 == 0 ? Role::User : Role::Assistant;
    if (spec.role == Role::User) {
        spec.speaker_name = p.user_name;
        spec.directives.push_back(tone_directive(c.user_tone));
        if (index == 0) {
            spec.directives.push_back("Open the conversation with a goal-driven request grounded in the scenario.");
        }
        const bool before_handoff = escalation && index >= 2 && index + 1 < total &&
                                    assistant_at(c, index - 1) == 1 && assistant_at(c, index + 1) == 2;
        if (before_handoff && !c.chat_awareness) {
            spec.directives.push_back("You have just been transferred to " + p.assistant_names.at(1) +
                                      " (L2 support), who cannot see the earlier messages. Re-explain the issue "
                                      "from the start.");
        }
    } else {
        const int idx = assistant_at(c, index);
        spec.assistant_index = idx;
        spec.speaker_name = p.assistant_names.at(static_cast<std::size_t>(idx - 1));
        if (c.chat_type == ChatType::PeerChat) {
            spec.directives.push_back("Reply as a knowledgeable peer: friendly, precise, and helpful.");
        } else {
            spec.directives.push_back("Stay formal, polite, and patient. Ask only necessary and precise questions.");
        }
        if (escalation && idx == 2 && index >= 3 && assistant_at(c, index - 2) == 1) {
            spec.directives.push_back(c.chat_awareness
                                          ? "You are taking over from " + p.assistant_names[0] +
                                                " and have the full chat history; continue seamlessly."
                                          : "You are taking over from " + p.assistant_names[0] +
                                                " without the earlier chat history; rely on what the user re-explains.");
        }
        if (escalation && remaining == 1) {
            spec.directives.push_back(c.solution_status
                                          ? "Provide a convincing solution that resolves the issue."
                                          : "The issue remains unresolved; explain honestly what happens next.");
        }
    }
    spec.role_label = role_label(c, spec.role, spec.assistant_index);

    const std::size_t used = h.token_count;
    spec.cap = remaining_cap(c, policy, used, remaining - 1);
    const std::size_t need_min = c.budget.min > used ? ceil_div(c.budget.min - used, remaining) : 1;
    const std::size_t share = c.budget.target > used ? ceil_div(c.budget.target - used, remaining) : 1;
    spec.max_words = std::min(spec.cap, std::max(need_min, 2 * share));
    spec.min_words = std::max<std::size_t>(1, std::min(spec.max_words, need_min));
    return spec;
}

}  // namespace detail

inline ChatPlan make_chat_plan(const ScenarioText& scenario, const ChatConfig& config, const TemplateRegistry& templates) {
    config.validate();
    ChatPlan plan{scenario, config, generate_participants(config.locale, config.n_assistants, config.rng_seed), {}};
    if (plan.config.country.empty()) plan.config.country = locale_country(config.locale);
    plan.base_prompt = build_chat_base_prompt(plan, templates);
    return plan;
}

/// Appends one K-turn segment, then enforces the per-segment length floor by expanding
/// the segment's final assistant turn.
inline Conversation build_segment(Conversation history, const ChatPlan& plan, const GenerationContext& ctx, int segment) {
    const ChatConfig& c = plan.config;
    for (int k = 0; k < c.turns_per_segment; ++k) {
        const TurnSpec spec = detail::plan_turn(history, plan, ctx.policy);
        if (spec.cap < 1) {
            throw BudgetOverflow("turn " + std::to_string(history.messages.size()) +
                                 " cannot fit under budget.max = " + std::to_string(c.budget.max));
        }
        history.messages.push_back(next_turn(history, spec, plan, ctx));
        history.token_count += ctx.counter(history.messages.back().content);
    }

    const std::size_t floor = detail::ceil_div(c.budget.min * static_cast<std::size_t>(segment + 1),
                                               static_cast<std::size_t>(c.segments));
    for (int round = 0; round < ctx.regen.max_attempts && history.token_count < floor; ++round) {
        const std::size_t last = history.messages.size() - 1;
        const std::size_t last_len = ctx.counter(history.messages[last].content);
        const std::size_t others = history.token_count - last_len;
        const std::size_t later = static_cast<std::size_t>(c.total_messages()) - history.messages.size();
        Conversation prefix = history;
        prefix.messages.pop_back();
        prefix.token_count = others;

        TurnSpec spec = detail::plan_turn(prefix, plan, ctx.policy);
        spec.cap = detail::remaining_cap(c, ctx.policy, others, later);
        spec.min_words = std::min(spec.cap, floor - others);
        spec.max_words = std::max(spec.min_words, std::min(spec.cap, spec.min_words + spec.min_words / 4));
        spec.enforce_min = true;
        spec.directives.push_back("Your previous draft of this reply was too short for the conversation length "
                                  "target. Write an expanded reply with more specific detail.");
        if (spec.min_words <= last_len) break;
        try {
            history.messages[last] = next_turn(prefix, spec, plan, ctx);
        } catch (const Exhausted&) {
            break;  // the final validation reports the shortfall
        }
        history.recount(ctx.counter);
    }
    return history;
}

inline ValidationReport validate_conversation(const Conversation& conv, const ChatConfig& config,
                                              const PolicyConfig& policy, const TokenCounter& counter = {}) {
    ValidationReport r;
    r.merge(check_length(conv, config.budget, counter));
    r.merge(check_structure(conv));
    r.merge(check_format(conv, config.format));
    for (std::size_t i = 0; i < conv.messages.size(); ++i) {
        const bool noisy = conv.messages[i].role == Role::User && config.user_tone == UserTone::Disorganized;
        r.merge(check_policy(conv.messages[i].content, policy, {"messages[" + std::to_string(i) + "]", noisy}));
    }
    return r;
}

/// N segments of K turns stitched into one validated conversation.
inline Conversation generate_conversation(const ScenarioText& scenario, const ChatConfig& config,
                                          const GenerationContext& ctx) {
    const ChatPlan plan = make_chat_plan(scenario, config, ctx.templates);
    if (config.budget.max < static_cast<std::size_t>(config.total_messages())) {
        throw BudgetOverflow("budget.max = " + std::to_string(config.budget.max) + " cannot fit " +
                             std::to_string(config.total_messages()) + " non-empty turns");
    }
    Conversation conv;
    conv.scenario_id = scenario.scenario_id;
    conv.n_assistants = config.n_assistants;
    conv.segments = config.segments;
    conv.turns_per_segment = config.turns_per_segment;
    conv.seed = config.rng_seed;
    for (int s = 0; s < config.segments; ++s) conv = build_segment(std::move(conv), plan, ctx, s);
    conv.recount(ctx.counter);
    auto report = validate_conversation(conv, plan.config, ctx.policy, ctx.counter);
    if (!report.pass()) throw ValidationFailed(std::move(report));
    return conv;
}

/// Exported record for a finished conversation. Judge and validator keys are added later.
inline DataRecord chat_record(const Conversation& conv, const ScenarioText& scenario, const ChatConfig& config,
                              const GenerationContext& ctx) {
    const Participants p = generate_participants(config.locale, config.n_assistants, config.rng_seed);
    DataRecord r;
    r.conversation = conv.messages;
    Json& m = r.metadata;
    m["record_type"] = "chat";
    m["business_scenario"] = scenario.seed.business_scenario;
    m["text_generation_guidance"] = scenario.seed.text_generation_guidance;
    m["instruction"] = conv.messages.empty() ? std::string{} : conv.messages.front().content;
    m["response"] = conv.messages.empty() ? std::string{} : conv.messages.back().content;
    m["model"] = ctx.model;
    std::size_t input_tokens = conv.token_count;
    if (!conv.messages.empty()) input_tokens -= ctx.counter(conv.messages.back().content);
    m["input_token_length"] = input_tokens;
    m["scenario"] = scenario.text;
    m["scenario_id"] = conv.scenario_id;
    m["country"] = config.country.empty() ? locale_country(config.locale) : config.country;
    m["locale"] = config.locale;
    m["chat_type"] = std::string(chat_type_name(config.chat_type));
    m["user_tone"] = std::string(user_tone_name(config.user_tone));
    m["chat_awareness"] = config.chat_awareness;
    m["solution_status"] = config.solution_status;
    m["n_assistants"] = conv.n_assistants;
    m["segments"] = conv.segments;
    m["turns_per_segment"] = conv.turns_per_segment;
    if (config.chat_type == ChatType::EscalationHandoff) m["handoff_segment"] = config.effective_handoff_segment();
    m["participants"] = Json{{"user", p.user_name}, {"assistants", p.assistant_names}};
    m["seeds"] = Json{{"record", conv.seed}};
    m["token_counter"] = ctx.counter.name;
    m["token_count"] = conv.token_count;
    Json per_turn = Json::array();
    for (const auto& msg : conv.messages) per_turn.push_back(ctx.counter(msg.content));
    m["turn_token_counts"] = per_turn;
    m["budget"] = budget_to_json(config.budget);
    m["variation_directives"] = scenario.variation_directives;
    return r;
}

}  // namespace lcforge
