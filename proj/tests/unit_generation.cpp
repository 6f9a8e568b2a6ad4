#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "support.hpp"

using namespace lcforge;
using namespace lcforge::testing;

namespace {

/// Records every prompt so tests can inspect the feedback a retry carried.
struct PromptLog {
    std::mutex mu;
    std::vector<CompletionRequest> requests;
    void push(const CompletionRequest& r) {
        std::lock_guard lock(mu);
        requests.push_back(r);
    }
};

std::size_t clamp_len(const CompletionRequest& r, std::size_t want) {
    const std::size_t lo = static_cast<std::size_t>(std::max(1, r.min_output_tokens));
    const std::size_t hi = static_cast<std::size_t>(std::max(1, r.max_output_tokens));
    return std::clamp(want, std::min(lo, hi), hi);
}

/// Length inside the requested window, varied by prompt so turns differ.
std::string window_reply(const CompletionRequest& r) {
    const std::size_t lo = static_cast<std::size_t>(std::max(1, r.min_output_tokens));
    const std::size_t hi = static_cast<std::size_t>(std::max(1, r.max_output_tokens));
    if (lo >= hi) return words(hi);
    const std::size_t span = hi - lo + 1;
    return words(lo + std::hash<std::string>{}(r.prompt) % span);
}

ScenarioSeed seed_named(int i) {
    return ScenarioSeed{"scenario " + std::to_string(i), "guidance", "explanation", "Kenya"};
}

ChatConfig chat_config(int n, int k) {
    ChatConfig c;
    c.segments = n;
    c.turns_per_segment = k;
    c.budget = TokenBudget{200, 0, 2000, std::nullopt};
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// scenario-gen

TEST(SampleSeed, SingletonAlwaysReturnsOnlySeed) {
    const std::vector<ScenarioSeed> db{seed_named(0)};
    for (std::uint64_t s = 0; s < 50; ++s) EXPECT_EQ(sample_seed(db, s).business_scenario, "scenario 0");
}

TEST(SampleSeed, DeterministicPerSeed) {
    std::vector<ScenarioSeed> db;
    for (int i = 0; i < 10; ++i) db.push_back(seed_named(i));
    for (std::uint64_t s = 0; s < 100; ++s) {
        EXPECT_EQ(&sample_seed(db, s), &sample_seed(db, s));
    }
}

TEST(SampleSeed, UniformOverTenSeeds) {
    std::vector<ScenarioSeed> db;
    for (int i = 0; i < 10; ++i) db.push_back(seed_named(i));
    constexpr int kDraws = 20000;
    std::map<const ScenarioSeed*, int> hits;
    for (std::uint64_t s = 0; s < kDraws; ++s) ++hits[&sample_seed(db, s)];
    ASSERT_EQ(hits.size(), 10u);
    for (const auto& [p, n] : hits) EXPECT_NEAR(static_cast<double>(n) / kDraws, 0.1, 0.02);
}

TEST(SampleSeed, EmptyDatabaseThrows) {
    EXPECT_THROW(sample_seed({}, 1), EmptyDatabase);
}

TEST(SampleSeed, ShippedDatabaseLoads) {
    const auto db = load_scenario_db(samples_dir() / "scenarios.jsonl");
    EXPECT_EQ(db.size(), 5u);
}

TEST(GenerateScenario, BannedLocationForcesRegeneration) {
    PromptLog log;
    Harness h([&](const CompletionRequest& r) {
        log.push(r);
        return r.attempt == 0 ? std::string("A refund desk in Austin reorganises its queue.")
                              : std::string("A refund desk in Nairobi reorganises its queue.");
    });
    const ScenarioText s = generate_scenario(sample_seed_value(), h.ctx, 3);
    EXPECT_EQ(s.text, "A refund desk in Nairobi reorganises its queue.");
    EXPECT_FALSE(s.complexified);
    EXPECT_TRUE(is_hex64(s.scenario_id));
    ASSERT_EQ(log.requests.size(), 2u);
    EXPECT_NE(log.requests[1].prompt.find("Austin"), std::string::npos);
}

TEST(GenerateScenario, CjkForcesRegeneration) {
    int calls = 0;
    Harness h([&](const CompletionRequest& r) {
        ++calls;
        return r.attempt == 0 ? std::string("Refund desk \xE6\x9D\xB1\xE4\xBA\xAC branch.") : std::string("Refund desk branch.");
    });
    const ScenarioText s = generate_scenario(sample_seed_value(), h.ctx);
    EXPECT_EQ(s.text, "Refund desk branch.");
    EXPECT_EQ(calls, 2);
}

TEST(GenerateScenario, RecordsVariationDirectives) {
    Harness h([](const CompletionRequest&) { return std::string("A plain scenario."); });
    const ScenarioText s = generate_scenario(sample_seed_value(), h.ctx, 11, 3);
    EXPECT_EQ(s.variation_directives.size(), 3u);
}

TEST(Complexify, MustGrow) {
    Harness h([](const CompletionRequest&) { return words(5); });
    const ScenarioText base = generate_scenario(sample_seed_value(), h.ctx);
    EXPECT_EQ(count_words(base.text), 5u);
    try {
        complexify_scenario(base, h.ctx);
        FAIL() << "expected Exhausted";
    } catch (const Exhausted& e) {
        EXPECT_EQ(e.attempts(), 3);
        EXPECT_TRUE(e.report().has_failure(Rule::Length));
    }
}

TEST(Complexify, ForbiddenHeaderRegenerates) {
    Harness h([](const CompletionRequest& r) {
        if (r.prompt.find("complex") == std::string::npos && r.prompt.find("Complex") == std::string::npos) {
            return words(5);
        }
        return r.attempt == 0 ? "Transformed Scenario: " + words(30) : words(30);
    });
    ScenarioText base;
    base.seed = sample_seed_value();
    base.text = words(5);
    const ScenarioText c = complexify_scenario(base, h.ctx);
    EXPECT_TRUE(c.complexified);
    EXPECT_EQ(c.text, words(30));
    EXPECT_NE(c.scenario_id, make_scenario_id(base.seed, base.text));
}

TEST(Complexify, RejectsAlreadyComplexified) {
    Harness h([](const CompletionRequest&) { return words(50); });
    EXPECT_THROW(complexify_scenario(fixed_scenario(), h.ctx), ConfigError);
}

// ---------------------------------------------------------------------------
// chat-gen: participants and single turns

TEST(Participants, LocaleTablesCarryExpectedNames) {
    const auto& fr = locale_names("fr_FR");
    EXPECT_NE(std::find(fr.begin(), fr.end(), "Élodie Moreau"), fr.end());
    const auto& in = locale_names("en_IN");
    EXPECT_NE(std::find(in.begin(), in.end(), "Ananya Sharma"), in.end());
}

TEST(Participants, DistinctAndDeterministic) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        const Participants p = generate_participants("en_IN", 2, s);
        const auto all = p.all();
        ASSERT_EQ(all.size(), 3u);
        EXPECT_EQ(std::set<std::string>(all.begin(), all.end()).size(), 3u);
        EXPECT_EQ(p, generate_participants("en_IN", 2, s));
        const auto& table = locale_names("en_IN");
        for (const auto& n : all) EXPECT_NE(std::find(table.begin(), table.end(), n), table.end());
    }
}

TEST(Participants, UnknownLocaleThrows) {
    EXPECT_THROW(generate_participants("xx_XX", 1, 0), UnknownLocale);
}

TEST(NextTurn, RoleViolations) {
    Harness h;
    const ChatPlan plan = make_chat_plan(fixed_scenario(), chat_config(1, 2), h.templates);
    Conversation empty;
    TurnSpec assistant_first = detail::plan_turn(empty, plan, h.ctx.policy);
    assistant_first.role = Role::Assistant;
    assistant_first.assistant_index = 1;
    EXPECT_THROW(next_turn(empty, assistant_first, plan, h.ctx), RoleViolation);

    Conversation one;
    one.messages.push_back(Message{Role::User, "u", std::nullopt, "hello"});
    TurnSpec user_again = detail::plan_turn(empty, plan, h.ctx.policy);
    EXPECT_THROW(next_turn(one, user_again, plan, h.ctx), RoleViolation);

    TurnSpec no_index = detail::plan_turn(one, plan, h.ctx.policy);
    no_index.assistant_index.reset();
    EXPECT_THROW(next_turn(one, no_index, plan, h.ctx), RoleViolation);
}

TEST(NextTurn, HandoffWithoutAwarenessAsksUserToReexplain) {
    Harness h;
    ChatConfig c = chat_config(2, 2);
    c.n_assistants = 2;
    c.chat_type = ChatType::EscalationHandoff;
    Conversation hist;
    hist.messages = {Message{Role::User, "u", std::nullopt, "my refund"}, Message{Role::Assistant, "a", 1, "escalating"}};
    auto has_reexplain = [](const TurnSpec& t) {
        return std::any_of(t.directives.begin(), t.directives.end(),
                           [](const std::string& d) { return d.find("Re-explain") != std::string::npos; });
    };

    c.chat_awareness = false;
    const ChatPlan unaware = make_chat_plan(fixed_scenario(), c, h.templates);
    const TurnSpec t = detail::plan_turn(hist, unaware, h.ctx.policy);
    EXPECT_EQ(t.role, Role::User);
    EXPECT_TRUE(has_reexplain(t));

    c.chat_awareness = true;
    const ChatPlan aware = make_chat_plan(fixed_scenario(), c, h.templates);
    EXPECT_FALSE(has_reexplain(detail::plan_turn(hist, aware, h.ctx.policy)));
}

TEST(NextTurn, OverLongTurnRegeneratesUnderPerTurnCap) {
    PromptLog log;
    Harness h([&](const CompletionRequest& r) {
        log.push(r);
        return r.attempt == 0 ? words(30) : words(clamp_len(r, 8));
    });
    ChatConfig c = chat_config(1, 2);
    c.budget = TokenBudget{40, 0, 200, std::size_t{10}};
    const Conversation conv = generate_conversation(fixed_scenario(), c, h.ctx);
    ASSERT_EQ(conv.messages.size(), 2u);
    for (const auto& m : conv.messages) EXPECT_LE(count_words(m.content), 10u);
    ASSERT_EQ(log.requests.size(), 4u);
    EXPECT_NE(log.requests[1].prompt.find("shorten it to at most 10"), std::string::npos);
}

// ---------------------------------------------------------------------------
// chat-gen: segments and conversations

TEST(BuildSegment, RolesFollowK) {
    Harness h(window_reply);
    for (int k : {2, 4}) {
        const ChatPlan plan = make_chat_plan(fixed_scenario(), chat_config(1, k), h.templates);
        const Conversation seg = build_segment({}, plan, h.ctx, 0);
        ASSERT_EQ(seg.messages.size(), static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            EXPECT_EQ(seg.messages[i].role, i % 2 == 0 ? Role::User : Role::Assistant);
            EXPECT_EQ(seg.messages[i].assistant_index.has_value(), i % 2 == 1);
        }
    }
}

TEST(GenerateConversation, MessageCountAndTokenSum) {
    Harness h(window_reply);
    for (auto [n, k] : {std::pair{2, 2}, std::pair{3, 4}}) {
        const Conversation conv = generate_conversation(fixed_scenario(), chat_config(n, k), h.ctx);
        ASSERT_EQ(conv.messages.size(), static_cast<std::size_t>(n * k));
        std::size_t sum = 0;
        for (const auto& m : conv.messages) sum += count_words(m.content);
        EXPECT_EQ(conv.token_count, sum);
        EXPECT_TRUE(check_structure(conv).pass());
    }
}

TEST(GenerateConversation, StaysInsideBudgetWindow) {
    Harness h(window_reply);
    ChatConfig c = chat_config(2, 2);
    c.budget = TokenBudget{60, 40, 80, std::nullopt};
    for (std::uint64_t s = 0; s < 20; ++s) {
        c.rng_seed = s;
        const Conversation conv = generate_conversation(fixed_scenario(), c, h.ctx);
        EXPECT_GE(conv.token_count, 40u);
        EXPECT_LE(conv.token_count, 80u);
    }
}

TEST(GenerateConversation, ShortScriptIsExpandedToMinimum) {
    // Every first draft is two words; only the segment expansion can reach the floor.
    Harness h([](const CompletionRequest& r) { return r.min_output_tokens > 2 ? words(clamp_len(r, r.min_output_tokens)) : words(2); });
    ChatConfig c = chat_config(2, 2);
    c.budget = TokenBudget{60, 40, 80, std::nullopt};
    const Conversation conv = generate_conversation(fixed_scenario(), c, h.ctx);
    EXPECT_GE(conv.token_count, 40u);
    EXPECT_LE(conv.token_count, 80u);
}

TEST(GenerateConversation, BudgetTooSmallForTurns) {
    Harness h(window_reply);
    ChatConfig c = chat_config(3, 4);
    c.budget = TokenBudget{5, 0, 5, std::nullopt};
    EXPECT_THROW(generate_conversation(fixed_scenario(), c, h.ctx), BudgetOverflow);
}

TEST(GenerateConversation, EscalationSwitchesAssistantOnce) {
    PromptLog log;
    Harness h([&](const CompletionRequest& r) {
        log.push(r);
        return window_reply(r);
    });
    ChatConfig c = chat_config(3, 4);
    c.n_assistants = 2;
    c.chat_type = ChatType::EscalationHandoff;
    c.chat_awareness = false;
    const Conversation conv = generate_conversation(fixed_scenario(), c, h.ctx);
    std::vector<int> idx;
    for (const auto& m : conv.messages) {
        if (m.role == Role::Assistant) idx.push_back(*m.assistant_index);
    }
    ASSERT_EQ(idx.size(), 6u);
    EXPECT_EQ(idx, (std::vector<int>{1, 1, 1, 1, 2, 2}));
    int switches = 0;
    for (std::size_t i = 1; i < idx.size(); ++i) switches += idx[i] != idx[i - 1];
    EXPECT_EQ(switches, 1);
    const auto reexplain = std::count_if(log.requests.begin(), log.requests.end(), [](const CompletionRequest& r) {
        return r.prompt.find("Re-explain the issue") != std::string::npos;
    });
    EXPECT_GE(reexplain, 1);
}

TEST(GenerateConversation, EscalationSingleSegmentHandsOffMidway) {
    Harness h(window_reply);
    ChatConfig c = chat_config(1, 6);
    c.n_assistants = 2;
    c.chat_type = ChatType::EscalationHandoff;
    const Conversation conv = generate_conversation(fixed_scenario(), c, h.ctx);
    std::vector<int> idx;
    for (const auto& m : conv.messages) {
        if (m.assistant_index) idx.push_back(*m.assistant_index);
    }
    EXPECT_EQ(idx, (std::vector<int>{1, 1, 2}));
}

TEST(GenerateConversation, EscalationNeedsTwoAssistants) {
    ChatConfig c = chat_config(2, 2);
    c.chat_type = ChatType::EscalationHandoff;
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(GenerateConversation, DeterministicUnderMock) {
    ChatConfig c = chat_config(2, 4);
    c.rng_seed = 99;
    c.locale = "pt_BR";
    Harness a, b;
    const Conversation x = generate_conversation(fixed_scenario(), c, a.ctx);
    const Conversation y = generate_conversation(fixed_scenario(), c, b.ctx);
    EXPECT_EQ(x.messages, y.messages);
    const DataRecord rx = chat_record(x, fixed_scenario(), c, a.ctx);
    const DataRecord ry = chat_record(y, fixed_scenario(), c, b.ctx);
    EXPECT_EQ(record_id(rx), record_id(ry));
}

TEST(ChatRecord, InputTokensExcludeFinalReply) {
    Harness h(window_reply);
    const ChatConfig c = chat_config(2, 2);
    const Conversation conv = generate_conversation(fixed_scenario(), c, h.ctx);
    const DataRecord r = chat_record(conv, fixed_scenario(), c, h.ctx);
    EXPECT_EQ(r.metadata["input_token_length"].get<std::size_t>(),
              conv.token_count - count_words(conv.messages.back().content));
    EXPECT_EQ(r.metadata["token_count"].get<std::size_t>(), conv.token_count);
    EXPECT_EQ(r.conversation.size(), 4u);
}

// ---------------------------------------------------------------------------
// doc-gen: documents

TEST(GenerateDocument, ShortDraftIsExpandedOnce) {
    Harness h([](const CompletionRequest& r) {
        return r.prompt.find("Expand it by adding sections") != std::string::npos ? words(900) : words(300);
    });
    const TokenBudget b{1000, 800, 1200, std::nullopt};
    const DocumentResult d = generate_document(fixed_scenario(), b, h.ctx);
    EXPECT_EQ(count_words(d.text), 900u);
    EXPECT_EQ(d.expansions, 1);
    EXPECT_EQ(d.attempts, 2);
}

TEST(GenerateDocument, InWindowNeedsNoExpansion) {
    Harness h([](const CompletionRequest&) { return words(1000); });
    const DocumentResult d = generate_document(fixed_scenario(), TokenBudget{1000, 800, 1200, std::nullopt}, h.ctx);
    EXPECT_EQ(d.expansions, 0);
    EXPECT_EQ(d.attempts, 1);
}

TEST(GenerateDocument, NonEnglishScriptRegenerates) {
    PromptLog log;
    Harness h([&](const CompletionRequest& r) {
        log.push(r);
        return r.attempt == 0 ? words(1000) + " \xED\x95\x9C" : words(1000);
    });
    const DocumentResult d = generate_document(fixed_scenario(), TokenBudget{1000, 800, 1200, std::nullopt}, h.ctx);
    EXPECT_EQ(d.attempts, 2);
    EXPECT_EQ(d.expansions, 0);
    ASSERT_EQ(log.requests.size(), 2u);
    EXPECT_NE(log.requests[1].prompt.find("English"), std::string::npos);
}

TEST(GenerateDocument, NeverLongEnoughExhausts) {
    Harness h([](const CompletionRequest&) { return words(100); });
    EXPECT_THROW(generate_document(fixed_scenario(), TokenBudget{1000, 800, 1200, std::nullopt}, h.ctx), Exhausted);
}

TEST(GenerateDocument, LongDraftIsCondensed) {
    Harness h([](const CompletionRequest& r) { return r.attempt == 0 ? words(1500) : words(1100); });
    const DocumentResult d = generate_document(fixed_scenario(), TokenBudget{1000, 800, 1200, std::nullopt}, h.ctx);
    EXPECT_EQ(count_words(d.text), 1100u);
    EXPECT_EQ(d.expansions, 0);
}

// ---------------------------------------------------------------------------
// doc-gen: instructions and responses

TEST(Instruction, RequiresJsonAndConcreteWording) {
    const PolicyConfig p;
    EXPECT_TRUE(check_instruction("Using the given text, return a JSON object listing each refund amount.", p, {}).pass());
    EXPECT_FALSE(check_instruction("Using the given text, list each refund amount.", p, {}).pass());
    const auto vague = check_instruction("Using the given text, return JSON with roughly five refund amounts.", p, {});
    EXPECT_FALSE(vague.pass());
    EXPECT_TRUE(failed_at(vague, "instruction:vague"));
    EXPECT_FALSE(check_instruction("Return a JSON object with the refund amounts.", p, {}).pass());

    InstructionOptions loose;
    loose.canonicalize = false;
    EXPECT_TRUE(check_instruction("Using the given text, return JSON with roughly five refund amounts.", p, loose).pass());
}

TEST(Instruction, RegeneratesUntilAccepted) {
    int calls = 0;
    Harness h([&](const CompletionRequest& r) {
        ++calls;
        return r.attempt == 0 ? std::string("Summarise the given text.")
                              : std::string("From the given text, return a JSON object of refund amounts.");
    });
    EXPECT_EQ(generate_instruction(words(50), h.ctx), "From the given text, return a JSON object of refund amounts.");
    EXPECT_EQ(calls, 2);
}

TEST(Response, SchemaAccepted) {
    const FieldSpec schema = compile_schema(Json::parse(R"({"summary": "<string> <max 10 words>", "highlights": "<list>"})"));
    Harness h([](const CompletionRequest&) { return std::string(R"({"summary": "w1 w2", "highlights": ["w3"]})"); });
    ResponseOptions o;
    o.schema = &schema;
    const std::string resp = generate_response(words(20), "Return JSON from the given text.", h.ctx, o);
    EXPECT_TRUE(validate_response(schema, Json::parse(resp)).pass());
}

TEST(Response, MissingKeyFeedsRetry) {
    const FieldSpec schema = compile_schema(Json::parse(R"({"summary": "<string>", "highlights": "<list>"})"));
    PromptLog log;
    Harness h([&](const CompletionRequest& r) {
        log.push(r);
        return r.attempt == 0 ? std::string(R"({"summary": "w1 w2"})")
                              : std::string("```json\n{\"summary\": \"w1 w2\", \"highlights\": [\"w3\"]}\n```");
    });
    ResponseOptions o;
    o.schema = &schema;
    const std::string resp = generate_response(words(20), "Return JSON from the given text.", h.ctx, o);
    EXPECT_EQ(Json::parse(resp)["highlights"], Json::array({"w3"}));
    ASSERT_EQ(log.requests.size(), 2u);
    EXPECT_NE(log.requests[1].prompt.find("missing key"), std::string::npos);
    EXPECT_NE(log.requests[1].prompt.find("highlights"), std::string::npos);
}

TEST(Response, FabricatedNumberFailsGrounding) {
    Harness h;
    const std::string doc = "Refunds reached 4500 in March.";
    EXPECT_TRUE(check_response(doc, R"({"total": 4500})", h.ctx, {}).pass());
    const auto bad = check_response(doc, R"({"total": 9999})", h.ctx, {});
    EXPECT_FALSE(bad.pass());
    EXPECT_TRUE(bad.has_failure(Rule::Grounding));
}

TEST(Response, NonJsonFailsParse) {
    Harness h;
    EXPECT_TRUE(check_response("doc", "plain words", h.ctx, {}).has_failure(Rule::Parse));
    ResponseOptions free_text;
    free_text.require_json = false;
    EXPECT_TRUE(check_response("doc", "plain words", h.ctx, free_text).pass());
}

// ---------------------------------------------------------------------------
// grounding

TEST(Grounding, Examples) {
    EXPECT_TRUE(check_grounding("Invoice 123456 was paid.", "The invoice was 123456.").pass());
    EXPECT_TRUE(check_grounding("A fee of \xE2\x82\xAC" "4500 applies.", "The fee is \xE2\x82\xAC" "4,500.").pass());
    const auto r = check_grounding("Filed on 2030-12-31.", "Deadline: 2031-01-01.");
    EXPECT_FALSE(r.pass());
    EXPECT_TRUE(failed_at(r, "grounding:date:2031-01-01"));
    EXPECT_TRUE(check_grounding("Filed on 2031-01-01.", "Deadline: 2031-01-01.").pass());
    EXPECT_TRUE(check_grounding("No figures here.", "Nothing to cite.").pass());
}

TEST(Grounding, QuotedStringsMustAppear) {
    EXPECT_TRUE(check_grounding("The policy is called Fast Refund.", "It is named \"Fast Refund\".").pass());
    EXPECT_FALSE(check_grounding("The policy is called Fast Refund.", "It is named \"Slow Refund\".").pass());
}

TEST(Grounding, JsonKeysAreNotCited) {
    EXPECT_TRUE(check_grounding("Total 12.", R"({"q1_2024": 12})").pass());
}

TEST(Grounding, MonotoneInDocument) {
    Rng rng(17);
    int passing = 0;
    for (int i = 0; i < 300; ++i) {
        std::vector<std::string> nums;
        std::string doc, resp, extra;
        for (int j = 0; j < 4; ++j) {
            nums.push_back(std::to_string(rng.uniform_index(500)));
            doc += "v" + std::to_string(j) + " " + nums.back() + " ";
        }
        for (int j = 0; j < 2; ++j) {
            const bool cite = rng.uniform_index(4) != 0;
            resp += "cites " + (cite ? nums[rng.uniform_index(nums.size())] : std::to_string(rng.uniform_index(500))) + " ";
        }
        for (int j = 0; j < 3; ++j) extra += " " + std::to_string(rng.uniform_index(500));
        if (check_grounding(doc, resp).pass()) {
            ++passing;
            EXPECT_TRUE(check_grounding(doc + extra, resp).pass());
        }
    }
    EXPECT_GT(passing, 50);
}

// ---------------------------------------------------------------------------
// reasoning

TEST(Reasoning, ParsesNumberedSteps) {
    const auto t = parse_trace("1. Read the refund table.\n2) Sum 10 and 20.\n   carried over line\n3. Compare.\nFinal answer: 30");
    ASSERT_TRUE(t);
    ASSERT_EQ(t->steps.size(), 3u);
    EXPECT_EQ(t->steps[0], "Read the refund table.");
    EXPECT_NE(t->steps[1].find("carried over line"), std::string::npos);
    EXPECT_EQ(t->final_answer, "30");
    EXPECT_FALSE(parse_trace("just prose, no steps\nFinal answer: 3"));
    EXPECT_FALSE(parse_trace("1. a\n2. b"));
}

TEST(Reasoning, TraceChecks) {
    const PolicyConfig p;
    const std::string doc = "Refunds were 10 in May and 20 in June.";
    EXPECT_TRUE(check_trace(doc, "1. May had 10.\n2. June had 20.\nFinal answer: 20", p).pass());
    const auto dup = check_trace(doc, "1. May had 10.\n2. May had 10.\nFinal answer: 10", p);
    EXPECT_TRUE(dup.has_failure(Rule::Content));
    const auto fake = check_trace(doc, "1. May had 10.\n2. July had 70.\nFinal answer: 70", p);
    EXPECT_TRUE(fake.has_failure(Rule::Grounding));
    EXPECT_TRUE(check_trace(doc, "1. Only step.\nFinal answer: 10", p).has_failure(Rule::Structure));
    EXPECT_TRUE(check_trace(doc, "no structure", p).has_failure(Rule::Parse));
}

TEST(Reasoning, UnparseableTraceThrows) {
    Harness h([](const CompletionRequest& r) {
        if (r.prompt.find("Think step-by-step") != std::string::npos) return std::string("I just know the answer.");
        if (r.prompt.find("Based on the given text, create a detailed") != std::string::npos) {
            return std::string("From the given text, return a JSON object of refund totals.");
        }
        return words(1000);
    });
    EXPECT_THROW(generate_reasoning_record(fixed_scenario(), TokenBudget{1000, 800, 1200, std::nullopt}, h.ctx),
                 TraceUnparseable);
}

TEST(Reasoning, MockPlaybookProducesRecord) {
    Harness h(Playbook::from_json(read_json(samples_dir() / "playbook.json")));
    const ReasoningRecord rr = generate_reasoning_record(fixed_scenario(), TokenBudget{600, 400, 900, std::nullopt}, h.ctx, 5);
    EXPECT_GE(rr.trace.size(), 2u);
    EXPECT_FALSE(rr.final_answer.empty());
    const DataRecord rec = reasoning_record(rr, h.ctx);
    EXPECT_EQ(rec.metadata["record_type"], "reasoning");
    EXPECT_TRUE(rec.metadata.contains("reasoning_trace"));
}

TEST(Verifiable, MockPlaybookSchemaAcceptsResponse) {
    Harness h(Playbook::from_json(read_json(samples_dir() / "playbook.json")));
    const VerifiableResult v = generate_verifiable(fixed_scenario(), TokenBudget{600, 400, 900, std::nullopt}, h.ctx, 2);
    EXPECT_DOUBLE_EQ(v.reward, 1.0);
    EXPECT_TRUE(v.schema_report.pass());
    const DataRecord rec = verifiable_record(v, h.ctx);
    EXPECT_EQ(rec.metadata["record_type"], "verifiable");
    EXPECT_TRUE(rec.metadata.contains("verifiable_json_schema"));
}
