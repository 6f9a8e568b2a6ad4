// core-model, templating and llm-gateway.

#include <gtest/gtest.h>

#include <httplib.h>

#include <array>
#include <cstring>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "support.hpp"

using namespace lcforge;
using namespace lcforge::testing;

namespace {

// Independent SHA-256 (FIPS 180-4), used only as a cross-check for the OpenSSL-backed digest.
std::string ref_sha256(std::string_view msg) {
    static constexpr std::array<std::uint32_t, 64> k = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01,
        0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc,
        0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85,
        0xa2bfe8a1, 0xa81a664b, 0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116, 0x1e376c08,
        0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    std::array<std::uint32_t, 8> h = {0x6a09e667, 0xbb67ae85, 0x3c6ef372, 0xa54ff53a,
                                      0x510e527f, 0x9b05688c, 0x1f83d9ab, 0x5be0cd19};
    auto rotr = [](std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); };
    std::string m(msg);
    const std::uint64_t bits = static_cast<std::uint64_t>(msg.size()) * 8;
    m += static_cast<char>(0x80);
    while (m.size() % 64 != 56) m += '\0';
    for (int i = 7; i >= 0; --i) m += static_cast<char>((bits >> (i * 8)) & 0xff);
    for (std::size_t off = 0; off < m.size(); off += 64) {
        std::array<std::uint32_t, 64> w{};
        for (int i = 0; i < 16; ++i) {
            w[i] = (std::uint32_t(std::uint8_t(m[off + 4 * i])) << 24) | (std::uint32_t(std::uint8_t(m[off + 4 * i + 1])) << 16) |
                   (std::uint32_t(std::uint8_t(m[off + 4 * i + 2])) << 8) | std::uint32_t(std::uint8_t(m[off + 4 * i + 3]));
        }
        for (int i = 16; i < 64; ++i) {
            const auto s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const auto s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto [a, b, c, d, e, f, g, hh] = h;
        for (int i = 0; i < 64; ++i) {
            const auto t1 = hh + (rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25)) + ((e & f) ^ (~e & g)) + k[i] + w[i];
            const auto t2 = (rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22)) + ((a & b) ^ (a & c) ^ (b & c));
            hh = g; g = f; f = e; e = d + t1; d = c; c = b; b = a; a = t1 + t2;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d; h[4] += e; h[5] += f; h[6] += g; h[7] += hh;
    }
    char buf[65];
    for (int i = 0; i < 8; ++i) std::snprintf(buf + 8 * i, 9, "%08x", h[i]);
    return std::string(buf, 64);
}

DataRecord make_record(std::string user, std::string assistant, Json meta = Json::object()) {
    DataRecord r;
    r.conversation = {Message{Role::User, "Liam", std::nullopt, std::move(user)},
                      Message{Role::Assistant, "Maya", 1, std::move(assistant)}};
    r.metadata = std::move(meta);
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// core-model

TEST(Sha256, StandardVectors) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Sha256, AgreesWithReferenceImplementation) {
    EXPECT_EQ(ref_sha256(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    std::mt19937_64 rng(11);
    for (int n : {1, 55, 56, 63, 64, 65, 119, 120, 1000}) {
        std::string s(static_cast<std::size_t>(n), '\0');
        for (auto& c : s) c = static_cast<char>(rng() & 0xff);
        EXPECT_EQ(sha256_hex(s), ref_sha256(s)) << "length " << n;
    }
}

TEST(CountTokens, Basics) {
    EXPECT_EQ(count_tokens(""), 0u);
    EXPECT_EQ(count_tokens("hello world"), 2u);
    EXPECT_EQ(count_tokens("  a\tb\n\nc  "), 3u);
}

TEST(CountTokens, AdditiveOverWhitespaceJoin) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = words(rng() % 40, "a"), b = words(rng() % 40, "b");
        const auto joined = a + " " + b;
        EXPECT_EQ(count_tokens(joined), count_tokens(a) + count_tokens(b));
        EXPECT_GE(count_tokens(joined), std::max(count_tokens(a), count_tokens(b)));
    }
}

TEST(TokenBudget, Validate) {
    EXPECT_NO_THROW((TokenBudget{10, 5, 20, std::nullopt}.validate()));
    EXPECT_THROW((TokenBudget{10, 11, 20, std::nullopt}.validate()), ConfigError);
    EXPECT_THROW((TokenBudget{30, 5, 20, std::nullopt}.validate()), ConfigError);
    EXPECT_THROW((TokenBudget{10, 5, 20, 21}.validate()), ConfigError);
}

TEST(RecordId, HexAndStable) {
    auto r = make_record("Where is my refund?", "It was issued today.", Json{{"model", "m"}});
    const auto id = record_id(r);
    EXPECT_TRUE(is_hex64(id));
    EXPECT_EQ(id, record_id(r));
    assign_id(r);
    const auto round = record_from_json(Json::parse(dump_compact(record_to_json(r))));
    EXPECT_EQ(round, r);
    EXPECT_EQ(canonicalize(round), canonicalize(r));
    EXPECT_EQ(record_id(round), id);
}

TEST(RecordId, KeyOrderIndependent) {
    auto a = make_record("q", "a", Json{{"x", 1}, {"y", Json{{"p", 1}, {"q", 2}}}});
    auto b = make_record("q", "a", Json{{"y", Json{{"q", 2}, {"p", 1}}}, {"x", 1}});
    EXPECT_EQ(canonicalize(a), canonicalize(b));
}

TEST(RecordId, ExcludesJudgeFields) {
    auto a = make_record("q", "a", Json{{"model", "m"}});
    auto b = a;
    b.metadata["judge_model"] = "j";
    b.metadata["judge_score"] = 4.5;
    b.metadata["quality_characteristics"] = Json{{"LLM_based", Json{{"clarity", 5}}}};
    EXPECT_EQ(record_id(a), record_id(b));
    b.metadata["model"] = "other";
    EXPECT_NE(record_id(a), record_id(b));
}

TEST(RecordId, InjectiveOverCorpus) {
    std::set<std::string> ids;
    for (int i = 0; i < 10000; ++i) ids.insert(record_id(make_record("q" + std::to_string(i), "a", Json{{"i", i % 7}})));
    EXPECT_EQ(ids.size(), 10000u);
}

TEST(RecordJson, KeyOrder) {
    auto r = make_record("q", "a");
    assign_id(r);
    const auto line = dump_compact(record_to_json(r));
    EXPECT_EQ(line.find("{\"id\":"), 0u);
    EXPECT_LT(line.find("\"conversation\""), line.find("\"metadata\""));
    EXPECT_EQ(line.find('\n'), std::string::npos);
}

TEST(DeriveSeed, DistinctSalts) {
    EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
    EXPECT_NE(derive_seed(1, std::uint64_t{0}), derive_seed(1, std::uint64_t{1}));
    EXPECT_EQ(derive_seed(9, "x"), derive_seed(9, "x"));
}

// ---------------------------------------------------------------------------
// templating

TEST(Template, SingleSubstitution) {
    EXPECT_EQ(render(Template::parse("t", "City: {{city}}"), {{"city", "Lisbon"}}), "City: Lisbon");
    EXPECT_EQ(render(Template::parse("t", "City: {{ city }}"), {{"city", "Lisbon"}}), "City: Lisbon");
}

TEST(Template, RequiredSlotsAreExactlyTheBodySlots) {
    auto t = Template::parse("t", "{{a}} and {{ b }} and {{a}} but not {{ }} or {{c-d}}");
    EXPECT_EQ(t.required_slots, (std::set<std::string>{"a", "b"}));
}

TEST(Template, MissingSlotNamesTheSlot) {
    try {
        render(Template::parse("t", "Hello {{name}}"), {});
        FAIL() << "expected MissingSlot";
    } catch (const MissingSlot& e) {
        EXPECT_EQ(e.slot(), "name");
    }
}

TEST(Template, UnknownSlotOptional) {
    auto t = Template::parse("t", "{{a}}");
    EXPECT_NO_THROW(render(t, {{"a", "1"}, {"b", "2"}}));
    EXPECT_THROW(render(t, {{"a", "1"}, {"b", "2"}}, RenderOptions{true}), UnknownSlot);
    EXPECT_EQ(unknown_slots(t, {{"a", "1"}, {"b", "2"}}), std::vector<std::string>{"b"});
}

TEST(Template, ValuesAreNotRescanned) {
    auto t = Template::parse("t", "{{a}}|{{b}}");
    EXPECT_EQ(render(t, {{"a", "{{b}}"}, {"b", "x"}}), "{{b}}|x");
}

TEST(Template, RenderIdempotentOnOutput) {
    const auto reg = TemplateRegistry::defaults();
    for (const auto& id : reg.ids()) {
        const auto& t = reg.get(id);
        Bindings b;
        for (const auto& s : t.required_slots) b[s] = "value for " + s;
        const auto once = render(t, b);
        EXPECT_FALSE(has_unresolved_slot(once)) << id;
        EXPECT_EQ(render(Template::parse(id, once), b), once) << id;
    }
}

TEST(Template, CreateScenarioExample) {
    const auto reg = TemplateRegistry::defaults();
    const auto out = reg.render("create_scenario", {{"business_scenario", "Automated refund processing"},
                                                    {"text_generation_guidance", "Case task generation"},
                                                    {"text_generation_guidance_explanation", "Tasks for a refunds desk"},
                                                    {"country", "Brazil"}});
    EXPECT_NE(out.find("Business Scenario: Automated refund processing\n"), std::string::npos);
    EXPECT_NE(out.find("Country: Brazil\n"), std::string::npos);
    EXPECT_NE(out.find("\"Create a case task related to automated refund processing for a retail company in São Paulo, "
                       "Brazil, ensuring that different refund request categories are handled efficiently.\""),
              std::string::npos);
    EXPECT_NE(out.find("Apply **at least two** of the following transformations"), std::string::npos);
}

TEST(Template, ShippedIds) {
    const auto reg = TemplateRegistry::defaults();
    for (const char* id : {"create_scenario", "create_scenario_complex", "create_conversation", "create_conversation_instr",
                           "create_conversation_resp", "create_long_context_doc", "create_long_context_doc_instr",
                           "create_long_context_doc_instr_resp", "create_verifiable_instruction",
                           "format_verifiable_schema", "judge_prompt", "chat_turn"}) {
        EXPECT_TRUE(reg.contains(id)) << id;
    }
}

TEST(Template, DirectoryMatchesEmbeddedDefaults) {
    TemplateRegistry from_dir;
    from_dir.load_directory(templates_dir());
    const auto reg = TemplateRegistry::defaults();
    EXPECT_EQ(from_dir.ids(), reg.ids());
    for (const auto& id : reg.ids()) EXPECT_EQ(from_dir.get(id).body, reg.get(id).body) << id;
}

TEST(Template, VariantsAndOverrides) {
    TempDir dir;
    {
        std::ofstream(dir / "create_scenario.alt.txt") << "ALT {{country}}";
    }
    auto reg = TemplateRegistry::defaults();
    reg.load_directory(dir.path());
    EXPECT_EQ(reg.variants("create_scenario").size(), 2u);
    std::set<std::string> seen;
    for (std::uint64_t s = 0; s < 64; ++s) seen.insert(reg.pick_variant("create_scenario", s).id);
    EXPECT_EQ(seen.size(), 2u);
    EXPECT_EQ(reg.pick_variant("create_scenario", 3).id, reg.pick_variant("create_scenario", 3).id);
}

TEST(Variation, CountBounds) {
    EXPECT_THROW(select_variation_directives(1, 1), InvalidCount);
    EXPECT_THROW(select_variation_directives(1, 5), InvalidCount);
    const auto all = select_variation_directives(1, 4);
    std::set<VariationKind> kinds;
    for (const auto& d : all) kinds.insert(d.kind);
    EXPECT_EQ(kinds.size(), 4u);
}

TEST(Variation, DeterministicAndDistinct) {
    for (std::uint64_t s = 0; s < 200; ++s) {
        for (std::size_t k = 2; k <= 4; ++k) {
            const auto a = select_variation_directives(s, k);
            const auto b = select_variation_directives(s, k);
            ASSERT_EQ(a.size(), k);
            std::set<VariationKind> kinds;
            for (std::size_t i = 0; i < k; ++i) {
                EXPECT_EQ(a[i].kind, b[i].kind);
                kinds.insert(a[i].kind);
            }
            EXPECT_EQ(kinds.size(), k);
        }
    }
}

TEST(Variation, PairFrequenciesUniform) {
    std::map<std::pair<int, int>, int> counts;
    const int n = 10000;
    for (std::uint64_t s = 0; s < n; ++s) {
        auto d = select_variation_directives(s, 2);
        int a = static_cast<int>(d[0].kind), b = static_cast<int>(d[1].kind);
        if (a > b) std::swap(a, b);
        ++counts[{a, b}];
    }
    ASSERT_EQ(counts.size(), 6u);
    for (const auto& [pair, c] : counts) EXPECT_NEAR(c / double(n), 1.0 / 6.0, 0.02);
}

TEST(Variation, BlockWording) {
    const auto block = render_variation_block(select_variation_directives(0, 4));
    EXPECT_EQ(block.rfind("### Selected Variations for This Response:", 0), 0u);
    EXPECT_NE(block.find("Synonym Substitution"), std::string::npos);
    EXPECT_NE(block.find("Mild Redundancy"), std::string::npos);
}

// ---------------------------------------------------------------------------
// llm-gateway

TEST(Mock, ScriptedEntryByteExact) {
    Playbook p = Playbook::from_json(Json{{"entries", Json::array({Json{{"name", "scenario-prompt"},
                                                                        {"prompt", "scenario-prompt"},
                                                                        {"attempt", 0},
                                                                        {"response", "Scripted  text\n"}}})}});
    MockBackend mock(p);
    CompletionRequest req;
    req.prompt = "scenario-prompt";
    EXPECT_EQ(mock.complete(req), "Scripted  text\n");
    req.attempt = 1;
    EXPECT_NE(mock.complete(req), "Scripted  text\n");
}

TEST(Mock, DigestPrefixAndAttemptIndexedResponses) {
    const std::string prompt = "some prompt";
    Playbook p = Playbook::from_json(Json::array(
        {Json{{"digest", sha256_hex(prompt).substr(0, 12)}, {"responses", Json::array({"first", "second"})}}}));
    MockBackend mock(p);
    CompletionRequest req;
    req.prompt = prompt;
    EXPECT_EQ(mock.complete(req), "first");
    req.attempt = 1;
    EXPECT_EQ(mock.complete(req), "second");
    req.attempt = 5;
    EXPECT_EQ(mock.complete(req), "second");
}

TEST(Mock, PureFallback) {
    MockBackend a, b;
    CompletionRequest req;
    req.prompt = "anything";
    EXPECT_EQ(a.complete(req), a.complete(req));
    EXPECT_EQ(a.complete(req), b.complete(req));
    req.attempt = 1;
    const auto other = a.complete(req);
    req.attempt = 0;
    EXPECT_NE(other, a.complete(req));
}

TEST(Mock, FallbackHonorsLengthHints) {
    MockBackend mock;
    CompletionRequest req;
    for (int i = 0; i < 50; ++i) {
        req.prompt = "p" + std::to_string(i);
        req.min_output_tokens = 30;
        req.max_output_tokens = 40;
        const auto n = count_tokens(mock.complete(req));
        EXPECT_GE(n, 30u);
        EXPECT_LE(n, 40u);
    }
}

TEST(Request, Validate) {
    CompletionRequest r;
    r.prompt = "x";
    r.temperature = 2.5;
    EXPECT_THROW(r.validate(), ConfigError);
    r.temperature = 0.5;
    r.max_output_tokens = 0;
    EXPECT_THROW(r.validate(), ConfigError);
}

namespace {

ValidationReport passes_if(const std::string& text, const std::string& needle) {
    ValidationReport r;
    const bool ok = text.find(needle) != std::string::npos;
    r.add("summary_assistant", Rule::Presence, ok, ok ? "" : "missing key summary_assistant");
    return r;
}

}  // namespace

TEST(Regeneration, SucceedsOnThirdAttempt) {
    std::vector<std::string> prompts;
    auto backend = std::make_shared<FunctionBackend>("s", [&](const CompletionRequest& r) {
        prompts.push_back(r.prompt);
        return r.attempt == 2 ? std::string("good") : std::string("bad");
    });
    Gateway g(backend);
    CompletionRequest req;
    req.prompt = "base";
    auto out = g.complete_validated(req, [](const std::string& t) { return passes_if(t, "good"); }, {3, true});
    EXPECT_EQ(out.text, "good");
    EXPECT_EQ(out.attempts_used, 3);
    ASSERT_EQ(prompts.size(), 3u);
    EXPECT_EQ(prompts[0], "base");
    EXPECT_EQ(prompts[1].rfind("base", 0), 0u);
    EXPECT_NE(prompts[1].find("missing key summary_assistant"), std::string::npos);
}

TEST(Regeneration, AlwaysPassUsesOneAttempt) {
    Gateway g(std::make_shared<MockBackend>());
    CompletionRequest req;
    req.prompt = "x";
    auto out = g.complete_validated(req, [](const std::string&) { ValidationReport r; r.add("x", Rule::Content, true); return r; }, {});
    EXPECT_EQ(out.attempts_used, 1);
}

TEST(Regeneration, ExhaustedCarriesLastReport) {
    Gateway g(std::make_shared<FunctionBackend>("s", [](const CompletionRequest& r) { return "attempt" + std::to_string(r.attempt); }));
    CompletionRequest req;
    req.prompt = "x";
    try {
        g.complete_validated(req, [](const std::string& t) {
            ValidationReport r;
            r.add("text", Rule::Content, false, "rejected " + t);
            return r;
        }, {2, true});
        FAIL();
    } catch (const Exhausted& e) {
        EXPECT_EQ(e.attempts(), 2);
        ASSERT_EQ(e.report().checks.size(), 1u);
        EXPECT_EQ(e.report().checks[0].detail, "rejected attempt1");
    }
}

TEST(Regeneration, NoFeedbackKeepsPrompt) {
    std::vector<std::string> prompts;
    Gateway g(std::make_shared<FunctionBackend>("s", [&](const CompletionRequest& r) { prompts.push_back(r.prompt); return std::string("bad"); }));
    CompletionRequest req;
    req.prompt = "x";
    EXPECT_THROW(g.complete_validated(req, [](const std::string& t) { return passes_if(t, "good"); }, {3, false}), Exhausted);
    EXPECT_EQ(prompts, (std::vector<std::string>{"x", "x", "x"}));
}

TEST(Gateway, TransportRetriesThenSucceeds) {
    int calls = 0;
    GatewayOptions opts;
    opts.retry.base_delay = std::chrono::milliseconds(1);
    Gateway g(std::make_shared<FunctionBackend>("flaky", [&](const CompletionRequest&) -> std::string {
                  if (++calls < 3) throw BackendError(BackendErrorKind::Transport, "down");
                  return "ok";
              }),
              opts);
    CompletionRequest req;
    req.prompt = "x";
    EXPECT_EQ(g.complete(req), "ok");
    EXPECT_EQ(calls, 3);
}

TEST(Gateway, TransportRetriesCapped) {
    GatewayOptions opts;
    opts.retry.base_delay = std::chrono::milliseconds(1);
    int calls = 0;
    Gateway g(std::make_shared<FunctionBackend>("down", [&](const CompletionRequest&) -> std::string {
                  ++calls;
                  throw BackendError(BackendErrorKind::RateLimited, "429");
              }),
              opts);
    CompletionRequest req;
    req.prompt = "x";
    EXPECT_THROW(g.complete(req), BackendError);
    EXPECT_EQ(calls, 1 + opts.retry.max_retries);
}

TEST(Gateway, CountsPerModelAndIsThreadSafe) {
    Gateway g(std::make_shared<MockBackend>());
    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t) {
        ts.emplace_back([&, t] {
            for (int i = 0; i < 50; ++i) {
                CompletionRequest r;
                r.prompt = "p" + std::to_string(i);
                r.model = t % 2 ? "a" : "b";
                g.complete(r);
            }
        });
    }
    for (auto& t : ts) t.join();
    EXPECT_EQ(g.calls(), 200u);
    EXPECT_EQ(g.calls_for_model("a"), 100u);
    EXPECT_EQ(g.calls_for_model("never"), 0u);
}

TEST(Http, GoldenChatCompletion) {
    httplib::Server server;
    Json seen;
    std::string auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = Json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(read_file(data_dir() / "chat_completion_response.json"), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    HttpBackend backend("http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions", "test-key");
    CompletionRequest req;
    req.prompt = "Say hi";
    req.model = "gen-model";
    req.temperature = 0.2;
    req.max_output_tokens = 64;
    const auto text = backend.complete(req);
    server.stop();
    th.join();

    EXPECT_EQ(text, "Hello from the golden fixture.");
    EXPECT_EQ(auth, "Bearer test-key");
    EXPECT_EQ(seen["model"], "gen-model");
    EXPECT_EQ(seen["messages"], Json::array({Json{{"role", "user"}, {"content", "Say hi"}}}));
    EXPECT_DOUBLE_EQ(seen["temperature"].get<double>(), 0.2);
    EXPECT_EQ(seen["max_tokens"], 64);
}

TEST(Http, ErrorClassification) {
    EXPECT_THROW(HttpBackend::parse_response("not json"), BackendError);
    EXPECT_THROW(HttpBackend::parse_response("{\"choices\": []}"), BackendError);
    try {
        HttpBackend::parse_response("{\"choices\": [{\"message\": {\"content\": 5}}]}");
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendErrorKind::MalformedResponse);
    }
    HttpBackend unreachable("http://127.0.0.1:1/x", "k", std::chrono::seconds(1));
    CompletionRequest req;
    req.prompt = "x";
    try {
        unreachable.complete(req);
        FAIL();
    } catch (const BackendError& e) {
        EXPECT_EQ(e.kind(), BackendErrorKind::Transport);
    }
    EXPECT_THROW(HttpBackend("no-scheme", "k"), ConfigError);
}

TEST(Http, ApiKeyFromEnvironment) {
    ::unsetenv(kApiKeyEnv);
    EXPECT_THROW(HttpBackend::from_env("http://localhost/x"), ConfigError);
    ::setenv(kApiKeyEnv, "abc", 1);
    EXPECT_NO_THROW(HttpBackend::from_env("http://localhost/x"));
    ::unsetenv(kApiKeyEnv);
}
