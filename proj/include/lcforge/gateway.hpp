#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "lcforge/core.hpp"
#include "lcforge/error.hpp"
#include "lcforge/report.hpp"

namespace lcforge {

struct CompletionRequest {
    std::string prompt;
    std::string model;
    double temperature = 0.7;
    int max_output_tokens = 1024;
    int attempt = 0;
    // Length hint for backends that can honor it; HTTP backends ignore it.
    int min_output_tokens = 0;

    void validate() const {
        if (temperature < 0.0 || temperature > 2.0) throw ConfigError("temperature must be in [0, 2]");
        if (max_output_tokens < 1) throw ConfigError("max_output_tokens must be >= 1");
        if (attempt < 0) throw ConfigError("attempt must be >= 0");
    }
};

/// Anything that turns a prompt into text. Implementations must be safe for concurrent calls.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    /// Throws BackendError on failure.
    virtual std::string complete(const CompletionRequest& request) = 0;
};

/// Wraps a callable; handy for scripted tests.
class FunctionBackend final : public Backend {
public:
    using Fn = std::function<std::string(const CompletionRequest&)>;

    FunctionBackend(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

    std::string name() const override { return name_; }
    std::string complete(const CompletionRequest& request) override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return fn_(request);
    }
    std::size_t calls() const { return calls_.load(); }

private:
    std::string name_;
    Fn fn_;
    std::atomic<std::size_t> calls_{0};
};

// ---------------------------------------------------------------------------
// Mock backend

/// One scripted answer. Every matcher that is set must match.
struct PlaybookEntry {
    std::string name;
    std::optional<std::string> prompt;           // exact prompt text
    std::optional<std::string> digest_prefix;    // prefix of sha256_hex(prompt)
    std::vector<std::string> contains;           // substrings of the prompt
    std::optional<std::string> model;
    std::optional<int> attempt;                  // only this attempt index
    std::vector<std::string> responses;          // indexed by attempt, last one repeats
};

struct Playbook {
    std::vector<PlaybookEntry> entries;
    std::size_t fallback_min_words = 12;
    std::size_t fallback_max_words = 48;

    static Playbook from_json(const Json& j) {
        Playbook p;
        const Json& entries = j.is_array() ? j : j.value("entries", Json::array());
        for (const auto& e : entries) {
            PlaybookEntry entry;
            entry.name = e.value("name", std::string{});
            if (e.contains("prompt")) entry.prompt = e["prompt"].get<std::string>();
            if (e.contains("digest")) entry.digest_prefix = to_lower_ascii(e["digest"].get<std::string>());
            if (e.contains("contains")) {
                if (e["contains"].is_string()) {
                    entry.contains.push_back(e["contains"].get<std::string>());
                } else {
                    for (const auto& s : e["contains"]) entry.contains.push_back(s.get<std::string>());
                }
            }
            if (e.contains("model")) entry.model = e["model"].get<std::string>();
            if (e.contains("attempt")) entry.attempt = e["attempt"].get<int>();
            if (e.contains("responses")) {
                for (const auto& r : e["responses"]) entry.responses.push_back(r.get<std::string>());
            } else if (e.contains("response")) {
                entry.responses.push_back(e["response"].get<std::string>());
            }
            if (entry.responses.empty()) {
                throw ConfigError("playbook entry '" + entry.name + "' has no response");
            }
            p.entries.push_back(std::move(entry));
        }
        if (j.is_object() && j.contains("fallback") && j["fallback"].is_object()) {
            p.fallback_min_words = j["fallback"].value("min_words", p.fallback_min_words);
            p.fallback_max_words = j["fallback"].value("max_words", p.fallback_max_words);
        }
        if (p.fallback_min_words == 0) p.fallback_min_words = 1;
        if (p.fallback_max_words < p.fallback_min_words) p.fallback_max_words = p.fallback_min_words;
        return p;
    }

    static Playbook load(const std::filesystem::path& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw IoFailure("cannot read playbook: " + path.string());
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            return from_json(Json::parse(ss.str()));
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("invalid playbook " + path.string() + ": " + e.what());
        }
    }
};

namespace detail {

inline constexpr std::array<std::string_view, 64> kFillerWords = {
    "the",      "team",     "reviewed", "account",  "policy",   "request",  "service",  "update",
    "customer", "support",  "process",  "details",  "schedule", "invoice",  "payment",  "network",
    "system",   "report",   "issue",    "resolved", "shared",   "clearly",  "regional", "office",
    "manager",  "review",   "follow",   "steps",    "within",   "current",  "project",  "budget",
    "quality",  "standard", "planning", "record",   "verified", "access",   "contract", "delivery",
    "training", "platform", "secure",   "timeline", "partners", "feedback", "approved", "summary",
    "analysis", "document", "section",  "provides", "overview", "local",    "context",  "risk",
    "control",  "measures", "staff",    "clients",  "practice", "guidance", "results",  "notes",
};

inline std::string filler_text(std::uint64_t seed, std::size_t words) {
    Rng rng(seed);
    std::string out;
    std::size_t in_sentence = 0;
    std::size_t sentence_len = 8 + rng.uniform_index(7);
    for (std::size_t i = 0; i < words; ++i) {
        std::string w(kFillerWords[rng.uniform_index(kFillerWords.size())]);
        if (in_sentence == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
        ++in_sentence;
        const bool last = i + 1 == words;
        if (in_sentence == sentence_len || last) {
            w += '.';
            in_sentence = 0;
            sentence_len = 8 + rng.uniform_index(7);
        }
        if (!out.empty()) out += ' ';
        out += w;
    }
    return out;
}

}  // namespace detail

/// Deterministic scripted backend: a pure function of (prompt, attempt).
class MockBackend final : public Backend {
public:
    explicit MockBackend(Playbook playbook = {}) : playbook_(std::move(playbook)) {}

    std::string name() const override { return "mock"; }

    std::string complete(const CompletionRequest& request) override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        const std::string digest = sha256_hex(request.prompt);
        for (const auto& e : playbook_.entries) {
            if (e.attempt && *e.attempt != request.attempt) continue;
            if (e.prompt && *e.prompt != request.prompt) continue;
            if (e.digest_prefix && digest.rfind(*e.digest_prefix, 0) != 0) continue;
            if (e.model && *e.model != request.model) continue;
            bool all = std::all_of(e.contains.begin(), e.contains.end(), [&](const std::string& s) {
                return request.prompt.find(s) != std::string::npos;
            });
            if (!all) continue;
            const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(request.attempt),
                                                        e.responses.size() - 1);
            return e.responses[i];
        }
        return fallback(digest, request);
    }

    std::size_t calls() const { return calls_.load(); }
    const Playbook& playbook() const { return playbook_; }

private:
    std::string fallback(const std::string& digest, const CompletionRequest& request) const {
        const std::uint64_t seed =
            derive_seed(std::stoull(digest.substr(0, 16), nullptr, 16), static_cast<std::uint64_t>(request.attempt));
        const auto cap = static_cast<std::size_t>(std::max(1, request.max_output_tokens));
        std::size_t lo = std::max(playbook_.fallback_min_words,
                                  static_cast<std::size_t>(std::max(0, request.min_output_tokens)));
        std::size_t hi = std::max(playbook_.fallback_max_words, lo);
        hi = std::min(hi, cap);
        lo = std::min(lo, hi);
        Rng rng(seed);
        const std::size_t words = rng.uniform_between(lo, hi);
        return detail::filler_text(rng.next(), words);
    }

    Playbook playbook_;
    std::atomic<std::size_t> calls_{0};
};

// ---------------------------------------------------------------------------
// Gateway

struct RegenerationPolicy {
    int max_attempts = 3;
    bool repair_feedback = true;

    void validate() const {
        if (max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
    }
};

struct TransportRetry {
    int max_retries = 3;
    std::chrono::milliseconds base_delay{250};
};

/// Shared token bucket. Thread-safe.
class TokenBucket {
public:
    TokenBucket(double rate_per_second, double burst)
        : rate_(rate_per_second), capacity_(std::max(1.0, burst)), tokens_(capacity_),
          last_(std::chrono::steady_clock::now()) {}

    void acquire() {
        for (;;) {
            std::chrono::duration<double> wait{0};
            {
                std::lock_guard lock(mutex_);
                const auto now = std::chrono::steady_clock::now();
                const std::chrono::duration<double> elapsed = now - last_;
                last_ = now;
                tokens_ = std::min(capacity_, tokens_ + elapsed.count() * rate_);
                if (tokens_ >= 1.0) {
                    tokens_ -= 1.0;
                    return;
                }
                wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
            }
            std::this_thread::sleep_for(wait);
        }
    }

private:
    std::mutex mutex_;
    double rate_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
};

struct GatewayOptions {
    TransportRetry retry;
    std::optional<double> requests_per_second;
    double burst = 4.0;
};

struct ValidatedCompletion {
    std::string text;
    int attempts_used = 0;
    ValidationReport report;
};

using CheckFn = std::function<ValidationReport(const std::string&)>;

inline std::string feedback_prompt(const std::string& original, const ValidationReport& prior, int attempt) {
    return original + "\n\n### Validation Feedback (attempt " + std::to_string(attempt + 1) +
           "):\nThe previous response was rejected by automatic validation. Regenerate the complete "
           "response and fix the following issues:\n" +
           prior.failure_summary() + "\n";
}

/// Model-agnostic completion entry point with transport retries, rate limiting and
/// the validate-and-regenerate loop. Safe for concurrent use.
class Gateway {
public:
    explicit Gateway(std::shared_ptr<Backend> backend, GatewayOptions options = {})
        : backend_(std::move(backend)), options_(std::move(options)) {
        if (!backend_) throw ConfigError("gateway needs a backend");
        if (options_.requests_per_second) {
            bucket_ = std::make_unique<TokenBucket>(*options_.requests_per_second, options_.burst);
        }
    }

    /// Transport failures are retried with exponential backoff; content is returned as-is.
    std::string complete(const CompletionRequest& request) {
        request.validate();
        for (int retry = 0;; ++retry) {
            if (bucket_) bucket_->acquire();
            count(request.model);
            try {
                return backend_->complete(request);
            } catch (const BackendError&) {
                if (retry >= options_.retry.max_retries) throw;
                std::this_thread::sleep_for(options_.retry.base_delay * (1 << retry));
            }
        }
    }

    /// Returns the first output whose report passes. On retries with repair_feedback the
    /// prompt is the original plus the prior report's failure summary.
    ValidatedCompletion complete_validated(const CompletionRequest& request, const CheckFn& check,
                                           const RegenerationPolicy& policy) {
        policy.validate();
        ValidationReport last;
        for (int attempt = 0; attempt < policy.max_attempts; ++attempt) {
            CompletionRequest req = request;
            req.attempt = attempt;
            if (attempt > 0 && policy.repair_feedback) req.prompt = feedback_prompt(request.prompt, last, attempt);
            std::string text = complete(req);
            last = check(text);
            if (last.pass()) return ValidatedCompletion{std::move(text), attempt + 1, std::move(last)};
        }
        throw Exhausted(std::move(last), policy.max_attempts);
    }

    std::size_t calls() const {
        std::lock_guard lock(count_mutex_);
        std::size_t total = 0;
        for (const auto& [m, n] : per_model_) total += n;
        return total;
    }

    std::size_t calls_for_model(const std::string& model) const {
        std::lock_guard lock(count_mutex_);
        auto it = per_model_.find(model);
        return it == per_model_.end() ? 0 : it->second;
    }

    Backend& backend() { return *backend_; }

private:
    void count(const std::string& model) {
        std::lock_guard lock(count_mutex_);
        ++per_model_[model];
    }

    std::shared_ptr<Backend> backend_;
    GatewayOptions options_;
    std::unique_ptr<TokenBucket> bucket_;
    mutable std::mutex count_mutex_;
    std::map<std::string, std::size_t> per_model_;
};

inline std::string complete(const CompletionRequest& request, Backend& backend) {
    request.validate();
    return backend.complete(request);
}

}  // namespace lcforge
