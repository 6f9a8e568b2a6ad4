#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "lcforge/error.hpp"
#include "lcforge/report.hpp"
#include "lcforge/text.hpp"

namespace lcforge {

// ---------------------------------------------------------------------------
// Hashing and randomness

/// Lowercase hex SHA-256 of the given bytes.
inline std::string sha256_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(static_cast<std::size_t>(len) * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0x0F];
    }
    return out;
}

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent child seed for a named sub-stream.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view salt) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : salt) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return splitmix64(seed ^ splitmix64(h));
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// mt19937_64 with portable bounded draws (std distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, n).
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw ConfigError("uniform_index over an empty range");
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform integer in [lo, hi].
    std::size_t uniform_between(std::size_t lo, std::size_t hi) {
        if (hi < lo) std::swap(lo, hi);
        return lo + uniform_index(hi - lo + 1);
    }

    /// First k elements of a uniformly random permutation of [0, n).
    std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        k = std::min(k, n);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t j = i + uniform_index(n - i);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(k);
        return idx;
    }

private:
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// Token counting

/// Pluggable token counter. The default counts maximal non-whitespace runs.
struct TokenCounter {
    std::string name = "whitespace";
    std::function<std::size_t(std::string_view)> fn;

    std::size_t operator()(std::string_view text) const { return fn ? fn(text) : count_words(text); }
};

inline TokenCounter whitespace_token_counter() { return TokenCounter{"whitespace", count_words}; }

inline std::size_t count_tokens(std::string_view text) { return count_words(text); }

// ---------------------------------------------------------------------------
// Domain types

enum class Role { User, Assistant };

inline constexpr std::string_view role_name(Role r) { return r == Role::User ? "user" : "assistant"; }

inline Role role_from_name(std::string_view s) {
    if (s == "user") return Role::User;
    if (s == "assistant") return Role::Assistant;
    throw ConfigError("unknown role: " + std::string(s));
}

struct Message {
    Role role = Role::User;
    std::string speaker_name;
    std::optional<int> assistant_index;  // 1-based, set iff role == Assistant
    std::string content;

    friend bool operator==(const Message&, const Message&) = default;
};

/// Dialogue history plus the structural parameters it was generated under.
struct Conversation {
    std::vector<Message> messages;
    std::string scenario_id;
    int n_assistants = 1;
    int segments = 1;           // N
    int turns_per_segment = 2;  // K
    std::uint64_t seed = 0;
    std::size_t token_count = 0;

    std::size_t expected_messages() const {
        return static_cast<std::size_t>(segments) * static_cast<std::size_t>(turns_per_segment);
    }

    void recount(const TokenCounter& counter = {}) {
        token_count = 0;
        for (const auto& m : messages) token_count += counter(m.content);
    }

    friend bool operator==(const Conversation&, const Conversation&) = default;
};

struct TokenBudget {
    std::size_t target = 1;
    std::size_t min = 0;
    std::size_t max = 1;
    std::optional<std::size_t> per_turn_max;

    void validate() const {
        if (target == 0 || max == 0) throw ConfigError("token budget target and max must be positive");
        if (!(min <= target && target <= max)) {
            throw ConfigError("token budget requires min <= target <= max (got " + std::to_string(min) +
                              ", " + std::to_string(target) + ", " + std::to_string(max) + ")");
        }
        if (per_turn_max && (*per_turn_max == 0 || *per_turn_max > max)) {
            throw ConfigError("per_turn_max must be in [1, max]");
        }
    }

    friend bool operator==(const TokenBudget&, const TokenBudget&) = default;
};

inline Json budget_to_json(const TokenBudget& b) {
    Json j = {{"target", b.target}, {"min", b.min}, {"max", b.max}};
    if (b.per_turn_max) j["per_turn_max"] = *b.per_turn_max;
    return j;
}

inline TokenBudget budget_from_json(const Json& j, TokenBudget base = {}) {
    base.target = j.value("target", base.target);
    base.min = j.value("min", base.min);
    base.max = j.value("max", base.max);
    if (j.contains("per_turn_max")) {
        if (j["per_turn_max"].is_null()) {
            base.per_turn_max.reset();
        } else {
            base.per_turn_max = j["per_turn_max"].get<std::size_t>();
        }
    }
    return base;
}

/// One exported sample. `conversation` is the transcript; structure lives in metadata.
struct DataRecord {
    std::string id;
    std::vector<Message> conversation;
    Json metadata = Json::object();

    friend bool operator==(const DataRecord& a, const DataRecord& b) {
        return a.id == b.id && a.conversation == b.conversation && a.metadata == b.metadata;
    }
};

/// Metadata keys written after storage (judging, validation); they never affect identity.
inline const std::vector<std::string>& identity_excluded_keys() {
    static const std::vector<std::string> keys = {
        "judge_model",      "judge_score", "judge_confidence",       "judge_rationales",
        "judge_status", "judge_notes", "judge_axes", "judge_ensemble", "quality_characteristics", "validator_logs",
    };
    return keys;
}

// ---------------------------------------------------------------------------
// Serialization

inline Json message_to_json(const Message& m) {
    Json j = Json::object();
    j["role"] = std::string(role_name(m.role));
    if (!m.speaker_name.empty()) j["name"] = m.speaker_name;
    if (m.assistant_index) j["assistant_index"] = *m.assistant_index;
    j["content"] = m.content;
    return j;
}

inline Message message_from_json(const Json& j) {
    Message m;
    m.role = role_from_name(j.at("role").get<std::string>());
    m.speaker_name = j.value("name", std::string{});
    if (j.contains("assistant_index") && !j["assistant_index"].is_null()) {
        m.assistant_index = j["assistant_index"].get<int>();
    }
    m.content = j.at("content").get<std::string>();
    return m;
}

/// JSONL line shape: id, conversation, metadata in that order.
inline Json record_to_json(const DataRecord& r) {
    Json j = Json::object();
    j["id"] = r.id;
    j["conversation"] = Json::array();
    for (const auto& m : r.conversation) j["conversation"].push_back(message_to_json(m));
    j["metadata"] = r.metadata;
    return j;
}

inline DataRecord record_from_json(const Json& j) {
    DataRecord r;
    r.id = j.value("id", std::string{});
    for (const auto& m : j.at("conversation")) r.conversation.push_back(message_from_json(m));
    r.metadata = j.contains("metadata") ? j.at("metadata") : Json::object();
    return r;
}

inline std::string dump_compact(const Json& j) {
    return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

namespace detail {

/// Copies into a key-sorted json, recursively.
inline nlohmann::json sorted_copy(const Json& j) {
    switch (j.type()) {
        case Json::value_t::object: {
            nlohmann::json out = nlohmann::json::object();
            for (const auto& [k, v] : j.items()) out[k] = sorted_copy(v);
            return out;
        }
        case Json::value_t::array: {
            nlohmann::json out = nlohmann::json::array();
            for (const auto& v : j) out.push_back(sorted_copy(v));
            return out;
        }
        case Json::value_t::string: return j.get<std::string>();
        case Json::value_t::boolean: return j.get<bool>();
        case Json::value_t::number_integer: return j.get<std::int64_t>();
        case Json::value_t::number_unsigned: return j.get<std::uint64_t>();
        case Json::value_t::number_float: return j.get<double>();
        default: return nullptr;
    }
}

}  // namespace detail

/// Deterministic bytes for hashing: sorted keys, no whitespace, UTF-8, judge/log keys dropped.
inline std::string canonicalize(const DataRecord& r) {
    Json meta = r.metadata.is_object() ? r.metadata : Json::object();
    for (const auto& k : identity_excluded_keys()) meta.erase(k);
    Json body = Json::object();
    body["conversation"] = Json::array();
    for (const auto& m : r.conversation) body["conversation"].push_back(message_to_json(m));
    body["metadata"] = std::move(meta);
    return detail::sorted_copy(body).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

inline std::string record_id(const DataRecord& r) { return sha256_hex(canonicalize(r)); }

/// Sets r.id from content and returns it.
inline const std::string& assign_id(DataRecord& r) {
    r.id = record_id(r);
    return r.id;
}

inline bool is_hex64(std::string_view s) {
    if (s.size() != 64) return false;
    for (char c : s) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

}  // namespace lcforge
