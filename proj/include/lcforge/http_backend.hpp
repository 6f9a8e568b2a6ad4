#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <utility>

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include "lcforge/gateway.hpp"

namespace lcforge {

inline constexpr const char* kApiKeyEnv = "LCFORGE_API_KEY";

/// OpenAI-compatible chat-completions client.
///
/// POSTs `{model, messages: [{role: "user", content: prompt}], temperature, max_tokens}`
/// to the configured URL and returns `choices[0].message.content`.
class HttpBackend final : public Backend {
public:
    HttpBackend(std::string url, std::string api_key, std::chrono::seconds timeout = std::chrono::seconds(120))
        : api_key_(std::move(api_key)), timeout_(timeout) {
        split_url(url);
    }

    /// Reads the API key from LCFORGE_API_KEY.
    static HttpBackend from_env(std::string url) {
        const char* key = std::getenv(kApiKeyEnv);
        if (key == nullptr || *key == '\0') {
            throw ConfigError(std::string("http backend requires the ") + kApiKeyEnv + " environment variable");
        }
        return HttpBackend(std::move(url), key);
    }

    std::string name() const override { return "http"; }

    static Json request_body(const CompletionRequest& request) {
        Json body = Json::object();
        body["model"] = request.model;
        body["messages"] = Json::array({Json{{"role", "user"}, {"content", request.prompt}}});
        body["temperature"] = request.temperature;
        body["max_tokens"] = request.max_output_tokens;
        return body;
    }

    static std::string parse_response(const std::string& body) {
        Json j;
        try {
            j = Json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(BackendErrorKind::MalformedResponse, std::string("response is not JSON: ") + e.what());
        }
        try {
            const auto& content = j.at("choices").at(0).at("message").at("content");
            if (!content.is_string()) {
                throw BackendError(BackendErrorKind::MalformedResponse, "message content is not a string");
            }
            return content.get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw BackendError(BackendErrorKind::MalformedResponse, std::string("missing choices[0].message.content: ") + e.what());
        }
    }

    std::string complete(const CompletionRequest& request) override {
        httplib::Client client(origin_);
        client.set_connection_timeout(timeout_);
        client.set_read_timeout(timeout_);
        client.set_write_timeout(timeout_);
        httplib::Headers headers;
        if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
        auto res = client.Post(path_, headers, request_body(request).dump(), "application/json");
        if (!res) {
            throw BackendError(BackendErrorKind::Transport, "request to " + origin_ + path_ + " failed: " +
                                                               httplib::to_string(res.error()));
        }
        if (res->status == 429) throw BackendError(BackendErrorKind::RateLimited, "HTTP 429");
        if (res->status < 200 || res->status >= 300) {
            throw BackendError(BackendErrorKind::Transport, "HTTP " + std::to_string(res->status));
        }
        return parse_response(res->body);
    }

    const std::string& origin() const { return origin_; }
    const std::string& path() const { return path_; }

private:
    void split_url(const std::string& url) {
        const auto scheme_end = url.find("://");
        if (scheme_end == std::string::npos) throw ConfigError("endpoint URL needs a scheme: " + url);
        const auto path_start = url.find('/', scheme_end + 3);
        origin_ = path_start == std::string::npos ? url : url.substr(0, path_start);
        path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    }

    std::string origin_;
    std::string path_;
    std::string api_key_;
    std::chrono::seconds timeout_;
};

}  // namespace lcforge
