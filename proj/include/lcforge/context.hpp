#pragma once

#include <string>

#include "lcforge/core.hpp"
#include "lcforge/gateway.hpp"
#include "lcforge/rules.hpp"
#include "lcforge/templating.hpp"

namespace lcforge {

/// Everything a generation stage needs besides its inputs. Borrowed, not owned.
struct GenerationContext {
    Gateway& gateway;
    const TemplateRegistry& templates;
    RegenerationPolicy regen{};
    PolicyConfig policy{};
    TokenCounter counter{};
    std::string model = "mock-generator";
    double temperature = 0.7;
    int max_output_tokens = 4096;

    CompletionRequest request(std::string prompt, int max_tokens = 0, int min_tokens = 0) const {
        CompletionRequest r;
        r.prompt = std::move(prompt);
        r.model = model;
        r.temperature = temperature;
        r.max_output_tokens = max_tokens > 0 ? max_tokens : max_output_tokens;
        r.min_output_tokens = min_tokens;
        return r;
    }

    ValidatedCompletion run(const CompletionRequest& req, const CheckFn& check, const std::string& stage) const {
        try {
            return gateway.complete_validated(req, check, regen);
        } catch (const Exhausted& e) {
            throw Exhausted(e.report(), e.attempts(), stage);
        }
    }
};

}  // namespace lcforge
