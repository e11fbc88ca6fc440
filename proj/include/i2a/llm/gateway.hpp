// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/modality.hpp"
#include "i2a/llm/cassette.hpp"
#include "i2a/llm/live.hpp"
#include "i2a/llm/oracle.hpp"
#include "i2a/llm/text.hpp"
#include "i2a/policy/lint.hpp"
#include "i2a/policy/parser.hpp"

namespace i2a::llm {

enum class LlmMode { live, replay, oracle };

inline std::string_view to_string(LlmMode m)
{
    switch (m) {
    case LlmMode::live: return "live";
    case LlmMode::replay: return "replay";
    case LlmMode::oracle: return "oracle";
    }
    return "?";
}

inline LlmMode llm_mode_from_string(std::string_view s)
{
    for (auto m : {LlmMode::live, LlmMode::replay, LlmMode::oracle})
        if (to_string(m) == s)
            return m;
    throw Error("unknown LLM mode '" + std::string(s) + "'");
}

struct GenerationRequest {
    std::string prompt;
    LlmMode mode = LlmMode::oracle;
    int max_trials = 1;
    double temperature = 0.0;
    Modality modality = Modality::pure_language;
    /// Required in oracle mode.
    const sim::TaskInstance* task = nullptr;
};

/// Where reply text comes from; replay and live need these set.
struct Backends {
    const Cassette* cassette = nullptr;
    const LiveClient* live = nullptr;
    /// Live replies are appended here when set.
    Cassette* recorder = nullptr;
};

struct TrialFailure {
    int trial = 0;
    std::string kind; ///< parse error kind, or "Lint"
    std::string message;
};

struct GenerationResult {
    policy::Program program;
    std::string source;
    int trials = 0;
    std::vector<TrialFailure> failures;
};

inline std::string fetch_reply(const GenerationRequest& req, const Backends& b, int trial)
{
    switch (req.mode) {
    case LlmMode::oracle:
        if (!req.task)
            throw Error("oracle mode needs a task instance");
        return oracle_source(*req.task, req.modality);
    case LlmMode::replay: {
        if (!b.cassette)
            throw CassetteMiss("replay mode without a cassette");
        return b.cassette->replies(req.prompt).at(std::size_t(trial));
    }
    case LlmMode::live: {
        if (!b.live)
            throw EndpointError("live mode without a client");
        std::string reply = b.live->complete(req.prompt);
        if (b.recorder)
            b.recorder->record(req.prompt, reply);
        return reply;
    }
    }
    throw Error("unhandled LLM mode");
}

/// Retries with the unchanged prompt until a reply parses and lints clean.
inline GenerationResult generate_program(const GenerationRequest& req, const Backends& b = {})
{
    if (req.max_trials < 1)
        throw Error("max_trials must be at least 1");
    GenerationResult out;
    for (int trial = 0; trial < req.max_trials; ++trial) {
        if (req.mode == LlmMode::replay && b.cassette &&
            std::size_t(trial) >= b.cassette->replies(req.prompt).size())
            break; // recorded replies exhausted
        ++out.trials;
        const std::string text = strip_fences(fetch_reply(req, b, trial));
        try {
            policy::Program p = policy::parse_program(text);
            const auto report = policy::lint_program(p, req.modality);
            if (!report.clean()) {
                out.failures.push_back({trial + 1, "Lint", report.summary()});
                continue;
            }
            out.program = std::move(p);
            out.source = text;
            return out;
        } catch (const ParseError& e) {
            out.failures.push_back({trial + 1, e.kind(), e.what()});
        }
    }
    if (out.failures.empty())
        throw CassetteMiss("cassette holds no replies for this prompt");
    const auto& last = out.failures.back();
    throw ExhaustedTrials(out.trials, last.kind, last.message);
}

} // namespace i2a::llm
