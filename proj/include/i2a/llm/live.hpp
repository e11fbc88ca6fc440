// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdlib>
#include <optional>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "i2a/core/error.hpp"

namespace i2a::llm {

struct LiveConfig {
    /// Full URL of the chat-completion route, e.g. https://host/v1/chat/completions.
    std::string endpoint;
    std::string api_key;
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
    std::chrono::seconds timeout{60};

    /// Reads LLM_ENDPOINT, LLM_API_KEY and optionally LLM_MODEL.
    static LiveConfig from_env()
    {
        LiveConfig c;
        const char* ep = std::getenv("LLM_ENDPOINT");
        if (!ep || !*ep)
            throw EndpointError("LLM_ENDPOINT is not set");
        c.endpoint = ep;
        if (const char* k = std::getenv("LLM_API_KEY"))
            c.api_key = k;
        if (const char* m = std::getenv("LLM_MODEL"); m && *m)
            c.model = m;
        return c;
    }
};

namespace detail {

struct SplitUrl {
    std::string origin; ///< scheme://host[:port]
    std::string path;
};

inline SplitUrl split_url(const std::string& url)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw EndpointError("endpoint '" + url + "' lacks a scheme");
    const auto path_begin = url.find('/', scheme_end + 3);
    if (path_begin == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
}

} // namespace detail

/// Chat-completion client: one user message in, the first choice's content out.
class LiveClient {
public:
    explicit LiveClient(LiveConfig cfg) : cfg_(std::move(cfg)) {}

    std::string complete(const std::string& prompt) const
    {
        const auto url = detail::split_url(cfg_.endpoint);
        httplib::Client cli(url.origin);
        cli.set_connection_timeout(cfg_.timeout);
        cli.set_read_timeout(cfg_.timeout);
        httplib::Headers headers;
        if (!cfg_.api_key.empty())
            headers.emplace("Authorization", "Bearer " + cfg_.api_key);
        const nlohmann::json body = {{"model", cfg_.model},
                                     {"messages", {{{"role", "user"}, {"content", prompt}}}},
                                     {"temperature", cfg_.temperature}};
        auto res = cli.Post(url.path, headers, body.dump(), "application/json");
        if (!res)
            throw EndpointError("request to " + cfg_.endpoint + " failed: " + httplib::to_string(res.error()));
        if (res->status != 200)
            throw EndpointError("endpoint returned HTTP " + std::to_string(res->status));
        try {
            const auto j = nlohmann::json::parse(res->body);
            return j.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw EndpointError(std::string("unexpected completion payload: ") + e.what());
        }
    }

    const LiveConfig& config() const { return cfg_; }

private:
    LiveConfig cfg_;
};

} // namespace i2a::llm
