// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "i2a/core/codec.hpp"
#include "i2a/core/error.hpp"

namespace i2a::llm {

inline constexpr const char* kCassetteSchema = "i2a.cassette/v1";

/// Recorded model replies keyed by SHA-256 of the prompt, one reply per trial.
class Cassette {
public:
    using json = nlohmann::json;

    static Cassette from_json(const json& j)
    {
        if (j.value("schema", "") != kCassetteSchema)
            throw Error("unsupported cassette schema '" + j.value("schema", "") + "'");
        Cassette c;
        for (const auto& [k, v] : j.at("entries").items())
            c.entries_[k] = v.get<std::vector<std::string>>();
        return c;
    }

    static Cassette load(const std::filesystem::path& p)
    {
        std::ifstream f(p, std::ios::binary);
        if (!f)
            throw Error("cannot open cassette " + p.string());
        try {
            return from_json(json::parse(f));
        } catch (const json::exception& e) {
            throw Error("malformed cassette " + p.string() + ": " + e.what());
        }
    }

    json to_json() const
    {
        std::lock_guard lock(mu_);
        json entries = json::object();
        for (const auto& [k, v] : entries_)
            entries[k] = v;
        return {{"schema", kCassetteSchema}, {"entries", entries}};
    }

    void save(const std::filesystem::path& p) const
    {
        std::ofstream f(p, std::ios::binary);
        if (!f)
            throw Error("cannot write cassette " + p.string());
        f << to_json().dump(2) << "\n";
    }

    /// Appends a reply; existing replies are never rewritten.
    void record(const std::string& prompt, std::string reply)
    {
        std::lock_guard lock(mu_);
        entries_[sha256_hex(prompt)].push_back(std::move(reply));
    }

    bool contains(const std::string& prompt) const
    {
        std::lock_guard lock(mu_);
        return entries_.count(sha256_hex(prompt)) > 0;
    }

    const std::vector<std::string>& replies(const std::string& prompt) const
    {
        std::lock_guard lock(mu_);
        const auto key = sha256_hex(prompt);
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw CassetteMiss("no cassette entry for prompt " + key.substr(0, 12));
        return it->second;
    }

    std::size_t size() const
    {
        std::lock_guard lock(mu_);
        return entries_.size();
    }

    Cassette() = default;
    Cassette(const Cassette& o)
    {
        std::lock_guard lock(o.mu_);
        entries_ = o.entries_;
    }
    Cassette& operator=(const Cassette& o)
    {
        if (this != &o) {
            std::scoped_lock lock(mu_, o.mu_);
            entries_ = o.entries_;
        }
        return *this;
    }

private:
    std::map<std::string, std::vector<std::string>> entries_;
    mutable std::mutex mu_;
};

} // namespace i2a::llm
