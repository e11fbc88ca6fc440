// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/error.hpp"

namespace i2a::llm {

namespace detail {

inline std::vector<std::string> split_lines(std::string_view text)
{
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    if (!cur.empty())
        lines.push_back(std::move(cur));
    return lines;
}

inline bool is_blank(const std::string& s)
{
    return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

inline std::string_view trim_left(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    return s;
}

} // namespace detail

/// Extracts program text from a chat reply: picks the first fenced block that
/// defines a function (else the first block, else the whole reply), drops CRs,
/// trailing spaces and common indentation, and ends with one newline.
inline std::string strip_fences(std::string_view reply)
{
    const auto lines = detail::split_lines(reply);
    std::vector<std::vector<std::string>> blocks;
    bool in_block = false;
    for (const auto& l : lines) {
        if (detail::trim_left(l).starts_with("```")) {
            if (!in_block)
                blocks.emplace_back();
            in_block = !in_block;
            continue;
        }
        if (in_block)
            blocks.back().push_back(l);
    }
    std::vector<std::string> body = lines;
    if (!blocks.empty()) {
        body = blocks.front();
        for (const auto& b : blocks)
            if (std::any_of(b.begin(), b.end(), [](const std::string& l) { return detail::trim_left(l).starts_with("def "); })) {
                body = b;
                break;
            }
    }
    for (auto& l : body)
        while (!l.empty() && (l.back() == ' ' || l.back() == '\t'))
            l.pop_back();
    while (!body.empty() && body.front().empty())
        body.erase(body.begin());
    while (!body.empty() && body.back().empty())
        body.pop_back();

    std::size_t indent = std::string::npos;
    for (const auto& l : body)
        if (!detail::is_blank(l))
            indent = std::min(indent, l.size() - detail::trim_left(l).size());
    std::string out;
    for (const auto& l : body) {
        out += l.empty() ? l : l.substr(std::min(indent, l.size()));
        out += '\n';
    }
    return out;
}

} // namespace i2a::llm
