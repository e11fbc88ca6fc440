// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/error.hpp"

namespace i2a::policy {

enum class TokenKind { name, number, string, op, newline, indent, dedent, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text; ///< decoded value for strings, lexeme otherwise
    int line = 0;
    int column = 0;
    bool unsupported_prefix = false; ///< f-string or bytes literal

    bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
    bool is_op(std::string_view t) const { return is(TokenKind::op, t); }
    bool is_name(std::string_view t) const { return is(TokenKind::name, t); }
};

namespace detail {

inline bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

} // namespace detail

/// Python-style tokenizer: indentation becomes INDENT/DEDENT, newlines inside
/// brackets are ignored, comments are dropped.
inline std::vector<Token> tokenize(std::string_view src)
{
    std::vector<Token> out;
    std::vector<int> indents{0};
    std::vector<char> brackets;
    std::size_t i = 0;
    int line = 1;
    std::size_t line_start = 0;
    bool at_line_start = true;

    auto col = [&](std::size_t pos) { return int(pos - line_start) + 1; };
    auto fail = [&](const std::string& msg, std::size_t pos) -> SyntaxError { return SyntaxError(msg, line, col(pos)); };
    auto push = [&](TokenKind k, std::string text, std::size_t pos) {
        out.push_back({k, std::move(text), line, col(pos), false});
    };
    auto newline = [&] {
        ++line;
        line_start = i;
    };

    while (i < src.size()) {
        if (at_line_start && brackets.empty()) {
            int width = 0;
            std::size_t j = i;
            for (; j < src.size() && (src[j] == ' ' || src[j] == '\t' || src[j] == '\f'); ++j)
                width = src[j] == '\t' ? (width / 8 + 1) * 8 : width + (src[j] == ' ' ? 1 : 0);
            // Blank and comment-only lines do not affect indentation.
            if (j >= src.size() || src[j] == '\n' || src[j] == '\r' || src[j] == '#') {
                while (j < src.size() && src[j] != '\n')
                    ++j;
                i = j;
                if (i < src.size()) {
                    ++i;
                    newline();
                }
                continue;
            }
            i = j;
            at_line_start = false;
            if (width > indents.back()) {
                indents.push_back(width);
                push(TokenKind::indent, "", i);
            } else {
                while (width < indents.back()) {
                    indents.pop_back();
                    push(TokenKind::dedent, "", i);
                }
                if (width != indents.back())
                    throw fail("inconsistent dedent", i);
            }
        }

        const char c = src[i];
        if (c == ' ' || c == '\t' || c == '\f' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n')
                ++i;
            continue;
        }
        if (c == '\\' && i + 1 < src.size() && (src[i + 1] == '\n' || src[i + 1] == '\r')) {
            i += src[i + 1] == '\r' && i + 2 < src.size() && src[i + 2] == '\n' ? 3 : 2;
            newline();
            continue;
        }
        if (c == '\n') {
            if (brackets.empty() && !out.empty() && out.back().kind != TokenKind::newline &&
                out.back().kind != TokenKind::indent && out.back().kind != TokenKind::dedent)
                push(TokenKind::newline, "", i);
            ++i;
            newline();
            if (brackets.empty())
                at_line_start = true;
            continue;
        }

        const std::size_t start = i;
        // String literal with optional prefix.
        {
            std::size_t j = i;
            bool raw = false, fstr = false, bytes = false;
            while (j < src.size() && j - i < 2 && std::string_view("rRbBuUfF").find(src[j]) != std::string_view::npos) {
                const char p = char(std::tolower(static_cast<unsigned char>(src[j])));
                raw |= p == 'r';
                fstr |= p == 'f';
                bytes |= p == 'b';
                ++j;
            }
            if (j < src.size() && (src[j] == '\'' || src[j] == '"')) {
                const int start_line = line, start_col = col(start);
                const char q = src[j];
                const bool triple = j + 2 < src.size() && src[j + 1] == q && src[j + 2] == q;
                std::size_t k = j + (triple ? 3 : 1);
                std::string value;
                for (;;) {
                    if (k >= src.size())
                        throw fail("unterminated string literal", start);
                    const char d = src[k];
                    if (triple) {
                        if (d == q && k + 2 < src.size() && src[k + 1] == q && src[k + 2] == q) {
                            k += 3;
                            break;
                        }
                    } else if (d == q) {
                        ++k;
                        break;
                    } else if (d == '\n') {
                        throw fail("unterminated string literal", start);
                    }
                    if (d == '\\' && k + 1 < src.size()) {
                        const char e = src[k + 1];
                        if (raw) {
                            value += d;
                            value += e;
                        } else {
                            switch (e) {
                            case 'n': value += '\n'; break;
                            case 't': value += '\t'; break;
                            case 'r': value += '\r'; break;
                            case '0': value += '\0'; break;
                            case '\\': value += '\\'; break;
                            case '\'': value += '\''; break;
                            case '"': value += '"'; break;
                            case '\n': break;
                            default:
                                value += d;
                                value += e;
                            }
                        }
                        if (e == '\n')
                            newline(), line_start = k + 2;
                        k += 2;
                        continue;
                    }
                    if (d == '\n') {
                        value += d;
                        ++k;
                        i = k;
                        newline();
                        continue;
                    }
                    value += d;
                    ++k;
                }
                Token t{TokenKind::string, std::move(value), start_line, start_col, fstr};
                if (bytes)
                    t.unsupported_prefix = true;
                out.push_back(std::move(t));
                i = k;
                continue;
            }
        }
        if (detail::ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && detail::ident_char(src[j]))
                ++j;
            push(TokenKind::name, std::string(src.substr(i, j - i)), i);
            i = j;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i;
            while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '.'))
                ++j;
            if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                std::size_t k = j + 1;
                if (k < src.size() && (src[k] == '+' || src[k] == '-'))
                    ++k;
                if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                    j = k;
                    while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                        ++j;
                }
            }
            if (j < src.size() && detail::ident_char(src[j]))
                throw fail("invalid number literal", i);
            push(TokenKind::number, std::string(src.substr(i, j - i)), i);
            i = j;
            continue;
        }

        static constexpr std::string_view three[] = {"**=", "//=", ">>=", "<<=", "..."};
        static constexpr std::string_view two[] = {"->", "**", "//", "==", "!=", "<=", ">=", "+=", "-=", "*=",
                                                   "/=", "%=", "&=", "|=", "^=", "<<", ">>", ":="};
        std::string_view op;
        for (auto t : three)
            if (src.substr(i, 3) == t)
                op = t;
        if (op.empty())
            for (auto t : two)
                if (src.substr(i, 2) == t)
                    op = t;
        if (op.empty()) {
            if (std::string_view("()[]{},:.;=+-*/%<>@&|^~").find(c) == std::string_view::npos)
                throw fail(std::string("unexpected character '") + c + "'", i);
            op = src.substr(i, 1);
        }
        if (op == "(" || op == "[" || op == "{")
            brackets.push_back(op[0]);
        else if (op == ")" || op == "]" || op == "}") {
            const char open = op == ")" ? '(' : op == "]" ? '[' : '{';
            if (brackets.empty() || brackets.back() != open)
                throw fail("unmatched '" + std::string(op) + "'", i);
            brackets.pop_back();
        }
        push(TokenKind::op, std::string(op), i);
        i += op.size();
    }
    if (!brackets.empty())
        throw SyntaxError(std::string("'") + brackets.back() + "' was never closed", line, col(i));
    if (!out.empty() && out.back().kind != TokenKind::newline && out.back().kind != TokenKind::dedent)
        push(TokenKind::newline, "", i);
    while (indents.size() > 1) {
        indents.pop_back();
        push(TokenKind::dedent, "", i);
    }
    push(TokenKind::end, "", i);
    return out;
}

} // namespace i2a::policy
