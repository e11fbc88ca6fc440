// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cmath>
#include <string>

#include "i2a/policy/ast.hpp"

namespace i2a::policy {

namespace detail {

inline std::string quote(const std::string& s)
{
    std::string out = "'";
    for (char c : s) {
        switch (c) {
        case '\\': out += "\\\\"; break;
        case '\'': out += "\\'"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        case '\0': out += "\\0"; break;
        default: out += c;
        }
    }
    return out + "'";
}

inline std::string format_number(double v, bool is_int)
{
    char buf[64];
    if (is_int && std::fabs(v) < 9.0e15) {
        auto r = std::to_chars(buf, buf + sizeof buf, static_cast<long long>(v));
        return std::string(buf, r.ptr);
    }
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, r.ptr);
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

inline int precedence(const Expr& e)
{
    if (e.kind == ExprKind::binop)
        return e.text == "+" || e.text == "-" ? 1 : 2;
    if (e.kind == ExprKind::negate)
        return 3;
    return 4;
}

inline std::string print_args(const Expr& e, std::size_t first);

inline std::string print_expr(const Expr& e)
{
    switch (e.kind) {
    case ExprKind::call: return e.text + "(" + print_args(e, 0) + ")";
    case ExprKind::method_call: return print_expr(e.args[0]) + "." + e.text + "(" + print_args(e, 1) + ")";
    case ExprKind::name: return e.text;
    case ExprKind::string: return quote(e.text);
    case ExprKind::number: return format_number(e.number, e.is_int);
    case ExprKind::boolean: return e.number != 0.0 ? "True" : "False";
    case ExprKind::none: return "None";
    case ExprKind::list: return "[" + print_args(e, 0) + "]";
    case ExprKind::cache_get: return "templates.get(" + quote(e.text) + ")";
    case ExprKind::subscript: return print_expr(e.args[0]) + "[" + print_expr(e.args[1]) + "]";
    case ExprKind::constant: return "np." + e.text;
    case ExprKind::negate: {
        const std::string inner = print_expr(e.args[0]);
        return precedence(e.args[0]) < 3 ? "-(" + inner + ")" : "-" + inner;
    }
    case ExprKind::binop: {
        const int p = precedence(e);
        std::string l = print_expr(e.args[0]), r = print_expr(e.args[1]);
        if (precedence(e.args[0]) < p)
            l = "(" + l + ")";
        if (precedence(e.args[1]) <= p)
            r = "(" + r + ")";
        return l + " " + e.text + " " + r;
    }
    }
    return "";
}

inline std::string print_args(const Expr& e, std::size_t first)
{
    std::string out;
    const std::size_t kw_start = e.positional_count();
    for (std::size_t i = first; i < e.args.size(); ++i) {
        if (i > first)
            out += ", ";
        if (i >= kw_start && e.kind != ExprKind::list)
            out += e.keywords[i - kw_start] + "=";
        out += print_expr(e.args[i]);
    }
    return out;
}

} // namespace detail

inline std::string pretty_print(const Expr& e) { return detail::print_expr(e); }

/// Canonical source form; parse(pretty_print(p)) == p.
inline std::string pretty_print(const Program& p)
{
    std::string out = "def " + p.name + "() -> dict:\n";
    for (const auto& s : p.statements) {
        out += "    ";
        switch (s.kind) {
        case StmtKind::assign:
            out += s.targets[0];
            if (s.targets.size() > 1)
                out += ", " + s.targets[1];
            out += " = ";
            break;
        case StmtKind::return_: out += "return "; break;
        case StmtKind::expr: break;
        }
        out += detail::print_expr(s.value) + "\n";
    }
    return out;
}

} // namespace i2a::policy
