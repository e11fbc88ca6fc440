// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace i2a::policy {

enum class ExprKind {
    call,        ///< text = callee; args; keywords name the trailing args
    method_call, ///< text = method; args[0] = receiver, rest positional
    name,        ///< text = identifier
    string,      ///< text = value
    number,      ///< number, is_int
    boolean,     ///< number != 0
    none,
    list,        ///< args = elements
    cache_get,   ///< text = key
    subscript,   ///< args = {target, index}
    binop,       ///< text = operator; args = {lhs, rhs}
    negate,      ///< args = {operand}
    constant,    ///< text = constant name ("pi")
};

struct Expr {
    ExprKind kind = ExprKind::none;
    std::string text;
    double number = 0.0;
    bool is_int = false;
    std::vector<Expr> args;
    /// Keyword names for the last keywords.size() entries of args.
    std::vector<std::string> keywords;

    std::size_t positional_count() const { return args.size() - keywords.size(); }
    const Expr* keyword(std::string_view k) const
    {
        for (std::size_t i = 0; i < keywords.size(); ++i)
            if (keywords[i] == k)
                return &args[positional_count() + i];
        return nullptr;
    }

    friend bool operator==(const Expr&, const Expr&) = default;
};

enum class StmtKind { assign, expr, return_ };

struct Statement {
    StmtKind kind = StmtKind::expr;
    std::vector<std::string> targets; ///< assign only, one or two names
    Expr value;
    int line = 0; ///< source line, ignored by equality

    friend bool operator==(const Statement& a, const Statement& b)
    {
        return a.kind == b.kind && a.targets == b.targets && a.value == b.value;
    }
};

struct Program {
    std::string name;
    std::vector<Statement> statements;

    friend bool operator==(const Program&, const Program&) = default;
};

inline std::string_view to_string(ExprKind k)
{
    switch (k) {
    case ExprKind::call: return "Call";
    case ExprKind::method_call: return "MethodCall";
    case ExprKind::name: return "Name";
    case ExprKind::string: return "String";
    case ExprKind::number: return "Number";
    case ExprKind::boolean: return "Bool";
    case ExprKind::none: return "None";
    case ExprKind::list: return "List";
    case ExprKind::cache_get: return "CacheGet";
    case ExprKind::subscript: return "Subscript";
    case ExprKind::binop: return "BinOp";
    case ExprKind::negate: return "Neg";
    case ExprKind::constant: return "Constant";
    }
    return "?";
}

inline std::string_view to_string(StmtKind k)
{
    switch (k) {
    case StmtKind::assign: return "Assign";
    case StmtKind::expr: return "Expr";
    case StmtKind::return_: return "Return";
    }
    return "?";
}

/// Visits e and every sub-expression, parents first.
template <class F>
void walk(const Expr& e, F&& f)
{
    f(e);
    for (const auto& a : e.args)
        walk(a, f);
}

template <class F>
void walk(const Program& p, F&& f)
{
    for (const auto& s : p.statements)
        walk(s.value, f);
}

/// Names of plain function calls in source order, with repeats.
inline std::vector<std::string> called_apis(const Program& p)
{
    std::vector<std::string> out;
    for (const auto& s : p.statements) {
        // Pre-order walk yields outer calls before their nested arguments.
        walk(s.value, [&](const Expr& e) {
            if (e.kind == ExprKind::call)
                out.push_back(e.text);
        });
    }
    return out;
}

} // namespace i2a::policy
