// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/policy/ast.hpp"
#include "i2a/policy/lexer.hpp"

namespace i2a::policy {

/// Methods allowed on list values.
inline constexpr std::array<std::string_view, 2> kListMethods = {"extend", "append"};
/// Module aliases whose `pi` attribute maps to Constant(pi).
inline constexpr std::array<std::string_view, 3> kMathModules = {"np", "numpy", "math"};

namespace detail {

inline bool contains(auto const& arr, std::string_view s) { return std::find(arr.begin(), arr.end(), s) != arr.end(); }

inline constexpr std::array<std::string_view, 26> kUnsupportedKeywords = {
    "if",     "elif",   "else",  "for",   "while", "with",   "try",   "except", "finally",
    "import", "from",   "class", "lambda", "global", "nonlocal", "del", "assert", "raise",
    "yield",  "async",  "await", "pass",  "break", "continue", "not",  "match"};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    Program program()
    {
        Program prog;
        bool seen = false;
        while (peek().kind != TokenKind::end) {
            const Token& tk = peek();
            if (tk.kind == TokenKind::newline) {
                ++p_;
                continue;
            }
            if (tk.is_name("def")) {
                if (seen)
                    throw MultipleDefs("more than one function definition", tk.line, tk.column);
                prog = function();
                seen = true;
                continue;
            }
            if (tk.is_name("import") || tk.is_name("from"))
                throw UnsupportedConstruct("import statement", tk.line, tk.column);
            if (tk.kind == TokenKind::string) {
                // Module-level docstring.
                ++p_;
                expect_end_of_statement();
                continue;
            }
            if (tk.kind == TokenKind::indent)
                throw SyntaxError("unexpected indent", tk.line, tk.column);
            throw UnsupportedConstruct("statement outside the function body", tk.line, tk.column);
        }
        if (!seen)
            throw SyntaxError("no function definition found");
        return prog;
    }

private:
    const Token& peek(std::size_t ahead = 0) const { return t_[std::min(p_ + ahead, t_.size() - 1)]; }
    const Token& next() { return t_[std::min(p_++, t_.size() - 1)]; }

    [[noreturn]] void syntax(const std::string& msg, const Token& at) const
    {
        throw SyntaxError(msg, at.line, at.column);
    }
    [[noreturn]] void unsupported(const std::string& what, const Token& at) const
    {
        throw UnsupportedConstruct(what, at.line, at.column);
    }

    const Token& expect_op(std::string_view op)
    {
        const Token& tk = peek();
        if (!tk.is_op(op))
            syntax("expected '" + std::string(op) + "'" + describe(tk), tk);
        return next();
    }

    static std::string describe(const Token& tk)
    {
        switch (tk.kind) {
        case TokenKind::newline: return " before end of line";
        case TokenKind::end: return " before end of input";
        case TokenKind::indent: return ", found indent";
        case TokenKind::dedent: return ", found dedent";
        default: return ", found '" + tk.text + "'";
        }
    }

    void expect_end_of_statement()
    {
        const Token& tk = peek();
        if (tk.kind == TokenKind::newline) {
            ++p_;
            return;
        }
        if (tk.is_op(";")) {
            ++p_;
            if (peek().kind == TokenKind::newline)
                ++p_;
            return;
        }
        if (tk.kind == TokenKind::end || tk.kind == TokenKind::dedent)
            return;
        syntax("unexpected token" + describe(tk), tk);
    }

    Program function()
    {
        next(); // def
        const Token& name = next();
        if (name.kind != TokenKind::name)
            syntax("expected function name", name);
        expect_op("(");
        if (!peek().is_op(")"))
            unsupported("function parameters", peek());
        expect_op(")");
        if (peek().is_op("->")) {
            ++p_;
            // Return annotations are ignored.
            int depth = 0;
            while (!(depth == 0 && peek().is_op(":"))) {
                const Token& tk = next();
                if (tk.kind == TokenKind::newline || tk.kind == TokenKind::end)
                    syntax("expected ':' after return annotation", tk);
                if (tk.is_op("[") || tk.is_op("("))
                    ++depth;
                if (tk.is_op("]") || tk.is_op(")"))
                    --depth;
            }
        }
        expect_op(":");
        if (peek().kind != TokenKind::newline)
            syntax("expected an indented block after function definition", peek());
        ++p_;
        if (peek().kind != TokenKind::indent)
            syntax("expected an indented block after function definition", peek());
        ++p_;

        Program prog;
        prog.name = name.text;
        bool returned = false;
        while (peek().kind != TokenKind::dedent && peek().kind != TokenKind::end) {
            const Token& start = peek();
            if (start.kind == TokenKind::newline) {
                ++p_;
                continue;
            }
            if (start.kind == TokenKind::indent)
                syntax("unexpected indent", start);
            auto st = statement();
            if (!st)
                continue;
            if (returned) {
                if (st->kind == StmtKind::return_)
                    throw MultipleReturns("more than one return statement", start.line, start.column);
                unsupported("statement after return", start);
            }
            returned = st->kind == StmtKind::return_;
            prog.statements.push_back(std::move(*st));
        }
        if (peek().kind == TokenKind::dedent)
            ++p_;
        if (!returned)
            throw MissingReturn("function '" + prog.name + "' has no return statement", name.line, name.column);
        return prog;
    }

    std::optional<Statement> statement()
    {
        const Token& start = peek();
        if (start.kind == TokenKind::name) {
            if (start.text == "def")
                unsupported("nested function definition", start);
            if (contains(kUnsupportedKeywords, start.text))
                unsupported("'" + start.text + "' statement", start);
            if (start.text == "return") {
                ++p_;
                if (peek().kind == TokenKind::newline || peek().is_op(";") || peek().kind == TokenKind::end)
                    syntax("return needs a value", peek());
                Statement s;
                s.kind = StmtKind::return_;
                s.line = start.line;
                s.value = expression();
                if (peek().is_op(","))
                    unsupported("tuple return value", peek());
                expect_end_of_statement();
                return s;
            }
        }

        Statement s;
        s.line = start.line;
        Expr first = expression();
        std::vector<Expr> lhs{first};
        while (peek().is_op(",")) {
            ++p_;
            lhs.push_back(expression());
        }
        const Token& op = peek();
        static constexpr std::array<std::string_view, 13> kAugmented = {
            "+=", "-=", "*=", "/=", "//=", "%=", "**=", "&=", "|=", "^=", ">>=", "<<=", ":="};
        if (op.kind == TokenKind::op && contains(kAugmented, op.text))
            unsupported("augmented assignment", op);
        if (op.is_op(":"))
            unsupported("annotated assignment", op);
        if (op.is_op("=")) {
            ++p_;
            if (lhs.size() > 2)
                unsupported("assignment to more than two names", start);
            for (const auto& e : lhs) {
                if (e.kind != ExprKind::name)
                    unsupported("assignment target must be a plain name", start);
                s.targets.push_back(e.text);
            }
            s.kind = StmtKind::assign;
            s.value = expression();
            if (peek().is_op(","))
                unsupported("tuple expression", peek());
            if (peek().is_op("="))
                unsupported("chained assignment", peek());
            expect_end_of_statement();
            return s;
        }
        if (lhs.size() > 1)
            unsupported("tuple expression", start);
        expect_end_of_statement();
        if (first.kind == ExprKind::string)
            return std::nullopt; // docstring
        if (first.kind != ExprKind::call && first.kind != ExprKind::method_call)
            unsupported("expression statement without a call", start);
        s.kind = StmtKind::expr;
        s.value = std::move(first);
        return s;
    }

    Expr expression()
    {
        Expr e = additive();
        const Token& tk = peek();
        if (tk.kind == TokenKind::op &&
            (tk.text == "==" || tk.text == "!=" || tk.text == "<" || tk.text == ">" || tk.text == "<=" || tk.text == ">="))
            unsupported("comparison", tk);
        if (tk.kind == TokenKind::name &&
            (tk.text == "if" || tk.text == "and" || tk.text == "or" || tk.text == "in" || tk.text == "is" ||
             tk.text == "not" || tk.text == "for"))
            unsupported("'" + tk.text + "' expression", tk);
        return e;
    }

    static Expr binop(std::string op, Expr l, Expr r)
    {
        Expr e;
        e.kind = ExprKind::binop;
        e.text = std::move(op);
        e.args = {std::move(l), std::move(r)};
        return e;
    }

    Expr additive()
    {
        Expr e = term();
        while (peek().is_op("+") || peek().is_op("-")) {
            std::string op = next().text;
            e = binop(std::move(op), std::move(e), term());
        }
        return e;
    }

    Expr term()
    {
        Expr e = unary();
        for (;;) {
            const Token& tk = peek();
            if (tk.is_op("*") || tk.is_op("/")) {
                std::string op = next().text;
                e = binop(std::move(op), std::move(e), unary());
            } else if (tk.is_op("//") || tk.is_op("%") || tk.is_op("@") || tk.is_op("<<") || tk.is_op(">>") ||
                       tk.is_op("&") || tk.is_op("|") || tk.is_op("^")) {
                unsupported("operator '" + tk.text + "'", tk);
            } else {
                return e;
            }
        }
    }

    Expr unary()
    {
        const Token& tk = peek();
        if (tk.is_op("-")) {
            ++p_;
            Expr e;
            e.kind = ExprKind::negate;
            e.args = {unary()};
            return e;
        }
        if (tk.is_op("+") || tk.is_op("~"))
            unsupported("unary '" + tk.text + "'", tk);
        Expr e = postfix();
        if (peek().is_op("**"))
            unsupported("operator '**'", peek());
        return e;
    }

    std::vector<std::string> call_args(Expr& call)
    {
        // Positional arguments go to call.args; keyword arguments are appended after.
        std::vector<std::string> names;
        expect_op("(");
        while (!peek().is_op(")")) {
            const Token& tk = peek();
            if (tk.is_op("*") || tk.is_op("**"))
                unsupported("argument unpacking", tk);
            if (tk.kind == TokenKind::name && peek(1).is_op("=")) {
                p_ += 2;
                if (std::find(names.begin(), names.end(), tk.text) != names.end())
                    syntax("keyword argument repeated: " + tk.text, tk);
                names.push_back(tk.text);
                call.args.push_back(expression());
            } else {
                if (!names.empty())
                    syntax("positional argument follows keyword argument", tk);
                call.args.push_back(expression());
            }
            if (peek().is_name("for"))
                unsupported("generator expression", peek());
            if (peek().is_op(",")) {
                ++p_;
                continue;
            }
            if (!peek().is_op(")"))
                syntax("expected ',' or ')'" + describe(peek()), peek());
        }
        expect_op(")");
        return names;
    }

    Expr postfix()
    {
        Expr e = atom();
        for (;;) {
            const Token& tk = peek();
            if (tk.is_op("(")) {
                if (e.kind != ExprKind::name)
                    unsupported("call of a computed value", tk);
                Expr call;
                call.kind = ExprKind::call;
                call.text = e.text;
                call.keywords = call_args(call);
                e = std::move(call);
            } else if (tk.is_op("[")) {
                ++p_;
                if (peek().is_op(":"))
                    unsupported("slice", peek());
                Expr index = expression();
                if (peek().is_op(":"))
                    unsupported("slice", peek());
                if (peek().is_op(","))
                    unsupported("multi-dimensional subscript", peek());
                expect_op("]");
                if (e.kind == ExprKind::name && e.text == "templates" && index.kind == ExprKind::string) {
                    Expr g;
                    g.kind = ExprKind::cache_get;
                    g.text = index.text;
                    e = std::move(g);
                } else {
                    Expr s;
                    s.kind = ExprKind::subscript;
                    s.args = {std::move(e), std::move(index)};
                    e = std::move(s);
                }
            } else if (tk.is_op(".")) {
                ++p_;
                const Token& attr = next();
                if (attr.kind != TokenKind::name)
                    syntax("expected attribute name", attr);
                const bool is_module = e.kind == ExprKind::name && contains(kMathModules, e.text);
                if (is_module && attr.text == "pi" && !peek().is_op("(")) {
                    Expr c;
                    c.kind = ExprKind::constant;
                    c.text = "pi";
                    e = std::move(c);
                    continue;
                }
                if (!peek().is_op("("))
                    unsupported("attribute access '" + attr.text + "'", attr);
                if (e.kind == ExprKind::name && e.text == "templates" && attr.text == "get") {
                    Expr tmp;
                    const auto names = call_args(tmp);
                    if (!names.empty() || tmp.args.size() != 1 || tmp.args[0].kind != ExprKind::string)
                        unsupported("templates.get needs a single string key", attr);
                    Expr g;
                    g.kind = ExprKind::cache_get;
                    g.text = tmp.args[0].text;
                    e = std::move(g);
                    continue;
                }
                if (!contains(kListMethods, attr.text)) {
                    const std::string recv = e.kind == ExprKind::name ? e.text + "." : "";
                    unsupported("attribute call '" + recv + attr.text + "'", attr);
                }
                Expr m;
                m.kind = ExprKind::method_call;
                m.text = attr.text;
                m.args.push_back(std::move(e));
                m.keywords = call_args(m);
                if (!m.keywords.empty())
                    unsupported("keyword arguments to list method", attr);
                e = std::move(m);
            } else {
                return e;
            }
        }
    }

    Expr atom()
    {
        const Token& tk = next();
        Expr e;
        switch (tk.kind) {
        case TokenKind::name:
            if (tk.text == "True" || tk.text == "False") {
                e.kind = ExprKind::boolean;
                e.number = tk.text == "True" ? 1.0 : 0.0;
                return e;
            }
            if (tk.text == "None") {
                e.kind = ExprKind::none;
                return e;
            }
            if (contains(kUnsupportedKeywords, tk.text) || tk.text == "def" || tk.text == "return")
                unsupported("'" + tk.text + "' in expression", tk);
            e.kind = ExprKind::name;
            e.text = tk.text;
            return e;
        case TokenKind::number: {
            std::string digits;
            for (char c : tk.text)
                if (c != '_')
                    digits += c;
            e.kind = ExprKind::number;
            e.is_int = digits.find_first_of(".eE") == std::string::npos;
            const auto r = std::from_chars(digits.data(), digits.data() + digits.size(), e.number);
            if (r.ec != std::errc() || r.ptr != digits.data() + digits.size())
                syntax("invalid number literal '" + tk.text + "'", tk);
            return e;
        }
        case TokenKind::string: {
            e.kind = ExprKind::string;
            const Token* s = &tk;
            for (;;) {
                if (s->unsupported_prefix)
                    unsupported("f-string or bytes literal", *s);
                e.text += s->text;
                if (peek().kind != TokenKind::string)
                    break;
                s = &next();
            }
            return e;
        }
        case TokenKind::op:
            if (tk.text == "(") {
                if (peek().is_op(")"))
                    unsupported("tuple literal", tk);
                Expr inner = expression();
                if (peek().is_op(","))
                    unsupported("tuple literal", peek());
                if (peek().is_name("for"))
                    unsupported("generator expression", peek());
                expect_op(")");
                return inner;
            }
            if (tk.text == "[") {
                e.kind = ExprKind::list;
                while (!peek().is_op("]")) {
                    e.args.push_back(expression());
                    if (peek().is_name("for"))
                        unsupported("list comprehension", peek());
                    if (peek().is_op(",")) {
                        ++p_;
                        continue;
                    }
                    if (!peek().is_op("]"))
                        syntax("expected ',' or ']'" + describe(peek()), peek());
                }
                expect_op("]");
                return e;
            }
            if (tk.text == "{")
                unsupported("dict or set literal", tk);
            syntax("unexpected '" + tk.text + "'", tk);
        case TokenKind::newline:
        case TokenKind::end:
            syntax("unexpected end of statement", tk);
        case TokenKind::indent:
        case TokenKind::dedent:
            syntax("unexpected indentation", tk);
        }
        syntax("unexpected token", tk);
    }

    std::vector<Token> t_;
    std::size_t p_ = 0;
};

} // namespace detail

/// Parses one `def name() -> ...:` block of straight-line statements.
/// Comments and docstrings are dropped.
inline Program parse_program(std::string_view source)
{
    detail::Parser p(tokenize(source));
    return p.program();
}

} // namespace i2a::policy
