// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <typeinfo>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/policy/ast.hpp"
#include "i2a/policy/value.hpp"

namespace i2a::policy {

/// Call arguments bound to parameter names.
class Args {
public:
    bool has(const std::string& k) const
    {
        auto it = named_.find(k);
        return it != named_.end() && !it->second.is_none();
    }
    const Value& at(const std::string& k) const
    {
        auto it = named_.find(k);
        if (it == named_.end())
            throw TypeMismatch("missing required argument '" + k + "'");
        return it->second;
    }
    void set(const std::string& k, Value v) { named_[k] = std::move(v); }

private:
    std::map<std::string, Value> named_;
};

struct Api {
    std::vector<std::string> params;
    std::function<Value(const Args&)> fn;
};

/// Everything a program can reach: APIs, runtime constants, the template cache.
struct ApiRegistry {
    std::map<std::string, Api> apis;
    std::map<std::string, Value> constants;
    std::function<Value(const std::string&)> cache_get;
    /// Fired once when a statement fails, before the error propagates.
    std::function<void()> on_failure;

    bool has(const std::string& name) const { return apis.count(name) > 0; }
    std::vector<std::string> names() const
    {
        std::vector<std::string> out;
        for (const auto& [k, _] : apis)
            out.push_back(k);
        return out;
    }
};

namespace detail {

inline std::string error_kind(const std::exception& e)
{
#define I2A_KIND(T)                                                                                                    \
    if (dynamic_cast<const T*>(&e))                                                                                    \
        return #T;
    I2A_KIND(AllExcluded)
    I2A_KIND(EmptyCrop)
    I2A_KIND(UnparsableQuery)
    I2A_KIND(EmptyScene)
    I2A_KIND(EmptyMask)
    I2A_KIND(NoFreeSpace)
    I2A_KIND(IndexMismatch)
    I2A_KIND(DimensionMismatch)
    I2A_KIND(OutOfBounds)
    I2A_KIND(EndpointError)
    I2A_KIND(MissingAsset)
    I2A_KIND(TypeMismatch)
#undef I2A_KIND
    return "Error";
}

} // namespace detail

class Interpreter {
public:
    explicit Interpreter(const ApiRegistry& reg) : reg_(reg) {}

    /// Runs the program; the return value must be a RobotExecution result.
    action::ExecutionInfo run(const Program& p)
    {
        env_.clear();
        calls_ = 0;
        for (std::size_t i = 0; i < p.statements.size(); ++i) {
            const Statement& s = p.statements[i];
            stmt_ = i;
            Value v;
            try {
                v = eval(s.value);
            } catch (const RuntimeApiError&) {
                fail();
                throw;
            } catch (const UnboundName&) {
                fail();
                throw;
            } catch (const Error& e) {
                fail();
                throw RuntimeApiError(i, "", detail::error_kind(e), e.what());
            }
            switch (s.kind) {
            case StmtKind::assign:
                if (s.targets.size() == 1) {
                    env_[s.targets[0]] = std::move(v);
                } else {
                    const auto* l = v.get_if<ListPtr>();
                    if (!l || (*l)->size() != s.targets.size()) {
                        fail();
                        throw RuntimeApiError(i, "", "TypeMismatch",
                                              "cannot unpack " + type_name(v) + " into " +
                                                  std::to_string(s.targets.size()) + " names");
                    }
                    for (std::size_t k = 0; k < s.targets.size(); ++k)
                        env_[s.targets[k]] = (**l)[k];
                }
                break;
            case StmtKind::expr: break;
            case StmtKind::return_:
                if (const auto* info = v.get_if<action::ExecutionInfo>())
                    return *info;
                throw ReturnTypeError("program returned " + type_name(v) + ", expected the RobotExecution result");
            }
        }
        throw ReturnTypeError("program ended without returning");
    }

    /// API dispatches made by the last run.
    std::size_t calls() const { return calls_; }
    const std::map<std::string, Value>& environment() const { return env_; }

    Value eval(const Expr& e)
    {
        switch (e.kind) {
        case ExprKind::none: return {};
        case ExprKind::boolean: return Value(e.number != 0.0);
        case ExprKind::number: return Value(e.number);
        case ExprKind::string: return Value(e.text);
        case ExprKind::constant:
            if (e.text == "pi")
                return Value(std::numbers::pi);
            throw TypeMismatch("unknown constant " + e.text);
        case ExprKind::name: return lookup(e.text);
        case ExprKind::list: {
            List items;
            for (const auto& a : e.args)
                items.push_back(eval(a));
            return make_list(std::move(items));
        }
        case ExprKind::cache_get:
            if (!reg_.cache_get)
                throw MissingAsset("no template cache bound");
            return reg_.cache_get(e.text);
        case ExprKind::subscript: return subscript(eval(e.args[0]), eval(e.args[1]));
        case ExprKind::negate: return Value(-as_number(eval(e.args[0]), "operand of '-'"));
        case ExprKind::binop: return binop(e.text, eval(e.args[0]), eval(e.args[1]));
        case ExprKind::method_call: return method(e);
        case ExprKind::call: return call(e);
        }
        throw TypeMismatch("unhandled expression");
    }

private:
    void fail()
    {
        if (reg_.on_failure) {
            try {
                reg_.on_failure();
            } catch (const std::exception&) {
            }
        }
    }

    Value lookup(const std::string& name) const
    {
        if (auto it = env_.find(name); it != env_.end())
            return it->second;
        if (auto it = reg_.constants.find(name); it != reg_.constants.end())
            return it->second;
        throw UnboundName("name '" + name + "' is not defined (statement " + std::to_string(stmt_) + ")");
    }

    static Value subscript(const Value& target, const Value& index)
    {
        if (const auto* l = target.get_if<ListPtr>()) {
            int i = as_index(index, "list index");
            const int n = int((*l)->size());
            if (i < 0)
                i += n;
            if (i < 0 || i >= n)
                throw IndexMismatch("list index out of range");
            return (**l)[std::size_t(i)];
        }
        if (const auto* c = target.get_if<perception::CropResult>()) {
            const int i = as_index(index, "object index");
            if (i < 0 || std::size_t(i) >= c->crops.size())
                throw IndexMismatch("object index out of range");
            return Value(c->crops[std::size_t(i)]);
        }
        if (const auto* info = target.get_if<action::ExecutionInfo>()) {
            const auto& key = expect<std::string>(index, "result key");
            if (key == "success")
                return Value(info->success);
            if (key == "actions_executed")
                return Value(double(info->actions_executed));
            throw TypeMismatch("unknown result key '" + key + "'");
        }
        throw TypeMismatch("cannot subscript " + type_name(target));
    }

    static Value binop(const std::string& op, const Value& l, const Value& r)
    {
        if (op == "+") {
            if (const auto* a = l.get_if<ListPtr>()) {
                const auto& b = expect<ListPtr>(r, "right operand of '+'");
                List out = **a;
                out.insert(out.end(), b->begin(), b->end());
                return make_list(std::move(out));
            }
            if (const auto* a = l.get_if<std::string>())
                return Value(*a + expect<std::string>(r, "right operand of '+'"));
        }
        const double a = as_number(l, "left operand of '" + op + "'");
        const double b = as_number(r, "right operand of '" + op + "'");
        if (op == "+")
            return Value(a + b);
        if (op == "-")
            return Value(a - b);
        if (op == "*")
            return Value(a * b);
        if (b == 0.0)
            throw TypeMismatch("division by zero");
        return Value(a / b);
    }

    Value method(const Expr& e)
    {
        Value recv = eval(e.args[0]);
        auto* l = recv.get_if<ListPtr>();
        if (!l)
            throw TypeMismatch("'" + e.text + "' called on " + type_name(recv));
        if (e.args.size() != 2)
            throw TypeMismatch(e.text + " takes exactly one argument");
        Value arg = eval(e.args[1]);
        if (e.text == "append") {
            (*l)->push_back(std::move(arg));
        } else {
            // extend accepts a list or a single action.
            if (const auto* other = arg.get_if<ListPtr>()) {
                const List copy = **other;
                (*l)->insert((*l)->end(), copy.begin(), copy.end());
            } else if (arg.is<RobotAction>()) {
                (*l)->push_back(std::move(arg));
            } else {
                throw TypeMismatch("extend expects a list, got " + type_name(arg));
            }
        }
        return recv;
    }

    Value call(const Expr& e)
    {
        auto it = reg_.apis.find(e.text);
        if (it == reg_.apis.end())
            throw RuntimeApiError(stmt_, e.text, "UnknownApi", "'" + e.text + "' is not a registered API");
        const Api& api = it->second;
        Args args;
        const std::size_t npos = e.positional_count();
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            std::string key;
            if (i < npos) {
                if (i >= api.params.size())
                    throw RuntimeApiError(stmt_, e.text, "TypeMismatch", "too many positional arguments");
                key = api.params[i];
            } else {
                key = e.keywords[i - npos];
                if (std::find(api.params.begin(), api.params.end(), key) == api.params.end())
                    throw RuntimeApiError(stmt_, e.text, "TypeMismatch", "unexpected keyword argument '" + key + "'");
            }
            args.set(key, eval(e.args[i]));
        }
        ++calls_;
        try {
            return api.fn(args);
        } catch (const RuntimeApiError&) {
            throw;
        } catch (const Error& err) {
            throw RuntimeApiError(stmt_, e.text, detail::error_kind(err), err.what());
        }
    }

    const ApiRegistry& reg_;
    std::map<std::string, Value> env_;
    std::size_t stmt_ = 0;
    std::size_t calls_ = 0;
};

inline action::ExecutionInfo execute_program(const Program& p, const ApiRegistry& reg)
{
    Interpreter in(reg);
    return in.run(p);
}

} // namespace i2a::policy
