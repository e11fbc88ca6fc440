// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>

#include "i2a/core/error.hpp"
#include "i2a/policy/ast.hpp"

namespace i2a::policy {

using nlohmann::json;

inline json to_json(const Expr& e)
{
    auto list = [](auto first, auto last) {
        json a = json::array();
        for (auto it = first; it != last; ++it)
            a.push_back(to_json(*it));
        return a;
    };
    json j = {{"type", std::string(to_string(e.kind))}};
    switch (e.kind) {
    case ExprKind::call:
    case ExprKind::method_call: {
        const std::size_t first = e.kind == ExprKind::method_call ? 1 : 0;
        if (first)
            j["receiver"] = to_json(e.args[0]);
        j[first ? "method" : "func"] = e.text;
        const auto kw = e.args.begin() + std::ptrdiff_t(e.positional_count());
        j["args"] = list(e.args.begin() + std::ptrdiff_t(first), kw);
        json k = json::array();
        for (std::size_t i = 0; i < e.keywords.size(); ++i)
            k.push_back({{"name", e.keywords[i]}, {"value", to_json(*(kw + std::ptrdiff_t(i)))}});
        j["keywords"] = k;
        break;
    }
    case ExprKind::name: j["id"] = e.text; break;
    case ExprKind::string: j["value"] = e.text; break;
    case ExprKind::number:
        if (e.is_int)
            j["value"] = static_cast<long long>(e.number);
        else
            j["value"] = e.number;
        break;
    case ExprKind::boolean: j["value"] = e.number != 0.0; break;
    case ExprKind::none: break;
    case ExprKind::list: j["elts"] = list(e.args.begin(), e.args.end()); break;
    case ExprKind::cache_get: j["key"] = e.text; break;
    case ExprKind::subscript:
        j["value"] = to_json(e.args[0]);
        j["index"] = to_json(e.args[1]);
        break;
    case ExprKind::binop:
        j["op"] = e.text;
        j["left"] = to_json(e.args[0]);
        j["right"] = to_json(e.args[1]);
        break;
    case ExprKind::negate: j["operand"] = to_json(e.args[0]); break;
    case ExprKind::constant: j["name"] = e.text; break;
    }
    return j;
}

inline json to_json(const Program& p)
{
    json body = json::array();
    for (const auto& s : p.statements) {
        json j = {{"type", std::string(to_string(s.kind))}, {"value", to_json(s.value)}};
        if (s.kind == StmtKind::assign)
            j["targets"] = s.targets;
        body.push_back(std::move(j));
    }
    return {{"name", p.name}, {"body", body}};
}

inline Expr expr_from_json(const json& j)
{
    Expr e;
    const std::string type = j.at("type").get<std::string>();
    auto args_into = [&](const json& arr) {
        for (const auto& a : arr)
            e.args.push_back(expr_from_json(a));
    };
    if (type == "Call" || type == "MethodCall") {
        e.kind = type == "Call" ? ExprKind::call : ExprKind::method_call;
        if (e.kind == ExprKind::method_call) {
            e.text = j.at("method").get<std::string>();
            e.args.push_back(expr_from_json(j.at("receiver")));
        } else {
            e.text = j.at("func").get<std::string>();
        }
        args_into(j.at("args"));
        for (const auto& k : j.at("keywords")) {
            e.keywords.push_back(k.at("name").get<std::string>());
            e.args.push_back(expr_from_json(k.at("value")));
        }
    } else if (type == "Name") {
        e.kind = ExprKind::name;
        e.text = j.at("id").get<std::string>();
    } else if (type == "String") {
        e.kind = ExprKind::string;
        e.text = j.at("value").get<std::string>();
    } else if (type == "Number") {
        e.kind = ExprKind::number;
        e.is_int = j.at("value").is_number_integer();
        e.number = j.at("value").get<double>();
    } else if (type == "Bool") {
        e.kind = ExprKind::boolean;
        e.number = j.at("value").get<bool>() ? 1.0 : 0.0;
    } else if (type == "None") {
        e.kind = ExprKind::none;
    } else if (type == "List") {
        e.kind = ExprKind::list;
        args_into(j.at("elts"));
    } else if (type == "CacheGet") {
        e.kind = ExprKind::cache_get;
        e.text = j.at("key").get<std::string>();
    } else if (type == "Subscript") {
        e.kind = ExprKind::subscript;
        e.args = {expr_from_json(j.at("value")), expr_from_json(j.at("index"))};
    } else if (type == "BinOp") {
        e.kind = ExprKind::binop;
        e.text = j.at("op").get<std::string>();
        e.args = {expr_from_json(j.at("left")), expr_from_json(j.at("right"))};
    } else if (type == "Neg") {
        e.kind = ExprKind::negate;
        e.args = {expr_from_json(j.at("operand"))};
    } else if (type == "Constant") {
        e.kind = ExprKind::constant;
        e.text = j.at("name").get<std::string>();
    } else {
        throw Error("unknown expression type '" + type + "'");
    }
    return e;
}

inline Program program_from_json(const json& j)
{
    Program p;
    p.name = j.at("name").get<std::string>();
    for (const auto& s : j.at("body")) {
        Statement st;
        const std::string type = s.at("type").get<std::string>();
        if (type == "Assign") {
            st.kind = StmtKind::assign;
            st.targets = s.at("targets").get<std::vector<std::string>>();
        } else if (type == "Return") {
            st.kind = StmtKind::return_;
        } else if (type == "Expr") {
            st.kind = StmtKind::expr;
        } else {
            throw Error("unknown statement type '" + type + "'");
        }
        st.value = expr_from_json(s.at("value"));
        p.statements.push_back(std::move(st));
    }
    return p;
}

} // namespace i2a::policy
