// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "i2a/action/actions.hpp"
#include "i2a/core/error.hpp"
#include "i2a/core/geometry.hpp"
#include "i2a/core/image.hpp"
#include "i2a/perception/pipeline.hpp"

namespace i2a::policy {

struct Value;
using List = std::vector<Value>;
using ListPtr = std::shared_ptr<List>;

/// Opaque runtime object a program can only pass around (obs, templates).
struct Handle {
    std::string name;
    friend bool operator==(const Handle&, const Handle&) = default;
};

struct Value {
    using Variant = std::variant<std::monostate, bool, double, std::string, ListPtr, Image, perception::MaskSet,
                                 perception::CropResult, perception::ObjectCrop, PixelPoint, RobotAction,
                                 action::ExecutionInfo, WorkspaceBounds, Handle>;
    Variant v;

    Value() = default;
    template <class T>
        requires std::is_constructible_v<Variant, T&&> && (!std::is_same_v<std::decay_t<T>, Value>)
    Value(T&& x) : v(std::forward<T>(x))
    {
    }
    Value(int x) : v(double(x)) {}
    Value(std::size_t x) : v(double(x)) {}
    Value(const char* s) : v(std::string(s)) {}

    template <class T>
    bool is() const { return std::holds_alternative<T>(v); }
    template <class T>
    const T* get_if() const { return std::get_if<T>(&v); }
    template <class T>
    T* get_if() { return std::get_if<T>(&v); }
    bool is_none() const { return is<std::monostate>(); }
};

inline Value make_list(List items = {}) { return Value(std::make_shared<List>(std::move(items))); }

inline std::string type_name(const Value& x)
{
    static constexpr const char* names[] = {"None",    "bool",       "number",     "str",        "list",
                                            "Image",   "MaskSet",    "ObjectList", "ObjectCrop", "PixelLoc",
                                            "Action",  "ExecutionInfo", "Bounds",  "Handle"};
    return names[x.v.index()];
}

class TypeMismatch : public Error {
public:
    using Error::Error;
};

template <class T>
const T& expect(const Value& x, const std::string& what)
{
    if (const T* p = x.get_if<T>())
        return *p;
    throw TypeMismatch(what + " has type " + type_name(x));
}

inline double as_number(const Value& x, const std::string& what)
{
    if (const auto* b = x.get_if<bool>())
        return *b ? 1.0 : 0.0;
    return expect<double>(x, what);
}

/// Integral number usable as a list index.
inline int as_index(const Value& x, const std::string& what)
{
    const double d = as_number(x, what);
    if (d != std::floor(d) || std::fabs(d) > 1e9)
        throw TypeMismatch(what + " is not an integer");
    return int(d);
}

inline std::vector<int> as_index_list(const Value& x, const std::string& what)
{
    const auto& l = expect<ListPtr>(x, what);
    std::vector<int> out;
    for (const auto& e : *l)
        out.push_back(as_index(e, what + " element"));
    return out;
}

} // namespace i2a::policy
