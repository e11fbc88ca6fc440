// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/modality.hpp"
#include "i2a/policy/ast.hpp"

namespace i2a::policy {

inline constexpr std::array<std::string_view, 11> kApiNames = {
    "GetObsImage", "SaveFailureImage", "SAM",         "ImageCrop",        "CLIPRetrieval",  "get_objs_match",
    "Pixel2Loc",   "PickPlace",        "DistractorActions", "RearrangeActions", "RobotExecution"};

/// Parameter names of each API, in positional order.
inline const std::vector<std::string>& api_params(std::string_view api)
{
    static const std::vector<std::pair<std::string_view, std::vector<std::string>>> table = {
        {"GetObsImage", {"obs"}},
        {"SaveFailureImage", {}},
        {"SAM", {"image"}},
        {"ImageCrop", {"image", "masks"}},
        {"CLIPRetrieval", {"objs", "query", "pre_obj1", "pre_obj2"}},
        {"get_objs_match", {"objs_list1", "objs_list2"}},
        {"Pixel2Loc", {"obj", "masks"}},
        {"PickPlace", {"pick", "place", "bounds", "yaw_angle_degree", "tool"}},
        {"DistractorActions", {"mask_obs", "obj_list", "tool"}},
        {"RearrangeActions", {"pick_masks", "place_masks", "pick_ind", "place_ind", "bounds", "tool"}},
        {"RobotExecution", {"action"}},
    };
    for (const auto& [name, params] : table)
        if (name == api)
            return params;
    static const std::vector<std::string> none;
    return none;
}

/// Names every program may read without assigning them first.
inline constexpr std::array<std::string_view, 4> kRuntimeConstants = {"obs", "BOUNDS", "templates", "pi"};

struct LintReport {
    bool cache_required = false;
    bool uses_cache = false;
    std::vector<std::string> unknown_apis;
    std::vector<std::string> unbound_identifiers;

    bool uses_cache_when_required() const { return !cache_required || uses_cache; }
    bool clean() const { return uses_cache_when_required() && unknown_apis.empty() && unbound_identifiers.empty(); }

    std::string summary() const
    {
        std::string s;
        auto join = [](const std::vector<std::string>& v) {
            std::string o;
            for (const auto& x : v)
                o += (o.empty() ? "" : ", ") + x;
            return o;
        };
        if (!uses_cache_when_required())
            s += "multimodal instruction but no templates access; ";
        if (!unknown_apis.empty())
            s += "unknown APIs: " + join(unknown_apis) + "; ";
        if (!unbound_identifiers.empty())
            s += "unbound identifiers: " + join(unbound_identifiers) + "; ";
        if (!s.empty())
            s.resize(s.size() - 2);
        return s;
    }
};

inline LintReport lint_program(const Program& p, Modality kind,
                               const std::vector<std::string>& apis = {kApiNames.begin(), kApiNames.end()})
{
    LintReport r;
    r.cache_required = kind == Modality::multimodal;
    std::set<std::string> bound(kRuntimeConstants.begin(), kRuntimeConstants.end());
    auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
        if (std::find(v.begin(), v.end(), s) == v.end())
            v.push_back(s);
    };
    for (const auto& s : p.statements) {
        walk(s.value, [&](const Expr& e) {
            switch (e.kind) {
            case ExprKind::name:
                if (!bound.count(e.text))
                    add_unique(r.unbound_identifiers, e.text);
                break;
            case ExprKind::call:
                if (std::find(apis.begin(), apis.end(), e.text) == apis.end())
                    add_unique(r.unknown_apis, e.text);
                break;
            case ExprKind::cache_get: r.uses_cache = true; break;
            default: break;
            }
        });
        for (const auto& t : s.targets)
            bound.insert(t);
    }
    return r;
}

} // namespace i2a::policy
