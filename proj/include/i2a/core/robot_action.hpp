// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "i2a/core/error.hpp"
#include "i2a/core/geometry.hpp"

namespace i2a {

enum class Tool { suction, spatula };

inline std::string_view to_string(Tool t) { return t == Tool::suction ? "suction" : "spatula"; }

inline Tool tool_from_string(std::string_view s)
{
    if (s == "suction")
        return Tool::suction;
    if (s == "spatula")
        return Tool::spatula;
    throw Error("unknown tool '" + std::string(s) + "'");
}

/// One pick-and-place primitive in robot coordinates (meters).
struct RobotAction {
    Vec2 pick;
    Vec2 place;
    double yaw_degrees = 0.0; ///< normalized to (-180, 180]
    Tool tool = Tool::suction;

    friend bool operator==(const RobotAction&, const RobotAction&) = default;
};

} // namespace i2a
