// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "i2a/core/error.hpp"

namespace i2a {

enum class Modality { pure_language, multimodal, pointing };

inline std::string_view to_string(Modality m)
{
    switch (m) {
    case Modality::pure_language: return "pure_language";
    case Modality::multimodal: return "multimodal";
    case Modality::pointing: return "pointing";
    }
    return "?";
}

inline Modality modality_from_string(std::string_view s)
{
    if (s == "pure_language" || s == "pure" || s == "single")
        return Modality::pure_language;
    if (s == "multimodal" || s == "multi")
        return Modality::multimodal;
    if (s == "pointing")
        return Modality::pointing;
    throw Error("unknown modality '" + std::string(s) + "'");
}

} // namespace i2a
