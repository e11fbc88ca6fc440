// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <variant>

#include "i2a/core/error.hpp"
#include "i2a/core/geometry.hpp"
#include "i2a/core/image.hpp"
#include "i2a/perception/pipeline.hpp"

namespace i2a::prompt {

/// A scene image or a single-object crop referenced from an instruction.
using TemplateAsset = std::variant<Image, perception::ObjectCrop>;

/// Per-episode store: instruction assets, workspace bounds, camera, latest observation.
struct EnvironmentCache {
    std::map<std::string, TemplateAsset> templates;
    WorkspaceBounds bounds = default_bounds();
    CameraTransform camera = default_camera();
    Image observation;

    void validate() const
    {
        if (!bounds.valid())
            throw Error("workspace bounds must be a nonempty box");
        if (!camera.invertible())
            throw Error("camera transform must be invertible");
    }

    const TemplateAsset& get(const std::string& key) const
    {
        auto it = templates.find(key);
        if (it == templates.end())
            throw MissingAsset("no template stored under '" + key + "'");
        return it->second;
    }
};

} // namespace i2a::prompt
