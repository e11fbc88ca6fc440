// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "i2a/core/error.hpp"
#include "i2a/core/modality.hpp"
#include "i2a/prompt/cache.hpp"
#include "i2a/prompt/template_data.hpp"
#include "i2a/sim/render.hpp"
#include "i2a/sim/task.hpp"

namespace i2a::prompt {

inline constexpr std::array<std::string_view, 5> kPlaceholderKeys = {"scene", "dragged_obj", "base_obj", "base_obj_1",
                                                                      "base_obj_2"};
inline constexpr std::string_view kStepTrigger = "Think step by step to carry out the instruction.";

/// Prompt template split at `%%SECTION:<name>%%` markers.
class PromptTemplate {
public:
    static PromptTemplate parse(std::string_view text)
    {
        static constexpr std::string_view open = "%%SECTION:";
        static constexpr std::string_view close = "%%\n";
        PromptTemplate t;
        std::size_t pos = 0;
        if (!text.starts_with(open))
            throw Error("prompt template must start with a section marker");
        while (pos < text.size()) {
            const std::size_t name_begin = pos + open.size();
            const std::size_t name_end = text.find(close, name_begin);
            if (name_end == std::string_view::npos)
                throw Error("unterminated section marker in prompt template");
            std::string name(text.substr(name_begin, name_end - name_begin));
            const std::size_t body = name_end + close.size();
            std::size_t next = text.find(std::string("\n") + std::string(open), body == 0 ? 0 : body - 1);
            next = next == std::string_view::npos ? text.size() : next + 1;
            if (t.sections_.count(name))
                throw Error("duplicate prompt section '" + name + "'");
            t.order_.push_back(name);
            t.sections_[name] = std::string(text.substr(body, next - body));
            pos = next;
        }
        for (const char* required : {"imports", "api_defs", "examples", "closing"})
            if (!t.sections_.count(required))
                throw Error(std::string("prompt template lacks section '") + required + "'");
        return t;
    }

    static const PromptTemplate& builtin()
    {
        static const PromptTemplate t = parse(generated::kTemplate);
        return t;
    }

    const std::string& section(const std::string& name) const
    {
        auto it = sections_.find(name);
        if (it == sections_.end())
            throw Error("no prompt section '" + name + "'");
        return it->second;
    }
    const std::vector<std::string>& names() const { return order_; }

private:
    std::map<std::string, std::string> sections_;
    std::vector<std::string> order_;
};

struct PromptOptions {
    bool include_imports = true;
    bool include_api_defs = true;
    bool include_examples = true;
    /// Adds kStepTrigger after the closing request.
    bool step_trigger = false;
};

enum class PromptArm { full, api_only, examples_only };

inline std::string_view to_string(PromptArm a)
{
    switch (a) {
    case PromptArm::full: return "full";
    case PromptArm::api_only: return "api_only";
    case PromptArm::examples_only: return "examples_only";
    }
    return "?";
}

inline PromptArm prompt_arm_from_string(std::string_view s)
{
    for (auto a : {PromptArm::full, PromptArm::api_only, PromptArm::examples_only})
        if (to_string(a) == s)
            return a;
    throw Error("unknown prompt arm '" + std::string(s) + "'");
}

inline PromptOptions options_for(PromptArm arm)
{
    PromptOptions o;
    o.include_api_defs = arm != PromptArm::examples_only;
    o.include_examples = arm != PromptArm::api_only;
    return o;
}

inline std::string build_prompt(std::string_view instruction, const PromptOptions& opts = {},
                                const PromptTemplate& tpl = PromptTemplate::builtin())
{
    if (instruction.empty())
        throw Error("instruction text must be nonempty");
    std::string out;
    if (opts.include_imports)
        out += tpl.section("imports");
    if (opts.include_api_defs)
        out += tpl.section("api_defs");
    if (opts.include_examples)
        out += tpl.section("examples");
    std::string closing = tpl.section("closing");
    if (opts.step_trigger) {
        // The closing block ends with a blank line before the instruction.
        const std::size_t cut = closing.ends_with("\n\n") ? closing.size() - 1 : closing.size();
        closing.insert(cut, std::string(kStepTrigger) + "\n");
    }
    out += closing;
    out += "Instruction: ";
    out += instruction;
    out += "\n";
    return out;
}

/// An instruction as the user supplies it.
struct InstructionBundle {
    Modality kind = Modality::pure_language;
    std::string text;
    std::map<std::string, TemplateAsset> assets;
    std::optional<std::vector<PixelPoint>> points;
};

/// `{key}` tokens in order of appearance, duplicates kept.
inline std::vector<std::string> placeholders(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = text.find('{', pos)) != std::string_view::npos) {
        const std::size_t end = text.find('}', pos + 1);
        if (end == std::string_view::npos)
            break;
        out.emplace_back(text.substr(pos + 1, end - pos - 1));
        pos = end + 1;
    }
    return out;
}

inline bool is_placeholder_key(std::string_view k)
{
    return std::find(kPlaceholderKeys.begin(), kPlaceholderKeys.end(), k) != kPlaceholderKeys.end();
}

/// Copies the bundle's assets into the cache and returns the text unchanged.
inline std::string normalize_instruction(const InstructionBundle& b, EnvironmentCache& cache)
{
    if (b.text.empty())
        throw Error("instruction text must be nonempty");
    for (const auto& key : placeholders(b.text)) {
        if (!is_placeholder_key(key))
            throw InvalidInstruction("unsupported placeholder {" + key + "}");
        if (!b.assets.count(key))
            throw MissingAsset("no asset supplied for {" + key + "}");
    }
    for (const auto& [key, _] : b.assets)
        if (!is_placeholder_key(key))
            throw InvalidInstruction("unsupported asset key '" + key + "'");
    if (b.kind == Modality::pointing && (!b.points || b.points->empty()))
        throw InvalidInstruction("pointing instruction needs at least one point");
    for (const auto& [key, asset] : b.assets) {
        auto it = cache.templates.find(key);
        if (it != cache.templates.end()) {
            // Re-normalizing the same bundle is a no-op.
            if (it->second == asset)
                continue;
            throw DuplicateKey("template '" + key + "' already holds a different asset");
        }
        cache.templates.emplace(key, asset);
    }
    return b.text;
}

/// The object alone, centred on the table, photographed without shadows.
inline perception::ObjectCrop render_object_asset(const sim::WorldObject& obj,
                                                  const CameraTransform& cam = default_camera())
{
    sim::WorldState w;
    sim::WorldObject o = obj;
    o.pose.x = 0.5;
    o.pose.y = 0.0;
    w.objects = {o};
    const sim::RenderOptions opt{false, cam};
    const Image img = sim::render_observation(w, opt);
    return perception::crop_mask(img, sim::render_object_mask(w, o.id, opt), w.table_color, 0);
}

inline Image render_scene_asset(const std::vector<sim::WorldObject>& objects,
                                const CameraTransform& cam = default_camera())
{
    sim::WorldState w;
    w.objects = objects;
    return sim::render_observation(w, {true, cam});
}

/// Builds the bundle a user would send for this task in the given modality.
inline InstructionBundle bundle_for(const sim::TaskInstance& task, Modality kind,
                                    const CameraTransform& cam = default_camera())
{
    InstructionBundle b;
    b.kind = kind;
    const auto& ins = task.instruction;
    b.text = kind == Modality::multimodal ? ins.multimodal_text : ins.pure_text;
    if (kind == Modality::pointing) {
        std::vector<PixelPoint> pts;
        for (int id : ins.pointing_ids)
            pts.push_back(sim::center_pixel(task.initial_world.find(id)->pose, cam));
        b.points = std::move(pts);
    }
    // Scene references stay visual in every modality.
    const auto used = placeholders(b.text);
    for (const auto& a : ins.assets) {
        if (std::find(used.begin(), used.end(), a.key) == used.end())
            continue;
        if (a.kind == sim::AssetKind::scene) {
            b.assets.emplace(a.key, render_scene_asset(a.scene_objects, cam));
        } else {
            const auto* o = task.initial_world.find(a.object_id);
            if (!o)
                throw MissingAsset("asset '" + a.key + "' refers to a missing object");
            b.assets.emplace(a.key, render_object_asset(*o, cam));
        }
    }
    return b;
}

} // namespace i2a::prompt
