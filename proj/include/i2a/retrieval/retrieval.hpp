// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "i2a/retrieval/embedding.hpp"
#include "i2a/retrieval/hungarian.hpp"

namespace i2a::retrieval {

/// Source of text and image embeddings. The local attribute embedder is the
/// default; a remote client implements the same interface.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual AttributeEmbedding text(std::string_view query) const = 0;
    virtual AttributeEmbedding image(const ObjectCrop& crop) const = 0;
    virtual AttributeEmbedding image(const Image& img) const = 0;
};

class AttributeEmbedder final : public Embedder {
public:
    AttributeEmbedding text(std::string_view query) const override { return embed_text(query); }
    AttributeEmbedding image(const ObjectCrop& crop) const override { return embed_image(crop); }
    AttributeEmbedding image(const Image& img) const override { return embed_image(img); }
};

inline const Embedder& default_embedder()
{
    static const AttributeEmbedder e;
    return e;
}

using Query = std::variant<std::string, ObjectCrop, Image>;

inline AttributeEmbedding embed_query(const Query& q, const Embedder& e)
{
    if (const auto* s = std::get_if<std::string>(&q))
        return e.text(*s);
    if (const auto* c = std::get_if<ObjectCrop>(&q))
        return e.image(*c);
    return e.image(std::get<Image>(q));
}

/// Index of the crop most similar to the query, skipping exclusions.
/// Ties go to the lowest index.
inline int retrieve(const std::vector<ObjectCrop>& crops, const Query& query, const std::set<int>& exclusions = {},
                    const Embedder& e = default_embedder())
{
    if (crops.empty())
        throw AllExcluded("no crops to retrieve from");
    const AttributeEmbedding q = embed_query(query, e);
    int best = -1;
    double best_score = -1.0;
    for (std::size_t i = 0; i < crops.size(); ++i) {
        // Every crop is embedded, as an image encoder would do for the whole set.
        const double s = cosine(q, e.image(crops[i]));
        if (exclusions.count(int(i)))
            continue;
        if (best < 0 || s > best_score) {
            best = int(i);
            best_score = s;
        }
    }
    if (best < 0)
        throw AllExcluded("every crop is excluded");
    return best;
}

inline Matrix similarity_matrix(const std::vector<ObjectCrop>& a, const std::vector<ObjectCrop>& b,
                                const Embedder& e = default_embedder())
{
    std::vector<AttributeEmbedding> ea, eb;
    for (const auto& c : a)
        ea.push_back(e.image(c));
    for (const auto& c : b)
        eb.push_back(e.image(c));
    Matrix s(ea.size(), std::vector<double>(eb.size()));
    for (std::size_t i = 0; i < ea.size(); ++i)
        for (std::size_t j = 0; j < eb.size(); ++j)
            s[i][j] = cosine(ea[i], eb[j]);
    return s;
}

/// Hungarian correspondence between goal crops (rows) and observed crops (cols).
inline Assignment match_objects(const std::vector<ObjectCrop>& goal, const std::vector<ObjectCrop>& obs,
                                const Embedder& e = default_embedder())
{
    return max_similarity_assignment(similarity_matrix(goal, obs, e));
}

} // namespace i2a::retrieval
