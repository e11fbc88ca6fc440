// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "i2a/core/codec.hpp"
#include "i2a/core/error.hpp"
#include "i2a/retrieval/retrieval.hpp"

namespace i2a::retrieval {

/// Embedder backed by an HTTP service: POST /embed {kind, payload} -> {vector}.
/// The dimension is fixed by a probe request at construction.
class RemoteEmbedder final : public Embedder {
public:
    explicit RemoteEmbedder(std::string base_url, std::chrono::seconds timeout = std::chrono::seconds(30))
        : base_url_(std::move(base_url)), timeout_(timeout)
    {
        dim_ = request("text", "").vector.size();
        if (dim_ == 0)
            throw DimensionMismatch("remote embedder returned an empty vector");
    }

    AttributeEmbedding text(std::string_view query) const override { return checked(request("text", std::string(query))); }
    AttributeEmbedding image(const ObjectCrop& crop) const override { return image(crop.image); }
    AttributeEmbedding image(const Image& img) const override
    {
        return checked(request("image", base64_encode(encode_png(img))));
    }

    std::size_t dimension() const { return dim_; }

private:
    AttributeEmbedding checked(AttributeEmbedding e) const
    {
        if (e.vector.size() != dim_)
            throw DimensionMismatch("remote embedder returned " + std::to_string(e.vector.size()) +
                                    " dimensions, expected " + std::to_string(dim_));
        return e;
    }

    AttributeEmbedding request(const char* kind, const std::string& payload) const
    {
        httplib::Client cli(base_url_);
        cli.set_connection_timeout(timeout_);
        cli.set_read_timeout(timeout_);
        const nlohmann::json body = {{"kind", kind}, {"payload", payload}};
        auto res = cli.Post("/embed", body.dump(), "application/json");
        if (!res)
            throw EndpointError("embedder at " + base_url_ + " unreachable: " + httplib::to_string(res.error()));
        if (res->status != 200)
            throw EndpointError("embedder returned HTTP " + std::to_string(res->status));
        AttributeEmbedding e;
        e.provenance = Provenance::remote;
        try {
            e.vector = nlohmann::json::parse(res->body).at("vector").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& ex) {
            throw EndpointError(std::string("malformed embedder reply: ") + ex.what());
        }
        // Unit-normalise.
        double n = 0.0;
        for (double v : e.vector)
            n += v * v;
        if (n > 0.0)
            for (double& v : e.vector)
                v /= std::sqrt(n);
        return e;
    }

    std::string base_url_;
    std::chrono::seconds timeout_;
    std::size_t dim_ = 0;
};

} // namespace i2a::retrieval
