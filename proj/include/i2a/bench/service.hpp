// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "i2a/bench/episode.hpp"
#include "i2a/core/codec.hpp"

namespace i2a::bench {

enum class Phase { idle, awaiting_points, executing, done };

inline std::string_view to_string(Phase p)
{
    switch (p) {
    case Phase::idle: return "idle";
    case Phase::awaiting_points: return "awaiting_points";
    case Phase::executing: return "executing";
    case Phase::done: return "done";
    }
    return "?";
}

/// HTTP front for pointing episodes. Episodes call provider() and block until
/// points arrive over POST /points or the idle timeout passes.
class PointingService {
public:
    explicit PointingService(std::chrono::milliseconds idle_timeout = std::chrono::minutes(5))
        : idle_timeout_(idle_timeout)
    {
        routes();
    }

    ~PointingService() { stop(); }
    PointingService(const PointingService&) = delete;
    PointingService& operator=(const PointingService&) = delete;

    /// Binds and serves on a background thread; port 0 picks a free port.
    int start(const std::string& host = "127.0.0.1", int port = 0)
    {
        port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
        if (port_ < 0)
            throw Error("cannot bind " + host + ":" + std::to_string(port));
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return port_;
    }

    void stop()
    {
        {
            std::lock_guard lock(mu_);
            stopping_ = true;
        }
        cv_.notify_all();
        server_.stop();
        if (thread_.joinable())
            thread_.join();
    }

    int port() const { return port_; }

    PointProvider provider()
    {
        return [this](const PointRequest& req) -> std::optional<PointReply> {
            std::unique_lock lock(mu_);
            episode_id_ = req.episode_id;
            instruction_ = req.instruction;
            observation_png_ = encode_png(req.observation);
            width_ = req.observation.width();
            height_ = req.observation.height();
            points_.reset();
            edited_.reset();
            last_success_.reset();
            phase_ = Phase::awaiting_points;
            const bool got = cv_.wait_for(lock, idle_timeout_, [this] { return points_.has_value() || stopping_; });
            if (!got || !points_) {
                phase_ = Phase::done;
                last_reason_ = "no_user_input";
                last_success_ = false;
                return std::nullopt;
            }
            phase_ = Phase::executing;
            return PointReply{*std::exchange(points_, std::nullopt), std::exchange(edited_, std::nullopt)};
        };
    }

    /// Marks the current episode finished so GET /status reports the outcome.
    void finish(const EpisodeResult& r)
    {
        std::lock_guard lock(mu_);
        phase_ = Phase::done;
        last_success_ = r.success;
        last_reason_ = r.reason;
    }

    nlohmann::json status() const
    {
        std::lock_guard lock(mu_);
        nlohmann::json j = {{"episode_id", episode_id_},
                            {"instruction", instruction_},
                            {"awaiting_points", phase_ == Phase::awaiting_points},
                            {"phase", to_string(phase_)}};
        if (last_success_) {
            j["success"] = *last_success_;
            j["reason"] = last_reason_;
        }
        return j;
    }

private:
    static void error(httplib::Response& res, int status, const std::string& msg)
    {
        res.status = status;
        res.set_content(nlohmann::json{{"error", msg}}.dump(), "application/json");
    }

    void routes()
    {
        server_.Get("/status", [this](const httplib::Request&, httplib::Response& res) {
            res.set_content(status().dump(), "application/json");
        });
        server_.Get("/observation", [this](const httplib::Request&, httplib::Response& res) {
            std::lock_guard lock(mu_);
            if (observation_png_.empty())
                return error(res, 404, "no episode is running");
            res.set_content(std::string(observation_png_.begin(), observation_png_.end()), "image/png");
        });
        server_.Post("/instruction", [this](const httplib::Request& req, httplib::Response& res) {
            std::string text;
            try {
                text = nlohmann::json::parse(req.body).at("text").get<std::string>();
            } catch (const nlohmann::json::exception&) {
                return error(res, 400, "body must be {\"text\": string}");
            }
            if (text.empty())
                return error(res, 400, "instruction text must be nonempty");
            std::lock_guard lock(mu_);
            if (phase_ != Phase::awaiting_points)
                return error(res, 409, "no episode is awaiting input");
            instruction_ = text;
            edited_ = text;
            res.set_content(nlohmann::json{{"instruction", text}}.dump(), "application/json");
        });
        server_.Post("/points", [this](const httplib::Request& req, httplib::Response& res) {
            std::vector<PixelPoint> pts;
            try {
                const auto body = nlohmann::json::parse(req.body);
                for (const auto& p : body.at("points"))
                    pts.push_back({p.at("x").get<int>(), p.at("y").get<int>()});
            } catch (const nlohmann::json::exception&) {
                return error(res, 400, "body must be {\"points\": [{\"x\": int, \"y\": int}, ...]}");
            }
            {
                std::lock_guard lock(mu_);
                if (phase_ != Phase::awaiting_points || points_)
                    return error(res, 409, "no episode is awaiting points");
                if (pts.empty())
                    return error(res, 400, "at least one point is required");
                for (const auto& p : pts)
                    if (p.x < 0 || p.y < 0 || p.x >= width_ || p.y >= height_)
                        return error(res, 400,
                                     "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                         ") lies outside the " + std::to_string(width_) + "x" +
                                         std::to_string(height_) + " observation");
                points_ = pts;
            }
            cv_.notify_all();
            res.set_content(nlohmann::json{{"accepted", pts.size()}}.dump(), "application/json");
        });
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = -1;
    std::chrono::milliseconds idle_timeout_;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    bool stopping_ = false;
    Phase phase_ = Phase::idle;
    std::string episode_id_;
    std::string instruction_;
    std::optional<std::string> edited_;
    std::vector<std::uint8_t> observation_png_;
    int width_ = 0;
    int height_ = 0;
    std::optional<std::vector<PixelPoint>> points_;
    std::optional<bool> last_success_;
    std::string last_reason_;
};

} // namespace i2a::bench
