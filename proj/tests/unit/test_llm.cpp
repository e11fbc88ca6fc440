// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "i2a/llm/gateway.hpp"
#include "i2a/policy/parser.hpp"
#include "i2a/policy/printer.hpp"

using namespace i2a;
using namespace i2a::llm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

policy::Program listing(const std::string& stem)
{
    return policy::parse_program(slurp(fs::path(I2A_FIXTURE_DIR) / "listings" / (stem + ".py")));
}

/// Replaces every string literal and cache lookup with a marker so programs
/// compare modulo their query arguments.
void erase_queries(policy::Expr& e)
{
    using policy::ExprKind;
    if (e.kind == ExprKind::string || e.kind == ExprKind::cache_get) {
        e = policy::Expr{};
        e.kind = ExprKind::string;
        e.text = "Q";
        return;
    }
    for (auto& a : e.args)
        erase_queries(a);
}

std::vector<policy::Statement> shape(policy::Program p, std::size_t from = 0)
{
    std::vector<policy::Statement> out(p.statements.begin() + long(from), p.statements.end());
    for (auto& s : out)
        erase_queries(s.value);
    return out;
}

const std::string kGood = "def main() -> dict:\n    image = GetObsImage(obs)\n    info = RobotExecution(action=image)\n"
                          "    return info\n";
const std::string kBadSyntax = "def main() -> dict:\n    image = GetObsImage(obs\n    return image\n";

} // namespace

TEST(Text, Sha256KnownVectors)
{
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Text, StripFences)
{
    EXPECT_EQ(strip_fences("```python\r\ndef f():\r\n    return 1\r\n```\r\n"), "def f():\n    return 1\n");
    EXPECT_EQ(strip_fences("Here it is:\n```\nnot code\n```\nand\n```py\ndef g():  \n    return 2\n```\nDone."),
              "def g():\n    return 2\n");
    EXPECT_EQ(strip_fences("\n\n    def h():\n        return 3\n\n"), "def h():\n    return 3\n");
    EXPECT_EQ(strip_fences("```\ndef k():\n    return 4\n"), "def k():\n    return 4\n");
    EXPECT_EQ(strip_fences(kGood), kGood);
    EXPECT_EQ(strip_fences(""), "");
}

TEST(Cassette, RoundTripAndAppendOnly)
{
    Cassette c;
    c.record("p1", "a");
    c.record("p1", "b");
    c.record("p2", "c");
    EXPECT_EQ(c.replies("p1"), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(c.to_json()["schema"], kCassetteSchema);
    EXPECT_TRUE(c.to_json()["entries"].contains(sha256_hex("p2")));

    const fs::path p = fs::temp_directory_path() / "i2a_cassette_test.json";
    c.save(p);
    const Cassette d = Cassette::load(p);
    EXPECT_EQ(d.to_json(), c.to_json());
    EXPECT_EQ(slurp(p), c.to_json().dump(2) + "\n");
    fs::remove(p);

    EXPECT_THROW(c.replies("p3"), CassetteMiss);
    EXPECT_THROW(Cassette::from_json({{"schema", "other"}, {"entries", nlohmann::json::object()}}), Error);
}

TEST(Generate, RetryRecoversFromBadSyntax)
{
    Cassette c;
    c.record("prompt", "```python\n" + kBadSyntax + "```");
    c.record("prompt", "```python\n" + kGood + "```");
    GenerationRequest req{"prompt", LlmMode::replay, 1, 0.0, Modality::pure_language, nullptr};
    try {
        generate_program(req, {&c});
        FAIL() << "expected ExhaustedTrials";
    } catch (const ExhaustedTrials& e) {
        EXPECT_EQ(e.trials(), 1);
        EXPECT_EQ(e.last_kind(), "SyntaxError");
    }
    req.max_trials = 2;
    const auto r = generate_program(req, {&c});
    EXPECT_EQ(r.trials, 2);
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_EQ(r.failures[0].kind, "SyntaxError");
    EXPECT_EQ(r.program, policy::parse_program(kGood));

    // Replay is deterministic.
    EXPECT_EQ(generate_program(req, {&c}).program, r.program);

    // Asking for more trials than were recorded stops at the recording.
    req.max_trials = 5;
    EXPECT_EQ(generate_program(req, {&c}).trials, 2);
    Cassette bad;
    bad.record("prompt", kBadSyntax);
    EXPECT_THROW(generate_program(req, {&bad}), ExhaustedTrials);

    req.prompt = "unseen";
    EXPECT_THROW(generate_program(req, {&c}), CassetteMiss);
    EXPECT_THROW(generate_program(req, {}), CassetteMiss);
}

TEST(Generate, LintFailuresTriggerRetry)
{
    // A multimodal instruction answered without touching templates, then with listing main_2.
    Cassette c;
    c.record("p", slurp(fs::path(I2A_FIXTURE_DIR) / "listings" / "main_1.py"));
    c.record("p", slurp(fs::path(I2A_FIXTURE_DIR) / "listings" / "main_2.py"));
    c.record("p", slurp(fs::path(I2A_FIXTURE_DIR) / "listings" / "listing_3.py"));
    GenerationRequest req{"p", LlmMode::replay, 3, 0.0, Modality::multimodal, nullptr};
    const auto r = generate_program(req, {&c});
    EXPECT_EQ(r.trials, 2);
    ASSERT_EQ(r.failures.size(), 1u);
    EXPECT_EQ(r.failures[0].kind, "Lint");
    EXPECT_EQ(r.program.name, "main_2");

    // The same replies pass on the first trial for a pure-language instruction.
    req.modality = Modality::pure_language;
    EXPECT_EQ(generate_program(req, {&c}).trials, 1);

    Cassette branching;
    branching.record("p", slurp(fs::path(I2A_FIXTURE_DIR) / "listings" / "listing_3.py"));
    try {
        generate_program(req, {&branching});
        FAIL();
    } catch (const ExhaustedTrials& e) {
        EXPECT_EQ(e.last_kind(), "UnsupportedConstruct");
    }
}

TEST(Oracle, ProgramsParseAndLintForEveryTask)
{
    for (auto mt : sim::kAllMetaTasks)
        for (auto lvl : sim::kAllLevels)
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                const auto task = sim::generate_task(mt, lvl, seed);
                for (auto m : {Modality::pure_language, Modality::multimodal, Modality::pointing}) {
                    GenerationRequest req{"unused", LlmMode::oracle, 1, 0.0, m, &task};
                    const auto r = generate_program(req);
                    EXPECT_EQ(r.trials, 1);
                    EXPECT_EQ(r.source, oracle_source(task, m));
                    EXPECT_EQ(policy::pretty_print(r.program), r.source) << r.source;
                }
            }
}

TEST(Oracle, ShapesFollowInContextExamples)
{
    using sim::Level;
    using sim::MetaTask;
    auto oracle = [](MetaTask mt, Modality m, std::uint64_t seed = 1) {
        return policy::parse_program(oracle_source(sim::generate_task(mt, Level::L1, seed), m));
    };
    EXPECT_EQ(shape(oracle(MetaTask::T01_visual_manipulation, Modality::pure_language)), shape(listing("main_1")));
    EXPECT_EQ(shape(oracle(MetaTask::T01_visual_manipulation, Modality::multimodal)), shape(listing("main_1")));

    // Rotation: main_2 modulo the angle.
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto task = sim::generate_task(MetaTask::T03_rotation, Level::L1, seed);
        auto p = policy::parse_program(oracle_source(task, Modality::multimodal));
        auto ref = listing("main_2");
        auto& yaw = p.statements[5].value.args[3];
        EXPECT_EQ(p.statements[5].value.keywords[3], "yaw_angle_degree");
        EXPECT_EQ(yaw.number, *task.goal.target_yaw_delta);
        EXPECT_NE(oracle_source(task).find("yaw_angle_degree=" + std::to_string(int(yaw.number)) + ")"),
                  std::string::npos);
        ref.statements[5].value.args[3].number = yaw.number;
        p.name = ref.name;
        EXPECT_EQ(p, ref);
    }

    // Rearrange then restore is main_3; rearrange alone drops the restore leg.
    auto t05 = oracle(MetaTask::T05_rearrange_restore, Modality::multimodal);
    auto main3 = listing("main_3");
    t05.name = main3.name;
    EXPECT_EQ(t05, main3);
    const auto t04 = oracle(MetaTask::T04_rearrange, Modality::multimodal);
    EXPECT_EQ(t04.statements.size(), main3.statements.size() - 1);
    EXPECT_EQ(policy::called_apis(t04).size(), policy::called_apis(main3).size() - 1);

    // Pick in order then restore: main_5 after its unbound observation is acquired.
    const auto t17 = oracle(MetaTask::T17_pick_order_restore, Modality::multimodal);
    const auto main5 = listing("main_5");
    EXPECT_EQ(std::vector(t17.statements.begin() + 3, t17.statements.end()),
              std::vector(main5.statements.begin() + 2, main5.statements.end()));
    const auto apis = policy::called_apis(t17);
    const auto pick_place = std::count(apis.begin(), apis.end(), "PickPlace");
    EXPECT_EQ(pick_place, 3);
}

namespace {

struct MockServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;
    nlohmann::json last_body;
    std::string last_auth;

    explicit MockServer(std::function<void(const httplib::Request&, httplib::Response&)> handler)
    {
        server.Post("/v1/chat/completions", [this, handler](const httplib::Request& req, httplib::Response& res) {
            last_body = nlohmann::json::parse(req.body);
            last_auth = req.get_header_value("Authorization");
            handler(req, res);
        });
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~MockServer()
    {
        server.stop();
        thread.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions"; }
};

} // namespace

TEST(Live, ChatCompletionRoundTrip)
{
    MockServer mock([](const httplib::Request&, httplib::Response& res) {
        const nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", "```python\n" + kGood + "```"}}}}}}};
        res.set_content(reply.dump(), "application/json");
    });
    LiveConfig cfg;
    cfg.endpoint = mock.url();
    cfg.api_key = "sk-test";
    const LiveClient client(cfg);
    Cassette rec;
    GenerationRequest req{"Put the red block into the green pan.", LlmMode::live, 2, 0.0, Modality::pure_language,
                          nullptr};
    const auto r = generate_program(req, {nullptr, &client, &rec});
    EXPECT_EQ(r.program, policy::parse_program(kGood));
    EXPECT_EQ(mock.last_auth, "Bearer sk-test");
    EXPECT_EQ(mock.last_body["model"], "gpt-3.5-turbo");
    EXPECT_EQ(mock.last_body["temperature"], 0.0);
    EXPECT_EQ(mock.last_body["messages"][0]["role"], "user");
    EXPECT_EQ(mock.last_body["messages"][0]["content"], req.prompt);

    // A recorded live session replays to the same program.
    ASSERT_EQ(rec.replies(req.prompt).size(), 1u);
    req.mode = LlmMode::replay;
    EXPECT_EQ(generate_program(req, {&rec}).program, r.program);
}

TEST(Live, EndpointErrors)
{
    MockServer mock([](const httplib::Request&, httplib::Response& res) {
        res.status = 500;
        res.set_content("boom", "text/plain");
    });
    LiveConfig cfg;
    cfg.endpoint = mock.url();
    EXPECT_THROW(LiveClient(cfg).complete("x"), EndpointError);

    MockServer garbage([](const httplib::Request&, httplib::Response& res) { res.set_content("{}", "application/json"); });
    cfg.endpoint = garbage.url();
    EXPECT_THROW(LiveClient(cfg).complete("x"), EndpointError);

    cfg.endpoint = "http://127.0.0.1:1/v1/chat/completions";
    cfg.timeout = std::chrono::seconds(2);
    EXPECT_THROW(LiveClient(cfg).complete("x"), EndpointError);
    cfg.endpoint = "no-scheme";
    EXPECT_THROW(LiveClient(cfg).complete("x"), EndpointError);

    ::unsetenv("LLM_ENDPOINT");
    EXPECT_THROW(LiveConfig::from_env(), EndpointError);
    ::setenv("LLM_ENDPOINT", "http://example.invalid/v1", 1);
    ::setenv("LLM_MODEL", "m1", 1);
    EXPECT_EQ(LiveConfig::from_env().model, "m1");
    ::unsetenv("LLM_ENDPOINT");
    ::unsetenv("LLM_MODEL");

    GenerationRequest req{"x", LlmMode::live, 1, 0.0, Modality::pure_language, nullptr};
    EXPECT_THROW(generate_program(req), EndpointError);
    req.mode = LlmMode::oracle;
    EXPECT_THROW(generate_program(req), Error);
    EXPECT_EQ(llm_mode_from_string("replay"), LlmMode::replay);
    EXPECT_THROW(llm_mode_from_string("psychic"), Error);
}
