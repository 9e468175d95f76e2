// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "burstid_cli/commands.hpp"
#include "burstid_cli/scenario.hpp"

using namespace burstid;
using namespace burstid::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("burstid-test-" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const fs::path& p, const std::string& s) { std::ofstream(p, std::ios::binary) << s; }

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "burstid");
    std::ostringstream o, e;
    const int code = run(args, o, e);
    return {code, o.str(), e.str()};
}

std::string config_error(const std::string& text) {
    try {
        parse_scenario(text, "s.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

constexpr const char* kSmallBenchmark = R"(format: burstid-scenario 1.0
seed: 3
noise: {mu_dbm: -100, sigma_db: 2}
benchmark:
  records: 350
  sensed_inr_db: {integers: [1, 30]}
)";

}  // namespace

TEST_CASE("scenario parser reports locations") {
    CHECK(config_error("format: burstid-scenario 1.0\nseed: [1\n").rfind("s.yaml:", 0) == 0);

    const std::string unknown = config_error("format: burstid-scenario 1.0\nseed: 1\nnoise:\n  mu_dbm: -98\n  sgima_db: 1\n");
    CHECK(unknown.find("s.yaml:5:") != std::string::npos);
    CHECK(unknown.find("sgima_db") != std::string::npos);

    CHECK(config_error("format: burstid-scenario 2.0\n").find("unsupported major version 2.0") != std::string::npos);
    CHECK(config_error("format: burstid-scenario 1.7\nduration_ms: 5\n").empty());
    CHECK(config_error("seed: 1\n").find("format") != std::string::npos);
    CHECK(config_error("format: other 1.0\n").find("s.yaml:1:") != std::string::npos);
    CHECK(config_error("format: burstid-scenario 1.0\nduration_ms: -1\n").find("duration_ms") != std::string::npos);
    CHECK(config_error("format: burstid-scenario 1.0\nsensing: {sensing_channel: 30}\n").find("sensing") !=
          std::string::npos);
    CHECK(config_error("format: burstid-scenario 1.0\nsources:\n  - label: Q\n").find("s.yaml:3:") !=
          std::string::npos);
}

TEST_CASE("scenario values round into the config") {
    const ScenarioConfig c = parse_scenario(R"(format: burstid-scenario 1.0
seed: 9
duration_ms: 250
noise: {mu_dbm: -97, sigma_db: 1.5}
sources:
  - label: W-n20
    pattern: poisson
    rate_hz: 100
    channels: [6]
    oat_us: {mixture: [[0.5, 400, 800], [0.5, 1000, 1000]]}
    inr_db: {uniform: [10, 20]}
)");
    CHECK(c.seed == 9);
    CHECK(c.duration_ms == 250.0);
    CHECK(c.noise.threshold() == doctest::Approx(-94.0));
    REQUIRE(c.sources.size() == 1);
    CHECK(c.sources[0].label == Label(Tech::W, WifiVariant::n20));
    CHECK(c.sources[0].pattern == Pattern::poisson);
    CHECK(c.sources[0].oat_us.min() == 400.0);
    CHECK(c.sources[0].oat_us.max() == 1000.0);
}

TEST_CASE("exit codes") {
    TempDir t;
    CHECK(call({"--help"}).code == kExitOk);
    CHECK(call({"--version"}).code == kExitOk);
    CHECK(call({}).code == kExitUsage);
    CHECK(call({"simulate"}).code == kExitUsage);
    CHECK(call({"train", "x.csv", "-m", "ct2", "--bogus", "-o", "o"}).code == kExitUsage);

    const Result missing = call({"simulate", (t.path / "nope.yaml").string(), "-o", (t.path / "o").string()});
    CHECK(missing.code == kExitData);
    CHECK(missing.err.find("nope.yaml") != std::string::npos);

    spit(t.path / "bad.yaml", "format: burstid-scenario 1.0\nnoise: {mu: -98}\n");
    const Result bad = call({"simulate", (t.path / "bad.yaml").string(), "-o", (t.path / "o").string()});
    CHECK(bad.code == kExitData);
    CHECK(bad.err.find("bad.yaml:2:") != std::string::npos);

    spit(t.path / "bench.yaml", kSmallBenchmark);
    REQUIRE(call({"simulate", (t.path / "bench.yaml").string(), "-o", (t.path / "b").string()}).code == kExitOk);
    const auto features = (t.path / "b" / "features.csv").string();
    CHECK(call({"train", features, "-m", "nope", "-o", (t.path / "m").string()}).code == kExitData);
    const Result conv =
        call({"train", features, "-m", "msvm", "--max-iter", "2", "-o", (t.path / "m").string()});
    CHECK(conv.code == kExitConvergence);
    CHECK(conv.err.find("KKT gap") != std::string::npos);
    CHECK(conv.err.find("iterations") != std::string::npos);

    REQUIRE(call({"train", features, "-m", "ct2", "-o", (t.path / "m").string()}).code == kExitOk);
    const Result ev = call({"evaluate", (t.path / "m" / "model.json").string(), features, "--gamma", "0,10", "-o",
                            (t.path / "e").string()});
    CHECK(ev.code == kExitOk);
    CHECK(fs::exists(t.path / "e" / "eval.csv"));
    CHECK(call({"evaluate", features, features, "-o", (t.path / "e2").string()}).code == kExitData);
}

TEST_CASE("zero-duration scenario writes headers only") {
    TempDir t;
    spit(t.path / "z.yaml", R"(format: burstid-scenario 1.0
duration_ms: 0
sources:
  - label: Z
    period_us: 5000
    channels: [18]
)");
    const Result r = call({"simulate", (t.path / "z.yaml").string(), "-o", (t.path / "o").string()});
    REQUIRE(r.code == kExitOk);
    for (const char* f : {"events.csv", "bursts.csv", "features.csv"}) {
        std::istringstream is(slurp(t.path / "o" / f));
        std::string line;
        int data = 0;
        while (std::getline(is, line))
            if (!line.empty() && line[0] != '#') data += 1;
        CHECK_MESSAGE(data == 1, f);  // the column header
    }
}

TEST_CASE("benchmark and sources are mutually exclusive") {
    TempDir t;
    spit(t.path / "x.yaml", std::string(kSmallBenchmark) + "duration_ms: 10\nsources:\n  - label: Z\n    channels: [18]\n    period_us: 5000\n");
    CHECK(call({"simulate", (t.path / "x.yaml").string(), "-o", (t.path / "o").string()}).code == kExitData);
}

TEST_CASE("manifest replays byte-identical outputs") {
    TempDir t;
    spit(t.path / "bench.yaml", kSmallBenchmark);
    REQUIRE(call({"simulate", (t.path / "bench.yaml").string(), "--seed", "44", "-o", (t.path / "a").string()}).code ==
            kExitOk);
    const auto m = nlohmann::json::parse(slurp(t.path / "a" / "manifest.json"));
    CHECK(m["format"] == "burstid-manifest");
    CHECK(m["version"] == "1.0");
    CHECK(m["command"] == "simulate");
    CHECK(m["seed"] == 44);
    REQUIRE(m["inputs"].size() == 1);
    CHECK(m["inputs"][0]["fnv1a64"] == hex64(fnv1a64(kSmallBenchmark)));

    std::vector<std::string> args;
    for (const auto& a : m["args"]) {
        const std::string s = a.get<std::string>();
        args.push_back(s == "{out}" ? (t.path / "b").string() : s);
    }
    REQUIRE(call(args).code == kExitOk);
    REQUIRE(m["outputs"].size() >= 1);
    for (const auto& [name, hash] : m["outputs"].items()) {
        const std::string a = slurp(t.path / "a" / name), b = slurp(t.path / "b" / name);
        CHECK(a == b);
        CHECK(hash == hex64(fnv1a64(a)));
    }
}

TEST_CASE("fnv1a64 reference values") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
    CHECK(hex64(0xabcULL) == "0000000000000abc");
}
