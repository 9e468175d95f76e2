// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "burstid/error.hpp"
#include "burstid/sensing.hpp"

using namespace burstid;

namespace {

RssiTrace flat_trace(std::vector<int> v) {
    RssiTrace t;
    t.rssi = std::move(v);
    t.truth_offsets.assign(t.rssi.size() + 1, 0);
    return t;
}

BurstEvent event(std::uint32_t id, Label l, double start, double oat, int ch, double inr) {
    BurstEvent e;
    e.id = id;
    e.label = l;
    e.start_us = start;
    e.oat_us = oat;
    e.channel = ch;
    e.inr_db = inr;
    return e;
}

// Same formulas, written out directly.
FeatureVector features_by_hand(const RawBurstSamples& r, double pe) {
    double sum = 0.0;
    int lo = r.y[0], hi = r.y[0], ripple = 0;
    for (std::size_t i = 0; i < r.y.size(); ++i) {
        sum += r.y[i];
        lo = std::min(lo, r.y[i]);
        hi = std::max(hi, r.y[i]);
        if (i > 0 && std::abs(r.y[i] - r.y[i - 1]) >= pe) ripple += 1;
    }
    const double n = static_cast<double>(r.y.size());
    const double ybar = sum / n;
    FeatureVector f;
    f.su = ybar - r.x1;
    f.sd = ybar - r.x2;
    f.sc = r.sensing_channel;
    f.tl = n + 6.0;
    f.ep = ybar;
    f.ec = hi - lo;
    f.er = ripple;
    f.cca = r.cca ? 1.0 : 0.0;
    return f;
}

struct OneBurst {
    SensedTrace st;
    std::vector<BurstEvent> ev;
};

OneBurst sense_one(const SignalEnvironment& env, BurstEvent e, std::uint64_t seed = 1) {
    OneBurst o;
    o.ev = {e};
    const SensingConfig cfg;
    const double end = e.end_us() + 1000.0;
    o.st = sense(o.ev, cfg, env, seed, {}, TraceWindow{0.0, static_cast<std::size_t>(end / cfg.ts_us)});
    return o;
}

}  // namespace

TEST_CASE("schedule reproduces the 324 us identifiability floor") {
    const SensingConfig cfg;
    CHECK(cfg.x0_slot() == 2);
    CHECK(cfg.x1_slot() == 5);
    CHECK(cfg.x2_slot() == 8);
    CHECK(cfg.tail_slot() == 9);
    CHECK(cfg.tb_min_us() == 324.0);
    CHECK(cfg.x0_slot() * cfg.ts_us == 108.0);
    CHECK(cfg.sampling_khz() > 2.0 * cfg.rssi_cutoff_khz);
    SensingConfig bad;
    bad.tsw_us = 60.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = {};
    bad.sensing_channel = 27;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("detect_bursts finds maximal runs above P_T") {
    const NoiseModel noise(-98.0, 1.0);
    CHECK(detect_bursts(flat_trace(std::vector<int>(50, -98)), noise).empty());

    std::vector<int> v(60, -98);
    std::fill(v.begin() + 10, v.begin() + 30, -60);
    auto runs = detect_bursts(flat_trace(v), noise);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].first == 10);
    CHECK(runs[0].length() == 20);

    v[20] = -97;  // one sub-threshold sample splits the run
    runs = detect_bursts(flat_trace(v), noise);
    CHECK(runs.size() == 2);

    // -96 equals P_T and is not "above".
    std::vector<int> edge(20, -96);
    CHECK(detect_bursts(flat_trace(edge), noise).empty());

    std::vector<int> spike(20, -98);
    spike[5] = spike[6] = -60;
    CHECK(detect_bursts(flat_trace(spike), noise).empty());
    CHECK(detect_bursts(flat_trace(spike), noise, 2).size() == 1);
    CHECK_THROWS_AS(detect_bursts(flat_trace({}), noise), InvalidArgument);
}

TEST_CASE("extract_features on constructed bursts") {
    RawBurstSamples r;
    r.status = SampleStatus::complete;
    r.sensing_channel = 18;
    r.y.assign(10, -60);
    r.x0 = -60;
    r.x1 = r.x2 = -75;
    FeatureVector f = extract_features(r);
    CHECK(f.su == 15.0);
    CHECK(f.sd == 15.0);
    CHECK(f.ep == -60.0);
    CHECK(f.ec == 0.0);
    CHECK(f.er == 0.0);
    CHECK(f.tl == 16.0);
    CHECK(f.sc == 18.0);

    r.y = {-60, -60, -50, -50};
    f = extract_features(r, 4.0);
    CHECK(f.er == 1.0);
    CHECK(f.ec == 10.0);

    r.status = SampleStatus::incomplete;
    CHECK_THROWS_AS(extract_features(r), InvalidArgument);
}

TEST_CASE("extract_features agrees with a straight-line re-implementation") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> lvl(-95, -30), len(1, 80), jump(-8, 8);
    for (int t = 0; t < 500; ++t) {
        RawBurstSamples r;
        r.status = SampleStatus::complete;
        r.sensing_channel = 11 + t % 16;
        r.cca = t % 3 == 0;
        r.x1 = lvl(rng);
        r.x2 = lvl(rng);
        int v = lvl(rng);
        const int n = len(rng);
        for (int i = 0; i < n; ++i) {
            r.y.push_back(std::clamp(v, -100, 0));
            v += jump(rng);
        }
        r.x0 = r.y[0];
        const FeatureVector f = extract_features(r, 4.0);
        CHECK(f == features_by_hand(r, 4.0));
        CHECK(f.ec >= 0.0);
        CHECK(f.er <= f.tl - 7.0);
        CHECK(f == extract_features(r, 4.0));
    }
}

TEST_CASE("sample_burst follows the side-band schedule") {
    const SignalEnvironment env(NoiseModel(-100.0, 2.0));
    SUBCASE("long burst is complete, x0 two samples after the first reading") {
        const auto o = sense_one(env, event(0, Label(Tech::Z), 1000.0, 5000.0, 18, 25.0));
        REQUIRE(o.st.bursts.size() == 1);
        const auto& b = o.st.bursts[0];
        CHECK(b.complete());
        CHECK(b.x0 == o.st.trace.rssi[o.st.runs[0].first + 2]);
        CHECK(b.y.front() == b.x0);
        CHECK(b.label == Label(Tech::Z));
        CHECK(b.est_oat_us == doctest::Approx(5000.0).epsilon(0.03));
    }
    SUBCASE("200 us burst keeps envelope data only") {
        const auto o = sense_one(env, event(0, Label(Tech::W, WifiVariant::g), 1000.0, 200.0, 7, 25.0));
        REQUIRE(o.st.bursts.size() == 1);
        CHECK(o.st.bursts[0].status == SampleStatus::incomplete);
    }
    SUBCASE("burst at the configured minimum is complete with a single y sample") {
        for (double phase : {0.0, 13.0, 27.0, 41.0, 53.0}) {
            const auto o = sense_one(env, event(0, Label(Tech::W, WifiVariant::g), 1000.0 + phase, 324.0, 7, 10.0));
            REQUIRE(o.st.bursts.size() == 1);
            CHECK(o.st.bursts[0].complete());
            CHECK(o.st.bursts[0].cy() == 1);
        }
    }
}

TEST_CASE("side-band readings keep their direction") {
    const SignalEnvironment env(NoiseModel(-100.0, 0.01));
    // 802.15.1 one MHz below the sensing center: x1 (lower) is closer than x2.
    const auto o = sense_one(env, event(0, Label(Tech::B), 1000.0, 2000.0, 37, 30.0));
    REQUIRE(o.st.bursts.size() == 1);
    const FeatureVector f = extract_features(o.st.bursts[0]);
    CHECK(o.st.bursts[0].x1 > o.st.bursts[0].x2);
    CHECK(f.su < f.sd);
}

TEST_CASE("wideband and narrowband signatures on noiseless bursts") {
    const SignalEnvironment env(NoiseModel(-100.0, 0.01));
    // 802.11g on channel 7 (2442 MHz), 2 MHz above the sensing center: flat OFDM top.
    const auto w = sense_one(env, event(0, Label(Tech::W, WifiVariant::g), 1000.0, 2000.0, 7, 25.0));
    REQUIRE(w.st.bursts.size() == 1);
    const FeatureVector fw = extract_features(w.st.bursts[0]);
    CHECK(std::abs(fw.su) <= 2.0);
    CHECK(std::abs(fw.sd) <= 2.0);
    // 802.15.1 on the sensing center (channel 38 = 2440 MHz).
    const auto b = sense_one(env, event(0, Label(Tech::B), 1000.0, 2000.0, 38, 25.0));
    REQUIRE(b.st.bursts.size() == 1);
    const FeatureVector fb = extract_features(b.st.bursts[0]);
    CHECK(fb.su > 8.0);
    CHECK(fb.sd > 8.0);
}

TEST_CASE("identifiability floor over OAT and INR") {
    const SignalEnvironment env(NoiseModel(-100.0, 2.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> phase(0.0, 54.0);
    for (int t = 0; t < 200; ++t) {
        const double inr = 10.0 + (t % 21);
        const double short_oat = 150.0 + (t % 17) * 10.0;  // 150..310
        const auto s = sense_one(env, event(0, Label(Tech::W, WifiVariant::b), 500.0 + phase(rng), short_oat, 7, inr), t);
        for (const auto& b : s.st.bursts) CHECK_FALSE(b.complete());
        const double long_oat = 324.0 + (t % 40) * 100.0;
        const auto l = sense_one(env, event(0, Label(Tech::Z), 500.0 + phase(rng), long_oat, 18, inr), t);
        REQUIRE(l.st.bursts.size() >= 1);
        CHECK(l.st.bursts[0].complete());
    }
}

TEST_CASE("closely spaced bursts merge into one run") {
    const SignalEnvironment env(NoiseModel(-100.0, 2.0));
    std::vector<BurstEvent> ev{event(0, Label(Tech::W, WifiVariant::g), 1000.0, 800.0, 7, 30.0),
                               event(1, Label(Tech::W, WifiVariant::g), 1860.0, 800.0, 7, 30.0)};
    const SensingConfig cfg;
    const SensedTrace st = sense(ev, cfg, env, 3, {}, TraceWindow{0.0, 80});
    CHECK(st.runs.size() == 1);
    ev[1].start_us = 1000.0 + 800.0 + 400.0;
    CHECK(sense(ev, cfg, env, 3, {}, TraceWindow{0.0, 80}).runs.size() == 2);
}

TEST_CASE("CCA mode 2 emulation") {
    const CcaParams p;
    int busy = 0;
    for (std::uint32_t i = 0; i < 10000; ++i) busy += cca_mode2(event(i, Label(Tech::Z), 0, 1000, 18, 10), p, 77);
    CHECK(busy / 10000.0 == doctest::Approx(0.9786).epsilon(0.005));
    for (std::uint32_t i = 0; i < 1000; ++i)
        CHECK_FALSE(cca_mode2(event(i, Label(Tech::W, WifiVariant::g), 0, 1000, 7, 10), p, 77));
    for (std::uint32_t i = 0; i < 100; ++i) {
        const auto e = event(i, Label(Tech::Z), 0, 1000, 18, 10);
        CHECK(cca_mode2(e, p, 5) == cca_mode2(e, p, 5));
    }
}
