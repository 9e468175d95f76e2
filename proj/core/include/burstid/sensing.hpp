// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "burstid/config.hpp"
#include "burstid/label.hpp"
#include "burstid/rssi.hpp"
#include "burstid/traffic_gen.hpp"

namespace burstid {

// Maximal run of samples strictly above the detection threshold.
struct Run {
    std::size_t first;
    std::size_t last;
    std::size_t length() const noexcept { return last - first + 1; }
};

// Runs shorter than min_samples cannot reach x_0 and are dropped as spikes.
std::vector<Run> detect_bursts(const RssiTrace& trace, const NoiseModel& noise,
                               std::size_t min_samples = 3);

// CCA mode 2 stand-in: busy with probability p_detect for 802.15.4 bursts and
// p_false otherwise, drawn from (seed, event id).
struct CcaParams {
    double p_detect = 0.9786;
    double p_false = 0.0;
};
bool cca_mode2(const BurstEvent& truth, const CcaParams& p, std::uint64_t seed);

enum class SampleStatus { complete, incomplete, discarded };

struct RawBurstSamples {
    SampleStatus status = SampleStatus::discarded;
    int x0 = 0;
    int x1 = 0;  // lower side-band, f_c - df_down
    int x2 = 0;  // upper side-band, f_c + df_up
    std::vector<int> y;  // [x_0, x_3, ..., x_m]
    bool cca = false;
    int sensing_channel = 0;

    // Observation metadata.
    std::size_t first_sample = 0;
    std::size_t run_length = 0;
    double start_us = 0.0;
    double est_oat_us = 0.0;     // run_length * ts - tr, at least one period
    double mean_rssi_dbm = 0.0;  // mean of y when complete, of the whole run otherwise

    // Ground truth (simulation only).
    std::optional<Label> label;
    std::optional<std::uint32_t> primary_event;
    double inr_db = 0.0;  // INR of the primary event at the sensing center
    double true_oat_us = 0.0;

    bool complete() const noexcept { return status == SampleStatus::complete; }
    std::size_t cy() const noexcept { return y.size(); }
};

struct SensingScenario {
    std::span<const BurstEvent> events;
    const RssiTrace& trace;
    const SensingConfig& cfg;
    const SignalEnvironment& env;
    CcaParams cca{};
    std::uint64_t seed = 0;
};

// Runs the side-band state machine on one detected run (see SensingConfig for
// the slot schedule). A burst is complete when its primary event lasts at
// least cfg.tb_min_us(); shorter ones keep only envelope data.
RawBurstSamples sample_burst(const SensingScenario& sc, const Run& run);

struct FeatureVector {
    static constexpr std::size_t kSize = 8;
    static constexpr std::array<std::string_view, kSize> kNames{
        "f_su", "f_sd", "f_sc", "f_tl", "f_ep", "f_ec", "f_er", "f_cca"};

    double su = 0, sd = 0, sc = 0, tl = 0, ep = 0, ec = 0, er = 0, cca = 0;

    std::array<double, kSize> values() const { return {su, sd, sc, tl, ep, ec, er, cca}; }
    static FeatureVector from_values(const std::array<double, kSize>& v);
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

inline constexpr double kRippleThresholdDb = 4.0;

// Throws InvalidArgument for incomplete bursts.
FeatureVector extract_features(const RawBurstSamples& raw, double pe_db = kRippleThresholdDb);

// Renders the center-band trace, detects runs and samples each one.
struct SensedTrace {
    RssiTrace trace;
    std::vector<Run> runs;
    std::vector<RawBurstSamples> bursts;  // one per run
};
SensedTrace sense(std::span<const BurstEvent> events, const SensingConfig& cfg,
                  const SignalEnvironment& env, std::uint64_t seed, const CcaParams& cca = {},
                  TraceWindow window = {});

}  // namespace burstid
