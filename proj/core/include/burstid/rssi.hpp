// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "burstid/channel_map.hpp"
#include "burstid/config.hpp"
#include "burstid/spectrum.hpp"
#include "burstid/traffic_gen.hpp"

namespace burstid {

// Everything needed to turn events into received power at a tuning: noise,
// channel layout, transmit masks and the sensing front end. Coupling gains are
// tabulated at construction; the object is immutable afterwards.
class SignalEnvironment {
public:
    explicit SignalEnvironment(NoiseModel noise = NoiseModel{}, Spectrum frontend = idi_frontend(),
                               const ChannelMap& map = ChannelMap::standard(),
                               const MaskTable& masks = MaskTable::standard());

    const NoiseModel& noise() const noexcept { return noise_; }
    const ChannelMap& map() const noexcept { return map_; }
    const Spectrum& frontend() const noexcept { return frontend_; }

    // Gain in dB when tuned df MHz above the signal center, relative to df = 0.
    double coupling_db(const Label& l, double df_mhz) const;
    double coupling_lin(const Label& l, double df_mhz) const;
    double center_mhz(const BurstEvent& e) const { return map_.center_mhz(e.label.tech(), e.channel); }
    double power_mw(const BurstEvent& e, double tuned_mhz) const;
    double power_dbm(const BurstEvent& e, double tuned_mhz) const;
    double noise_mw(std::uint64_t seed, std::int64_t sample_index) const;

private:
    NoiseModel noise_;
    Spectrum frontend_;
    ChannelMap map_;
    MaskTable masks_;
    double table_step_;
    std::array<std::vector<double>, kLabelRows> table_;  // linear gain relative to df = 0
    std::array<double, kLabelRows> peak_{};              // absolute gain at df = 0
};

struct PowerSegment {
    double start_us;
    double end_us;
    double mw;
};

// Trailing-window mean of a piecewise-constant envelope over (t - tr, t].
double window_average(std::span<const PowerSegment> segs, double t_us, double tr_us);

int quantize_dbm(double mw, int lo_dbm, int hi_dbm);

// Quantized RSSI samples taken at t0 + k*ts with the ground-truth events
// contributing to each sample's averaging window.
struct RssiTrace {
    double t0_us = 0.0;
    double ts_us = 54.0;
    double tuned_mhz = 0.0;
    std::uint64_t seed = 0;
    std::vector<int> rssi;
    std::vector<std::uint32_t> truth_offsets{0};
    std::vector<std::uint32_t> truth_events;

    std::size_t size() const noexcept { return rssi.size(); }
    double time_us(std::size_t k) const noexcept { return t0_us + static_cast<double>(k) * ts_us; }
    std::int64_t global_index(std::size_t k) const noexcept;
    std::span<const std::uint32_t> truth(std::size_t k) const noexcept {
        return {truth_events.data() + truth_offsets[k], truth_events.data() + truth_offsets[k + 1]};
    }
};

struct TraceWindow {
    double t0_us = 0.0;
    std::size_t samples = 0;  // 0: cover up to the last event end plus one window
};

// Noise-free averaged power per sample (linear mW, events summed in input order).
std::vector<double> envelope_mw(std::span<const BurstEvent> events, const SensingConfig& cfg,
                                const SignalEnvironment& env, double tuned_mhz,
                                const TraceWindow& window);

RssiTrace rssi_pipeline(std::span<const BurstEvent> events, const SensingConfig& cfg,
                        const SignalEnvironment& env, double tuned_mhz, std::uint64_t seed,
                        TraceWindow window = {});

// One RSSI reading at sample k of `trace`'s grid, re-rendered at another tuning.
int render_sample(std::span<const BurstEvent> events, const RssiTrace& trace, std::size_t k,
                  double tuned_mhz, const SensingConfig& cfg, const SignalEnvironment& env);

}  // namespace burstid
