// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "burstid/channel_map.hpp"
#include "burstid/label.hpp"

namespace burstid {

// One over-the-air transmission.
struct BurstEvent {
    std::uint32_t id = 0;
    int source = 0;
    Label label;
    double start_us = 0.0;
    double oat_us = 0.0;
    int channel = 0;
    double inr_db = 0.0;  // INR when tuned to the event's own channel center
    std::optional<double> it_us;  // start-to-start gap to the previous frame of the source
    bool is_ack = false;

    double end_us() const noexcept { return start_us + oat_us; }
};

// Weighted mixture of uniform ranges; lo == hi gives a point mass.
struct ValueDist {
    struct Part {
        double weight;
        double lo;
        double hi;
    };
    std::vector<Part> parts;

    static ValueDist fixed(double v) { return {{{1.0, v, v}}}; }
    static ValueDist uniform(double lo, double hi) { return {{{1.0, lo, hi}}}; }
    // Equally likely integers lo..hi.
    static ValueDist integers(int lo, int hi) {
        ValueDist d;
        for (int v = lo; v <= hi; ++v) d.parts.push_back({1.0, double(v), double(v)});
        return d;
    }

    double sample(std::mt19937_64& rng) const;
    double min() const;
    double max() const;
    void validate(const char* what) const;
};

enum class Pattern { periodic, poisson, saturated, beacon };
enum class Hopping { fixed, ffh };

struct SourceSpec {
    Label label;
    Pattern pattern = Pattern::periodic;
    double period_us = 0.0;      // periodic, beacon
    double jitter_us = 0.0;      // periodic, beacon: uniform delay added to each period start
    double rate_hz = 0.0;        // poisson
    ValueDist gap_us = ValueDist::fixed(50.0);  // saturated: idle time after each exchange
    ValueDist oat_us = ValueDist::fixed(1000.0);
    ValueDist inr_db = ValueDist::fixed(20.0);
    std::vector<int> channels;   // fixed: first entry; ffh: drawn per slot; empty = all valid
    Hopping hopping = Hopping::fixed;
    double slot_us = 625.0;      // ffh slot grid
    double start_us = 0.0;
    double beacon_spacing_us = 400.0;  // start-to-start spacing of the three advertising PDUs
    double ack_oat_us = 0.0;     // > 0 appends an acknowledgement after sifs_us
    double sifs_us = 10.0;
    ValueDist ack_inr_db = ValueDist::fixed(20.0);
    double fading_db = 0.0;      // sigma of per-burst log-normal gain, 0 = off

    void validate(const ChannelMap& map) const;
};

// Deterministic in (specs, duration, seed). Events are sorted by start time and
// numbered in that order; per-source events never overlap.
std::vector<BurstEvent> generate_traffic(const std::vector<SourceSpec>& specs, double duration_ms,
                                         std::uint64_t seed,
                                         const ChannelMap& map = ChannelMap::standard());

// Uniform (0,1) from a 64-bit engine, independent of the standard library's distributions.
double unit_uniform(std::mt19937_64& rng);

}  // namespace burstid
