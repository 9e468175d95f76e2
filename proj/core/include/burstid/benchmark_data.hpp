// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "burstid/config.hpp"
#include "burstid/dataset.hpp"
#include "burstid/label.hpp"
#include "burstid/rssi.hpp"
#include "burstid/sensing.hpp"
#include "burstid/traffic_gen.hpp"

namespace burstid {

// Isolated-burst dataset: each record comes from a one-burst scenario on a
// random sensing channel, with the interferer placed near the sensing center
// and its sensed INR drawn uniformly.
struct BenchmarkSpec {
    std::size_t records = 6000;  // complete bursts to collect
    // Per label row: B, L, Z, W-b, W-g, W-n20, W-n40.
    std::array<double, kLabelRows> weights{0.24, 0.20, 0.20, 0.08, 0.12, 0.10, 0.06};
    std::array<ValueDist, kLabelRows> oat_us{
        ValueDist{{{1.0, 250.0, 366.0}, {1.0, 1000.0, 1622.0}, {1.0, 2000.0, 2870.0}}},
        ValueDist{{{0.6, 300.0, 380.0}, {0.4, 400.0, 2120.0}}},
        ValueDist::uniform(600.0, 4256.0),
        ValueDist{{{0.2, 200.0, 324.0}, {0.8, 324.0, 5000.0}}},
        ValueDist{{{0.2, 60.0, 324.0}, {0.8, 324.0, 2500.0}}},
        ValueDist{{{0.2, 60.0, 324.0}, {0.8, 324.0, 2500.0}}},
        ValueDist{{{0.2, 60.0, 324.0}, {0.8, 324.0, 2000.0}}},
    };
    // Largest |interferer center - sensing center| per row, MHz.
    std::array<double, kLabelRows> max_offset_mhz{1.0, 1.0, 0.0, 7.0, 7.0, 7.0, 17.0};
    // Integer dB steps 1..30, the same points as the SF-model INR grid.
    ValueDist sensed_inr_db = ValueDist::integers(1, 30);
    std::array<double, kLabelRows> ack_oat_us{0.0, 0.0, 0.0, 304.0, 44.0, 44.0, 44.0};
    double sifs_us = 10.0;
    double lead_us = 300.0;  // idle time before each burst
    std::size_t max_attempts = 0;  // 0: 50 * records

    void validate() const;
};

struct BenchmarkOutput {
    Dataset data;
    std::size_t attempts = 0;
};

BenchmarkOutput benchmark_dataset(const BenchmarkSpec& spec, const SensingConfig& cfg,
                                  const SignalEnvironment& env, std::uint64_t seed,
                                  const CcaParams& cca = {});

}  // namespace burstid
