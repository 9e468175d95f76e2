// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/benchmark_data.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "burstid/error.hpp"
#include "burstid/rng.hpp"

namespace burstid {

void BenchmarkSpec::validate() const {
    if (records == 0) throw InvalidArgument("benchmark: records must be positive");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidArgument("benchmark: negative label weight");
        total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("benchmark: all label weights are zero");
    for (int r = 0; r < kLabelRows; ++r) {
        if (weights[r] == 0.0) continue;
        oat_us[r].validate("benchmark oat_us");
        if (oat_us[r].min() < 0.0) throw InvalidArgument("benchmark: negative OAT");
        if (!(max_offset_mhz[r] >= 0.0)) throw InvalidArgument("benchmark: negative offset bound");
    }
    sensed_inr_db.validate("benchmark sensed_inr_db");
    if (!(lead_us >= 0.0)) throw InvalidArgument("benchmark: negative lead time");
}

namespace {

int draw_row(const std::array<double, kLabelRows>& w, std::mt19937_64& rng) {
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    double u = unit_uniform(rng) * total;
    int last = 0;
    for (int r = 0; r < kLabelRows; ++r) {
        if (w[r] <= 0.0) continue;
        last = r;
        if (u < w[r]) return r;
        u -= w[r];
    }
    return last;
}

}  // namespace

BenchmarkOutput benchmark_dataset(const BenchmarkSpec& spec, const SensingConfig& base,
                                  const SignalEnvironment& env, std::uint64_t seed, const CcaParams& cca) {
    spec.validate();
    base.validate();
    const ChannelMap& map = env.map();
    const std::vector<int> z_channels = map.channels(Tech::Z);
    const std::size_t max_attempts = spec.max_attempts ? spec.max_attempts : 50 * spec.records;

    BenchmarkOutput out;
    while (out.data.size() < spec.records) {
        if (out.attempts == max_attempts)
            throw InvalidArgument("benchmark: too few complete bursts after " + std::to_string(max_attempts) +
                                  " attempts");
        const std::uint64_t k = out.attempts++;
        std::mt19937_64 rng(hash_key(seed, stream::bench, k));

        const Label label = label_from_row(draw_row(spec.weights, rng));
        const int row = label.row();
        SensingConfig cfg = base;
        cfg.sensing_channel = z_channels[static_cast<std::size_t>(unit_uniform(rng) * z_channels.size())];
        const double fc = map.center_mhz(Tech::Z, cfg.sensing_channel);

        std::vector<int> near;
        for (int ch : map.channels(label.tech()))
            if (std::abs(map.center_mhz(label.tech(), ch) - fc) <= spec.max_offset_mhz[row] + 1e-9) near.push_back(ch);
        if (near.empty()) continue;
        const int channel = near[static_cast<std::size_t>(unit_uniform(rng) * near.size())];
        const double df = fc - map.center_mhz(label.tech(), channel);
        const double coupling = env.coupling_db(label, df);
        if (!std::isfinite(coupling)) continue;

        const double start = spec.lead_us + unit_uniform(rng) * cfg.ts_us;
        BurstEvent data;
        data.id = 0;
        data.label = label;
        data.start_us = start;
        data.oat_us = spec.oat_us[row].sample(rng);
        data.channel = channel;
        data.inr_db = spec.sensed_inr_db.sample(rng) - coupling;
        std::vector<BurstEvent> events{data};
        if (spec.ack_oat_us[row] > 0.0) {
            BurstEvent ack = data;
            ack.id = 1;
            ack.start_us = data.end_us() + spec.sifs_us;
            ack.oat_us = spec.ack_oat_us[row];
            ack.inr_db = spec.sensed_inr_db.sample(rng) - coupling;
            ack.is_ack = true;
            events.push_back(ack);
        }

        const SensedTrace st = sense(events, cfg, env, hash_key(seed, stream::bench_noise, k), cca);
        for (const auto& b : st.bursts) {
            if (!b.complete() || b.primary_event != 0u) continue;
            out.data.records.push_back({extract_features(b), label, b.inr_db, channel});
            break;
        }
    }
    return out;
}

}  // namespace burstid
