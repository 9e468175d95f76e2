// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "burstid/error.hpp"
#include "burstid/rng.hpp"

namespace burstid {

std::vector<Run> detect_bursts(const RssiTrace& trace, const NoiseModel& noise, std::size_t min_samples) {
    if (trace.rssi.empty()) throw InvalidArgument("detect_bursts: empty trace");
    const double pt = noise.threshold();
    std::vector<Run> runs;
    std::size_t k = 0;
    const std::size_t n = trace.size();
    while (k < n) {
        if (trace.rssi[k] > pt) {
            std::size_t j = k;
            while (j + 1 < n && trace.rssi[j + 1] > pt) ++j;
            if (j - k + 1 >= min_samples) runs.push_back({k, j});
            k = j + 1;
        } else {
            ++k;
        }
    }
    return runs;
}

bool cca_mode2(const BurstEvent& truth, const CcaParams& p, std::uint64_t seed) {
    const double u = hash_uniform(hash_key(seed, stream::cca, truth.id));
    return u < (truth.label.tech() == Tech::Z ? p.p_detect : p.p_false);
}

RawBurstSamples sample_burst(const SensingScenario& sc, const Run& run) {
    const auto& cfg = sc.cfg;
    const auto& tr = sc.trace;
    RawBurstSamples raw;
    raw.sensing_channel = cfg.sensing_channel;
    raw.first_sample = run.first;
    raw.run_length = run.length();
    raw.start_us = tr.time_us(run.first);
    raw.est_oat_us = std::max(cfg.ts_us, static_cast<double>(run.length()) * cfg.ts_us - cfg.tr_us);
    {
        const auto b = tr.rssi.begin() + static_cast<long>(run.first);
        raw.mean_rssi_dbm =
            std::accumulate(b, b + static_cast<long>(run.length()), 0.0) / static_cast<double>(run.length());
    }

    const std::size_t s = run.first;
    const std::size_t k0 = s + static_cast<std::size_t>(cfg.x0_slot());
    if (k0 > run.last) return raw;  // never reached x_0

    raw.status = SampleStatus::incomplete;
    raw.x0 = tr.rssi[k0];

    // Primary event: strongest contributor to the x_0 window.
    const double fc = tr.tuned_mhz;
    double best = -1.0;
    for (std::uint32_t i : tr.truth(k0)) {
        const double p = sc.env.power_mw(sc.events[i], fc);
        if (p > best) {
            best = p;
            raw.primary_event = i;
        }
    }
    if (!raw.primary_event) return raw;
    const BurstEvent& ev = sc.events[*raw.primary_event];
    raw.label = ev.label;
    raw.true_oat_us = ev.oat_us;
    raw.inr_db = 10.0 * std::log10(best) - sc.env.noise().mu();

    const std::size_t k1 = s + static_cast<std::size_t>(cfg.x1_slot());
    const std::size_t k2 = s + static_cast<std::size_t>(cfg.x2_slot());
    if (ev.oat_us < cfg.tb_min_us() || k2 >= tr.size()) return raw;

    raw.cca = cca_mode2(ev, sc.cca, sc.seed);
    raw.x1 = render_sample(sc.events, tr, k1, fc - cfg.df_down_mhz, cfg, sc.env);
    raw.x2 = render_sample(sc.events, tr, k2, fc + cfg.df_up_mhz, cfg, sc.env);
    raw.y.push_back(raw.x0);
    for (std::size_t k = s + static_cast<std::size_t>(cfg.tail_slot()); k <= run.last; ++k)
        raw.y.push_back(tr.rssi[k]);
    raw.mean_rssi_dbm = std::accumulate(raw.y.begin(), raw.y.end(), 0.0) / static_cast<double>(raw.y.size());
    raw.status = SampleStatus::complete;
    return raw;
}

FeatureVector FeatureVector::from_values(const std::array<double, kSize>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
}

FeatureVector extract_features(const RawBurstSamples& raw, double pe_db) {
    if (!raw.complete()) throw InvalidArgument("extract_features: burst is not complete");
    if (raw.y.empty()) throw InvalidArgument("extract_features: empty center-band sample set");
    const double cy = static_cast<double>(raw.y.size());
    const double ybar = std::accumulate(raw.y.begin(), raw.y.end(), 0.0) / cy;
    const auto [mn, mx] = std::minmax_element(raw.y.begin(), raw.y.end());
    int ripple = 0;
    for (std::size_t k = 1; k < raw.y.size(); ++k)
        if (std::abs(raw.y[k] - raw.y[k - 1]) >= pe_db) ++ripple;

    FeatureVector f;
    f.su = ybar - raw.x1;
    f.sd = ybar - raw.x2;
    f.sc = raw.sensing_channel;
    f.tl = cy + 6.0;
    f.ep = ybar;
    f.ec = *mx - *mn;
    f.er = ripple;
    f.cca = raw.cca ? 1.0 : 0.0;
    return f;
}

SensedTrace sense(std::span<const BurstEvent> events, const SensingConfig& cfg,
                  const SignalEnvironment& env, std::uint64_t seed, const CcaParams& cca,
                  TraceWindow window) {
    const double fc = env.map().center_mhz(Tech::Z, cfg.sensing_channel);
    SensedTrace out{rssi_pipeline(events, cfg, env, fc, seed, window), {}, {}};
    if (out.trace.rssi.empty()) return out;
    out.runs = detect_bursts(out.trace, env.noise());
    const SensingScenario sc{events, out.trace, cfg, env, cca, seed};
    out.bursts.reserve(out.runs.size());
    for (const auto& r : out.runs) out.bursts.push_back(sample_burst(sc, r));
    return out;
}

}  // namespace burstid
