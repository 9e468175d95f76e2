// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/rssi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "burstid/error.hpp"
#include "burstid/rng.hpp"

namespace burstid {

SignalEnvironment::SignalEnvironment(NoiseModel noise, Spectrum frontend, const ChannelMap& map,
                                     const MaskTable& masks)
    : noise_(noise), frontend_(std::move(frontend)), map_(map), masks_(masks),
      table_step_(frontend_.step()) {
    for (int row = 0; row < kLabelRows; ++row) {
        const Label l = label_from_row(row);
        const Spectrum x = mask_spectrum(l, masks_, table_step_);
        peak_[row] = coupling_gain(x, frontend_, 0.0);
        if (!(peak_[row] > 0.0))
            throw InvalidArgument("front end does not couple to " + l.str() + " at its center");
        const int n = static_cast<int>(
            std::ceil((x.half_width() + frontend_.half_width()) / table_step_)) + 1;
        auto& t = table_[row];
        t.resize(2 * n + 1);
        for (int k = -n; k <= n; ++k) t[k + n] = coupling_gain(x, frontend_, k * table_step_) / peak_[row];
    }
}

double SignalEnvironment::coupling_lin(const Label& l, double df_mhz) const {
    const int row = l.row();
    const double pos = df_mhz / table_step_;
    const double r = std::round(pos);
    if (std::abs(pos - r) < 1e-9) {
        const auto& t = table_[row];
        const long n = static_cast<long>(t.size() / 2);
        const long k = static_cast<long>(r);
        return (k < -n || k > n) ? 0.0 : t[k + n];
    }
    return coupling_gain(mask_spectrum(l, masks_, table_step_), frontend_, df_mhz) / peak_[row];
}

double SignalEnvironment::coupling_db(const Label& l, double df_mhz) const {
    const double g = coupling_lin(l, df_mhz);
    return g > 0.0 ? 10.0 * std::log10(g) : -std::numeric_limits<double>::infinity();
}

double SignalEnvironment::power_mw(const BurstEvent& e, double tuned_mhz) const {
    return std::pow(10.0, (noise_.mu() + e.inr_db) / 10.0) * coupling_lin(e.label, tuned_mhz - center_mhz(e));
}

double SignalEnvironment::power_dbm(const BurstEvent& e, double tuned_mhz) const {
    const double mw = power_mw(e, tuned_mhz);
    return mw > 0.0 ? 10.0 * std::log10(mw) : -std::numeric_limits<double>::infinity();
}

double SignalEnvironment::noise_mw(std::uint64_t seed, std::int64_t sample_index) const {
    const double z = hash_normal(seed, stream::noise, static_cast<std::uint64_t>(sample_index));
    return std::pow(10.0, (noise_.mu() + noise_.sigma() * z) / 10.0);
}

double window_average(std::span<const PowerSegment> segs, double t_us, double tr_us) {
    const double lo = t_us - tr_us;
    double acc = 0.0;
    for (const auto& s : segs) {
        const double ov = std::min(s.end_us, t_us) - std::max(s.start_us, lo);
        if (ov > 0.0) acc += s.mw * ov;
    }
    return acc / tr_us;
}

int quantize_dbm(double mw, int lo_dbm, int hi_dbm) {
    if (!(mw > 0.0)) return lo_dbm;
    const double r = std::round(10.0 * std::log10(mw));  // half away from zero
    return static_cast<int>(std::clamp(r, static_cast<double>(lo_dbm), static_cast<double>(hi_dbm)));
}

std::int64_t RssiTrace::global_index(std::size_t k) const noexcept {
    return static_cast<std::int64_t>(std::llround(t0_us / ts_us)) + static_cast<std::int64_t>(k);
}

namespace {

std::size_t default_samples(std::span<const BurstEvent> events, const SensingConfig& cfg, double t0) {
    double end = t0;
    for (const auto& e : events) end = std::max(end, e.end_us() + cfg.tr_us);
    return static_cast<std::size_t>(std::floor((end - t0) / cfg.ts_us)) + 1;
}

// Calls f(k, share) for every sample whose window overlaps the event, where
// share is the overlapped fraction of the window.
template <class F>
void for_each_overlap(const BurstEvent& e, double t0, double ts, double tr, std::size_t n, F&& f) {
    const double first = std::ceil((e.start_us - t0) / ts);
    const double last = std::floor((e.end_us() + tr - t0) / ts);
    const long k0 = std::max(0L, static_cast<long>(first));
    const long k1 = std::min(static_cast<long>(n) - 1, static_cast<long>(last));
    for (long k = k0; k <= k1; ++k) {
        const double t = t0 + static_cast<double>(k) * ts;
        const double ov = std::min(e.end_us(), t) - std::max(e.start_us, t - tr);
        if (ov > 0.0) f(static_cast<std::size_t>(k), ov / tr);
    }
}

void check_tuning(double tuned_mhz, const SensingConfig& cfg, const SignalEnvironment& env) {
    const double base = env.map().center_mhz(Tech::Z, cfg.sensing_channel);
    const double r = (tuned_mhz - base) / cfg.df_min_mhz;
    if (std::abs(r - std::round(r)) > 1e-9)
        throw InvalidArgument("tuned frequency must be a channel center plus a multiple of df_min");
}

}  // namespace

std::vector<double> envelope_mw(std::span<const BurstEvent> events, const SensingConfig& cfg,
                                const SignalEnvironment& env, double tuned_mhz,
                                const TraceWindow& window) {
    const std::size_t n = window.samples ? window.samples : default_samples(events, cfg, window.t0_us);
    std::vector<double> env_mw(n, 0.0);
    for (const auto& e : events) {
        const double p = env.power_mw(e, tuned_mhz);
        for_each_overlap(e, window.t0_us, cfg.ts_us, cfg.tr_us, n,
                         [&](std::size_t k, double share) { env_mw[k] += p * share; });
    }
    return env_mw;
}

RssiTrace rssi_pipeline(std::span<const BurstEvent> events, const SensingConfig& cfg,
                        const SignalEnvironment& env, double tuned_mhz, std::uint64_t seed,
                        TraceWindow window) {
    cfg.validate();
    check_tuning(tuned_mhz, cfg, env);
    if (!window.samples) window.samples = default_samples(events, cfg, window.t0_us);
    const std::size_t n = window.samples;

    RssiTrace tr;
    tr.t0_us = window.t0_us;
    tr.ts_us = cfg.ts_us;
    tr.tuned_mhz = tuned_mhz;
    tr.seed = seed;

    std::vector<double> lin(n, 0.0);
    std::vector<std::uint32_t> counts(n, 0);
    for (const auto& e : events) {
        const double p = env.power_mw(e, tuned_mhz);
        for_each_overlap(e, tr.t0_us, cfg.ts_us, cfg.tr_us, n, [&](std::size_t k, double share) {
            lin[k] += p * share;
            ++counts[k];
        });
    }
    tr.truth_offsets.resize(n + 1);
    tr.truth_offsets[0] = 0;
    for (std::size_t k = 0; k < n; ++k) tr.truth_offsets[k + 1] = tr.truth_offsets[k] + counts[k];
    tr.truth_events.resize(tr.truth_offsets[n]);
    std::vector<std::uint32_t> fill(tr.truth_offsets.begin(), tr.truth_offsets.end() - 1);
    for (std::size_t i = 0; i < events.size(); ++i)
        for_each_overlap(events[i], tr.t0_us, cfg.ts_us, cfg.tr_us, n, [&](std::size_t k, double) {
            tr.truth_events[fill[k]++] = static_cast<std::uint32_t>(i);
        });

    tr.rssi.resize(n);
    for (std::size_t k = 0; k < n; ++k)
        tr.rssi[k] = quantize_dbm(lin[k] + env.noise_mw(seed, tr.global_index(k)), cfg.range_lo_dbm,
                                  cfg.range_hi_dbm);
    return tr;
}

int render_sample(std::span<const BurstEvent> events, const RssiTrace& trace, std::size_t k,
                  double tuned_mhz, const SensingConfig& cfg, const SignalEnvironment& env) {
    const double t = trace.time_us(k);
    double acc = 0.0;
    for (std::uint32_t i : trace.truth(k)) {
        const auto& e = events[i];
        const double ov = std::min(e.end_us(), t) - std::max(e.start_us, t - cfg.tr_us);
        acc += env.power_mw(e, tuned_mhz) * (ov / cfg.tr_us);
    }
    return quantize_dbm(acc + env.noise_mw(trace.seed, trace.global_index(k)), cfg.range_lo_dbm,
                        cfg.range_hi_dbm);
}

}  // namespace burstid
