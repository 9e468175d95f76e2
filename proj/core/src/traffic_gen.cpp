// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/traffic_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "burstid/error.hpp"
#include "burstid/rng.hpp"

namespace burstid {

double unit_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double ValueDist::sample(std::mt19937_64& rng) const {
    double total = 0.0;
    for (const auto& p : parts) total += p.weight;
    double pick = unit_uniform(rng) * total;
    const Part* chosen = &parts.back();
    for (const auto& p : parts) {
        if (pick < p.weight) {
            chosen = &p;
            break;
        }
        pick -= p.weight;
    }
    return chosen->lo + unit_uniform(rng) * (chosen->hi - chosen->lo);
}

double ValueDist::min() const {
    double m = parts.front().lo;
    for (const auto& p : parts) m = std::min(m, p.lo);
    return m;
}

double ValueDist::max() const {
    double m = parts.front().hi;
    for (const auto& p : parts) m = std::max(m, p.hi);
    return m;
}

void ValueDist::validate(const char* what) const {
    if (parts.empty()) throw InvalidArgument(std::string(what) + ": empty distribution");
    for (const auto& p : parts)
        if (!(p.weight > 0.0) || !(p.lo <= p.hi) || !std::isfinite(p.lo) || !std::isfinite(p.hi))
            throw InvalidArgument(std::string(what) + ": each part needs weight > 0 and lo <= hi");
}

void SourceSpec::validate(const ChannelMap& map) const {
    oat_us.validate("oat_us");
    inr_db.validate("inr_db");
    if (!(oat_us.min() > 0.0)) throw InvalidArgument("oat_us must be positive");
    if (inr_db.min() < 0.0) throw InvalidArgument("inr_db must be non-negative");
    for (int ch : channels)
        if (!map.valid(label, ch))
            throw InvalidArgument("channel " + std::to_string(ch) + " invalid for " + label.str());
    switch (pattern) {
    case Pattern::periodic:
        if (!(period_us > 0.0)) throw InvalidArgument("periodic source needs period_us > 0");
        if (oat_us.max() + jitter_us + (ack_oat_us > 0 ? sifs_us + ack_oat_us : 0.0) >= period_us)
            throw InvalidArgument("periodic source: bursts would overlap the next period");
        break;
    case Pattern::poisson:
        if (!(rate_hz > 0.0)) throw InvalidArgument("poisson source needs rate_hz > 0");
        break;
    case Pattern::saturated:
        gap_us.validate("gap_us");
        if (gap_us.min() < 0.0) throw InvalidArgument("gap_us must be non-negative");
        break;
    case Pattern::beacon:
        if (label.tech() != Tech::L) throw InvalidArgument("beacon pattern is defined for BLE only");
        for (int ch : channels)
            if (!ChannelMap::is_advertising(ch))
                throw InvalidArgument("BLE beacons use advertising channels 37-39 only");
        if (!(period_us > 0.0)) throw InvalidArgument("beacon source needs period_us > 0");
        if (beacon_spacing_us <= oat_us.max())
            throw InvalidArgument("beacon_spacing_us must exceed the longest advertising PDU");
        if (3.0 * beacon_spacing_us + jitter_us >= period_us)
            throw InvalidArgument("beacon period too short for three advertising PDUs");
        break;
    }
    if (hopping == Hopping::ffh && !(slot_us > 0.0)) throw InvalidArgument("ffh needs slot_us > 0");
    if (ack_oat_us < 0.0 || sifs_us < 0.0) throw InvalidArgument("ack timing must be non-negative");
    if (ack_oat_us > 0.0) ack_inr_db.validate("ack_inr_db");
    if (fading_db < 0.0) throw InvalidArgument("fading_db must be non-negative");
}

namespace {

double normal(std::mt19937_64& rng) {
    const double u1 = unit_uniform(rng);
    const double u2 = unit_uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class SourceRun {
public:
    SourceRun(const SourceSpec& s, int index, std::uint64_t seed, const ChannelMap& map)
        : spec_(s), index_(index), rng_(hash_key(seed, 0x7261666669ULL, static_cast<std::uint64_t>(index))) {
        pool_ = s.channels.empty() ? map.channels(s.label.tech()) : s.channels;
        if (s.pattern == Pattern::beacon && s.channels.empty()) pool_ = {37, 38, 39};
        if (s.label.tech() == Tech::L && s.pattern != Pattern::beacon && s.channels.empty())
            pool_.erase(std::remove_if(pool_.begin(), pool_.end(), ChannelMap::is_advertising),
                        pool_.end());
    }

    void run(double horizon, std::vector<BurstEvent>& out) {
        switch (spec_.pattern) {
        case Pattern::periodic:
            for (long n = 0;; ++n) {
                double t = spec_.start_us + n * spec_.period_us;
                if (spec_.jitter_us > 0) t += unit_uniform(rng_) * spec_.jitter_us;
                if (t >= horizon) break;
                emit(t, pick_channel(), out);
            }
            break;
        case Pattern::poisson: {
            double t = spec_.start_us;
            for (;;) {
                t += -std::log(unit_uniform(rng_)) / spec_.rate_hz * 1e6;
                t = std::max(t, busy_until_);
                t = align(t);
                if (t >= horizon) break;
                emit(t, pick_channel(), out);
            }
            break;
        }
        case Pattern::saturated: {
            double t = align(spec_.start_us);
            while (t < horizon) {
                emit(t, pick_channel(), out);
                t = align(busy_until_ + spec_.gap_us.sample(rng_));
            }
            break;
        }
        case Pattern::beacon:
            for (long n = 0;; ++n) {
                double t = spec_.start_us + n * spec_.period_us;
                if (spec_.jitter_us > 0) t += unit_uniform(rng_) * spec_.jitter_us;
                if (t >= horizon) break;
                for (int k = 0; k < 3 && t + k * spec_.beacon_spacing_us < horizon; ++k)
                    emit(t + k * spec_.beacon_spacing_us, pool_[k % pool_.size()], out);
            }
            break;
        }
    }

private:
    // Events on a hopping source start on the slot grid.
    double align(double t) const {
        if (spec_.hopping != Hopping::ffh) return t;
        return std::ceil((t - spec_.start_us) / spec_.slot_us - 1e-9) * spec_.slot_us + spec_.start_us;
    }

    int pick_channel() {
        if (spec_.hopping == Hopping::fixed || pool_.size() == 1) return pool_.front();
        return pool_[static_cast<std::size_t>(unit_uniform(rng_) * pool_.size())];
    }

    double fade(double inr) {
        if (spec_.fading_db > 0.0) inr += spec_.fading_db * normal(rng_);
        return std::max(inr, 0.0);
    }

    void emit(double t, int channel, std::vector<BurstEvent>& out) {
        BurstEvent e;
        e.source = index_;
        e.label = spec_.label;
        e.start_us = t;
        e.oat_us = spec_.oat_us.sample(rng_);
        e.channel = channel;
        e.inr_db = fade(spec_.inr_db.sample(rng_));
        if (last_start_) e.it_us = t - *last_start_;
        last_start_ = t;
        busy_until_ = e.end_us();
        out.push_back(e);
        if (spec_.ack_oat_us > 0.0) {
            BurstEvent a = e;
            a.start_us = e.end_us() + spec_.sifs_us;
            a.oat_us = spec_.ack_oat_us;
            a.inr_db = fade(spec_.ack_inr_db.sample(rng_));
            a.it_us.reset();
            a.is_ack = true;
            busy_until_ = a.end_us();
            out.push_back(a);
        }
    }

    const SourceSpec& spec_;
    int index_;
    std::mt19937_64 rng_;
    std::vector<int> pool_;
    std::optional<double> last_start_;
    double busy_until_ = -1e300;
};

}  // namespace

std::vector<BurstEvent> generate_traffic(const std::vector<SourceSpec>& specs, double duration_ms,
                                         std::uint64_t seed, const ChannelMap& map) {
    if (!(duration_ms >= 0.0)) throw InvalidArgument("duration must be non-negative");
    std::vector<BurstEvent> out;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        specs[i].validate(map);
        SourceRun(specs[i], static_cast<int>(i), seed, map).run(duration_ms * 1000.0, out);
    }
    std::stable_sort(out.begin(), out.end(), [](const BurstEvent& a, const BurstEvent& b) {
        return a.start_us < b.start_us || (a.start_us == b.start_us && a.source < b.source);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<std::uint32_t>(i);
    return out;
}

}  // namespace burstid
