// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "burstid/dataset.hpp"
#include "burstid/error.hpp"

namespace burstid {

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : n_(samples.size()) {
    if (samples.empty()) throw InvalidArgument("empirical cdf: no samples");
    for (double v : samples)
        if (!std::isfinite(v)) throw InvalidArgument("empirical cdf: non-finite sample");
    std::sort(samples.begin(), samples.end());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        if (xs_.empty() || samples[k] != xs_.back()) {
            xs_.push_back(samples[k]);
            cum_.push_back(0);
        }
        cum_.back() = k + 1;
    }
}

double EmpiricalCdf::operator()(double x) const {
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return 0.0;
    return value_at(static_cast<std::size_t>(it - xs_.begin()) - 1);
}

double EmpiricalCdf::left_limit(double x) const {
    const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
    if (it == xs_.begin()) return 0.0;
    return value_at(static_cast<std::size_t>(it - xs_.begin()) - 1);
}

double EmpiricalCdf::quantile(double p) const {
    if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("empirical cdf: quantile level outside (0, 1]");
    const double need = std::ceil(p * static_cast<double>(n_) - 1e-9);
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), static_cast<std::size_t>(need));
    return xs_[std::min<std::size_t>(static_cast<std::size_t>(it - cum_.begin()), xs_.size() - 1)];
}

double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b) {
    // Both CDFs are constant between consecutive union points, so left limits
    // coincide with the value at the previous union point.
    const auto& xa = a.points();
    const auto& xb = b.points();
    std::size_t i = 0, j = 0;
    double fa = 0.0, fb = 0.0, d = 0.0;
    while (i < xa.size() || j < xb.size()) {
        double x;
        if (j == xb.size() || (i < xa.size() && xa[i] <= xb[j]))
            x = xa[i];
        else
            x = xb[j];
        if (i < xa.size() && xa[i] == x) fa = a.value_at(i++);
        if (j < xb.size() && xb[j] == x) fb = b.value_at(j++);
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

std::vector<double> interarrival_times(std::vector<double> starts_us) {
    std::sort(starts_us.begin(), starts_us.end());
    std::vector<double> it;
    for (std::size_t k = 1; k < starts_us.size(); ++k) it.push_back(starts_us[k] - starts_us[k - 1]);
    return it;
}

std::vector<ClassifiedBurst> classify_bursts(std::span<const RawBurstSamples> bursts, const Model& m,
                                             double pe_db) {
    std::vector<ClassifiedBurst> out;
    out.reserve(bursts.size());
    for (const auto& b : bursts) {
        if (b.status == SampleStatus::discarded) continue;
        ClassifiedBurst c{b.start_us, b.est_oat_us, b.mean_rssi_dbm, std::nullopt};
        if (b.complete()) c.predicted = classify(m, extract_features(b, pe_db));
        out.push_back(c);
    }
    return out;
}

TrafficStats label_traffic_stats(std::span<const ClassifiedBurst> bursts, Tech tech, double min_rssi_dbm,
                                 double min_oat_us, int channel) {
    TrafficStats s;
    s.tech = tech;
    s.channel = channel;
    s.min_rssi_dbm = min_rssi_dbm;
    s.min_oat_us = min_oat_us;
    std::vector<double> starts, oats;
    for (const auto& b : bursts) {
        if (b.predicted != tech || b.rssi_dbm < min_rssi_dbm || b.oat_us < min_oat_us) continue;
        starts.push_back(b.start_us);
        oats.push_back(b.oat_us);
    }
    s.count = starts.size();
    if (s.count == 0) return s;
    s.oat_cdf.emplace(std::move(oats));
    if (s.count >= 2) s.it_cdf.emplace(interarrival_times(std::move(starts)));
    return s;
}

std::optional<EmpiricalCdf> reference_it_cdf(std::span<const BurstEvent> events, Tech tech, double min_oat_us) {
    std::vector<double> starts;
    for (const auto& e : events)
        if (e.label.tech() == tech && !e.is_ack && e.oat_us >= min_oat_us) starts.push_back(e.start_us);
    if (starts.size() < 2) return std::nullopt;
    return EmpiricalCdf(interarrival_times(std::move(starts)));
}

std::optional<double> KsSweep::min() const {
    if (!argmin) return std::nullopt;
    return d[argmin->first][argmin->second];
}

KsSweep ks_sweep(std::span<const ClassifiedBurst> bursts, Tech tech, std::span<const BurstEvent> reference,
                 const std::vector<double>& rssi_grid, const std::vector<double>& oat_grid) {
    if (rssi_grid.empty() || oat_grid.empty()) throw InvalidArgument("ks_sweep: empty threshold grid");
    KsSweep s{rssi_grid, oat_grid, {}, std::nullopt};
    s.d.assign(rssi_grid.size(), std::vector<std::optional<double>>(oat_grid.size()));
    std::vector<std::optional<EmpiricalCdf>> ref;
    for (double o : oat_grid) ref.push_back(reference_it_cdf(reference, tech, o));
    for (std::size_t r = 0; r < rssi_grid.size(); ++r) {
        for (std::size_t c = 0; c < oat_grid.size(); ++c) {
            const TrafficStats st = label_traffic_stats(bursts, tech, rssi_grid[r], oat_grid[c]);
            if (!st.it_cdf || !ref[c]) continue;
            s.d[r][c] = ks_distance(*st.it_cdf, *ref[c]);
            if (!s.argmin || *s.d[r][c] < *s.d[s.argmin->first][s.argmin->second]) s.argmin = {r, c};
        }
    }
    return s;
}

void write_cdf_csv(std::ostream& os, const EmpiricalCdf& cdf) {
    os << "# format: burstid-cdf 1.0\nx_us,F\n";
    for (std::size_t k = 0; k < cdf.points().size(); ++k)
        os << format_double(cdf.points()[k]) << ',' << format_double(cdf.value_at(k)) << '\n';
}

void write_sweep_csv(std::ostream& os, const KsSweep& s) {
    os << "# format: burstid-ks-sweep 1.0\nmin_rssi_dbm";
    for (double o : s.oat_grid) os << ",oat_" << format_double(o);
    os << '\n';
    for (std::size_t r = 0; r < s.rssi_grid.size(); ++r) {
        os << format_double(s.rssi_grid[r]);
        for (const auto& v : s.d[r]) os << ',' << (v ? format_double(*v) : std::string("nan"));
        os << '\n';
    }
}

}  // namespace burstid
