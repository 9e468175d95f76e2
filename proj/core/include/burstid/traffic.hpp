// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "burstid/classifiers.hpp"
#include "burstid/label.hpp"
#include "burstid/sensing.hpp"
#include "burstid/traffic_gen.hpp"

namespace burstid {

// Right-continuous step CDF of a finite sample.
class EmpiricalCdf {
public:
    explicit EmpiricalCdf(std::vector<double> samples);

    double operator()(double x) const;
    double left_limit(double x) const;
    // Smallest sample value x with F(x) >= p, p in (0, 1].
    double quantile(double p) const;
    double median() const { return quantile(0.5); }

    const std::vector<double>& points() const noexcept { return xs_; }  // distinct, ascending
    std::size_t count_at_or_below(std::size_t k) const noexcept { return cum_[k]; }
    std::size_t count() const noexcept { return n_; }
    double value_at(std::size_t k) const noexcept {
        return static_cast<double>(cum_[k]) / static_cast<double>(n_);
    }

private:
    std::vector<double> xs_;
    std::vector<std::size_t> cum_;
    std::size_t n_;
};

// sup_x |F_A(x) - F_B(x)|, evaluated at every step point of either CDF.
double ks_distance(const EmpiricalCdf& a, const EmpiricalCdf& b);

// Start-to-start gaps of the given start times after sorting.
std::vector<double> interarrival_times(std::vector<double> starts_us);

// A detected burst after classification. Incomplete bursts carry no label.
struct ClassifiedBurst {
    double start_us = 0.0;
    double oat_us = 0.0;
    double rssi_dbm = 0.0;
    std::optional<Tech> predicted;
};

std::vector<ClassifiedBurst> classify_bursts(std::span<const RawBurstSamples> bursts, const Model& m,
                                             double pe_db = kRippleThresholdDb);

struct TrafficStats {
    Tech tech = Tech::W;
    int channel = -1;  // sensing channel, -1 when unknown
    double min_rssi_dbm = 0.0;
    double min_oat_us = 0.0;
    std::size_t count = 0;
    std::optional<EmpiricalCdf> it_cdf;   // needs at least two retained bursts
    std::optional<EmpiricalCdf> oat_cdf;

    bool empty() const noexcept { return count == 0; }
};

// Keeps bursts predicted as `tech` with rssi >= min_rssi and OAT >= min_oat.
TrafficStats label_traffic_stats(std::span<const ClassifiedBurst> bursts, Tech tech, double min_rssi_dbm,
                                 double min_oat_us, int channel = -1);

// Ground-truth interarrival CDF of one technology's data frames (ACKs excluded).
// Start-to-start gaps of the non-ACK frames of `tech` with OAT >= min_oat_us.
std::optional<EmpiricalCdf> reference_it_cdf(std::span<const BurstEvent> events, Tech tech, double min_oat_us = 0.0);

struct KsSweep {
    std::vector<double> rssi_grid;
    std::vector<double> oat_grid;
    std::vector<std::vector<std::optional<double>>> d;  // [rssi][oat], nullopt: no estimate
    std::optional<std::pair<std::size_t, std::size_t>> argmin;  // first minimum in row-major order

    std::optional<double> min() const;
};

// Cell (r, c) compares the estimate filtered at (rssi_grid[r], oat_grid[c]) with the
// ground truth filtered at oat_grid[c]; cells where either side is empty stay nullopt.
KsSweep ks_sweep(std::span<const ClassifiedBurst> bursts, Tech tech, std::span<const BurstEvent> reference,
                 const std::vector<double>& rssi_grid, const std::vector<double>& oat_grid);

// "# format: burstid-cdf 1.0" then x_us,F at each step point.
void write_cdf_csv(std::ostream& os, const EmpiricalCdf& cdf);
// "# format: burstid-ks-sweep 1.0" then one row per RSSI threshold; empty cells are "nan".
void write_sweep_csv(std::ostream& os, const KsSweep& s);

}  // namespace burstid
