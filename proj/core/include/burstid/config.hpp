// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

namespace burstid {

// Receiver noise in dB units. The detection threshold is always derived.
class NoiseModel {
public:
    explicit NoiseModel(double mu_dbm = -98.0, double sigma_db = 1.0);

    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }
    double threshold() const noexcept { return mu_ + 2.0 * sigma_; }

private:
    double mu_;
    double sigma_;
};

// Timing and tuning parameters of the sensing radio.
//
// Side-band schedule, in sample slots after the first over-threshold reading s:
//   s, s+1        settle
//   s+2           x_0 (CCA right after)
//   s+3, s+4      discarded on f_c - df_down
//   s+5           x_1
//   s+6, s+7      discarded on f_c + df_up
//   s+8           x_2
//   s+9 ...       y tail on f_c while over threshold
// Each retune (df_sw_us) completes inside the gap before the next slot.
struct SensingConfig {
    double ts_us = 54.0;
    double tr_us = 128.0;
    double rssi_cutoff_khz = 7.8;
    double df_up_mhz = 2.0;
    double df_down_mhz = 2.0;
    double df_min_mhz = 1.0;
    double tsw_us = 25.0;
    int range_lo_dbm = -100;
    int range_hi_dbm = 0;
    int sensing_channel = 18;
    double tb_max_us = 5000.0;
    int settle_samples = 2;
    int discard_samples = 2;

    void validate() const;

    double sampling_khz() const noexcept { return 1000.0 / ts_us; }
    int x0_slot() const noexcept { return settle_samples; }
    int x1_slot() const noexcept { return x0_slot() + discard_samples + 1; }
    int x2_slot() const noexcept { return x1_slot() + discard_samples + 1; }
    int tail_slot() const noexcept { return x2_slot() + 1; }
    // Shortest on-air time whose side-band readings x_0..x_2 all fall inside the burst.
    double tb_min_us() const noexcept { return (x2_slot() - x0_slot()) * ts_us; }
};

}  // namespace burstid
