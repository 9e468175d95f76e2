// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/config.hpp"

#include <cmath>
#include <string>

#include "burstid/error.hpp"

namespace burstid {

NoiseModel::NoiseModel(double mu_dbm, double sigma_db) : mu_(mu_dbm), sigma_(sigma_db) {
    if (!(sigma_db > 0.0)) throw InvalidArgument("noise sigma must be positive");
    if (!std::isfinite(mu_dbm)) throw InvalidArgument("noise mean must be finite");
}

namespace {
bool is_multiple(double v, double step) {
    const double r = v / step;
    return std::abs(r - std::round(r)) < 1e-9;
}
}  // namespace

void SensingConfig::validate() const {
    if (!(ts_us > 0.0) || !(tr_us > 0.0)) throw InvalidArgument("ts_us and tr_us must be positive");
    if (!(sampling_khz() > 2.0 * rssi_cutoff_khz))
        throw InvalidArgument("sampling rate " + std::to_string(sampling_khz()) +
                              " kHz is not above twice the RSSI cutoff");
    if (!(tsw_us >= 0.0) || tsw_us >= ts_us)
        throw InvalidArgument("channel switch time must fit inside one sampling period");
    if (!(df_min_mhz > 0.0)) throw InvalidArgument("df_min_mhz must be positive");
    if (!(df_up_mhz > 0.0) || !(df_down_mhz > 0.0) || !is_multiple(df_up_mhz, df_min_mhz) ||
        !is_multiple(df_down_mhz, df_min_mhz))
        throw InvalidArgument("side-band offsets must be positive multiples of df_min_mhz");
    if (range_lo_dbm >= range_hi_dbm) throw InvalidArgument("empty RSSI dynamic range");
    if (sensing_channel < 11 || sensing_channel > 26)
        throw InvalidArgument("sensing channel must be an 802.15.4 channel in [11, 26]");
    if (settle_samples < 0 || discard_samples < 0)
        throw InvalidArgument("settle/discard sample counts must be non-negative");
    if (!(tb_max_us > tb_min_us())) throw InvalidArgument("tb_max_us must exceed the OAT floor");
}

}  // namespace burstid
