// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "burstid/channel_map.hpp"
#include "burstid/label.hpp"

namespace burstid {

// Power-spectral shape sampled on a grid k*step, k = -n..n (MHz, relative to
// center_mhz). Density is in dB; normalized spectra integrate to 1 in the
// linear domain under the trapezoid rule.
class Spectrum {
public:
    Spectrum(double step_mhz, std::vector<double> density_db, double center_mhz = 0.0,
             bool normalized = false);

    double step() const noexcept { return step_; }
    int half_points() const noexcept { return static_cast<int>(db_.size() / 2); }
    std::size_t size() const noexcept { return db_.size(); }
    double freq(std::size_t k) const noexcept {
        return (static_cast<double>(k) - half_points()) * step_;
    }
    double half_width() const noexcept { return half_points() * step_; }
    double center_mhz() const noexcept { return center_; }
    bool normalized() const noexcept { return normalized_; }
    const std::vector<double>& density_db() const noexcept { return db_; }
    std::vector<double> linear() const;

    // Linear-domain value at offset f, linearly interpolated; zero off-grid.
    double linear_at(double f) const;

private:
    double step_;
    std::vector<double> db_;
    double center_;
    bool normalized_;
};

// Trapezoid integral of the linear density.
double integrate_linear(const Spectrum& s);

// Symmetric piecewise-linear transmit masks keyed by label string ("B", "W-g", ...).
class MaskTable {
public:
    using Breakpoints = std::vector<std::pair<double, double>>;  // (|offset| MHz, dB)

    static const MaskTable& standard();
    static MaskTable from_tsv(std::string_view text);

    const Breakpoints& mask(const Label& l) const;
    bool has(const Label& l) const { return masks_.count(l.str()) != 0; }

private:
    std::map<std::string, Breakpoints> masks_;
};

inline constexpr double kDefaultGridStep = 0.125;

// Normalized transmit spectrum of label l on the given channel.
Spectrum psd(const Label& l, int channel, const ChannelMap& map = ChannelMap::standard(),
             const MaskTable& masks = MaskTable::standard(), double step_mhz = kDefaultGridStep);

// Mask of l as a normalized spectrum centered at 0, no channel attached.
Spectrum mask_spectrum(const Label& l, const MaskTable& masks = MaskTable::standard(),
                       double step_mhz = kDefaultGridStep);

// Raised-cosine band-pass front end. The -3 dB width is scale * nominal_width;
// rolloff sets the transition band as a fraction of the half width.
struct FrontendParams {
    double nominal_width_mhz = 2.0;
    double rolloff = 1.0 / 3.0;
    double floor_db = -50.0;
    double half_span_mhz = 8.0;
    double center_offset_mhz = 0.0;  // passband shift; 0 keeps the response symmetric
    double step_mhz = kDefaultGridStep;

    // Narrowed, offset response used for side-band sensing.
    static FrontendParams idi_mode();
};

inline constexpr double kIdiBandwidthScale = 0.75;

Spectrum frontend_response(double bandwidth_scale, const FrontendParams& p = {});
// frontend_response(kIdiBandwidthScale, FrontendParams::idi_mode())
Spectrum idi_frontend();

// Power received through h when tuned df MHz above the center of x:
// tx * integral X(f) H(df - f) df, in dBm. Returns -inf when nothing couples.
double received_power(const Spectrum& x, const Spectrum& h, double df_mhz, double tx_dbm);
// Same in linear units relative to tx (dimensionless gain).
double coupling_gain(const Spectrum& x, const Spectrum& h, double df_mhz);

}  // namespace burstid
