// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "burstid/error.hpp"
#include "embedded_data.hpp"

namespace burstid {

namespace {

constexpr std::string_view kMaskHeader = "# burstid-masks 1.";

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

double trapz(const std::vector<double>& v, double step) {
    if (v.size() < 2) return 0.0;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t k = 1; k + 1 < v.size(); ++k) s += v[k];
    return s * step;
}

// Breakpoints are sorted by offset; values outside the table clamp to the ends.
double interp_breakpoints(const MaskTable::Breakpoints& bp, double x) {
    if (x <= bp.front().first) return bp.front().second;
    if (x >= bp.back().first) return bp.back().second;
    auto hi = std::upper_bound(bp.begin(), bp.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

}  // namespace

Spectrum::Spectrum(double step_mhz, std::vector<double> density_db, double center_mhz,
                   bool normalized)
    : step_(step_mhz), db_(std::move(density_db)), center_(center_mhz), normalized_(normalized) {
    if (!(step_ > 0.0) || step_ > 0.25)
        throw InvalidArgument("spectrum grid step must be in (0, 0.25] MHz");
    if (db_.empty() || db_.size() % 2 == 0)
        throw InvalidArgument("spectrum grid must have an odd number of points centered at 0");
    for (double d : db_)
        if (!std::isfinite(d)) throw InvalidArgument("spectrum density must be finite");
    if (normalized_) {
        const double total = integrate_linear(*this);
        if (std::abs(total - 1.0) > 1e-9)
            throw InvalidArgument("spectrum flagged normalized but integrates to " +
                                  std::to_string(total));
    }
}

std::vector<double> Spectrum::linear() const {
    std::vector<double> out(db_.size());
    std::transform(db_.begin(), db_.end(), out.begin(), db_to_lin);
    return out;
}

double Spectrum::linear_at(double f) const {
    const double pos = f / step_ + half_points();
    if (pos < 0.0 || pos > static_cast<double>(db_.size() - 1)) return 0.0;
    const auto k = static_cast<std::size_t>(pos);
    if (k + 1 >= db_.size()) return db_to_lin(db_.back());
    const double t = pos - static_cast<double>(k);
    return (1.0 - t) * db_to_lin(db_[k]) + t * db_to_lin(db_[k + 1]);
}

double integrate_linear(const Spectrum& s) { return trapz(s.linear(), s.step()); }

const MaskTable& MaskTable::standard() {
    static const MaskTable table = from_tsv(embedded::masks_tsv);
    return table;
}

MaskTable MaskTable::from_tsv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind(kMaskHeader, 0) != 0)
        throw FormatError("mask table: missing or unsupported '# burstid-masks 1.x' header");
    MaskTable t;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string id;
        double off = 0, lvl = 0;
        if (!(row >> id >> off >> lvl))
            throw FormatError("mask table line " + std::to_string(lineno) + ": expected 3 columns");
        try {
            (void)parse_label(id);
        } catch (const InvalidArgument& e) {
            throw FormatError("mask table line " + std::to_string(lineno) + ": " + e.what());
        }
        auto& bp = t.masks_[id];
        if (!bp.empty() && off <= bp.back().first)
            throw FormatError("mask table line " + std::to_string(lineno) +
                              ": offsets must increase within a mask");
        if (bp.empty() && off != 0.0)
            throw FormatError("mask table line " + std::to_string(lineno) +
                              ": first breakpoint must be at offset 0");
        bp.emplace_back(off, lvl);
    }
    for (const auto& [id, bp] : t.masks_)
        if (bp.size() < 2) throw FormatError("mask table: mask " + id + " needs >= 2 breakpoints");
    return t;
}

const MaskTable::Breakpoints& MaskTable::mask(const Label& l) const {
    auto it = masks_.find(l.str());
    if (it == masks_.end()) throw InvalidArgument("no transmit mask for label " + l.str());
    return it->second;
}

Spectrum mask_spectrum(const Label& l, const MaskTable& masks, double step_mhz) {
    const auto& bp = masks.mask(l);
    const int n = static_cast<int>(std::lround(bp.back().first / step_mhz));
    std::vector<double> lin(2 * n + 1);
    for (int k = -n; k <= n; ++k)
        lin[k + n] = db_to_lin(interp_breakpoints(bp, std::abs(k * step_mhz)));
    const double total = trapz(lin, step_mhz);
    std::vector<double> db(lin.size());
    for (std::size_t k = 0; k < lin.size(); ++k) db[k] = 10.0 * std::log10(lin[k] / total);
    return Spectrum(step_mhz, std::move(db), 0.0, true);
}

Spectrum psd(const Label& l, int channel, const ChannelMap& map, const MaskTable& masks,
              double step_mhz) {
    if (!map.valid(l, channel))
        throw InvalidArgument("channel " + std::to_string(channel) + " is not valid for " + l.str());
    Spectrum base = mask_spectrum(l, masks, step_mhz);
    return Spectrum(base.step(), base.density_db(), map.center_mhz(l.tech(), channel), true);
}

FrontendParams FrontendParams::idi_mode() {
    FrontendParams p;
    p.center_offset_mhz = 0.5;
    return p;
}

Spectrum frontend_response(double bandwidth_scale, const FrontendParams& p) {
    if (!(bandwidth_scale > 0.0) || bandwidth_scale > 1.0)
        throw InvalidArgument("front-end bandwidth scale must be in (0, 1]");
    if (!(p.rolloff > 0.0) || p.rolloff > 1.0)
        throw InvalidArgument("front-end rolloff must be in (0, 1]");
    const double half = 0.5 * bandwidth_scale * p.nominal_width_mhz;
    const double a = half * (1.0 - p.rolloff);
    const double b = half * (1.0 + p.rolloff);
    if (b + std::abs(p.center_offset_mhz) > p.half_span_mhz)
        throw InvalidArgument("front-end grid span too small for the requested passband");
    const int n = static_cast<int>(std::lround(p.half_span_mhz / p.step_mhz));
    const double floor_lin = db_to_lin(p.floor_db);
    std::vector<double> db(2 * n + 1);
    for (int k = -n; k <= n; ++k) {
        const double af = std::abs(k * p.step_mhz - p.center_offset_mhz);
        double h = 0.0;
        if (af <= a)
            h = 1.0;
        else if (af < b)
            h = 0.5 * (1.0 + std::cos(std::numbers::pi * (af - a) / (b - a)));
        db[k + n] = 10.0 * std::log10(std::max(h, floor_lin));
    }
    return Spectrum(p.step_mhz, std::move(db), 0.0, false);
}

Spectrum idi_frontend() { return frontend_response(kIdiBandwidthScale, FrontendParams::idi_mode()); }

double coupling_gain(const Spectrum& x, const Spectrum& h, double df_mhz) {
    const double fine = std::min(x.step(), h.step());
    const double ratio = std::max(x.step(), h.step()) / fine;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw InvalidArgument("spectrum grids are not commensurate (step ratio " +
                              std::to_string(ratio) + ")");

    // Integration nodes sit on x's support at the finer of the two steps.
    std::vector<double> xl;
    if (x.step() == fine) {
        xl = x.linear();
    } else {
        const int n = static_cast<int>(std::lround(x.half_width() / fine));
        xl.resize(2 * n + 1);
        for (int k = -n; k <= n; ++k) xl[k + n] = x.linear_at(k * fine);
    }
    const int n = static_cast<int>(xl.size() / 2);
    const double norm = x.normalized() ? 1.0 : trapz(xl, fine);
    if (!(norm > 0.0)) throw InvalidArgument("transmit spectrum has zero total power");

    double acc = 0.0;
    for (int k = -n; k <= n; ++k) {
        const double w = (k == -n || k == n) ? 0.5 : 1.0;
        acc += w * xl[k + n] * h.linear_at(df_mhz - k * fine);
    }
    return acc * fine / norm;
}

double received_power(const Spectrum& x, const Spectrum& h, double df_mhz, double tx_dbm) {
    const double g = coupling_gain(x, h, df_mhz);
    if (g <= 0.0) return -std::numeric_limits<double>::infinity();
    return tx_dbm + 10.0 * std::log10(g);
}

}  // namespace burstid
