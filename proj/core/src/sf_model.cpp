// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/sf_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "burstid/error.hpp"

namespace burstid {

SfModel::SfModel(const Spectrum& x, const Spectrum& h, int j_max, const SfModelOptions& opt)
    : opt_(opt), lo_(std::min(opt.i_min, opt.i_min + j_max)), hi_(std::max(opt.i_max, opt.i_max + j_max)) {
    if (opt.i_min > opt.i_max) throw InvalidArgument("sf model: empty offset range");
    if (!(opt.df_step_mhz > 0.0)) throw InvalidArgument("sf model: df step must be positive");
    const double g0 = coupling_gain(x, h, 0.0);
    if (!(g0 > 0.0)) throw InvalidArgument("sf model: front end does not couple at offset 0");
    gain_.resize(static_cast<std::size_t>(hi_ - lo_ + 1));
    for (int i = lo_; i <= hi_; ++i) gain_[i - lo_] = coupling_gain(x, h, i * opt.df_step_mhz) / g0;
}

double SfModel::reading_mw(int i, double inr_db) const {
    const double peak = std::pow(10.0, (opt_.noise.threshold() + inr_db) / 10.0);
    return peak * gain_[i - lo_] + std::pow(10.0, opt_.noise.mu() / 10.0);
}

VariationStats SfModel::variation(int j, double inr_db, double gamma_t) const {
    if (opt_.i_min + j < lo_ || opt_.i_max + j > hi_)
        throw InvalidArgument("sf model: shift j outside the cached range");
    VariationStats s;
    s.j = j;
    s.inr_db = inr_db;
    s.gamma_t = gamma_t;
    const double floor_dbm = opt_.noise.threshold() + gamma_t;
    for (int i = opt_.i_min; i <= opt_.i_max; ++i) {
        const double yi = 10.0 * std::log10(reading_mw(i, inr_db));
        if (!(yi > floor_dbm)) continue;
        s.v.push_back(yi - 10.0 * std::log10(reading_mw(i + j, inr_db)));
    }
    if (s.v.empty()) return s;
    const double n = static_cast<double>(s.v.size());
    for (double v : s.v) s.mean += v / n;
    for (double v : s.v) s.var += (v - s.mean) * (v - s.mean) / n;
    return s;
}

VariationStats sf_variation(const Spectrum& x, const Spectrum& h, int j, double inr_db, double gamma_t,
                            const SfModelOptions& opt) {
    return SfModel(x, h, j, opt).variation(j, inr_db, gamma_t);
}

namespace {

// Q(z) = P(N(0,1) > z)
double qfunc(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

}  // namespace

double gaussian_overlap(double mu_a, double sigma_a, double mu_b, double sigma_b) {
    if (!(sigma_a > 0.0) || !(sigma_b > 0.0)) throw InvalidArgument("gaussian_overlap: sigma must be positive");
    if (std::abs(sigma_a - sigma_b) <= 1e-12 * std::max(sigma_a, sigma_b)) {
        const double s = 0.5 * (sigma_a + sigma_b);
        return 2.0 * qfunc(std::abs(mu_a - mu_b) / (2.0 * s));
    }
    // log pdf_A = log pdf_B  <=>  a x^2 + b x + c = 0
    const double va = sigma_a * sigma_a, vb = sigma_b * sigma_b;
    const double a = 1.0 / va - 1.0 / vb;
    const double b = 2.0 * (mu_b / vb - mu_a / va);
    const double c = mu_a * mu_a / va - mu_b * mu_b / vb + 2.0 * std::log(sigma_a / sigma_b);
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = q != 0.0 ? c / q : -r1;
    if (r1 > r2) std::swap(r1, r2);

    // Between the crossings the wider density is the smaller one.
    const bool a_narrow = sigma_a < sigma_b;
    const double mn = a_narrow ? mu_a : mu_b, sn = a_narrow ? sigma_a : sigma_b;
    const double mw = a_narrow ? mu_b : mu_a, sw = a_narrow ? sigma_b : sigma_a;
    const double left = qfunc((mn - r1) / sn);                          // narrow mass below r1
    const double mid = qfunc((r1 - mw) / sw) - qfunc((r2 - mw) / sw);   // wide mass in (r1, r2)
    const double right = qfunc((r2 - mn) / sn);                         // narrow mass above r2
    return std::clamp(left + mid + right, 0.0, 1.0);
}

std::vector<double> default_inr_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 30; ++k) g.push_back(k);
    return g;
}

SfErrorGrid sf_error(const SfModel& a, const SfModel& b, int j, const std::vector<double>& grid_a,
                     const std::vector<double>& grid_b, double gamma_t,
                     const std::vector<std::vector<double>>* weights) {
    SfErrorGrid out;
    out.j = j;
    out.gamma_t = gamma_t;
    std::vector<std::size_t> ia, ib;
    for (std::size_t m = 0; m < grid_a.size(); ++m)
        if (grid_a[m] >= gamma_t) ia.push_back(m);
    for (std::size_t n = 0; n < grid_b.size(); ++n)
        if (grid_b[n] >= gamma_t) ib.push_back(n);
    if (ia.empty() || ib.empty()) throw InvalidArgument("sf_error: INR grid empty after gamma_T restriction");
    if (weights && (weights->size() != grid_a.size() ||
                    std::any_of(weights->begin(), weights->end(),
                                [&](const auto& r) { return r.size() != grid_b.size(); })))
        throw InvalidArgument("sf_error: weight matrix does not match the INR grids");

    std::vector<VariationStats> sa, sb;
    for (std::size_t m : ia) {
        out.grid_a.push_back(grid_a[m]);
        sa.push_back(a.variation(j, grid_a[m], gamma_t));
    }
    for (std::size_t n : ib) {
        out.grid_b.push_back(grid_b[n]);
        sb.push_back(b.variation(j, grid_b[n], gamma_t));
    }
    double acc = 0.0;
    for (std::size_t m = 0; m < ia.size(); ++m) {
        out.weights.emplace_back();
        out.overlap.emplace_back();
        for (std::size_t n = 0; n < ib.size(); ++n) {
            const double w = weights ? (*weights)[ia[m]][ib[n]] : 1.0;
            double s = 1.0;
            if (!sa[m].empty() && !sb[n].empty())
                s = gaussian_overlap(sa[m].mean, std::max(std::sqrt(sa[m].var), kSigmaFloorDb), sb[n].mean,
                                     std::max(std::sqrt(sb[n].var), kSigmaFloorDb));
            out.weights.back().push_back(w);
            out.overlap.back().push_back(s);
            acc += w * s;
        }
    }
    out.error = std::clamp(acc / (static_cast<double>(ia.size()) * static_cast<double>(ib.size())), 0.0, 1.0);
    return out;
}

SfErrorGrid sf_error(const Spectrum& x_a, const Spectrum& x_b, const Spectrum& h, int j,
                     const std::vector<double>& grid_a, const std::vector<double>& grid_b,
                     double gamma_t, const SfModelOptions& opt) {
    return sf_error(SfModel(x_a, h, j, opt), SfModel(x_b, h, j, opt), j, grid_a, grid_b, gamma_t);
}

double mia_upper_bound(double a0, double e_bar) {
    if (!(a0 >= 0.0 && a0 <= 1.0) || !(e_bar >= 0.0 && e_bar <= 1.0))
        throw InvalidArgument("mia_upper_bound: inputs must lie in [0, 1]");
    return a0 + (1.0 - a0) * e_bar;
}

std::optional<int> ShiftReport::flagged(const std::string& pair, double gamma_t) const {
    for (const auto& f : flags)
        if (f.pair == pair && f.gamma_t == gamma_t) return f.j;
    return std::nullopt;
}

double ShiftReport::error(const std::string& pair, double gamma_t, int j) const {
    for (const auto& r : rows)
        if (r.pair == pair && r.gamma_t == gamma_t && r.j == j) return r.error;
    throw InvalidArgument("shift report: no row for " + pair);
}

ShiftReport shift_selection_report(const std::vector<std::pair<Label, Label>>& pairs, const Spectrum& h,
                                   int j_min, int j_max, const std::vector<double>& gamma_ts,
                                   const SfModelOptions& opt, const std::vector<double>& inr_grid,
                                   const MaskTable& masks) {
    if (j_min > j_max) throw InvalidArgument("shift report: empty j-range");
    const int jm = std::max(std::abs(j_min), std::abs(j_max));
    ShiftReport rep;
    for (const auto& [la, lb] : pairs) {
        const std::string name = la.str() + "/" + lb.str();
        const SfModel ma(mask_spectrum(la, masks, h.step()), h, jm, opt);
        const SfModel mb(mask_spectrum(lb, masks, h.step()), h, jm, opt);
        for (double gt : gamma_ts) {
            std::vector<double> e;
            for (int j = j_min; j <= j_max; ++j) {
                e.push_back(sf_error(ma, mb, j, inr_grid, inr_grid, gt).error);
                rep.rows.push_back({name, gt, j, e.back()});
            }
            const double best = *std::min_element(e.begin(), e.end());
            for (int j = j_min; j <= j_max; ++j)
                if (e[j - j_min] <= best + kShiftTolerance) {
                    rep.flags.push_back({name, gt, j});
                    break;
                }
        }
    }
    return rep;
}

}  // namespace burstid
