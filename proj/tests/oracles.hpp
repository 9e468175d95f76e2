// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors
//
// Straight-line reference computations used by the tests. Each is written
// independently of the library code it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "burstid/classifiers.hpp"
#include "burstid/spectrum.hpp"

namespace oracle {

inline double trapezoid(const std::vector<double>& y, double step) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * step;
    return s;
}

inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

// Linear-domain value of s at offset f, by linear interpolation between grid points.
inline double lin_at(const burstid::Spectrum& s, double f) {
    const auto& db = s.density_db();
    const double half = static_cast<double>(db.size() / 2);
    const double pos = f / s.step() + half;
    const double last = static_cast<double>(db.size() - 1);
    if (pos < -1e-9 || pos > last + 1e-9) return 0.0;
    const double p = std::clamp(pos, 0.0, last);
    const auto i = static_cast<std::size_t>(std::floor(p));
    if (i + 1 >= db.size()) return db_to_lin(db.back());
    const double t = p - static_cast<double>(i);
    return (1.0 - t) * db_to_lin(db[i]) + t * db_to_lin(db[i + 1]);
}

// Gain through h tuned df above x's center, by trapezoid over x's support.
inline double coupling(const burstid::Spectrum& x, const burstid::Spectrum& h, double df) {
    const double step = std::min(x.step(), h.step());
    const int n = static_cast<int>(std::lround(x.half_width() / step));
    std::vector<double> xs, prod;
    for (int k = -n; k <= n; ++k) {
        const double f = k * step;
        xs.push_back(lin_at(x, f));
        prod.push_back(xs.back() * lin_at(h, df - f));
    }
    const double norm = x.normalized() ? 1.0 : trapezoid(xs, step);
    return trapezoid(prod, step) / norm;
}

// Random smooth-ish dB profile on 2n+1 points, peak near the middle.
inline burstid::Spectrum random_spectrum(std::mt19937_64& rng, double step, int n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> db(2 * n + 1);
    const double slope = 2.0 + 20.0 * u(rng);
    for (int k = -n; k <= n; ++k) db[k + n] = -slope * std::abs(k) / n * 3.0 + 4.0 * (u(rng) - 0.5);
    return burstid::Spectrum(step, db);
}

// g_m: mean over present labels of the per-label error rate.
inline double gm(const std::vector<burstid::Tech>& truth, const std::vector<burstid::Tech>& pred) {
    double g = 0.0;
    int labels = 0;
    for (burstid::Tech l : burstid::kAllTechs) {
        long n = 0, e = 0;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (truth[i] == l) {
                ++n;
                e += pred[i] != l;
            }
        if (n == 0) continue;
        ++labels;
        g += static_cast<double>(e) / static_cast<double>(n);
    }
    return g / labels;
}

// The CT1 structure evaluated directly, with thresholds passed in.
inline burstid::Tech ct1(const burstid::Ct1Model& m, double p1, double p2, double p3, const burstid::FeatureVector& f) {
    using burstid::Tech;
    if (m.use_cca && f.cca >= 0.5) return Tech::Z;
    const double lo = std::min(f.su, f.sd);
    const bool narrowband = (lo > p1) || (std::abs(f.su - f.sd) > p3 && lo > p2);
    if (!narrowband) return Tech::W;
    if (m.has_l && f.tl <= m.tl_max && f.ec <= m.ec_max) return Tech::L;
    return Tech::B;
}

inline double frac_at_or_below(const std::vector<double>& s, double x) {
    return static_cast<double>(std::count_if(s.begin(), s.end(), [&](double v) { return v <= x; })) /
           static_cast<double>(s.size());
}

// sup |F_A - F_B| checked at every sample of either set and just below it.
inline double ks(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pts(a);
    pts.insert(pts.end(), b.begin(), b.end());
    double d = 0.0;
    for (double x : pts) {
        d = std::max(d, std::abs(frac_at_or_below(a, x) - frac_at_or_below(b, x)));
        const double below = std::nextafter(x, -INFINITY);
        d = std::max(d, std::abs(frac_at_or_below(a, below) - frac_at_or_below(b, below)));
    }
    return d;
}

}  // namespace oracle
