// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "burstid/classifiers.hpp"
#include "burstid/error.hpp"

namespace burstid {

namespace {

using Counts = std::array<long, kTechCount>;

// g_m from per-label error and partition counts; labels with size 0 are absent.
double gm_from_counts(const Counts& err, const Counts& size) {
    int present = 0;
    for (long s : size) present += s > 0;
    double g = 0.0;
    for (int l = 0; l < kTechCount; ++l)
        if (size[l] > 0) g += static_cast<double>(err[l]) / (static_cast<double>(present) * static_cast<double>(size[l]));
    return g;
}

}  // namespace

double misclassification(std::span<const Tech> truth, std::span<const Tech> predicted) {
    if (truth.size() != predicted.size()) throw InvalidArgument("misclassification: size mismatch");
    if (truth.empty()) throw InvalidArgument("misclassification: empty dataset");
    Counts err{}, size{};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const int l = static_cast<int>(truth[i]);
        ++size[l];
        err[l] += truth[i] != predicted[i];
    }
    return gm_from_counts(err, size);
}

double misclassification(std::span<const Tech> truth, std::span<const Tech> predicted,
                         std::span<const Tech> labels) {
    for (Tech l : labels)
        if (std::find(truth.begin(), truth.end(), l) == truth.end())
            throw InvalidArgument(std::string("misclassification: empty partition for label ") + tech_code(l));
    for (Tech t : truth)
        if (std::find(labels.begin(), labels.end(), t) == labels.end())
            throw InvalidArgument(std::string("misclassification: record label outside the label set: ") + tech_code(t));
    return misclassification(truth, predicted);
}

Ct1Grid Ct1Grid::uniform(double step_db, double dynamic_range_db) {
    if (!(step_db > 0.0)) throw InvalidArgument("CT1 grid step must be positive");
    Ct1Grid g;
    const double h = dynamic_range_db / 2.0;
    const long n12 = static_cast<long>(std::floor(h / step_db + 1e-9));
    for (long k = -n12; k <= n12; ++k) g.p1.push_back(static_cast<double>(k) * step_db);
    g.p2 = g.p1;
    const long n3 = static_cast<long>(std::floor(dynamic_range_db / step_db + 1e-9));
    for (long k = 0; k <= n3; ++k) g.p3.push_back(static_cast<double>(k) * step_db);
    return g;
}

void Ct1Grid::validate(double dr) const {
    auto check = [](const std::vector<double>& v, double lo, double hi, const char* name) {
        if (v.empty()) throw InvalidArgument(std::string("CT1 grid: empty ") + name);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] < lo || v[i] > hi)
                throw InvalidArgument(std::string("CT1 grid: ") + name + " value outside the feasible box");
            if (i && !(v[i] > v[i - 1]))
                throw InvalidArgument(std::string("CT1 grid: ") + name + " must be strictly increasing");
        }
    };
    check(p1, -dr / 2, dr / 2, "p1");
    check(p2, -dr / 2, dr / 2, "p2");
    check(p3, 0.0, dr, "p3");
}

Tech classify(const Ct1Model& m, const FeatureVector& v) {
    if (m.use_cca && v.cca >= 0.5) return Tech::Z;
    const double lo = std::min(v.su, v.sd);
    const bool narrow = lo > m.p.p1 || (std::abs(v.su - v.sd) > m.p.p3 && lo > m.p.p2);
    if (!narrow) return Tech::W;
    if (m.has_l && v.tl <= m.tl_max && v.ec <= m.ec_max) return Tech::L;
    return Tech::B;
}

void fit_ct1_envelope_split(const Dataset& d, Ct1Model& m) {
    std::vector<const Record*> nb;
    Counts size{};
    for (const auto& r : d.records)
        if (r.label.tech() == Tech::B || r.label.tech() == Tech::L) {
            nb.push_back(&r);
            ++size[static_cast<int>(r.label.tech())];
        }
    m.has_l = size[static_cast<int>(Tech::L)] > 0;
    if (!m.has_l) return;
    if (size[static_cast<int>(Tech::B)] == 0) {
        m.tl_max = std::numeric_limits<double>::max();
        m.ec_max = std::numeric_limits<double>::max();
        return;
    }
    std::vector<double> tls, ecs;
    for (const auto* r : nb) {
        tls.push_back(r->f.tl);
        ecs.push_back(r->f.ec);
    }
    std::sort(tls.begin(), tls.end());
    tls.erase(std::unique(tls.begin(), tls.end()), tls.end());
    std::sort(ecs.begin(), ecs.end());
    ecs.erase(std::unique(ecs.begin(), ecs.end()), ecs.end());

    double best = std::numeric_limits<double>::infinity();
    for (double tl : tls)
        for (double ec : ecs) {
            Counts err{};
            for (const auto* r : nb) {
                const Tech pred = (r->f.tl <= tl && r->f.ec <= ec) ? Tech::L : Tech::B;
                err[static_cast<int>(r->label.tech())] += pred != r->label.tech();
            }
            const double g = gm_from_counts(err, size);
            if (g < best) {
                best = g;
                m.tl_max = tl;
                m.ec_max = ec;
            }
        }
}

Ct1Fit train_ct1(const Dataset& d, const Ct1Grid& grid) {
    if (d.empty()) throw InvalidArgument("train_ct1: empty dataset");
    Ct1Fit fit;
    Ct1Model& m = fit.model;
    grid.validate(m.dynamic_range_db);
    const auto sizes_u = d.counts();
    Counts size{};
    for (int l = 0; l < kTechCount; ++l) size[l] = static_cast<long>(sizes_u[l]);
    m.use_cca = size[static_cast<int>(Tech::Z)] > 0;
    fit_ct1_envelope_split(d, m);

    // Per record: error when routed narrowband (a) or wideband (b).
    struct Item {
        double lo, diff;
        int label;
        int delta;  // a - b
    };
    Counts fixed{};
    std::vector<Item> items;
    for (const auto& r : d.records) {
        const Tech t = r.label.tech();
        const int l = static_cast<int>(t);
        if (m.use_cca && r.f.cca >= 0.5) {
            fixed[l] += t != Tech::Z;
            continue;
        }
        const Tech nl = (m.has_l && r.f.tl <= m.tl_max && r.f.ec <= m.ec_max) ? Tech::L : Tech::B;
        const int a = t != nl;
        const int b = t != Tech::W;
        fixed[l] += b;
        if (a != b) items.push_back({std::min(r.f.su, r.f.sd), std::abs(r.f.su - r.f.sd), l, a - b});
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.lo < y.lo; });

    const std::size_t n2 = grid.p2.size(), n3 = grid.p3.size();
    // Largest grid index whose value is strictly below v, or -1.
    auto below = [](const std::vector<double>& g, double v) {
        return static_cast<long>(std::lower_bound(g.begin(), g.end(), v) - g.begin()) - 1;
    };

    std::vector<long> cell(kTechCount * n2 * n3, 0);
    std::vector<long> suffix(kTechCount * (n2 + 1) * (n3 + 1), 0);
    auto cidx = [&](int l, std::size_t a, std::size_t b) { return (l * n2 + a) * n3 + b; };
    auto sidx = [&](int l, std::size_t a, std::size_t b) { return (l * (n2 + 1) + a) * (n3 + 1) + b; };

    Counts clause1{};  // delta sum of items with lo > p1
    for (const auto& it : items) clause1[it.label] += it.delta;

    double best_g = std::numeric_limits<double>::infinity();
    std::tuple<double, double, double> best_key{};
    std::size_t moved = 0;
    for (double p1 : grid.p1) {
        while (moved < items.size() && items[moved].lo <= p1) {
            const auto& it = items[moved++];
            clause1[it.label] -= it.delta;
            const long a = below(grid.p2, it.lo);
            const long b = below(grid.p3, it.diff);
            if (a >= 0 && b >= 0) cell[cidx(it.label, a, b)] += it.delta;
        }
        for (int l = 0; l < kTechCount; ++l)
            for (std::size_t a = n2; a-- > 0;)
                for (std::size_t b = n3; b-- > 0;)
                    suffix[sidx(l, a, b)] = cell[cidx(l, a, b)] + suffix[sidx(l, a + 1, b)] +
                                            suffix[sidx(l, a, b + 1)] - suffix[sidx(l, a + 1, b + 1)];
        for (std::size_t a = 0; a < n2; ++a)
            for (std::size_t b = 0; b < n3; ++b) {
                Counts err{};
                for (int l = 0; l < kTechCount; ++l) err[l] = fixed[l] + clause1[l] + suffix[sidx(l, a, b)];
                const double g = gm_from_counts(err, size);
                const auto key = std::make_tuple(std::abs(p1), std::abs(grid.p2[a]), grid.p3[b]);
                if (g < best_g || (g == best_g && key < best_key)) {
                    best_g = g;
                    best_key = key;
                    m.p = {p1, grid.p2[a], grid.p3[b]};
                }
            }
    }
    fit.gm = best_g;
    return fit;
}

}  // namespace burstid
