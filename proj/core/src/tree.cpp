// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <algorithm>
#include <numeric>
#include <random>

#include "burstid/classifiers.hpp"
#include "burstid/error.hpp"
#include "burstid/rng.hpp"
#include "burstid/traffic_gen.hpp"

namespace burstid {

namespace {

using Counts = std::array<std::uint32_t, kTechCount>;

std::vector<int> candidate_features(const std::vector<int>& allowed) {
    if (allowed.empty()) {
        std::vector<int> all(FeatureVector::kSize);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    for (int f : allowed)
        if (f < 0 || f >= static_cast<int>(FeatureVector::kSize))
            throw InvalidArgument("feature index out of range: " + std::to_string(f));
    std::vector<int> v = allowed;
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

Tech majority(const Counts& c, const std::array<double, kTechCount>& prior) {
    int best = 0;
    for (int l = 1; l < kTechCount; ++l)
        if (c[l] > c[best] || (c[l] == c[best] && prior[l] > prior[best])) best = l;
    return static_cast<Tech>(best);
}

struct Split {
    bool valid = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;  // weighted impurity decrease, n * gini - n_l * gini_l - n_r * gini_r
};

class Grower {
public:
    Grower(const Dataset& d, const TreeParams& p, std::uint64_t seed)
        : d_(d), p_(p), feats_(candidate_features(p.features)), rng_(seed) {
        const auto c = d.counts();
        const double n = static_cast<double>(d.size());
        for (int l = 0; l < kTechCount; ++l) prior_[l] = n > 0 ? c[l] / n : 0.0;
    }

    TreeModel grow(std::span<const std::size_t> rows) {
        TreeModel t;
        t.features = feats_;
        struct Leaf {
            int node;
            std::vector<std::size_t> rows;
            Split split;
        };
        std::vector<Leaf> open;
        t.nodes.push_back(make_node(rows));
        open.push_back({0, {rows.begin(), rows.end()}, {}});
        open.back().split = best_split(open.back().rows, t.nodes[0].counts);

        int splits = 0;
        while (p_.max_splits < 0 || splits < p_.max_splits) {
            // Best-first: largest decrease, earliest node on ties.
            int pick = -1;
            for (std::size_t i = 0; i < open.size(); ++i) {
                if (!open[i].split.valid) continue;
                if (pick < 0 || open[i].split.gain > open[pick].split.gain ||
                    (open[i].split.gain == open[pick].split.gain && open[i].node < open[pick].node))
                    pick = static_cast<int>(i);
            }
            if (pick < 0) break;
            Leaf leaf = std::move(open[pick]);
            open.erase(open.begin() + pick);

            std::vector<std::size_t> lrows, rrows;
            for (std::size_t r : leaf.rows)
                (value(r, leaf.split.feature) <= leaf.split.threshold ? lrows : rrows).push_back(r);
            const int li = static_cast<int>(t.nodes.size());
            t.nodes.push_back(make_node(lrows));
            const int ri = static_cast<int>(t.nodes.size());
            t.nodes.push_back(make_node(rrows));
            auto& parent = t.nodes[leaf.node];
            parent.feature = leaf.split.feature;
            parent.threshold = leaf.split.threshold;
            parent.left = li;
            parent.right = ri;
            ++splits;

            Split ls = best_split(lrows, t.nodes[li].counts);
            Split rs = best_split(rrows, t.nodes[ri].counts);
            open.push_back({li, std::move(lrows), ls});
            open.push_back({ri, std::move(rrows), rs});
        }
        return t;
    }

private:
    double value(std::size_t row, int f) const { return d_.records[row].f.values()[f]; }

    TreeNode make_node(std::span<const std::size_t> rows) const {
        TreeNode n;
        for (std::size_t r : rows) ++n.counts[static_cast<int>(d_.records[r].label.tech())];
        n.label = majority(n.counts, prior_);
        return n;
    }

    Split best_split(const std::vector<std::size_t>& rows, const Counts& counts) {
        Split best;
        const double g0 = gini(counts);
        if (g0 == 0.0 || rows.size() < 2) return best;
        const double n = static_cast<double>(rows.size());

        std::vector<int> feats = feats_;
        if (p_.mtry > 0 && p_.mtry < static_cast<int>(feats.size())) {
            // Partial Fisher-Yates, then restore ascending order for tie-breaking.
            for (int i = 0; i < p_.mtry; ++i) {
                const auto j = i + static_cast<int>(unit_uniform(rng_) * (feats.size() - i));
                std::swap(feats[i], feats[j]);
            }
            feats.resize(p_.mtry);
            std::sort(feats.begin(), feats.end());
        }

        std::vector<std::pair<double, int>> col(rows.size());
        for (int f : feats) {
            for (std::size_t i = 0; i < rows.size(); ++i)
                col[i] = {value(rows[i], f), static_cast<int>(d_.records[rows[i]].label.tech())};
            std::sort(col.begin(), col.end());
            Counts left{};
            Counts right = counts;
            for (std::size_t i = 0; i + 1 < col.size(); ++i) {
                ++left[col[i].second];
                --right[col[i].second];
                if (col[i].first == col[i + 1].first) continue;
                const double nl = static_cast<double>(i + 1);
                const double nr = n - nl;
                const double gain = n * g0 - nl * gini(left) - nr * gini(right);
                if (gain > best.gain + 1e-12) {
                    best.valid = true;
                    best.feature = f;
                    best.threshold = 0.5 * (col[i].first + col[i + 1].first);
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    const Dataset& d_;
    TreeParams p_;
    std::vector<int> feats_;
    std::mt19937_64 rng_;
    std::array<double, kTechCount> prior_{};
};

}  // namespace

double gini(const Counts& c) {
    double n = 0.0;
    for (auto v : c) n += v;
    if (n == 0.0) return 0.0;
    double s = 0.0;
    for (auto v : c) s += (v / n) * (v / n);
    return 1.0 - s;
}

int TreeModel::splits() const {
    int s = 0;
    for (const auto& n : nodes) s += n.feature >= 0;
    return s;
}

TreeModel grow_tree(const Dataset& d, std::span<const std::size_t> rows, const TreeParams& p,
                    std::uint64_t seed) {
    if (rows.empty()) throw InvalidArgument("grow_tree: no training rows");
    return Grower(d, p, seed).grow(rows);
}

TreeModel train_ct2(const Dataset& d, int max_splits, std::vector<int> features) {
    if (d.empty()) throw InvalidArgument("train_ct2: empty dataset");
    std::vector<std::size_t> rows(d.size());
    std::iota(rows.begin(), rows.end(), 0);
    TreeParams p;
    p.max_splits = max_splits;
    p.features = std::move(features);
    return grow_tree(d, rows, p);
}

Tech classify(const TreeModel& m, const FeatureVector& v) {
    const auto x = v.values();
    int i = 0;
    while (m.nodes[i].feature >= 0) i = x[m.nodes[i].feature] <= m.nodes[i].threshold ? m.nodes[i].left : m.nodes[i].right;
    return m.nodes[i].label;
}

ForestModel train_rfct(const Dataset& d, const ForestParams& p) {
    if (d.empty()) throw InvalidArgument("train_rfct: empty dataset");
    if (p.n_trees < 1) throw InvalidArgument("train_rfct: n_trees must be >= 1");
    ForestModel f;
    const auto c = d.counts();
    for (int l = 0; l < kTechCount; ++l) f.prior[l] = static_cast<double>(c[l]) / static_cast<double>(d.size());

    TreeParams tp;
    tp.max_splits = -1;
    tp.mtry = p.mtry;
    tp.features = p.features;
    const std::size_t n = d.size();
    for (int t = 0; t < p.n_trees; ++t) {
        std::mt19937_64 rng(hash_key(p.seed, 0x666f72657374ULL, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> rows(n);
        if (p.bootstrap)
            for (auto& r : rows) r = static_cast<std::size_t>(unit_uniform(rng) * n);
        else
            std::iota(rows.begin(), rows.end(), 0);
        std::sort(rows.begin(), rows.end());
        f.trees.push_back(grow_tree(d, rows, tp, rng()));
    }
    return f;
}

Tech classify(const ForestModel& m, const FeatureVector& v, std::array<int, kTechCount>* votes) {
    std::array<int, kTechCount> tally{};
    for (const auto& t : m.trees) ++tally[static_cast<int>(classify(t, v))];
    if (votes) *votes = tally;
    int best = 0;
    for (int l = 1; l < kTechCount; ++l)
        if (tally[l] > tally[best] || (tally[l] == tally[best] && m.prior[l] > m.prior[best])) best = l;
    return static_cast<Tech>(best);
}

}  // namespace burstid
