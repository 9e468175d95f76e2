// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "burstid/classifiers.hpp"
#include "burstid/error.hpp"

namespace burstid {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Dual C-SVM solved by SMO with second-order working-set selection.
// Minimizes 0.5 a'Qa - e'a subject to y'a = 0, 0 <= a <= C, Q_ij = y_i y_j K_ij.
class Smo {
public:
    Smo(const std::vector<std::vector<double>>& x, std::vector<int> y, double gamma, double c)
        : x_(x), y_(std::move(y)), gamma_(gamma), c_(c), n_(x.size()), rows_(n_), diag_(n_, 1.0) {}

    void solve(double tol, long max_iter) {
        alpha_.assign(n_, 0.0);
        grad_.assign(n_, -1.0);
        constexpr double tau = 1e-12;
        for (iter_ = 0;; ++iter_) {
            // i: maximal violating index in I_up.
            double gmax = -std::numeric_limits<double>::infinity();
            long i = -1;
            for (std::size_t t = 0; t < n_; ++t)
                if (in_up(t) && -y_[t] * grad_[t] > gmax) {
                    i = static_cast<long>(t);
                    gmax = -y_[t] * grad_[t];
                }
            double gmin = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < n_; ++t)
                if (in_low(t)) gmin = std::min(gmin, -y_[t] * grad_[t]);
            gap_ = gmax - gmin;
            if (i < 0 || gap_ < tol) break;
            if (iter_ >= max_iter)
                throw ConvergenceError("MSVM: binary learner did not reach KKT tolerance within " +
                                           std::to_string(max_iter) + " iterations (gap " +
                                           std::to_string(gap_) + ")",
                                       iter_, gap_);

            const auto& qi = row(static_cast<std::size_t>(i));
            long j = -1;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t t = 0; t < n_; ++t) {
                if (!in_low(t)) continue;
                const double b = gmax + y_[t] * grad_[t];
                if (b <= 0.0) continue;
                double a = diag_[i] + diag_[t] - 2.0 * qi[t];
                if (a <= 0.0) a = tau;
                const double v = -(b * b) / a;
                if (v < best) {
                    best = v;
                    j = static_cast<long>(t);
                }
            }
            if (j < 0) break;
            update(static_cast<std::size_t>(i), static_cast<std::size_t>(j), tau);
        }
    }

    double bias() const {
        // rho as the mean of y_t * G_t over free vectors, midpoint of bounds otherwise.
        double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum = 0.0;
        long nfree = 0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double yg = y_[t] * grad_[t];
            if (alpha_[t] >= c_) {
                if (y_[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
            } else if (alpha_[t] <= 0.0) {
                if (y_[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
            } else {
                ++nfree;
                sum += yg;
            }
        }
        const double rho = nfree > 0 ? sum / static_cast<double>(nfree) : 0.5 * (ub + lb);
        return -rho;
    }

    const std::vector<double>& alpha() const { return alpha_; }
    long iterations() const { return iter_; }

private:
    bool in_up(std::size_t t) const { return (y_[t] == 1 && alpha_[t] < c_) || (y_[t] == -1 && alpha_[t] > 0); }
    bool in_low(std::size_t t) const { return (y_[t] == -1 && alpha_[t] < c_) || (y_[t] == 1 && alpha_[t] > 0); }

    // Kernel row K(x_i, .), computed on first use and kept.
    const std::vector<float>& row(std::size_t i) {
        auto& r = rows_[i];
        if (r.empty()) {
            r.resize(n_);
            for (std::size_t t = 0; t < n_; ++t) r[t] = static_cast<float>(std::exp(-gamma_ * sq_dist(x_[i], x_[t])));
        }
        return r;
    }

    void update(std::size_t i, std::size_t j, double tau) {
        const auto& qi = row(i);
        const auto& qj = row(j);
        const double kij = qi[j];
        const double old_ai = alpha_[i], old_aj = alpha_[j];
        if (y_[i] != y_[j]) {
            double quad = diag_[i] + diag_[j] - 2.0 * kij;
            if (quad <= 0) quad = tau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = alpha_[i] - alpha_[j];
            alpha_[i] += delta;
            alpha_[j] += delta;
            if (diff > 0) {
                if (alpha_[j] < 0) { alpha_[j] = 0; alpha_[i] = diff; }
            } else {
                if (alpha_[i] < 0) { alpha_[i] = 0; alpha_[j] = -diff; }
            }
            if (diff > 0) {
                if (alpha_[i] > c_) { alpha_[i] = c_; alpha_[j] = c_ - diff; }
            } else {
                if (alpha_[j] > c_) { alpha_[j] = c_; alpha_[i] = c_ + diff; }
            }
        } else {
            double quad = diag_[i] + diag_[j] - 2.0 * kij;
            if (quad <= 0) quad = tau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = alpha_[i] + alpha_[j];
            alpha_[i] -= delta;
            alpha_[j] += delta;
            if (sum > c_) {
                if (alpha_[i] > c_) { alpha_[i] = c_; alpha_[j] = sum - c_; }
            } else {
                if (alpha_[j] < 0) { alpha_[j] = 0; alpha_[i] = sum; }
            }
            if (sum > c_) {
                if (alpha_[j] > c_) { alpha_[j] = c_; alpha_[i] = sum - c_; }
            } else {
                if (alpha_[i] < 0) { alpha_[i] = 0; alpha_[j] = sum; }
            }
        }
        const double di = alpha_[i] - old_ai, dj = alpha_[j] - old_aj;
        for (std::size_t t = 0; t < n_; ++t)
            grad_[t] += y_[t] * (y_[i] * qi[t] * di + y_[j] * qj[t] * dj);
    }

    const std::vector<std::vector<double>>& x_;
    std::vector<int> y_;
    double gamma_, c_;
    std::size_t n_;
    std::vector<std::vector<float>> rows_;
    std::vector<double> diag_;
    std::vector<double> alpha_, grad_;
    long iter_ = 0;
    double gap_ = 0.0;
};

std::vector<double> standardize(const MsvmModel& m, const FeatureVector& v) {
    const auto x = v.values();
    std::vector<double> z(m.features.size());
    for (std::size_t k = 0; k < z.size(); ++k) z[k] = (x[m.features[k]] - m.mean[k]) / m.scale[k];
    return z;
}

}  // namespace

MsvmModel train_msvm(const Dataset& d, const MsvmParams& p) {
    if (d.empty()) throw InvalidArgument("train_msvm: empty dataset");
    if (!(p.box > 0.0)) throw InvalidArgument("train_msvm: box constraint must be positive");
    if (!(p.tol > 0.0)) throw InvalidArgument("train_msvm: tolerance must be positive");
    MsvmModel m;
    if (p.features.empty()) {
        m.features.resize(FeatureVector::kSize);
        std::iota(m.features.begin(), m.features.end(), 0);
    } else {
        m.features = p.features;
        for (int f : m.features)
            if (f < 0 || f >= static_cast<int>(FeatureVector::kSize))
                throw InvalidArgument("train_msvm: feature index out of range");
    }
    const std::size_t dim = m.features.size();
    m.gamma = p.gamma > 0.0 ? p.gamma : 1.0 / static_cast<double>(dim);
    m.box = p.box;

    // Per-feature affine scaling to zero mean, unit (population) deviation.
    const double n = static_cast<double>(d.size());
    m.mean.assign(dim, 0.0);
    m.scale.assign(dim, 0.0);
    for (const auto& r : d.records) {
        const auto x = r.f.values();
        for (std::size_t k = 0; k < dim; ++k) m.mean[k] += x[m.features[k]] / n;
    }
    for (const auto& r : d.records) {
        const auto x = r.f.values();
        for (std::size_t k = 0; k < dim; ++k) {
            const double dv = x[m.features[k]] - m.mean[k];
            m.scale[k] += dv * dv / n;
        }
    }
    for (auto& s : m.scale) s = s > 0.0 ? std::sqrt(s) : 1.0;

    std::vector<std::vector<double>> z;
    z.reserve(d.size());
    for (const auto& r : d.records) z.push_back(standardize(m, r.f));

    const auto counts = d.counts();
    for (Tech t : kAllTechs)
        if (counts[static_cast<int>(t)] > 0) m.classes.push_back(t);
    if (m.classes.size() < 2) throw InvalidArgument("train_msvm: need at least two classes");

    const std::size_t k = m.classes.size();
    m.coding.assign(k, {});
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) {
            for (std::size_t c = 0; c < k; ++c) m.coding[c].push_back(c == a ? 1 : (c == b ? -1 : 0));
            std::vector<std::vector<double>> xs;
            std::vector<int> ys;
            for (std::size_t i = 0; i < d.size(); ++i) {
                const Tech t = d.records[i].label.tech();
                if (t == m.classes[a] || t == m.classes[b]) {
                    xs.push_back(z[i]);
                    ys.push_back(t == m.classes[a] ? 1 : -1);
                }
            }
            Smo smo(xs, ys, m.gamma, m.box);
            smo.solve(p.tol, p.max_iter);
            BinarySvm svm;
            svm.positive = m.classes[a];
            svm.negative = m.classes[b];
            svm.bias = smo.bias();
            svm.iterations = smo.iterations();
            for (std::size_t i = 0; i < xs.size(); ++i)
                if (smo.alpha()[i] > 0.0) {
                    svm.support.push_back(xs[i]);
                    svm.alpha.push_back(smo.alpha()[i]);
                    svm.coef.push_back(smo.alpha()[i] * ys[i]);
                }
            m.learners.push_back(std::move(svm));
        }
    return m;
}

double decision_value(const MsvmModel& m, const BinarySvm& svm, const std::vector<double>& z) {
    double s = svm.bias;
    for (std::size_t i = 0; i < svm.support.size(); ++i)
        s += svm.coef[i] * std::exp(-m.gamma * sq_dist(svm.support[i], z));
    return s;
}

Tech classify(const MsvmModel& m, const FeatureVector& v) {
    const auto z = standardize(m, v);
    std::vector<double> s(m.learners.size());
    for (std::size_t l = 0; l < s.size(); ++l) s[l] = decision_value(m, m.learners[l], z);
    // Loss-weighted decoding with the hinge loss max(0, 1 - y s) / 2.
    std::size_t best = 0;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < m.classes.size(); ++c) {
        double loss = 0.0, weight = 0.0;
        for (std::size_t l = 0; l < s.size(); ++l) {
            const int code = m.coding[c][l];
            if (code == 0) continue;
            loss += std::max(0.0, 1.0 - code * s[l]) / 2.0;
            weight += 1.0;
        }
        loss /= weight;
        if (loss < best_loss) {
            best_loss = loss;
            best = c;
        }
    }
    return m.classes[best];
}

}  // namespace burstid
