// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "burstid/benchmark_data.hpp"
#include "burstid/classifiers.hpp"
#include "burstid/error.hpp"
#include "oracles.hpp"

using namespace burstid;

namespace {

Record rec(Tech t, std::array<double, 8> v, double inr = 20.0, int ch = -1) {
    Record r;
    r.f = FeatureVector::from_values(v);
    r.label = t == Tech::W ? Label(t, WifiVariant::g) : Label(t);
    r.inr_db = inr;
    r.channel = ch;
    return r;
}

// Four well separated clusters shaped like the real feature space.
Dataset toy(std::uint64_t seed, int per_class = 40) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 0.7);
    Dataset d;
    for (int i = 0; i < per_class; ++i) {
        const double inr = 1.0 + i % 30;
        d.records.push_back(rec(Tech::B, {12 + n(rng), 11 + n(rng), 18, 40 + n(rng), -70, 6 + n(rng), 1, 0}, inr, i % 5));
        d.records.push_back(rec(Tech::L, {13 + n(rng), 12 + n(rng), 18, 9 + n(rng), -72, 1, 0, 0}, inr, i % 5));
        d.records.push_back(rec(Tech::Z, {8 + n(rng), 8 + n(rng), 18, 50 + n(rng), -65, 3, 0, 1}, inr, i % 5));
        d.records.push_back(rec(Tech::W, {0.5 + n(rng), 0.3 + n(rng), 18, 30 + n(rng), -60, 8, 2, 0}, inr, i % 5));
    }
    return d;
}

std::vector<Tech> truth_of(const Dataset& d) {
    std::vector<Tech> t;
    for (const auto& r : d.records) t.push_back(r.label.tech());
    return t;
}

template <class M>
std::vector<Tech> predict(const M& m, const Dataset& d) {
    std::vector<Tech> p;
    for (const auto& r : d.records) p.push_back(classify(m, r.f));
    return p;
}

}  // namespace

TEST_CASE("misclassification function") {
    const std::vector<Tech> t{Tech::B, Tech::B, Tech::L, Tech::L, Tech::W, Tech::W};
    CHECK(misclassification(t, t) == 0.0);
    const std::vector<Tech> wrong{Tech::W, Tech::W, Tech::B, Tech::B, Tech::L, Tech::L};
    CHECK(misclassification(t, wrong) == 1.0);
    const std::vector<Tech> half{Tech::B, Tech::W, Tech::L, Tech::B, Tech::W, Tech::L};
    CHECK(misclassification(t, half) == 0.5);

    // Permuting records leaves g_m unchanged.
    std::mt19937_64 rng(2);
    std::vector<Tech> truth, pred;
    std::uniform_int_distribution<int> u(0, 3);
    for (int i = 0; i < 300; ++i) {
        truth.push_back(static_cast<Tech>(u(rng)));
        pred.push_back(static_cast<Tech>(u(rng)));
    }
    const double g = misclassification(truth, pred);
    CHECK(g == doctest::Approx(oracle::gm(truth, pred)).epsilon(1e-12));
    std::vector<std::size_t> idx(truth.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    std::vector<Tech> t2, p2;
    for (auto i : idx) {
        t2.push_back(truth[i]);
        p2.push_back(pred[i]);
    }
    CHECK(misclassification(t2, p2) == doctest::Approx(g).epsilon(1e-15));

    const std::array<Tech, 2> labels{Tech::B, Tech::Z};
    CHECK_THROWS_AS(misclassification(t, t, labels), InvalidArgument);
    CHECK_THROWS_AS(misclassification({}, {}), InvalidArgument);
}

TEST_CASE("CT1 grid search equals exhaustive enumeration") {
    const Dataset d = toy(3, 25);
    Ct1Grid grid;
    for (int k = 0; k < 10; ++k) {
        grid.p1.push_back(-9.0 + 2.0 * k);
        grid.p2.push_back(-9.0 + 2.0 * k);
        grid.p3.push_back(1.5 * k);
    }
    const Ct1Fit fit = train_ct1(d, grid);

    const auto truth = truth_of(d);
    double best = std::numeric_limits<double>::infinity();
    std::tuple<double, double, double> best_key{}, best_p{};
    for (double p1 : grid.p1)
        for (double p2 : grid.p2)
            for (double p3 : grid.p3) {
                std::vector<Tech> pred;
                for (const auto& r : d.records) pred.push_back(oracle::ct1(fit.model, p1, p2, p3, r.f));
                const double g = oracle::gm(truth, pred);
                const auto key = std::make_tuple(std::abs(p1), std::abs(p2), p3);
                if (g < best - 1e-12 || (std::abs(g - best) <= 1e-12 && key < best_key)) {
                    best = g;
                    best_key = key;
                    best_p = {p1, p2, p3};
                }
            }
    CHECK(fit.gm == doctest::Approx(best).epsilon(1e-12));
    CHECK(fit.model.p.p1 == std::get<0>(best_p));
    CHECK(fit.model.p.p2 == std::get<1>(best_p));
    CHECK(fit.model.p.p3 == std::get<2>(best_p));
    CHECK(std::abs(fit.model.p.p1) <= 50.0);
    CHECK(std::abs(fit.model.p.p2) <= 50.0);
    CHECK(fit.model.p.p3 >= 0.0);
    CHECK(fit.model.p.p3 <= 100.0);
}

TEST_CASE("CT1 on separable data and its CCA gate") {
    const Dataset d = toy(4);
    const Ct1Fit fit = train_ct1(d);
    CHECK(fit.gm == 0.0);
    CHECK(misclassification(truth_of(d), predict(fit.model, d)) == 0.0);
    FeatureVector v;
    v.cca = 1.0;
    v.su = 0.0;
    CHECK(classify(fit.model, v) == Tech::Z);
    Ct1Grid bad = Ct1Grid::uniform();
    bad.p1.push_back(60.0);
    CHECK_THROWS_AS(train_ct1(d, bad), InvalidArgument);
}

TEST_CASE("CT2 Gini growth") {
    CHECK(gini({5, 5, 0, 0}) == doctest::Approx(0.5));
    CHECK(gini({7, 0, 0, 0}) == 0.0);

    Dataset line;
    for (int i = 0; i < 20; ++i) line.records.push_back(rec(i < 10 ? Tech::B : Tech::W, {double(i), 0, 0, 0, 0, 0, 0, 0}));
    const TreeModel t = train_ct2(line);
    CHECK(t.splits() == 1);
    CHECK(misclassification(truth_of(line), predict(t, line)) == 0.0);

    Dataset one;
    for (int i = 0; i < 5; ++i) one.records.push_back(rec(Tech::Z, {double(i), 0, 0, 0, 0, 0, 0, 0}));
    CHECK(train_ct2(one).splits() == 0);

    const Dataset d = toy(5);
    const TreeModel m = train_ct2(d, 2);
    CHECK(m.splits() <= 2);
    // Pure leaves return their own label for their training vectors.
    for (const auto& r : d.records) {
        int node = 0;
        while (m.nodes[node].feature >= 0)
            node = r.f.values()[m.nodes[node].feature] <= m.nodes[node].threshold ? m.nodes[node].left : m.nodes[node].right;
        const auto& c = m.nodes[node].counts;
        if (std::count_if(c.begin(), c.end(), [](auto x) { return x > 0; }) == 1)
            CHECK(classify(m, r.f) == m.nodes[node].label);
    }
    CHECK(train_ct2(d).nodes.size() == train_ct2(d).nodes.size());
}

TEST_CASE("RFCT forest") {
    const Dataset d = toy(6);
    ForestParams p;
    p.n_trees = 1;
    p.mtry = 0;
    p.bootstrap = false;
    const ForestModel f1 = train_rfct(d, p);
    std::vector<std::size_t> rows(d.size());
    std::iota(rows.begin(), rows.end(), 0);
    TreeParams tp;
    tp.max_splits = -1;
    const TreeModel full = grow_tree(d, rows, tp);
    for (const auto& r : d.records) CHECK(classify(f1, r.f) == classify(full, r.f));

    ForestParams q;
    q.n_trees = 15;
    const ForestModel f = train_rfct(d, q);
    for (const auto& r : d.records) {
        std::array<int, kTechCount> votes{};
        classify(f, r.f, &votes);
        CHECK(std::accumulate(votes.begin(), votes.end(), 0) == 15);
    }
    const ForestModel g = train_rfct(d, q);
    CHECK(save_model(Model(f)) == save_model(Model(g)));
}

TEST_CASE("MSVM one-vs-one learners") {
    const Dataset d = toy(7, 25);
    const MsvmModel m = train_msvm(d);
    CHECK(m.learners.size() == 6);
    CHECK(m.classes.size() == 4);
    for (const auto& l : m.learners) {
        double s = 0.0;
        for (std::size_t i = 0; i < l.alpha.size(); ++i) {
            CHECK(l.alpha[i] >= 0.0);
            CHECK(l.alpha[i] <= m.box + 1e-12);
            s += l.coef[i];
        }
        CHECK(std::abs(s) < 1e-6 * m.box * static_cast<double>(l.alpha.size()));
    }
    // Coding columns are distinct.
    for (std::size_t a = 0; a < m.learners.size(); ++a)
        for (std::size_t b = a + 1; b < m.learners.size(); ++b) {
            bool same = true;
            for (const auto& row : m.coding) same = same && row[a] == row[b];
            CHECK_FALSE(same);
        }
    CHECK(misclassification(truth_of(d), predict(m, d)) == 0.0);
}

TEST_CASE("MSVM separates an XOR pattern") {
    Dataset d;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n(0.0, 0.15);
    for (int i = 0; i < 20; ++i)
        for (int q = 0; q < 4; ++q) {
            const double x = (q & 1) ? 1.0 : -1.0;
            const double y = (q & 2) ? 1.0 : -1.0;
            d.records.push_back(rec(x * y > 0 ? Tech::B : Tech::W, {x + n(rng), y + n(rng), 0, 0, 0, 0, 0, 0}));
        }
    MsvmParams p;
    p.features = {0, 1};
    const MsvmModel m = train_msvm(d, p);
    CHECK(m.learners.size() == 1);
    CHECK(misclassification(truth_of(d), predict(m, d)) == 0.0);

    p.max_iter = 3;
    CHECK_THROWS_AS(train_msvm(d, p), ConvergenceError);
}

TEST_CASE("evaluation reports") {
    const Dataset d = toy(9);
    const Model m = train(Method::ct2, d);
    const EvalReport r = evaluate(m, d, 0.0);
    CHECK_FALSE(r.empty);
    for (int row = 0; row < kLabelRows; ++row) {
        const Tech t = label_from_row(row).tech();
        for (int c = 0; c < kTechCount; ++c)
            if (c != static_cast<int>(t)) CHECK(r.confusion[row][c] == 0);
    }
    CHECK(r.mean_tpr == 1.0);
    CHECK(r.sigma_a[0].has_value());
    CHECK(r.evaluated() == static_cast<long>(d.size()));

    const EvalReport hi = evaluate(m, d, 25.0);
    long n = 0;
    for (const auto& x : d.records) n += x.inr_db >= 25.0;
    CHECK(hi.evaluated() == n);
    CHECK(evaluate(m, d, 31.0).empty);

    std::ostringstream csv;
    std::vector<EvalReport> reps{r, hi};
    write_eval_csv(csv, reps, "ct2");
    CHECK(csv.str().rfind("# format: burstid-eval 1.0\n", 0) == 0);
    CHECK(report_table(r, "ct2").find("TPR") != std::string::npos);
}

TEST_CASE("model persistence round-trips for every method") {
    const Dataset d = toy(10, 20);
    for (Method meth : {Method::ct1, Method::ct2, Method::rfct, Method::msvm}) {
        TrainOptions o;
        o.forest.n_trees = 5;
        const Model m = train(meth, d, o);
        const std::string text = save_model(m);
        const Model back = load_model(text);
        CHECK(method_of(back) == meth);
        CHECK(save_model(back) == text);
        CHECK(save_model(train(meth, d, o)) == text);
        const auto a = evaluate(m, d, 0.0), b = evaluate(back, d, 0.0);
        CHECK(a.confusion == b.confusion);
        CHECK(a.mean_tpr == b.mean_tpr);
    }
    CHECK_THROWS_AS(load_model("{\"format\": \"burstid-model\", \"version\": \"2.0\"}"), FormatError);
    CHECK_THROWS_AS(load_model("not json"), FormatError);
    CHECK(parse_method("rfct") == Method::rfct);
    CHECK_THROWS_AS(parse_method("knn"), InvalidArgument);
}

TEST_CASE("benchmark-scale tree properties") {
    BenchmarkSpec spec;
    spec.records = 1500;
    const Dataset d = benchmark_dataset(spec, SensingConfig{}, SignalEnvironment(NoiseModel(-100.0, 2.0)), 31).data;
    CHECK(d.size() == 1500);
    for (std::size_t c : d.counts()) CHECK(c > 0);
    const TreeModel t = train_ct2(d);
    CHECK(t.splits() <= 20);
    const ForestModel f = train_rfct(d);
    const auto truth = truth_of(d);
    CHECK(misclassification(truth, predict(f, d)) <= misclassification(truth, predict(t, d)));
}
