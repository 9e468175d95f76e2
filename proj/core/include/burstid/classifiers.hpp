// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "burstid/dataset.hpp"
#include "burstid/label.hpp"
#include "burstid/sensing.hpp"

namespace burstid {

// ---------------------------------------------------------------- g_m

// Mean over the labels present in `truth` of the per-label error rate.
double misclassification(std::span<const Tech> truth, std::span<const Tech> predicted);
// Same, over an explicit label set; an empty partition for any listed label is rejected.
double misclassification(std::span<const Tech> truth, std::span<const Tech> predicted,
                         std::span<const Tech> labels);

// ---------------------------------------------------------------- CT1

struct Ct1Params {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    friend bool operator==(const Ct1Params&, const Ct1Params&) = default;
};

// Hand-built multivariate tree:
//   F_CCA busy                                                  -> Z
//   min(F_Su, F_Sd) > p1  or  (|F_Su - F_Sd| > p3 and min > p2) -> narrowband, else W
//   narrowband: F_Tl <= tl_max and F_Ec <= ec_max               -> L, else B
struct Ct1Model {
    Ct1Params p;
    bool use_cca = true;  // false when no 802.15.4 bursts were seen in training
    bool has_l = true;    // false when no BLE bursts were seen in training
    double tl_max = 12.0;
    double ec_max = 2.0;
    double dynamic_range_db = 100.0;
};

struct Ct1Grid {
    std::vector<double> p1, p2, p3;
    // Step-spaced grid over the feasible box |p1|,|p2| <= dr/2, 0 <= p3 <= dr.
    static Ct1Grid uniform(double step_db = 1.0, double dynamic_range_db = 100.0);
    void validate(double dynamic_range_db) const;
};

struct Ct1Fit {
    Ct1Model model;
    double gm = 0.0;
};

Tech classify(const Ct1Model& m, const FeatureVector& v);
// Narrowband B/L split thresholds fitted on B and L records alone.
void fit_ct1_envelope_split(const Dataset& d, Ct1Model& m);
// Exhaustive minimization of g_m over the grid with the envelope split held
// fixed; ties go to the lexicographically smallest (|p1|, |p2|, p3).
Ct1Fit train_ct1(const Dataset& d, const Ct1Grid& grid = Ct1Grid::uniform());

// ---------------------------------------------------------------- trees

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;  // go left when value <= threshold
    int left = -1;
    int right = -1;
    Tech label = Tech::B;
    std::array<std::uint32_t, kTechCount> counts{};
};

struct TreeModel {
    std::vector<TreeNode> nodes;
    std::vector<int> features;  // candidate feature indices used in training
    int splits() const;
};

struct TreeParams {
    int max_splits = 20;        // < 0: grow until pure
    int mtry = 0;               // features sampled per split, 0 = all candidates
    std::vector<int> features;  // allowed feature indices, empty = all eight
};

double gini(const std::array<std::uint32_t, kTechCount>& counts);

TreeModel train_ct2(const Dataset& d, int max_splits = 20, std::vector<int> features = {});
// Grows on the records listed in `rows` (repeats allowed). rng is used only when mtry > 0.
TreeModel grow_tree(const Dataset& d, std::span<const std::size_t> rows, const TreeParams& p,
                    std::uint64_t seed = 0);
Tech classify(const TreeModel& m, const FeatureVector& v);

struct ForestModel {
    std::vector<TreeModel> trees;
    std::array<double, kTechCount> prior{};  // training class frequencies, used to break vote ties
};

struct ForestParams {
    int n_trees = 50;
    int mtry = 3;
    bool bootstrap = true;
    std::uint64_t seed = 1;
    std::vector<int> features;
};

ForestModel train_rfct(const Dataset& d, const ForestParams& p = {});
Tech classify(const ForestModel& m, const FeatureVector& v,
              std::array<int, kTechCount>* votes = nullptr);

// ---------------------------------------------------------------- MSVM

struct BinarySvm {
    Tech positive = Tech::B;
    Tech negative = Tech::B;
    std::vector<std::vector<double>> support;  // standardized support vectors
    std::vector<double> coef;                  // alpha_i * y_i
    std::vector<double> alpha;                 // alpha_i, for constraint checks
    double bias = 0.0;
    long iterations = 0;
};

struct MsvmModel {
    std::vector<int> features;
    std::vector<double> mean, scale;
    double gamma = 0.0;  // kernel exp(-gamma * |x - z|^2)
    double box = 10.0;
    std::vector<Tech> classes;  // classes seen in training, ascending
    std::vector<BinarySvm> learners;  // one per class pair
    // coding[k][l] in {-1, 0, +1}: class k against learner l
    std::vector<std::vector<int>> coding;
};

struct MsvmParams {
    double gamma = 0.0;  // 0: 1 / (number of features)
    double box = 10.0;
    double tol = 1e-3;
    long max_iter = 10'000'000;
    std::vector<int> features;
};

// Throws ConvergenceError when a binary learner hits max_iter.
MsvmModel train_msvm(const Dataset& d, const MsvmParams& p = {});
double decision_value(const MsvmModel& m, const BinarySvm& svm, const std::vector<double>& z);
Tech classify(const MsvmModel& m, const FeatureVector& v);

// ---------------------------------------------------------------- common contract

enum class Method { ct1, ct2, rfct, msvm };
std::string_view method_name(Method m);
Method parse_method(std::string_view s);

using Model = std::variant<Ct1Model, TreeModel, ForestModel, MsvmModel>;

Tech classify(const Model& m, const FeatureVector& v);
Method method_of(const Model& m);

struct TrainOptions {
    std::uint64_t seed = 1;
    std::vector<int> features;  // empty = all eight
    Ct1Grid ct1_grid = Ct1Grid::uniform();
    int ct2_max_splits = 20;
    ForestParams forest{};
    MsvmParams msvm{};
};
Model train(Method method, const Dataset& d, const TrainOptions& opt = {});

// Versioned JSON text ({"format": "burstid-model", "version": "1.0", "kind": ...}).
std::string save_model(const Model& m);
Model load_model(std::string_view text);

// ---------------------------------------------------------------- evaluation

struct EvalReport {
    bool empty = true;
    double gamma_t = 0.0;
    // rows: B, L, Z, W-b, W-g, W-n20, W-n40; columns: predicted B, L, Z, W
    std::array<std::array<long, kTechCount>, kLabelRows> confusion{};
    std::array<std::optional<double>, kTechCount> tpr{};
    double mean_tpr = 0.0;  // over labels with at least one evaluated burst
    std::array<std::optional<double>, kTechCount> sigma_a{};  // std of per-channel accuracy

    long evaluated() const;
    long row_total(int row) const;
};

EvalReport evaluate(const Model& m, const Dataset& d, double gamma_t);
std::string report_table(const EvalReport& r, std::string_view title);
// One row per (gamma_T, label) plus a "mean" row; empty cells where a label had no bursts.
void write_eval_csv(std::ostream& os, std::span<const EvalReport> reports, std::string_view method);
// Confusion counts per (gamma_T, true row).
void write_confusion_csv(std::ostream& os, std::span<const EvalReport> reports, std::string_view method);

// Restrict to records of the given labels.
Dataset subset(const Dataset& d, std::span<const Tech> labels);

}  // namespace burstid
