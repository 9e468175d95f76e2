// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "burstid/classifiers.hpp"
#include "burstid/sensing.hpp"
#include "burstid/traffic.hpp"
#include "burstid_cli/scenario.hpp"

namespace burstid::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitConvergence = 3;

// Entry point shared by the executable and the tests; argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// Features used by the SF-only classifier mode: F_Su, F_Sd, F_Sc.
inline const std::vector<int> kSfFeatures{0, 1, 2};

struct MiaRow {
    Method method;
    double gamma_t;
    double a0;     // SF-only mean TPR without INR thresholding
    double e_bar;  // 1 - E_j, weighted over the 802.11 variants in the test set
    double a_hat;  // upper bound
    double a_exp;  // SF-only mean TPR at gamma_t
};

struct MiaResult {
    int j = 2;
    std::vector<MiaRow> rows;
    // Mean of a_hat - a_exp over the gamma_T list.
    double gap(Method m) const;
};

// Trains SF-only classifiers on the W+B part of `train` and compares their
// accuracy on the W+B part of `test` with the model bound.
MiaResult mia_experiment(const Dataset& train, const Dataset& test, const std::vector<Method>& methods,
                         const SfSection& sf, const ScenarioConfig& cfg, std::uint64_t seed);

struct ScenarioRun {
    std::vector<BurstEvent> events;
    SensedTrace sensed;
};

ScenarioRun run_scenario(const ScenarioConfig& cfg, std::uint64_t seed);
// Complete bursts with their ground-truth labels.
Dataset scenario_features(const ScenarioRun& run);

}  // namespace burstid::cli
