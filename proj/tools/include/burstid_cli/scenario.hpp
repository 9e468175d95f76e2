// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "burstid/benchmark_data.hpp"
#include "burstid/channel_map.hpp"
#include "burstid/classifiers.hpp"
#include "burstid/config.hpp"
#include "burstid/error.hpp"
#include "burstid/rssi.hpp"
#include "burstid/sensing.hpp"
#include "burstid/sf_model.hpp"
#include "burstid/spectrum.hpp"
#include "burstid/traffic_gen.hpp"

namespace burstid::cli {

// Config problem with a "file:line:col: " prefix when the location is known.
class ConfigError : public FormatError {
public:
    using FormatError::FormatError;
};

struct TrafficSection {
    std::vector<Tech> it_labels{Tech::W, Tech::Z};  // IT-CDFs (FFH labels get OAT-CDFs only)
    std::vector<Tech> oat_labels{Tech::B, Tech::L, Tech::Z, Tech::W};
    double min_rssi_dbm = -100.0;
    double min_oat_us = 0.0;
    std::vector<double> rssi_grid{-96, -90, -85, -80, -75, -70};
    std::vector<double> oat_grid{0, 100, 200, 300, 400, 500, 600, 800, 1000};
};

struct MiaSection {
    std::filesystem::path train;  // feature CSVs, resolved against the config directory
    std::filesystem::path test;
    std::vector<Method> methods{Method::ct1, Method::ct2, Method::rfct, Method::msvm};
};

struct SfSection {
    std::vector<std::pair<Label, Label>> pairs;
    int j_min = 1;
    int j_max = 5;
    std::vector<double> gamma_t{0, 10, 20};
    std::vector<double> inr_grid = default_inr_grid();
    int i_min = -40;
    int i_max = 40;
    double df_step_mhz = 1.0;
    std::optional<MiaSection> mia;
};

struct ScenarioConfig {
    std::filesystem::path source;
    std::uint64_t seed = 1;
    double duration_ms = 0.0;
    NoiseModel noise{};
    SensingConfig sensing{};
    double bandwidth_scale = kIdiBandwidthScale;
    FrontendParams frontend = FrontendParams::idi_mode();
    CcaParams cca{};
    std::vector<SourceSpec> sources;
    std::optional<BenchmarkSpec> benchmark;
    std::optional<TrafficSection> traffic;
    std::optional<SfSection> sf;
    std::optional<std::filesystem::path> masks_file;
    std::optional<std::filesystem::path> channels_file;

    ChannelMap channel_map() const;
    MaskTable mask_table() const;
    SignalEnvironment environment() const;
};

// Parses and validates a YAML scenario (format "burstid-scenario 1.x").
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(const std::string& text, const std::filesystem::path& source = "<string>");

}  // namespace burstid::cli
