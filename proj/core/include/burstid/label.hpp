// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace burstid {

// Source technology: 802.15.1, BLE, 802.15.4, 802.11.
enum class Tech : std::uint8_t { B = 0, L = 1, Z = 2, W = 3 };

inline constexpr int kTechCount = 4;
inline constexpr std::array<Tech, kTechCount> kAllTechs{Tech::B, Tech::L, Tech::Z, Tech::W};

enum class WifiVariant : std::uint8_t { none = 0, b, g, n20, n40 };

// A burst label. The 802.11 variant tag is present iff tech == W.
class Label {
public:
    constexpr Label() = default;
    explicit Label(Tech t);
    Label(Tech t, WifiVariant v);

    Tech tech() const noexcept { return tech_; }
    WifiVariant variant() const noexcept { return variant_; }

    // "B", "L", "Z", "W-b", "W-g", "W-n20", "W-n40"
    std::string str() const;
    // Index into the seven evaluation rows (B, L, Z, W-b, W-g, W-n20, W-n40).
    int row() const noexcept;

    friend bool operator==(const Label&, const Label&) = default;

private:
    Tech tech_ = Tech::B;
    WifiVariant variant_ = WifiVariant::none;
};

inline constexpr int kLabelRows = 7;

Label parse_label(std::string_view s);
Label label_from_row(int row);
char tech_code(Tech t) noexcept;
Tech parse_tech(std::string_view s);

}  // namespace burstid
