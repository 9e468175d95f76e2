// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/label.hpp"

#include "burstid/error.hpp"

namespace burstid {

Label::Label(Tech t) : Label(t, WifiVariant::none) {}

Label::Label(Tech t, WifiVariant v) : tech_(t), variant_(v) {
    if ((t == Tech::W) != (v != WifiVariant::none))
        throw InvalidArgument("802.11 variant tag must be set for W and only for W");
}

std::string Label::str() const {
    switch (variant_) {
    case WifiVariant::b: return "W-b";
    case WifiVariant::g: return "W-g";
    case WifiVariant::n20: return "W-n20";
    case WifiVariant::n40: return "W-n40";
    case WifiVariant::none: break;
    }
    return std::string(1, tech_code(tech_));
}

int Label::row() const noexcept {
    if (tech_ != Tech::W) return static_cast<int>(tech_);
    return 2 + static_cast<int>(variant_);
}

Label label_from_row(int row) {
    switch (row) {
    case 0: return Label(Tech::B);
    case 1: return Label(Tech::L);
    case 2: return Label(Tech::Z);
    case 3: return Label(Tech::W, WifiVariant::b);
    case 4: return Label(Tech::W, WifiVariant::g);
    case 5: return Label(Tech::W, WifiVariant::n20);
    case 6: return Label(Tech::W, WifiVariant::n40);
    default: throw InvalidArgument("label row out of range: " + std::to_string(row));
    }
}

char tech_code(Tech t) noexcept {
    constexpr char codes[] = {'B', 'L', 'Z', 'W'};
    return codes[static_cast<int>(t)];
}

Tech parse_tech(std::string_view s) {
    if (s == "B") return Tech::B;
    if (s == "L") return Tech::L;
    if (s == "Z") return Tech::Z;
    if (s == "W") return Tech::W;
    throw InvalidArgument("unknown technology '" + std::string(s) + "'");
}

Label parse_label(std::string_view s) {
    if (s == "W-b") return Label(Tech::W, WifiVariant::b);
    if (s == "W-g") return Label(Tech::W, WifiVariant::g);
    if (s == "W-n20") return Label(Tech::W, WifiVariant::n20);
    if (s == "W-n40") return Label(Tech::W, WifiVariant::n40);
    if (s == "W") throw InvalidArgument("802.11 label needs a variant (W-b, W-g, W-n20, W-n40)");
    return Label(parse_tech(s));
}

}  // namespace burstid
