// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <array>
#include <map>
#include <string_view>
#include <vector>

#include "burstid/label.hpp"

namespace burstid {

// Channel numbering and centers per technology, loaded from a versioned
// table (see core/data/channels.tsv). 802.11 n40 uses twice the 20 MHz width
// around the listed channel center.
class ChannelMap {
public:
    struct Entry {
        double center_mhz;
        double width_mhz;
    };

    static const ChannelMap& standard();
    static ChannelMap from_tsv(std::string_view text);

    bool valid(Tech t, int channel) const;
    bool valid(const Label& l, int channel) const { return valid(l.tech(), channel); }
    double center_mhz(Tech t, int channel) const;
    double width_mhz(const Label& l, int channel) const;
    std::vector<int> channels(Tech t) const;

    static bool is_advertising(int ble_channel) { return ble_channel >= 37 && ble_channel <= 39; }

private:
    const Entry& at(Tech t, int channel) const;
    std::array<std::map<int, Entry>, kTechCount> table_;
};

}  // namespace burstid
