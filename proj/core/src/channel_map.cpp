// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/channel_map.hpp"

#include <sstream>
#include <string>

#include "burstid/error.hpp"
#include "embedded_data.hpp"

namespace burstid {

namespace {

constexpr std::string_view kHeader = "# burstid-channels 1.";

struct Bounds {
    int lo, hi;
};

Bounds bounds(Tech t) {
    switch (t) {
    case Tech::Z: return {11, 26};
    case Tech::B: return {0, 78};
    case Tech::L: return {0, 39};
    case Tech::W: return {1, 14};
    }
    return {0, -1};
}

}  // namespace

const ChannelMap& ChannelMap::standard() {
    static const ChannelMap map = from_tsv(embedded::channels_tsv);
    return map;
}

ChannelMap ChannelMap::from_tsv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind(kHeader, 0) != 0)
        throw FormatError("channel table: missing or unsupported '# burstid-channels 1.x' header");

    ChannelMap map;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string tech;
        int ch = 0;
        Entry e{};
        if (!(row >> tech >> ch >> e.center_mhz >> e.width_mhz))
            throw FormatError("channel table line " + std::to_string(lineno) + ": expected 4 columns");
        Tech t;
        try {
            t = parse_tech(tech);
        } catch (const InvalidArgument& ex) {
            throw FormatError("channel table line " + std::to_string(lineno) + ": " + ex.what());
        }
        const auto b = bounds(t);
        if (ch < b.lo || ch > b.hi)
            throw FormatError("channel table line " + std::to_string(lineno) + ": channel " +
                              std::to_string(ch) + " outside [" + std::to_string(b.lo) + ", " +
                              std::to_string(b.hi) + "] for " + tech);
        if (e.width_mhz <= 0)
            throw FormatError("channel table line " + std::to_string(lineno) + ": non-positive width");
        map.table_[static_cast<int>(t)][ch] = e;
    }
    for (Tech t : kAllTechs)
        if (map.table_[static_cast<int>(t)].empty())
            throw FormatError(std::string("channel table: no entries for ") + tech_code(t));
    return map;
}

bool ChannelMap::valid(Tech t, int channel) const {
    return table_[static_cast<int>(t)].count(channel) != 0;
}

const ChannelMap::Entry& ChannelMap::at(Tech t, int channel) const {
    const auto& m = table_[static_cast<int>(t)];
    auto it = m.find(channel);
    if (it == m.end())
        throw InvalidArgument(std::string("invalid channel ") + std::to_string(channel) + " for " +
                              tech_code(t));
    return it->second;
}

double ChannelMap::center_mhz(Tech t, int channel) const { return at(t, channel).center_mhz; }

double ChannelMap::width_mhz(const Label& l, int channel) const {
    const double w = at(l.tech(), channel).width_mhz;
    return l.variant() == WifiVariant::n40 ? 2.0 * w : w;
}

std::vector<int> ChannelMap::channels(Tech t) const {
    std::vector<int> out;
    for (const auto& [ch, e] : table_[static_cast<int>(t)]) out.push_back(ch);
    return out;
}

}  // namespace burstid
