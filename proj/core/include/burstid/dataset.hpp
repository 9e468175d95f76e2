// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "burstid/label.hpp"
#include "burstid/sensing.hpp"

namespace burstid {

struct Record {
    FeatureVector f;
    Label label;
    double inr_db = 0.0;
    int channel = -1;  // interferer channel when known, -1 otherwise
};

struct Dataset {
    std::vector<Record> records;

    std::size_t size() const noexcept { return records.size(); }
    bool empty() const noexcept { return records.empty(); }
    std::array<std::size_t, kTechCount> counts() const;
    bool has_channels() const;
};

// Shortest round-trip decimal form.
std::string format_double(double v);

// CSV with a leading "# format: burstid-features 1.0" line and header
// f_su,f_sd,f_sc,f_tl,f_ep,f_ec,f_er,f_cca,label,inr_db[,channel].
void write_csv(std::ostream& os, const Dataset& d);
Dataset read_csv(std::istream& is);

}  // namespace burstid
