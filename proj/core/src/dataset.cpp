// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include "burstid/dataset.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "burstid/error.hpp"

namespace burstid {

namespace {

constexpr std::string_view kFormatLine = "# format: burstid-features ";
constexpr int kMajor = 1;

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        out.push_back(cell);
    }
    return out;
}

double parse_num(const std::string& s, int line, const std::string& col) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
        throw FormatError("line " + std::to_string(line) + ", column '" + col + "': not a number: '" + s + "'");
    return v;
}

}  // namespace

std::array<std::size_t, kTechCount> Dataset::counts() const {
    std::array<std::size_t, kTechCount> c{};
    for (const auto& r : records) ++c[static_cast<int>(r.label.tech())];
    return c;
}

bool Dataset::has_channels() const {
    for (const auto& r : records)
        if (r.channel < 0) return false;
    return !records.empty();
}

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

void write_csv(std::ostream& os, const Dataset& d) {
    const bool ch = d.has_channels();
    os << kFormatLine << kMajor << ".0\n";
    for (auto n : FeatureVector::kNames) os << n << ',';
    os << "label,inr_db" << (ch ? ",channel" : "") << '\n';
    for (const auto& r : d.records) {
        for (double v : r.f.values()) os << format_double(v) << ',';
        os << r.label.str() << ',' << format_double(r.inr_db);
        if (ch) os << ',' << r.channel;
        os << '\n';
    }
}

Dataset read_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind(kFormatLine, 0) != 0)
        throw FormatError("line 1: expected '# format: burstid-features <major>.<minor>'");
    {
        const std::string ver = line.substr(kFormatLine.size());
        int major = -1;
        std::from_chars(ver.data(), ver.data() + ver.size(), major);
        if (major != kMajor)
            throw FormatError("line 1: unsupported dataset format version '" + ver + "'");
    }
    if (!std::getline(is, line)) throw FormatError("line 2: missing header");
    const auto header = split(line);
    std::vector<std::string> expected(FeatureVector::kNames.begin(), FeatureVector::kNames.end());
    expected.push_back("label");
    expected.push_back("inr_db");
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (i >= header.size())
            throw FormatError("line 2: missing column '" + expected[i] + "'");
        if (header[i] != expected[i])
            throw FormatError("line 2: column " + std::to_string(i + 1) + " is '" + header[i] +
                              "', expected '" + expected[i] + "'");
    }
    const bool has_channel = header.size() > expected.size();
    if (has_channel && (header.size() != expected.size() + 1 || header.back() != "channel"))
        throw FormatError("line 2: unexpected column '" + header[expected.size()] + "'");

    Dataset d;
    int lineno = 2;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw FormatError("line " + std::to_string(lineno) + ": expected " +
                              std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
        Record r;
        std::array<double, FeatureVector::kSize> v{};
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = parse_num(cells[i], lineno, header[i]);
        r.f = FeatureVector::from_values(v);
        try {
            r.label = parse_label(cells[8]);
        } catch (const InvalidArgument& e) {
            throw FormatError("line " + std::to_string(lineno) + ", column 'label': " + e.what());
        }
        r.inr_db = parse_num(cells[9], lineno, "inr_db");
        if (has_channel) r.channel = static_cast<int>(parse_num(cells[10], lineno, "channel"));
        d.records.push_back(r);
    }
    return d;
}

}  // namespace burstid
