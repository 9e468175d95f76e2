// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "burstid/classifiers.hpp"
#include "burstid/dataset.hpp"
#include "burstid/error.hpp"

namespace burstid {

long EvalReport::row_total(int row) const {
    long s = 0;
    for (long v : confusion[row]) s += v;
    return s;
}

long EvalReport::evaluated() const {
    long s = 0;
    for (int r = 0; r < kLabelRows; ++r) s += row_total(r);
    return s;
}

EvalReport evaluate(const Model& m, const Dataset& d, double gamma_t) {
    EvalReport rep;
    rep.gamma_t = gamma_t;
    std::array<long, kTechCount> total{}, correct{};
    std::array<std::map<int, std::pair<long, long>>, kTechCount> per_channel;  // channel -> (hits, n)
    const bool channels = d.has_channels();
    for (const auto& r : d.records) {
        if (r.inr_db < gamma_t) continue;
        const Tech pred = classify(m, r.f);
        const int l = static_cast<int>(r.label.tech());
        ++rep.confusion[r.label.row()][static_cast<int>(pred)];
        ++total[l];
        const bool hit = pred == r.label.tech();
        correct[l] += hit;
        if (channels) {
            auto& c = per_channel[l][r.channel];
            c.first += hit;
            ++c.second;
        }
    }
    int present = 0;
    double sum = 0.0;
    for (int l = 0; l < kTechCount; ++l) {
        if (total[l] == 0) continue;
        rep.tpr[l] = static_cast<double>(correct[l]) / static_cast<double>(total[l]);
        sum += *rep.tpr[l];
        ++present;
        if (channels && per_channel[l].size() >= 2) {
            double mean = 0.0, sq = 0.0;
            const double k = static_cast<double>(per_channel[l].size());
            for (const auto& [ch, hn] : per_channel[l]) mean += static_cast<double>(hn.first) / hn.second / k;
            for (const auto& [ch, hn] : per_channel[l]) {
                const double a = static_cast<double>(hn.first) / hn.second - mean;
                sq += a * a / k;
            }
            rep.sigma_a[l] = std::sqrt(sq);
        }
    }
    rep.empty = present == 0;
    rep.mean_tpr = present ? sum / present : 0.0;
    return rep;
}

std::string report_table(const EvalReport& r, std::string_view title) {
    std::ostringstream os;
    os << title << "  (gamma_T = " << r.gamma_t << " dB)\n";
    if (r.empty) {
        os << "  <empty: no bursts at or above the INR threshold>\n";
        return os.str();
    }
    os << "  true\\pred        B       L       Z       W       n\n";
    os << std::fixed << std::setprecision(1);
    for (int row = 0; row < kLabelRows; ++row) {
        const long n = r.row_total(row);
        if (n == 0) continue;
        os << "  " << std::left << std::setw(8) << label_from_row(row).str() << std::right;
        for (long v : r.confusion[row]) os << std::setw(8) << 100.0 * static_cast<double>(v) / n;
        os << std::setw(8) << n << '\n';
    }
    os << "  TPR:";
    for (int l = 0; l < kTechCount; ++l)
        if (r.tpr[l]) os << "  " << tech_code(static_cast<Tech>(l)) << '=' << 100.0 * *r.tpr[l];
    os << "  mean=" << 100.0 * r.mean_tpr << '\n';
    bool any = false;
    for (int l = 0; l < kTechCount; ++l)
        if (r.sigma_a[l]) {
            if (!any) os << "  sigma_A:";
            any = true;
            os << "  " << tech_code(static_cast<Tech>(l)) << '=' << 100.0 * *r.sigma_a[l];
        }
    if (any) os << '\n';
    return os.str();
}

void write_eval_csv(std::ostream& os, std::span<const EvalReport> reports, std::string_view method) {
    os << "# format: burstid-eval 1.0\n";
    os << "method,gamma_t,label,tpr,sigma_a,n\n";
    for (const auto& r : reports) {
        const std::string head = std::string(method) + ',' + format_double(r.gamma_t) + ',';
        for (int l = 0; l < kTechCount; ++l) {
            long n = 0;
            for (int row = 0; row < kLabelRows; ++row)
                if (label_from_row(row).tech() == static_cast<Tech>(l)) n += r.row_total(row);
            os << head << tech_code(static_cast<Tech>(l)) << ',' << (r.tpr[l] ? format_double(*r.tpr[l]) : "")
               << ',' << (r.sigma_a[l] ? format_double(*r.sigma_a[l]) : "") << ',' << n << '\n';
        }
        os << head << "mean," << (r.empty ? "" : format_double(r.mean_tpr)) << ",," << r.evaluated() << '\n';
    }
}

void write_confusion_csv(std::ostream& os, std::span<const EvalReport> reports, std::string_view method) {
    os << "# format: burstid-confusion 1.0\n";
    os << "method,gamma_t,row,pred_B,pred_L,pred_Z,pred_W,n\n";
    for (const auto& r : reports)
        for (int row = 0; row < kLabelRows; ++row) {
            os << method << ',' << format_double(r.gamma_t) << ',' << label_from_row(row).str();
            for (long v : r.confusion[row]) os << ',' << v;
            os << ',' << r.row_total(row) << '\n';
        }
}

Dataset subset(const Dataset& d, std::span<const Tech> labels) {
    Dataset out;
    for (const auto& r : d.records)
        for (Tech t : labels)
            if (r.label.tech() == t) {
                out.records.push_back(r);
                break;
            }
    return out;
}

}  // namespace burstid
