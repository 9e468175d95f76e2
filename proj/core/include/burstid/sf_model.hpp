// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "burstid/config.hpp"
#include "burstid/label.hpp"
#include "burstid/spectrum.hpp"

namespace burstid {

// Spectral-feature variation v(i) = Y(i) - Y(i + j) over interference offsets
// i * df_step, keeping offsets whose center reading clears P_T + gamma_T.
// Y(i) is the averaged reading of a burst whose on-center power sits
// inr_db above the detection threshold, plus the mean noise power.
struct VariationStats {
    int j = 0;
    double inr_db = 0.0;
    double gamma_t = 0.0;
    std::vector<double> v;
    double mean = 0.0;
    double var = 0.0;  // population variance

    bool empty() const noexcept { return v.empty(); }
};

struct SfModelOptions {
    NoiseModel noise{};
    double df_step_mhz = 1.0;
    int i_min = -40;
    int i_max = 40;
};

// Coupling gains of one transmit spectrum through one front end, cached over
// the integer offsets needed by a j-range.
class SfModel {
public:
    SfModel(const Spectrum& x, const Spectrum& h, int j_max, const SfModelOptions& opt = {});
    VariationStats variation(int j, double inr_db, double gamma_t) const;

private:
    double reading_mw(int i, double inr_db) const;

    SfModelOptions opt_;
    int lo_, hi_;
    std::vector<double> gain_;  // linear, relative to offset 0
};

VariationStats sf_variation(const Spectrum& x, const Spectrum& h, int j, double inr_db, double gamma_t,
                            const SfModelOptions& opt = {});

// Area under min(pdf_A, pdf_B) of two Gaussians.
double gaussian_overlap(double mu_a, double sigma_a, double mu_b, double sigma_b);

inline constexpr double kSigmaFloorDb = 1e-6;

struct SfErrorGrid {
    int j = 0;
    double gamma_t = 0.0;
    std::vector<double> grid_a, grid_b;  // INR points kept after gamma_T restriction
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> overlap;  // S_j per (m, n)
    double error = 0.0;                        // E_j
};

// E_j = 1/(K_A K_B) sum w_mn S_j(gamma_m, gamma_n) over grid points >= gamma_T.
// Pairs where either side has no retained offsets count as S = 1.
SfErrorGrid sf_error(const SfModel& a, const SfModel& b, int j, const std::vector<double>& grid_a,
                     const std::vector<double>& grid_b, double gamma_t,
                     const std::vector<std::vector<double>>* weights = nullptr);
SfErrorGrid sf_error(const Spectrum& x_a, const Spectrum& x_b, const Spectrum& h, int j,
                     const std::vector<double>& grid_a, const std::vector<double>& grid_b,
                     double gamma_t, const SfModelOptions& opt = {});

// Default INR grid: 1..30 dB in 1 dB steps.
std::vector<double> default_inr_grid();

// A0 + (1 - A0) * e_bar, with e_bar = 1 - E_j the mean probability of telling the pair apart.
double mia_upper_bound(double a0, double e_bar);

struct ShiftRow {
    std::string pair;
    double gamma_t;
    int j;
    double error;
};

struct ShiftFlag {
    std::string pair;
    double gamma_t;
    int j;  // smallest j within tolerance of the minimum over the j-range
};

struct ShiftReport {
    std::vector<ShiftRow> rows;
    std::vector<ShiftFlag> flags;
    std::optional<int> flagged(const std::string& pair, double gamma_t) const;
    double error(const std::string& pair, double gamma_t, int j) const;
};

inline constexpr double kShiftTolerance = 0.02;

ShiftReport shift_selection_report(const std::vector<std::pair<Label, Label>>& pairs, const Spectrum& h,
                                   int j_min, int j_max, const std::vector<double>& gamma_ts,
                                   const SfModelOptions& opt = {},
                                   const std::vector<double>& inr_grid = default_inr_grid(),
                                   const MaskTable& masks = MaskTable::standard());

}  // namespace burstid
