// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>

namespace oracle {

inline double normal_pdf(double x, double mu, double s) {
    const double z = (x - mu) / s;
    return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
}

// Integral of min(pdf_A, pdf_B) by adaptive Gauss-Kronrod over pieces of a wide support.
inline double overlap(double ma, double sa, double mb, double sb, int pieces = 400) {
    const double lo = std::min(ma - 12.0 * sa, mb - 12.0 * sb);
    const double hi = std::max(ma + 12.0 * sa, mb + 12.0 * sb);
    const auto f = [&](double x) { return std::min(normal_pdf(x, ma, sa), normal_pdf(x, mb, sb)); };
    double acc = 0.0;
    for (int k = 0; k < pieces; ++k) {
        const double a = lo + (hi - lo) * k / pieces;
        const double b = lo + (hi - lo) * (k + 1) / pieces;
        acc += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13);
    }
    return acc;
}

}  // namespace oracle
