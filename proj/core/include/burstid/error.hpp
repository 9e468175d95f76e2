// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 burstid contributors

#pragma once

#include <stdexcept>
#include <string>

namespace burstid {

// Precondition violated by a caller-supplied value.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed or unsupported file content (data tables, datasets, models).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative solver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, long iterations, double kkt_gap)
        : std::runtime_error(what), iterations_(iterations), kkt_gap_(kkt_gap) {}
    long iterations() const noexcept { return iterations_; }
    double kkt_gap() const noexcept { return kkt_gap_; }

private:
    long iterations_;
    double kkt_gap_;
};

}  // namespace burstid
