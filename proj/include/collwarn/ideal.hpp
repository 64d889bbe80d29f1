#pragma once

#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "collwarn/core.hpp"

namespace collwarn {

/// Ground-truth warning rules: a warning must start lead_time before an
/// object first comes within enter_radius of the user and stay active until
/// the object has moved beyond exit_radius.
struct IdealRules {
    double lead_time = 3.0;     // s
    double enter_radius = 1.0;  // m
    double exit_radius = 2.0;   // m

    void validate() const {
        if (!(enter_radius > 0.0 && enter_radius < exit_radius)) {
            throw std::invalid_argument("require 0 < enter_radius < exit_radius");
        }
        if (lead_time < 0.0) throw std::invalid_argument("lead_time must be >= 0");
    }
};

/// Merged warning intervals [start, end] in seconds per ground-truth object,
/// clipped to the scenario time range.
std::map<std::int64_t, std::vector<std::pair<double, double>>> ideal_warning_intervals(
    const Scenario& scenario, const IdealRules& rules);

/// The ideal warning stream computed from the ground-truth channel: the
/// intervals above rasterised onto frame timestamps.
WarningStream ideal_warning(const Scenario& scenario, const IdealRules& rules);

}  // namespace collwarn
