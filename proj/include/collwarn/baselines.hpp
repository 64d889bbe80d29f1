#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "collwarn/core.hpp"

namespace collwarn {

/// Distance-only warning: an object warns when it is closer than the
/// threshold and inside the forward field of view.
struct DistanceParams {
    double distance_threshold = 1.5;  // m
    double fov_half_angle = 85.0;     // degrees off +y, i.e. 170 degrees total

    void validate() const {
        if (!(distance_threshold > 0.0)) {
            throw std::invalid_argument("distance_threshold must be > 0");
        }
        if (!(fov_half_angle > 0.0 && fov_half_angle <= 180.0)) {
            throw std::invalid_argument("fov_half_angle must be in (0, 180]");
        }
    }
};

/// Time-to-contact warning: warn when the closest point of approach under
/// linear relative motion is both near enough and soon enough.
struct TtcParams {
    double distance_threshold = 1.0;  // m
    double time_threshold = 4.0;      // s

    void validate() const {
        if (!(distance_threshold > 0.0)) {
            throw std::invalid_argument("distance_threshold must be > 0");
        }
        if (!(time_threshold > 0.0)) {
            throw std::invalid_argument("time_threshold must be > 0");
        }
    }
};

inline bool distance_warning(const ObjectState& object, const DistanceParams& params) {
    const double dist = std::hypot(object.px, object.py);
    if (dist >= params.distance_threshold) return false;
    // bearing off the forward (+y) axis
    const double bearing_deg =
        std::abs(std::atan2(object.px, object.py)) * 180.0 / std::numbers::pi;
    return bearing_deg <= params.fov_half_angle;
}

inline bool ttc_warning(const ObjectState& object, const TtcParams& params) {
    const double vv = object.vx * object.vx + object.vy * object.vy;
    double t_star = 0.0;
    if (vv >= 1e-12) {  // speed >= 1e-6 m/s
        const double pv = object.px * object.vx + object.py * object.vy;
        t_star = std::max(0.0, -pv / vv);
    }
    const double dx = object.px + object.vx * t_star;
    const double dy = object.py + object.vy * t_star;
    const double d_min = std::hypot(dx, dy);
    return d_min < params.distance_threshold && t_star < params.time_threshold;
}

}  // namespace collwarn
