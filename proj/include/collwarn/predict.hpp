#pragma once

#include <cmath>
#include <stdexcept>

#include "collwarn/core.hpp"

namespace collwarn {

/// Growth model for predicted position uncertainty: the standard deviation
/// starts at sigma0 on both axes and grows linearly with the prediction
/// offset, at growth_long along the motion direction and growth_lat across it.
struct UncertaintyParams {
    double sigma0 = 0.1;       // m
    double growth_long = 0.3;  // m/s
    double growth_lat = 0.1;   // m/s

    void validate() const {
        if (!(sigma0 > 0.0)) throw std::invalid_argument("sigma0 must be > 0");
        if (growth_long < 0.0) throw std::invalid_argument("growth_long must be >= 0");
        if (growth_lat < 0.0) throw std::invalid_argument("growth_lat must be >= 0");
    }
};

/// Predicted 2D position distribution at some future offset.
struct GaussianBelief2D {
    Vec2 mean = Vec2::Zero();
    Mat2 cov = Mat2::Identity();
};

// Below this speed the motion direction is treated as undefined and the
// uncertainty becomes isotropic.
inline constexpr double kDegenerateSpeed = 1e-6;

inline Vec2 predict_position(const ObjectState& state, double offset_s) {
    if (offset_s < 0.0) {
        throw std::invalid_argument("prediction offset must be >= 0");
    }
    return {state.px + state.vx * offset_s, state.py + state.vy * offset_s};
}

inline GaussianBelief2D predict_belief(const ObjectState& state, double offset_s,
                                       const UncertaintyParams& u) {
    GaussianBelief2D belief;
    belief.mean = predict_position(state, offset_s);

    const double speed = std::hypot(state.vx, state.vy);
    if (speed < kDegenerateSpeed) {
        const double std_iso = u.sigma0 + std::max(u.growth_long, u.growth_lat) * offset_s;
        belief.cov = std_iso * std_iso * Mat2::Identity();
        return belief;
    }

    const double std_long = u.sigma0 + u.growth_long * offset_s;
    const double std_lat = u.sigma0 + u.growth_lat * offset_s;
    const Vec2 dir(state.vx / speed, state.vy / speed);
    Mat2 rot;
    rot << dir.x(), -dir.y(), dir.y(), dir.x();
    Mat2 axis_cov = Mat2::Zero();
    axis_cov(0, 0) = std_long * std_long;
    axis_cov(1, 1) = std_lat * std_lat;
    belief.cov = rot * axis_cov * rot.transpose();
    return belief;
}

/// The user is not tracked; in the ego frame they sit at the origin with an
/// isotropic uncertainty that grows at the lateral rate.
inline GaussianBelief2D user_belief(double offset_s, const UncertaintyParams& u) {
    if (offset_s < 0.0) {
        throw std::invalid_argument("prediction offset must be >= 0");
    }
    GaussianBelief2D belief;
    belief.mean = Vec2::Zero();
    const double std_iso = u.sigma0 + u.growth_lat * offset_s;
    belief.cov = std_iso * std_iso * Mat2::Identity();
    return belief;
}

}  // namespace collwarn
