#pragma once

#include <map>
#include <span>
#include <vector>

#include "collwarn/core.hpp"
#include "collwarn/predict.hpp"

namespace collwarn {

/// Parameters of the probabilistic collision-risk model. escape_rate is the
/// baseline rate of avoiding a collision event regardless of geometry;
/// event_duration_dt is the time span over which one collision event is
/// considered; cross_section converts the Gaussian-overlap density (1/m^2)
/// into a dimensionless per-step collision probability.
struct RiskParams {
    double risk_threshold = 0.05;    // warn when an object's risk reaches this
    double horizon_s_max = 5.0;      // s, prediction cap
    double interval_ds = 0.1;        // s, sampling step along the prediction
    double escape_rate = 0.3;        // 1/s
    double event_duration_dt = 0.5;  // s
    double cross_section = 0.25;     // m^2
    UncertaintyParams uncertainty;

    void validate() const;
};

/// Per-object collision probability sampled along the prediction offsets
/// s = 0, ds, 2*ds, ... <= s_max.
struct CollisionProfile {
    std::vector<double> offsets;  // s values, strictly increasing
    std::vector<double> prob;     // each in [0, 1]
};

/// Survival weight S(s) on the same grid: the probability that neither a
/// collision nor an escape event has happened before offset s.
struct SurvivalProfile {
    std::vector<double> offsets;
    std::vector<double> survival;  // S(0) = 1, nonincreasing, in (0, 1]
};

struct RiskScore {
    std::int64_t id = 0;
    double value = 0.0;  // in [0, 1]
};

/// Probability that the user and an object collide at one predicted step:
/// the integral of the product of their position densities, scaled by
/// cross_section and clamped to 1. The product integral has the closed form
/// of a Gaussian density evaluated at the mean separation with the summed
/// covariance.
double collision_probability(const GaussianBelief2D& user, const GaussianBelief2D& object,
                             double cross_section);

CollisionProfile object_collision_profile(const ObjectState& object, const RiskParams& params);

/// Pointwise sum of per-object profiles, clamped to 1. All inputs must share
/// the same offset grid.
CollisionProfile total_collision_profile(std::span<const CollisionProfile> profiles);

/// Left-Riemann discretisation of the survival integral:
/// S(s_k) = exp(-sum_{j<k} (escape_rate + p(s_j)/dt) * ds).
SurvivalProfile survival_profile(const CollisionProfile& total, const RiskParams& params);

/// Survival-weighted temporal accumulation of one object's collision
/// probability: R = sum_k S(s_k) * p(s_k)/dt * ds, clamped to [0, 1].
RiskScore object_risk(std::int64_t id, const CollisionProfile& object_profile,
                      const SurvivalProfile& survival, const RiskParams& params);

/// Risk score per object in the frame. The survival weight is shared: it is
/// built from the total profile over all objects.
std::map<std::int64_t, double> risk_scores(const Frame& frame, const RiskParams& params);

/// Warning decision per object: warn iff its risk score reaches
/// params.risk_threshold.
std::map<std::int64_t, bool> risk_warnings(const Frame& frame, const RiskParams& params);

}  // namespace collwarn
