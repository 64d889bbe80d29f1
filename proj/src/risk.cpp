#include "collwarn/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace collwarn {

void RiskParams::validate() const {
    if (!(risk_threshold > 0.0 && risk_threshold < 1.0)) {
        throw std::invalid_argument("risk_threshold must be in (0, 1)");
    }
    if (!(horizon_s_max > 0.0)) throw std::invalid_argument("horizon_s_max must be > 0");
    if (!(interval_ds > 0.0 && interval_ds <= horizon_s_max)) {
        throw std::invalid_argument("interval_ds must be in (0, horizon_s_max]");
    }
    if (escape_rate < 0.0) throw std::invalid_argument("escape_rate must be >= 0");
    if (!(event_duration_dt > 0.0)) throw std::invalid_argument("event_duration_dt must be > 0");
    if (!(cross_section > 0.0)) throw std::invalid_argument("cross_section must be > 0");
    uncertainty.validate();
}

double collision_probability(const GaussianBelief2D& user, const GaussianBelief2D& object,
                             double cross_section) {
    const Mat2 cov = user.cov + object.cov;
    const double det = cov(0, 0) * cov(1, 1) - cov(0, 1) * cov(1, 0);
    if (!(det > 0.0)) {
        throw std::invalid_argument("summed covariance is singular");
    }
    const Vec2 d = object.mean - user.mean;
    // inverse of a 2x2 applied to d
    const double qx = (cov(1, 1) * d.x() - cov(0, 1) * d.y()) / det;
    const double qy = (-cov(1, 0) * d.x() + cov(0, 0) * d.y()) / det;
    const double mahal_sq = d.x() * qx + d.y() * qy;
    const double density = std::exp(-0.5 * mahal_sq) / (2.0 * std::numbers::pi * std::sqrt(det));
    return std::min(1.0, cross_section * density);
}

namespace {

std::vector<double> offset_grid(const RiskParams& params) {
    // K chosen so that K*ds <= s_max; the epsilon keeps exact multiples in.
    const auto steps =
        static_cast<std::size_t>(params.horizon_s_max / params.interval_ds + 1e-9);
    std::vector<double> offsets(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        offsets[k] = static_cast<double>(k) * params.interval_ds;
    }
    return offsets;
}

void require_same_grid(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("profiles have mismatched sample grids");
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) {
            throw std::invalid_argument("profiles have mismatched sample grids");
        }
    }
}

}  // namespace

CollisionProfile object_collision_profile(const ObjectState& object, const RiskParams& params) {
    CollisionProfile profile;
    profile.offsets = offset_grid(params);
    profile.prob.reserve(profile.offsets.size());
    for (const double s : profile.offsets) {
        const GaussianBelief2D user = user_belief(s, params.uncertainty);
        const GaussianBelief2D obj = predict_belief(object, s, params.uncertainty);
        profile.prob.push_back(collision_probability(user, obj, params.cross_section));
    }
    return profile;
}

CollisionProfile total_collision_profile(std::span<const CollisionProfile> profiles) {
    if (profiles.empty()) return {};
    CollisionProfile total;
    total.offsets = profiles.front().offsets;
    total.prob.assign(total.offsets.size(), 0.0);
    for (const auto& profile : profiles) {
        require_same_grid(total.offsets, profile.offsets);
        for (std::size_t k = 0; k < total.prob.size(); ++k) {
            total.prob[k] += profile.prob[k];
        }
    }
    for (double& p : total.prob) {
        p = std::min(1.0, p);
    }
    return total;
}

SurvivalProfile survival_profile(const CollisionProfile& total, const RiskParams& params) {
    SurvivalProfile out;
    out.offsets = total.offsets;
    out.survival.resize(total.offsets.size());
    double hazard_acc = 0.0;
    for (std::size_t k = 0; k < total.offsets.size(); ++k) {
        out.survival[k] = std::exp(-hazard_acc);
        hazard_acc +=
            (params.escape_rate + total.prob[k] / params.event_duration_dt) * params.interval_ds;
    }
    return out;
}

RiskScore object_risk(std::int64_t id, const CollisionProfile& object_profile,
                      const SurvivalProfile& survival, const RiskParams& params) {
    require_same_grid(object_profile.offsets, survival.offsets);
    double risk = 0.0;
    for (std::size_t k = 0; k < object_profile.offsets.size(); ++k) {
        risk += survival.survival[k] * (object_profile.prob[k] / params.event_duration_dt) *
                params.interval_ds;
    }
    return {id, std::clamp(risk, 0.0, 1.0)};
}

std::map<std::int64_t, double> risk_scores(const Frame& frame, const RiskParams& params) {
    std::map<std::int64_t, double> scores;
    if (frame.objects.empty()) return scores;

    std::vector<CollisionProfile> profiles;
    profiles.reserve(frame.objects.size());
    for (const auto& object : frame.objects) {
        profiles.push_back(object_collision_profile(object, params));
    }
    const CollisionProfile total = total_collision_profile(profiles);
    const SurvivalProfile survival = survival_profile(total, params);

    // Where the summed profile saturates the clamp, objects receive their
    // proportional share of the clamped total; the per-object risks then sum
    // to at most the total failure probability. Below saturation this leaves
    // every profile untouched.
    std::vector<double> scale(total.prob.size(), 1.0);
    for (std::size_t k = 0; k < total.prob.size(); ++k) {
        double raw = 0.0;
        for (const auto& profile : profiles) raw += profile.prob[k];
        if (raw > 1.0) scale[k] = total.prob[k] / raw;
    }

    for (std::size_t i = 0; i < frame.objects.size(); ++i) {
        CollisionProfile shared = profiles[i];
        for (std::size_t k = 0; k < shared.prob.size(); ++k) shared.prob[k] *= scale[k];
        const RiskScore score = object_risk(frame.objects[i].id, shared, survival, params);
        scores[score.id] = score.value;
    }
    return scores;
}

std::map<std::int64_t, bool> risk_warnings(const Frame& frame, const RiskParams& params) {
    std::map<std::int64_t, bool> decisions;
    for (const auto& [id, value] : risk_scores(frame, params)) {
        decisions[id] = value >= params.risk_threshold;
    }
    return decisions;
}

}  // namespace collwarn
