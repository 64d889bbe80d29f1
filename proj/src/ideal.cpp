#include "collwarn/ideal.hpp"

#include <algorithm>
#include <cmath>

namespace collwarn {

namespace {

struct PresenceSample {
    std::int64_t frame;
    double time;
    double dist;
};

constexpr double kTimeEps = 1e-9;

}  // namespace

std::map<std::int64_t, std::vector<std::pair<double, double>>> ideal_warning_intervals(
    const Scenario& scenario, const IdealRules& rules) {
    rules.validate();

    std::map<std::int64_t, std::vector<PresenceSample>> timelines;
    for (const auto& frame : scenario.ground_truth) {
        for (const auto& obj : frame.objects) {
            timelines[obj.id].push_back(
                {frame.index, scenario.time_of(frame.index), std::hypot(obj.px, obj.py)});
        }
    }

    std::map<std::int64_t, std::vector<std::pair<double, double>>> result;
    for (const auto& [id, samples] : timelines) {
        std::vector<std::pair<double, double>> intervals;
        for (std::size_t k = 0; k < samples.size(); ++k) {
            const bool inside = samples[k].dist <= rules.enter_radius;
            const bool was_inside = k > 0 && samples[k - 1].dist <= rules.enter_radius;
            if (!inside || was_inside) continue;

            // entry event: warn from lead_time before it until the object has
            // left the exit radius (or its trajectory ends)
            double end_time = samples.back().time;
            for (std::size_t j = k + 1; j < samples.size(); ++j) {
                if (samples[j].dist > rules.exit_radius) {
                    end_time = samples[j].time;
                    break;
                }
            }
            intervals.emplace_back(std::max(0.0, samples[k].time - rules.lead_time), end_time);
        }
        if (intervals.empty()) continue;

        std::sort(intervals.begin(), intervals.end());
        std::vector<std::pair<double, double>> merged;
        for (const auto& iv : intervals) {
            if (!merged.empty() && iv.first <= merged.back().second + kTimeEps) {
                merged.back().second = std::max(merged.back().second, iv.second);
            } else {
                merged.push_back(iv);
            }
        }
        result[id] = std::move(merged);
    }
    return result;
}

WarningStream ideal_warning(const Scenario& scenario, const IdealRules& rules) {
    const auto intervals = ideal_warning_intervals(scenario, rules);

    WarningStream stream;
    for (const auto& frame : scenario.ground_truth) {
        const double t = scenario.time_of(frame.index);
        for (const auto& obj : frame.objects) {
            const auto it = intervals.find(obj.id);
            if (it == intervals.end()) continue;
            for (const auto& [start, end] : it->second) {
                if (t >= start - kTimeEps && t <= end + kTimeEps) {
                    stream.set(frame.index, obj.id);
                    break;
                }
            }
        }
    }
    return stream;
}

}  // namespace collwarn
