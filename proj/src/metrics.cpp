#include "collwarn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

namespace collwarn {

double iou(const ConfusionCounts& counts) {
    const std::int64_t denom = counts.tp + counts.fp + counts.fn;
    if (denom == 0) return 1.0;
    return static_cast<double>(counts.tp) / static_cast<double>(denom);
}

ConfusionCounts confusion(const WarningStream& ideal, const WarningStream& method) {
    ConfusionCounts counts;
    for (const auto& cell : ideal.cells) {
        if (method.cells.count(cell)) {
            ++counts.tp;
        } else {
            ++counts.fn;
        }
    }
    for (const auto& cell : method.cells) {
        if (!ideal.cells.count(cell)) {
            ++counts.fp;
        }
    }
    return counts;
}

namespace {

struct Candidate {
    double dist;
    std::int64_t warned_id;
    std::int64_t gt_id;

    bool operator<(const Candidate& other) const {
        return std::tie(dist, warned_id, gt_id) < std::tie(other.dist, other.warned_id, other.gt_id);
    }
};

// Greedy nearest-pair matching between two position sets, each side used at
// most once. Returns left->right assignments.
std::map<std::int64_t, std::int64_t> greedy_match(
    const std::vector<std::pair<std::int64_t, Vec2>>& left,
    const std::vector<std::pair<std::int64_t, Vec2>>& right, double gate) {
    std::vector<Candidate> candidates;
    for (const auto& [lid, lpos] : left) {
        for (const auto& [rid, rpos] : right) {
            const double dist = (lpos - rpos).norm();
            if (dist <= gate) {
                candidates.push_back({dist, lid, rid});
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());

    std::map<std::int64_t, std::int64_t> assignment;
    std::set<std::int64_t> used_right;
    for (const auto& c : candidates) {
        if (assignment.count(c.warned_id) || used_right.count(c.gt_id)) continue;
        assignment[c.warned_id] = c.gt_id;
        used_right.insert(c.gt_id);
    }
    return assignment;
}

}  // namespace

WarningStream associate_streams(const WarningStream& method,
                                const std::vector<Frame>& method_frames,
                                const std::vector<Frame>& gt_frames, double gate) {
    if (!(gate > 0.0)) throw std::invalid_argument("association gate must be > 0");
    if (method_frames.size() != gt_frames.size()) {
        throw std::invalid_argument("method and ground-truth channels differ in length");
    }

    WarningStream out;
    std::map<std::int64_t, Vec2> last_position;
    for (std::size_t f = 0; f < method_frames.size(); ++f) {
        const auto frame_index = static_cast<std::int64_t>(f);
        for (const auto& obj : method_frames[f].objects) {
            last_position[obj.id] = obj.position();
        }

        std::vector<std::pair<std::int64_t, Vec2>> warned;
        std::vector<std::int64_t> unplaceable;
        for (const auto& [cell_frame, cell_id] : method.cells) {
            if (cell_frame != frame_index) continue;
            const auto it = last_position.find(cell_id);
            if (it == last_position.end()) {
                unplaceable.push_back(cell_id);
            } else {
                warned.emplace_back(cell_id, it->second);
            }
        }

        std::vector<std::pair<std::int64_t, Vec2>> truth;
        truth.reserve(gt_frames[f].objects.size());
        for (const auto& obj : gt_frames[f].objects) {
            truth.emplace_back(obj.id, obj.position());
        }

        const auto assignment = greedy_match(warned, truth, gate);
        std::int64_t pseudo_id = -1;
        for (const auto& [warned_id, pos] : warned) {
            const auto it = assignment.find(warned_id);
            if (it != assignment.end()) {
                out.set(frame_index, it->second);
            } else {
                out.set(frame_index, pseudo_id--);
            }
        }
        for (std::size_t k = 0; k < unplaceable.size(); ++k) {
            out.set(frame_index, pseudo_id--);
        }
    }
    return out;
}

WarningStream associate_streams(const WarningStream& method, const Scenario& scenario,
                                double gate) {
    return associate_streams(method, scenario.observed, scenario.ground_truth, gate);
}

std::vector<std::map<std::int64_t, std::int64_t>> match_tracks_to_truth(
    const std::vector<Frame>& track_frames, const std::vector<Frame>& gt_frames, double gate) {
    if (track_frames.size() != gt_frames.size()) {
        throw std::invalid_argument("track and ground-truth channels differ in length");
    }
    std::vector<std::map<std::int64_t, std::int64_t>> matches(track_frames.size());
    for (std::size_t f = 0; f < track_frames.size(); ++f) {
        std::vector<std::pair<std::int64_t, Vec2>> tracks;
        for (const auto& obj : track_frames[f].objects) {
            tracks.emplace_back(obj.id, obj.position());
        }
        std::vector<std::pair<std::int64_t, Vec2>> truth;
        for (const auto& obj : gt_frames[f].objects) {
            truth.emplace_back(obj.id, obj.position());
        }
        for (const auto& [track_id, gt_id] : greedy_match(tracks, truth, gate)) {
            matches[f][gt_id] = track_id;
        }
    }
    return matches;
}

int id_switches(const std::vector<std::map<std::int64_t, std::int64_t>>& per_frame_matches) {
    std::map<std::int64_t, std::int64_t> last_track;
    int switches = 0;
    for (const auto& matches : per_frame_matches) {
        for (const auto& [gt_id, track_id] : matches) {
            const auto it = last_track.find(gt_id);
            if (it != last_track.end() && it->second != track_id) {
                ++switches;
            }
            last_track[gt_id] = track_id;
        }
    }
    return switches;
}

}  // namespace collwarn
