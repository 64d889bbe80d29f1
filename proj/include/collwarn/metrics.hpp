#pragma once

#include <map>
#include <vector>

#include "collwarn/core.hpp"

namespace collwarn {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& other) {
        tp += other.tp;
        fp += other.fp;
        fn += other.fn;
        return *this;
    }
};

/// Intersection over union of warn cells: tp / (tp + fp + fn). A scenario
/// that requires no warnings and gets none counts as perfect (1.0).
double iou(const ConfusionCounts& counts);

/// Per-(frame, object) cell comparison of a method stream against the ideal
/// stream over the same ground-truth id space.
ConfusionCounts confusion(const WarningStream& ideal, const WarningStream& method);

/// Maps a warning stream expressed on observed/tracked ids onto ground-truth
/// ids. Per frame, each warned id is matched to the nearest ground-truth
/// object within `gate` metres (greedy nearest pair, each side used once).
/// Warned ids with no match within the gate are kept as false positives on
/// synthetic negative pseudo-ids so they still count against the IoU.
/// `method_frames` must hold the states the warnings were computed from; a
/// warned id missing from a frame falls back to its most recent position.
WarningStream associate_streams(const WarningStream& method,
                                const std::vector<Frame>& method_frames,
                                const std::vector<Frame>& gt_frames, double gate);

/// Convenience overload for warnings computed directly on the observed
/// channel.
WarningStream associate_streams(const WarningStream& method, const Scenario& scenario,
                                double gate = 0.75);

/// Per-frame assignment of ground-truth ids to the nearest track id within
/// the gate (greedy nearest pair), used for ID-switch accounting.
std::vector<std::map<std::int64_t, std::int64_t>> match_tracks_to_truth(
    const std::vector<Frame>& track_frames, const std::vector<Frame>& gt_frames, double gate);

/// Counts frames where a ground-truth object's matched track id differs from
/// its previously matched track id (unmatched frames are skipped).
int id_switches(const std::vector<std::map<std::int64_t, std::int64_t>>& per_frame_matches);

}  // namespace collwarn
