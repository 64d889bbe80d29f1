#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace collwarn {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Kinematic snapshot of one tracked object in the ego frame (user at the
/// origin, +y pointing along the walking direction). Velocities are apparent,
/// i.e. they include the user's own motion.
struct ObjectState {
    std::int64_t id = 0;
    double px = 0.0;
    double py = 0.0;
    double vx = 0.0;
    double vy = 0.0;

    Vec2 position() const { return {px, py}; }
    Vec2 velocity() const { return {vx, vy}; }

    friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

/// One timestamp worth of object states. Object ids are unique per frame.
struct Frame {
    std::int64_t index = 0;
    std::vector<ObjectState> objects;

    const ObjectState* find(std::int64_t id) const;

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// A recorded or generated sequence at a fixed frame rate, carrying a
/// noise-free ground-truth channel and the channel a warning pipeline
/// actually sees (which may carry position noise and id swaps).
struct Scenario {
    double frame_rate = 15.0;
    std::vector<Frame> ground_truth;
    std::vector<Frame> observed;
    std::map<std::string, std::string> metadata;

    std::size_t frame_count() const { return ground_truth.size(); }
    double time_of(std::int64_t frame_index) const {
        return static_cast<double>(frame_index) / frame_rate;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Sparse per-(frame, object id) boolean warning matrix. Only warn cells are
/// stored; any absent cell reads as "no warning".
struct WarningStream {
    std::set<std::pair<std::int64_t, std::int64_t>> cells;

    bool warn(std::int64_t frame_index, std::int64_t object_id) const {
        return cells.count({frame_index, object_id}) != 0;
    }
    void set(std::int64_t frame_index, std::int64_t object_id) {
        cells.insert({frame_index, object_id});
    }
    std::size_t warn_count() const { return cells.size(); }

    friend bool operator==(const WarningStream&, const WarningStream&) = default;
};

/// Checks every structural invariant and throws std::runtime_error naming the
/// first violation (field, frame index, object id).
void validate_scenario(const Scenario& scenario);

/// Reads a scenario file (line-delimited records, see file format in the
/// README). Throws std::runtime_error with a line number on parse failures
/// and with the violated invariant on validation failures.
Scenario load_scenario(const std::string& path);

/// Writes a scenario so that load_scenario returns a bit-identical value.
/// Throws std::runtime_error on I/O failure, naming the path.
void save_scenario(const Scenario& scenario, const std::string& path);

}  // namespace collwarn
