#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collwarn/core.hpp"

namespace collwarn {

enum class TemplateKind {
    head_on,        // object approaches the user straight on through the bubble
    side_collision, // object crosses the user's path laterally through the bubble
    crossing,       // object passes by at a configurable miss distance
    crowd_approach, // lattice of objects drifting towards the user, one critical
    static_pass,    // fixed obstacle the user walks past (apparent backward drift)
    receding,       // object moving away, never warn-worthy
};

std::string to_string(TemplateKind kind);

struct ScenarioTemplate {
    TemplateKind kind = TemplateKind::head_on;
    double duration_s = 15.0;
    double speed_min = 0.5;  // m/s
    double speed_max = 2.0;  // m/s
    int object_count = 1;    // crowd size for crowd_approach
    // Lateral offset / clearance / miss distance of the closest approach, in
    // metres. For crowd_approach it applies to the critical object.
    double miss_distance = 0.0;
    // Time of closest approach; negative means 0.75 * duration.
    double contact_time_s = -1.0;
    // Apparent constant turn rate (rad/s); 0 keeps trajectories linear.
    double turn_rate = 0.0;
    std::uint64_t seed = 0;
    double frame_rate = 15.0;

    void validate() const;
};

/// Builds the ground-truth trajectories for a template and copies them into
/// the observed channel (noise-free). Pure function of the template.
Scenario generate_scenario(const ScenarioTemplate& tmpl);

struct NoiseSpec {
    double position_sigma = 0.0;  // m, Gaussian std per axis
    double id_swap_prob = 0.0;    // per-frame probability of one pair swap
    std::uint64_t seed = 0;
};

/// Rebuilds the observed channel as ground-truth positions plus i.i.d.
/// Gaussian position noise, with observed velocities re-estimated by frame
/// differencing. sigma = 0 returns an exact copy of the ground truth.
Scenario add_position_noise(const Scenario& scenario, const NoiseSpec& spec);

/// From every frame index >= 1, with probability id_swap_prob, exchanges a
/// uniformly chosen pair of observed ids from that frame onward (persistent
/// relabelling, the way a tracker identity swap behaves).
Scenario add_id_swaps(const Scenario& scenario, const NoiseSpec& spec);

/// Re-estimates observed velocities as (pos(f) - pos(f-1)) * frame_rate,
/// matching objects by observed id; first appearances get velocity (0, 0).
Scenario recompute_velocities(const Scenario& scenario);

/// Full observation-noise pipeline: position noise, then id swaps, then
/// velocity re-estimation. With sigma = 0 and p = 0 the scenario is returned
/// untouched.
Scenario apply_noise(const Scenario& scenario, const NoiseSpec& spec);

/// The 24-scenario evaluation mix: four scenarios per template kind with
/// durations between 10 and 30 s, speeds within 0.5-2 m/s and roughly a
/// quarter of the objects on a warn-worthy course.
std::vector<ScenarioTemplate> standard_suite_templates(std::uint64_t base_seed);

std::vector<Scenario> generate_standard_suite(std::uint64_t base_seed);

}  // namespace collwarn
