#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "collwarn/core.hpp"

namespace collwarn {

struct TrackerParams {
    int particle_count = 500;
    double process_noise_pos = 0.05;  // m per frame step
    double process_noise_vel = 0.1;   // m/s per frame step
    double measurement_noise = 0.15;  // m, detection std
    double gate_radius = 1.0;         // m, validation gate around predicted mean
    double detection_prob = 0.9;
    double clutter_density = 1e-4;    // expected clutter per m^2
    int birth_confirm_frames = 3;     // consecutive associations before confirmation
    int death_miss_frames = 5;        // consecutive misses before deletion
    int max_joint_events = 1000;      // cap on enumerated joint association events

    void validate() const;
};

struct Particle {
    double px, py, vx, vy;
};

struct Track {
    std::int64_t id = 0;
    std::vector<Particle> particles;
    std::vector<double> weights;  // nonnegative, sum to 1
    int miss_count = 0;
    int age = 0;
    int hit_streak = 0;
    bool confirmed = false;
};

/// Posterior association probabilities of one track against the detections of
/// the last step: beta[j] for detection j plus beta_miss for "no detection".
/// They sum to 1.
struct AssociationMarginals {
    double beta_miss = 1.0;
    std::vector<double> beta;
};

/// Weighted particle mean of position and velocity under the track's stable
/// output id. Throws std::invalid_argument for unconfirmed tracks.
ObjectState estimate_state(const Track& track);

/// Joint-probabilistic association of detections to predicted track means:
/// enumerates feasible joint events (each detection used at most once, each
/// track observed at most once), weighs each by detection likelihoods,
/// detection probability, and clutter density, then marginalises to per-track
/// association probabilities. Enumeration keeps only the
/// params.max_joint_events highest-weight events when the feasible set is
/// larger than the cap.
std::vector<AssociationMarginals> jpda_marginals(const std::vector<Vec2>& predicted_means,
                                                 const std::vector<Vec2>& detections,
                                                 const TrackerParams& params);

/// Particle-filter multi-target tracker with joint probabilistic data
/// association. Input detections are positions only; whatever ids the
/// upstream pipeline assigned are deliberately ignored, and the tracker's own
/// ids are stable across id-swapped input.
class JpdafTracker {
  public:
    JpdafTracker(const TrackerParams& params, double frame_dt, std::uint64_t seed);

    /// One frame: predict, gate, associate (joint events marginalised to
    /// per-track betas), update particle weights, resample on low effective
    /// sample size, then spawn/confirm/delete tracks.
    void step(const std::vector<Vec2>& detections);

    const std::vector<Track>& tracks() const { return tracks_; }

    /// Marginals of the last step, aligned with the tracks that existed
    /// during that step (before births and deaths were applied).
    const std::vector<AssociationMarginals>& last_marginals() const { return last_marginals_; }

    /// States of confirmed tracks, ordered by id.
    std::vector<ObjectState> confirmed_states() const;

  private:
    void predict();

    TrackerParams params_;
    double frame_dt_;
    std::mt19937_64 rng_;
    std::vector<Track> tracks_;
    std::vector<AssociationMarginals> last_marginals_;
    std::int64_t next_id_ = 0;
};

}  // namespace collwarn
