#include "collwarn/jpdaf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <stdexcept>

#include "collwarn/rng.hpp"

namespace collwarn {

void TrackerParams::validate() const {
    if (particle_count < 100) throw std::invalid_argument("particle_count must be >= 100");
    if (!(process_noise_pos > 0.0 && process_noise_vel > 0.0 && measurement_noise > 0.0)) {
        throw std::invalid_argument("noise terms must be > 0");
    }
    if (!(gate_radius > 0.0)) throw std::invalid_argument("gate_radius must be > 0");
    if (!(detection_prob > 0.0 && detection_prob <= 1.0)) {
        throw std::invalid_argument("detection_prob must be in (0, 1]");
    }
    if (!(clutter_density > 0.0)) throw std::invalid_argument("clutter_density must be > 0");
    if (birth_confirm_frames < 1 || death_miss_frames < 1) {
        throw std::invalid_argument("birth/death frame counts must be >= 1");
    }
    if (max_joint_events < 1) throw std::invalid_argument("max_joint_events must be >= 1");
}

namespace {

// velocity spread for freshly spawned tracks, covering walking speeds
constexpr double kInitialVelocityStd = 1.5;  // m/s

double gaussian2(const Vec2& d, double sigma) {
    const double s2 = sigma * sigma;
    return std::exp(-0.5 * d.squaredNorm() / s2) / (2.0 * std::numbers::pi * s2);
}

}  // namespace

ObjectState estimate_state(const Track& track) {
    if (!track.confirmed) {
        throw std::invalid_argument("cannot estimate the state of an unconfirmed track");
    }
    ObjectState state;
    state.id = track.id;
    double px = 0, py = 0, vx = 0, vy = 0;
    for (std::size_t i = 0; i < track.particles.size(); ++i) {
        const double w = track.weights[i];
        px += w * track.particles[i].px;
        py += w * track.particles[i].py;
        vx += w * track.particles[i].vx;
        vy += w * track.particles[i].vy;
    }
    state.px = px;
    state.py = py;
    state.vx = vx;
    state.vy = vy;
    return state;
}

JpdafTracker::JpdafTracker(const TrackerParams& params, double frame_dt, std::uint64_t seed)
    : params_(params), frame_dt_(frame_dt), rng_(make_rng(derive_seed(seed, 0x6a70ull))) {
    params_.validate();
    if (!(frame_dt > 0.0)) throw std::invalid_argument("frame_dt must be > 0");
}

void JpdafTracker::predict() {
    std::normal_distribution<double> pos_noise(0.0, params_.process_noise_pos);
    std::normal_distribution<double> vel_noise(0.0, params_.process_noise_vel);
    for (auto& track : tracks_) {
        for (auto& p : track.particles) {
            p.px += p.vx * frame_dt_ + pos_noise(rng_);
            p.py += p.vy * frame_dt_ + pos_noise(rng_);
            p.vx += vel_noise(rng_);
            p.vy += vel_noise(rng_);
        }
    }
}

std::vector<AssociationMarginals> jpda_marginals(const std::vector<Vec2>& predicted_means,
                                                 const std::vector<Vec2>& detections,
                                                 const TrackerParams& params) {
    const std::size_t n_tracks = predicted_means.size();
    const std::size_t n_det = detections.size();
    std::vector<AssociationMarginals> marginals(n_tracks);
    for (auto& m : marginals) {
        m.beta_miss = 1.0;
        m.beta.assign(n_det, 0.0);
    }
    if (n_tracks == 0) return marginals;
    if (n_det > 63) {
        throw std::runtime_error("more detections per frame than the tracker supports (63)");
    }

    // Log-domain factors per track option. Assigning detection j to track t
    // weighs Pd * N(z_j; mean_t, R) and trades against clutter_density for
    // the detection and (1 - Pd) for the track going unobserved.
    const double pd = std::min(params.detection_prob, 1.0 - 1e-12);
    const double log_miss = std::log(1.0 - pd);
    std::vector<std::vector<std::pair<int, double>>> options(n_tracks);
    std::vector<double> best_option(n_tracks);
    for (std::size_t t = 0; t < n_tracks; ++t) {
        double best = log_miss;
        for (std::size_t j = 0; j < n_det; ++j) {
            const Vec2 diff = detections[j] - predicted_means[t];
            if (diff.norm() > params.gate_radius) continue;
            const double log_w =
                std::log(pd) + std::log(gaussian2(diff, params.measurement_noise)) -
                std::log(params.clutter_density);
            options[t].emplace_back(static_cast<int>(j), log_w);
            best = std::max(best, log_w);
        }
        best_option[t] = best;
    }

    // suffix_bound[t]: best achievable log weight over tracks t..end,
    // ignoring the one-detection-per-track constraint (admissible bound)
    std::vector<double> suffix_bound(n_tracks + 1, 0.0);
    for (std::size_t t = n_tracks; t-- > 0;) {
        suffix_bound[t] = suffix_bound[t + 1] + best_option[t];
    }

    // Best-first enumeration of joint events. Complete events are re-queued
    // keyed by their exact weight, so events pop in nonincreasing order and
    // the cap keeps exactly the highest-weight ones.
    struct Node {
        double bound;
        double log_weight;
        std::uint32_t depth;
        std::uint64_t used;
        std::vector<int> assignment;  // detection index per track, -1 = miss
        bool operator<(const Node& other) const { return bound < other.bound; }
    };
    std::priority_queue<Node> queue;
    queue.push({suffix_bound[0], 0.0, 0, 0, {}});

    struct Event {
        double log_weight;
        std::vector<int> assignment;
    };
    std::vector<Event> events;
    events.reserve(static_cast<std::size_t>(params.max_joint_events));

    while (!queue.empty() &&
           events.size() < static_cast<std::size_t>(params.max_joint_events)) {
        Node node = queue.top();
        queue.pop();
        if (node.depth == n_tracks) {
            events.push_back({node.log_weight, std::move(node.assignment)});
            continue;
        }
        const std::size_t t = node.depth;
        {
            Node child = node;
            child.depth = static_cast<std::uint32_t>(t + 1);
            child.log_weight += log_miss;
            child.bound = child.log_weight + suffix_bound[t + 1];
            child.assignment.push_back(-1);
            queue.push(std::move(child));
        }
        for (const auto& [j, log_w] : options[t]) {
            if (node.used & (1ull << j)) continue;
            Node child = node;
            child.depth = static_cast<std::uint32_t>(t + 1);
            child.log_weight += log_w;
            child.bound = child.log_weight + suffix_bound[t + 1];
            child.used |= (1ull << j);
            child.assignment.push_back(j);
            queue.push(std::move(child));
        }
    }

    if (events.empty()) return marginals;

    double max_log = events.front().log_weight;
    for (const auto& e : events) max_log = std::max(max_log, e.log_weight);
    double total = 0.0;
    std::vector<double> scaled(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) {
        scaled[e] = std::exp(events[e].log_weight - max_log);
        total += scaled[e];
    }
    for (auto& m : marginals) m.beta_miss = 0.0;
    for (std::size_t e = 0; e < events.size(); ++e) {
        const double w = scaled[e] / total;
        for (std::size_t t = 0; t < n_tracks; ++t) {
            const int j = events[e].assignment[t];
            if (j < 0) {
                marginals[t].beta_miss += w;
            } else {
                marginals[t].beta[static_cast<std::size_t>(j)] += w;
            }
        }
    }
    return marginals;
}

void JpdafTracker::step(const std::vector<Vec2>& detections) {
    predict();

    std::vector<Vec2> predicted_means(tracks_.size(), Vec2::Zero());
    for (std::size_t t = 0; t < tracks_.size(); ++t) {
        double px = 0, py = 0;
        for (std::size_t i = 0; i < tracks_[t].particles.size(); ++i) {
            px += tracks_[t].weights[i] * tracks_[t].particles[i].px;
            py += tracks_[t].weights[i] * tracks_[t].particles[i].py;
        }
        predicted_means[t] = Vec2(px, py);
    }

    last_marginals_ = jpda_marginals(predicted_means, detections, params_);

    // measurement update: weights scaled by the beta mixture of likelihoods
    for (std::size_t t = 0; t < tracks_.size(); ++t) {
        Track& track = tracks_[t];
        const AssociationMarginals& m = last_marginals_[t];

        double sum = 0.0;
        for (std::size_t i = 0; i < track.particles.size(); ++i) {
            double like = m.beta_miss;
            for (std::size_t j = 0; j < detections.size(); ++j) {
                if (m.beta[j] <= 0.0) continue;
                const Vec2 diff =
                    detections[j] - Vec2(track.particles[i].px, track.particles[i].py);
                like += m.beta[j] * gaussian2(diff, params_.measurement_noise);
            }
            track.weights[i] *= like;
            sum += track.weights[i];
        }
        if (sum <= 0.0) {
            const double uniform = 1.0 / static_cast<double>(track.weights.size());
            std::fill(track.weights.begin(), track.weights.end(), uniform);
        } else {
            for (auto& w : track.weights) w /= sum;
        }

        double ess_denom = 0.0;
        for (const double w : track.weights) ess_denom += w * w;
        const double ess = 1.0 / ess_denom;
        if (ess < 0.5 * static_cast<double>(track.particles.size())) {
            // systematic resampling
            const std::size_t n = track.particles.size();
            const double offset =
                std::uniform_real_distribution<double>(0.0, 1.0)(rng_) / static_cast<double>(n);
            std::vector<Particle> resampled;
            resampled.reserve(n);
            double cumulative = track.weights[0];
            std::size_t idx = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double target = offset + static_cast<double>(i) / static_cast<double>(n);
                while (cumulative < target && idx + 1 < n) {
                    ++idx;
                    cumulative += track.weights[idx];
                }
                resampled.push_back(track.particles[idx]);
            }
            track.particles = std::move(resampled);
            std::fill(track.weights.begin(), track.weights.end(),
                      1.0 / static_cast<double>(n));
        }

        ++track.age;
        if (m.beta_miss > 0.5) {
            ++track.miss_count;
            track.hit_streak = 0;
        } else {
            track.miss_count = 0;
            ++track.hit_streak;
            if (track.hit_streak >= params_.birth_confirm_frames) {
                track.confirmed = true;
            }
        }
    }

    // births: detections outside every track's gate start tentative tracks
    std::normal_distribution<double> pos_spread(0.0, params_.measurement_noise);
    std::normal_distribution<double> vel_spread(0.0, kInitialVelocityStd);
    for (std::size_t j = 0; j < detections.size(); ++j) {
        bool gated_somewhere = false;
        for (std::size_t t = 0; t < predicted_means.size() && !gated_somewhere; ++t) {
            gated_somewhere = (detections[j] - predicted_means[t]).norm() <= params_.gate_radius;
        }
        if (gated_somewhere) continue;

        Track track;
        track.id = next_id_++;
        track.age = 1;
        track.hit_streak = 1;
        track.confirmed = params_.birth_confirm_frames <= 1;
        track.particles.reserve(params_.particle_count);
        for (int i = 0; i < params_.particle_count; ++i) {
            Particle p;
            p.px = detections[j].x() + pos_spread(rng_);
            p.py = detections[j].y() + pos_spread(rng_);
            p.vx = vel_spread(rng_);
            p.vy = vel_spread(rng_);
            track.particles.push_back(p);
        }
        track.weights.assign(track.particles.size(),
                             1.0 / static_cast<double>(track.particles.size()));
        tracks_.push_back(std::move(track));
    }

    // deaths
    std::erase_if(tracks_, [this](const Track& track) {
        return track.miss_count >= params_.death_miss_frames;
    });
}

std::vector<ObjectState> JpdafTracker::confirmed_states() const {
    std::vector<ObjectState> states;
    for (const auto& track : tracks_) {
        if (track.confirmed) states.push_back(estimate_state(track));
    }
    std::sort(states.begin(), states.end(),
              [](const ObjectState& a, const ObjectState& b) { return a.id < b.id; });
    return states;
}

}  // namespace collwarn
