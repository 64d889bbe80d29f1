#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "collwarn/jpdaf.hpp"
#include "collwarn/metrics.hpp"
#include "collwarn/rng.hpp"
#include "collwarn/synth.hpp"

using namespace collwarn;

namespace {

constexpr double kFrameDt = 1.0 / 15.0;

double gauss2(double dist_sq, double sigma) {
    return std::exp(-0.5 * dist_sq / (sigma * sigma)) /
           (2.0 * std::numbers::pi * sigma * sigma);
}

// feed identical detections until the track confirms
JpdafTracker confirmed_tracker(const TrackerParams& params, const Vec2& at,
                               std::uint64_t seed = 1) {
    JpdafTracker tracker(params, kFrameDt, seed);
    for (int i = 0; i < params.birth_confirm_frames + 1; ++i) {
        tracker.step({at});
    }
    return tracker;
}

}  // namespace

TEST_CASE("single track, single detection: the two joint events by hand") {
    TrackerParams params;
    const std::vector<Vec2> means = {Vec2(0.0, 0.0)};
    const std::vector<Vec2> detections = {Vec2(0.0, 0.0)};
    const auto marginals = jpda_marginals(means, detections, params);
    REQUIRE(marginals.size() == 1);

    // event A: track missed, detection is clutter -> (1 - Pd) * lambda
    // event B: track <- detection -> Pd * N(0; R)
    const double w_miss = (1.0 - params.detection_prob) * params.clutter_density;
    const double w_hit = params.detection_prob * gauss2(0.0, params.measurement_noise);
    const double expected_beta_miss = w_miss / (w_miss + w_hit);
    CHECK(marginals[0].beta_miss == doctest::Approx(expected_beta_miss).epsilon(1e-12));
    CHECK(marginals[0].beta[0] == doctest::Approx(1.0 - expected_beta_miss).epsilon(1e-12));
    CHECK(marginals[0].beta_miss < 0.1);
}

TEST_CASE("beta marginals normalise to one for every track") {
    TrackerParams params;
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> pos(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec2> means, detections;
        const int n_tracks = 1 + static_cast<int>(rng() % 5);
        const int n_det = static_cast<int>(rng() % 6);
        for (int t = 0; t < n_tracks; ++t) means.emplace_back(pos(rng), pos(rng));
        for (int j = 0; j < n_det; ++j) detections.emplace_back(pos(rng), pos(rng));
        const auto marginals = jpda_marginals(means, detections, params);
        for (const auto& m : marginals) {
            double total = m.beta_miss;
            for (const double b : m.beta) total += b;
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("truncated enumeration equals exact enumeration below the cap") {
    TrackerParams exact;
    exact.max_joint_events = 1000000;
    TrackerParams capped;
    capped.max_joint_events = 1000;
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> pos(-1.5, 1.5);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Vec2> means, detections;
        for (int t = 0; t < 4; ++t) means.emplace_back(pos(rng), pos(rng));
        for (int j = 0; j < 4; ++j) detections.emplace_back(pos(rng), pos(rng));
        const auto a = jpda_marginals(means, detections, exact);
        const auto b = jpda_marginals(means, detections, capped);
        for (std::size_t t = 0; t < a.size(); ++t) {
            CHECK(a[t].beta_miss == doctest::Approx(b[t].beta_miss).epsilon(1e-12));
            for (std::size_t j = 0; j < a[t].beta.size(); ++j) {
                CHECK(a[t].beta[j] == doctest::Approx(b[t].beta[j]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("estimate_state") {
    Track track;
    track.id = 9;
    track.confirmed = true;

    SUBCASE("degenerate ensemble returns that exact state") {
        track.particles.assign(100, {1.5, -2.5, 0.25, 0.75});
        track.weights.assign(100, 0.01);
        const ObjectState s = estimate_state(track);
        CHECK(s.id == 9);
        CHECK(s.px == doctest::Approx(1.5).epsilon(1e-12));
        CHECK(s.py == doctest::Approx(-2.5).epsilon(1e-12));
        CHECK(s.vx == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(s.vy == doctest::Approx(0.75).epsilon(1e-12));
    }

    SUBCASE("symmetric cloud averages to its centre") {
        track.particles = {{0.0, 0.0, 0, 0}, {2.0, 2.0, 0, 0}, {0.0, 2.0, 0, 0}, {2.0, 0.0, 0, 0}};
        track.weights.assign(4, 0.25);
        const ObjectState s = estimate_state(track);
        CHECK(std::abs(s.px - 1.0) < 1e-9);
        CHECK(std::abs(s.py - 1.0) < 1e-9);
    }

    SUBCASE("unconfirmed tracks are rejected") {
        track.confirmed = false;
        track.particles.assign(100, {0, 0, 0, 0});
        track.weights.assign(100, 0.01);
        CHECK_THROWS_AS(estimate_state(track), std::invalid_argument);
    }
}

TEST_CASE("posterior concentrates on a steadily observed position") {
    TrackerParams params;
    JpdafTracker tracker = confirmed_tracker(params, Vec2(1.0, 2.0));
    REQUIRE(tracker.tracks().size() == 1);
    REQUIRE(tracker.tracks()[0].confirmed);
    const ObjectState s = estimate_state(tracker.tracks()[0]);
    CHECK(std::hypot(s.px - 1.0, s.py - 2.0) < params.measurement_noise);
    CHECK(tracker.last_marginals()[0].beta_miss < 0.1);
}

TEST_CASE("velocity estimate converges on a constant-velocity trajectory") {
    TrackerParams params;
    JpdafTracker tracker(params, kFrameDt, 5);
    const Vec2 velocity(0.8, -0.5);
    for (int f = 0; f < 45; ++f) {  // three seconds of clean detections
        const Vec2 pos = Vec2(0.0, 4.0) + velocity * (f * kFrameDt);
        tracker.step({pos});
    }
    REQUIRE(tracker.tracks().size() == 1);
    const Track& track = tracker.tracks()[0];
    REQUIRE(track.confirmed);
    const ObjectState s = estimate_state(track);

    double var_vx = 0.0, var_vy = 0.0;
    for (std::size_t i = 0; i < track.particles.size(); ++i) {
        var_vx += track.weights[i] * (track.particles[i].vx - s.vx) * (track.particles[i].vx - s.vx);
        var_vy += track.weights[i] * (track.particles[i].vy - s.vy) * (track.particles[i].vy - s.vy);
    }
    CHECK(std::abs(s.vx - velocity.x()) <= 3.0 * std::sqrt(var_vx));
    CHECK(std::abs(s.vy - velocity.y()) <= 3.0 * std::sqrt(var_vy));
    CHECK(std::hypot(s.vx - velocity.x(), s.vy - velocity.y()) < 0.3);
}

TEST_CASE("a silent track dies after death_miss_frames") {
    TrackerParams params;
    JpdafTracker tracker = confirmed_tracker(params, Vec2(0.0, 3.0));
    REQUIRE(tracker.tracks().size() == 1);
    for (int i = 0; i < params.death_miss_frames; ++i) {
        CHECK(tracker.tracks().size() == 1);
        tracker.step({});
    }
    CHECK(tracker.tracks().empty());
}

TEST_CASE("identical seeds and inputs give identical tracker output") {
    TrackerParams params;
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    std::vector<std::vector<Vec2>> detections;
    for (int f = 0; f < 40; ++f) {
        std::vector<Vec2> frame;
        for (int j = 0; j < 3; ++j) frame.emplace_back(pos(rng), pos(rng) + j * 2.0);
        detections.push_back(frame);
    }
    JpdafTracker a(params, kFrameDt, 12345);
    JpdafTracker b(params, kFrameDt, 12345);
    for (const auto& frame : detections) {
        a.step(frame);
        b.step(frame);
    }
    REQUIRE(a.tracks().size() == b.tracks().size());
    for (std::size_t t = 0; t < a.tracks().size(); ++t) {
        CHECK(a.tracks()[t].id == b.tracks()[t].id);
        for (std::size_t i = 0; i < a.tracks()[t].particles.size(); ++i) {
            CHECK(a.tracks()[t].particles[i].px == b.tracks()[t].particles[i].px);
            CHECK(a.tracks()[t].particles[i].vy == b.tracks()[t].particles[i].vy);
            CHECK(a.tracks()[t].weights[i] == b.tracks()[t].weights[i]);
        }
    }
}

TEST_CASE("particle weights stay normalised and the count stays fixed") {
    TrackerParams params;
    params.particle_count = 200;
    JpdafTracker tracker(params, kFrameDt, 3);
    std::mt19937_64 rng(73);
    std::normal_distribution<double> jitter(0.0, 0.2);
    for (int f = 0; f < 60; ++f) {
        tracker.step({Vec2(jitter(rng), 3.0 + jitter(rng)), Vec2(3.0 + jitter(rng), jitter(rng))});
        for (const auto& track : tracker.tracks()) {
            CHECK(track.particles.size() == 200);
            double sum = 0.0;
            for (const double w : track.weights) {
                CHECK(w >= 0.0);
                sum += w;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("crossing objects with a persistent input id swap keep stable track ids") {
    // X pattern through the origin; the paths cross but the objects never
    // coincide exactly (one runs 0.2 m lower). Upstream ids swap right after
    // the crossing.
    Scenario s;
    s.frame_rate = 15.0;
    const double speed = 1.0;
    const int frames = 151;  // ten seconds, crossing at t = 5
    for (int f = 0; f < frames; ++f) {
        const double t = f / s.frame_rate;
        Frame frame;
        frame.index = f;
        const Vec2 a = Vec2(-5.0 + speed * t, -5.0 + speed * t);
        const Vec2 b = Vec2(5.0 - speed * t, -5.2 + speed * t);
        frame.objects = {{0, a.x(), a.y(), speed, speed}, {1, b.x(), b.y(), -speed, speed}};
        s.ground_truth.push_back(frame);
        s.observed.push_back(frame);
    }
    // swap observed labels from frame 90 (t = 6 s, one second past the crossing)
    for (int f = 90; f < frames; ++f) {
        for (auto& obj : s.observed[static_cast<std::size_t>(f)].objects) obj.id = 1 - obj.id;
    }

    const auto raw_matches = match_tracks_to_truth(s.observed, s.ground_truth, 0.75);
    CHECK(id_switches(raw_matches) >= 2);

    TrackerParams params;
    JpdafTracker tracker(params, 1.0 / s.frame_rate, 17);
    std::vector<Frame> tracked;
    for (const auto& frame : s.observed) {
        std::vector<Vec2> detections;
        for (const auto& obj : frame.objects) detections.push_back(obj.position());
        tracker.step(detections);
        Frame out;
        out.index = frame.index;
        out.objects = tracker.confirmed_states();
        tracked.push_back(std::move(out));
    }
    const auto tracked_matches = match_tracks_to_truth(tracked, s.ground_truth, 0.75);
    CHECK(id_switches(tracked_matches) == 0);
}

TEST_CASE("tracking smooths noisy detections") {
    TrackerParams params;
    const double sigma = 0.2;
    int wins = 0;
    const int seeds = 10;
    for (int seed = 0; seed < seeds; ++seed) {
        auto rng = make_rng(derive_seed(991, seed));
        std::normal_distribution<double> noise(0.0, sigma);
        JpdafTracker tracker(params, kFrameDt, derive_seed(1, seed));

        double raw_err = 0.0, tracked_err = 0.0;
        int samples = 0;
        for (int f = 0; f < 90; ++f) {
            const double t = f * kFrameDt;
            const Vec2 truth(0.5 * t - 2.0, 4.0 - 0.6 * t);
            const Vec2 detection = truth + Vec2(noise(rng), noise(rng));
            tracker.step({detection});
            if (f >= 15) {  // past the confirmation warmup
                REQUIRE(!tracker.confirmed_states().empty());
                const ObjectState est = tracker.confirmed_states()[0];
                raw_err += (detection - truth).norm();
                tracked_err += (Vec2(est.px, est.py) - truth).norm();
                ++samples;
            }
        }
        if (tracked_err / samples < raw_err / samples) ++wins;
    }
    CHECK(wins >= 9);  // the full 30-seed comparison runs in the acceptance suite
}

TEST_CASE("tracker params validation") {
    TrackerParams params;
    params.particle_count = 10;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = TrackerParams{};
    params.detection_prob = 0.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
    params = TrackerParams{};
    params.clutter_density = 0.0;
    CHECK_THROWS_AS(params.validate(), std::invalid_argument);
}
