#include "collwarn/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "collwarn/rng.hpp"

namespace collwarn {

std::string to_string(TemplateKind kind) {
    switch (kind) {
        case TemplateKind::head_on: return "head_on";
        case TemplateKind::side_collision: return "side_collision";
        case TemplateKind::crossing: return "crossing";
        case TemplateKind::crowd_approach: return "crowd_approach";
        case TemplateKind::static_pass: return "static_pass";
        case TemplateKind::receding: return "receding";
    }
    return "unknown";
}

void ScenarioTemplate::validate() const {
    if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be > 0");
    if (speed_min < 0.0 || speed_max < speed_min) {
        throw std::invalid_argument("require 0 <= speed_min <= speed_max");
    }
    if (object_count < 1) throw std::invalid_argument("object_count must be >= 1");
    if (miss_distance < 0.0) throw std::invalid_argument("miss distance must be >= 0");
    if (contact_time_s >= 0.0 && contact_time_s > duration_s) {
        throw std::invalid_argument("contact time must lie within the scenario duration");
    }
    if (!(frame_rate > 0.0)) throw std::invalid_argument("frame_rate must be > 0");
}

namespace {

// Constant-turn-rate apparent motion, anchored at the closest-approach state:
// at time t_anchor the object sits at `anchor` travelling along `heading`.
struct ArcMotion {
    Vec2 anchor = Vec2::Zero();
    double t_anchor = 0.0;
    double speed = 1.0;
    double heading = 0.0;    // rad, travel direction at t_anchor
    double turn_rate = 0.0;  // rad/s

    Vec2 position(double t) const {
        const double dt = t - t_anchor;
        if (std::abs(turn_rate) < 1e-9) {
            return anchor + speed * dt * Vec2(std::cos(heading), std::sin(heading));
        }
        const double h1 = heading + turn_rate * dt;
        return anchor + (speed / turn_rate) *
                            Vec2(std::sin(h1) - std::sin(heading),
                                 -std::cos(h1) + std::cos(heading));
    }

    Vec2 velocity(double t) const {
        const double h = heading + turn_rate * (t - t_anchor);
        return speed * Vec2(std::cos(h), std::sin(h));
    }
};

constexpr double kPi = std::numbers::pi;

double draw_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int draw_sign(std::mt19937_64& rng) {
    return std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? -1 : 1;
}

}  // namespace

Scenario generate_scenario(const ScenarioTemplate& tmpl) {
    tmpl.validate();
    auto rng = make_rng(derive_seed(tmpl.seed, 0x67656eull));

    const double contact =
        tmpl.contact_time_s >= 0.0 ? tmpl.contact_time_s : 0.75 * tmpl.duration_s;
    const double speed = draw_uniform(rng, tmpl.speed_min, tmpl.speed_max);

    std::vector<ArcMotion> motions;
    switch (tmpl.kind) {
        case TemplateKind::head_on: {
            const double side = tmpl.miss_distance > 0.0 ? draw_sign(rng) : 1;
            motions.push_back({Vec2(side * tmpl.miss_distance, 0.0), contact, speed,
                               -kPi / 2.0, tmpl.turn_rate});
            break;
        }
        case TemplateKind::side_collision: {
            const int side = draw_sign(rng);
            // crosses the centreline miss_distance metres in front of the user
            motions.push_back({Vec2(0.0, tmpl.miss_distance), contact, speed,
                               side > 0 ? 0.0 : kPi, tmpl.turn_rate});
            break;
        }
        case TemplateKind::crossing: {
            const double bearing = draw_uniform(rng, -0.87, 0.87);  // within ~50 deg of ahead
            const Vec2 cpa =
                tmpl.miss_distance * Vec2(std::sin(bearing), std::cos(bearing));
            // travel perpendicular to the closest-approach direction; the
            // bearing is measured off +y, headings off +x
            const double cpa_angle = kPi / 2.0 - bearing;
            const double heading = cpa_angle + (draw_sign(rng) > 0 ? kPi / 2.0 : -kPi / 2.0);
            motions.push_back({cpa, contact, speed, heading, tmpl.turn_rate});
            break;
        }
        case TemplateKind::crowd_approach: {
            const double side = draw_sign(rng);
            motions.push_back({Vec2(side * tmpl.miss_distance, 0.0), contact, speed,
                               -kPi / 2.0, tmpl.turn_rate});
            for (int j = 1; j < tmpl.object_count; ++j) {
                const double lane_side = (j % 2 == 0) ? 1.0 : -1.0;
                const double lane =
                    lane_side * (2.4 + 0.55 * ((j / 2) % 3) + draw_uniform(rng, 0.0, 0.2));
                const double row = 3.0 + 1.2 * j + draw_uniform(rng, 0.0, 0.5);
                const double bystander_speed =
                    speed * draw_uniform(rng, 0.85, 1.15);
                motions.push_back({Vec2(lane, row), 0.0, bystander_speed, -kPi / 2.0, 0.0});
            }
            break;
        }
        case TemplateKind::static_pass: {
            const double side = draw_sign(rng);
            motions.push_back(
                {Vec2(side * tmpl.miss_distance, 0.0), contact, speed, -kPi / 2.0, 0.0});
            break;
        }
        case TemplateKind::receding: {
            const double bearing = draw_uniform(rng, -1.0, 1.0);
            const Vec2 dir(std::sin(bearing), std::cos(bearing));
            motions.push_back({tmpl.miss_distance * dir, 0.0, speed,
                               std::atan2(dir.y(), dir.x()), 0.0});
            break;
        }
    }

    Scenario scenario;
    scenario.frame_rate = tmpl.frame_rate;
    scenario.metadata["template"] = to_string(tmpl.kind);
    scenario.metadata["seed"] = std::to_string(tmpl.seed);

    const auto frame_count =
        static_cast<std::int64_t>(tmpl.duration_s * tmpl.frame_rate + 0.5) + 1;
    scenario.ground_truth.reserve(frame_count);
    for (std::int64_t f = 0; f < frame_count; ++f) {
        const double t = static_cast<double>(f) / tmpl.frame_rate;
        Frame frame;
        frame.index = f;
        frame.objects.reserve(motions.size());
        for (std::size_t i = 0; i < motions.size(); ++i) {
            const Vec2 pos = motions[i].position(t);
            const Vec2 vel = motions[i].velocity(t);
            frame.objects.push_back(
                {static_cast<std::int64_t>(i), pos.x(), pos.y(), vel.x(), vel.y()});
        }
        scenario.ground_truth.push_back(std::move(frame));
    }
    scenario.observed = scenario.ground_truth;
    return scenario;
}

Scenario add_position_noise(const Scenario& scenario, const NoiseSpec& spec) {
    if (spec.position_sigma < 0.0) throw std::invalid_argument("position_sigma must be >= 0");
    Scenario out = scenario;
    out.observed = scenario.ground_truth;
    if (spec.position_sigma == 0.0) {
        return out;
    }
    auto rng = make_rng(derive_seed(spec.seed, 0x706f73ull));
    std::normal_distribution<double> noise(0.0, spec.position_sigma);
    for (auto& frame : out.observed) {
        for (auto& obj : frame.objects) {
            obj.px += noise(rng);
            obj.py += noise(rng);
        }
    }
    return recompute_velocities(out);
}

Scenario add_id_swaps(const Scenario& scenario, const NoiseSpec& spec) {
    if (spec.id_swap_prob < 0.0 || spec.id_swap_prob > 1.0) {
        throw std::invalid_argument("id_swap_prob must be in [0, 1]");
    }
    Scenario out = scenario;
    if (spec.id_swap_prob == 0.0) return out;

    auto rng = make_rng(derive_seed(spec.seed, 0x737761ull));
    std::uniform_real_distribution<double> uniform01(0.0, 1.0);

    // current relabelling from raw id to swapped id, composed frame by frame
    std::unordered_map<std::int64_t, std::int64_t> relabel;
    auto apply = [&relabel](std::int64_t id) {
        const auto it = relabel.find(id);
        return it == relabel.end() ? id : it->second;
    };

    for (std::size_t f = 1; f < out.observed.size(); ++f) {
        Frame& frame = out.observed[f];
        const double draw = uniform01(rng);
        if (draw < spec.id_swap_prob && frame.objects.size() >= 2) {
            std::vector<std::int64_t> visible;
            visible.reserve(frame.objects.size());
            for (const auto& obj : frame.objects) visible.push_back(apply(obj.id));
            std::sort(visible.begin(), visible.end());

            const auto k = visible.size();
            const auto pair_count = k * (k - 1) / 2;
            auto pick = std::uniform_int_distribution<std::size_t>(0, pair_count - 1)(rng);
            std::size_t i = 0;
            while (pick >= k - 1 - i) {
                pick -= k - 1 - i;
                ++i;
            }
            const std::int64_t a = visible[i];
            const std::int64_t b = visible[i + 1 + pick];

            // compose the transposition (a b) onto the relabelling
            std::vector<std::int64_t> raw_ids;
            for (const auto& fr : out.observed) {
                for (const auto& obj : fr.objects) raw_ids.push_back(obj.id);
            }
            std::sort(raw_ids.begin(), raw_ids.end());
            raw_ids.erase(std::unique(raw_ids.begin(), raw_ids.end()), raw_ids.end());
            for (const std::int64_t raw : raw_ids) {
                const std::int64_t cur = apply(raw);
                if (cur == a) {
                    relabel[raw] = b;
                } else if (cur == b) {
                    relabel[raw] = a;
                }
            }
        }
        for (auto& obj : frame.objects) {
            obj.id = apply(obj.id);
        }
    }
    return out;
}

Scenario recompute_velocities(const Scenario& scenario) {
    Scenario out = scenario;
    std::map<std::int64_t, Vec2> prev_pos;
    for (auto& frame : out.observed) {
        std::map<std::int64_t, Vec2> cur_pos;
        for (auto& obj : frame.objects) {
            cur_pos[obj.id] = obj.position();
            const auto it = prev_pos.find(obj.id);
            if (it == prev_pos.end()) {
                obj.vx = 0.0;
                obj.vy = 0.0;
            } else {
                obj.vx = (obj.px - it->second.x()) * out.frame_rate;
                obj.vy = (obj.py - it->second.y()) * out.frame_rate;
            }
        }
        prev_pos = std::move(cur_pos);
    }
    return out;
}

Scenario apply_noise(const Scenario& scenario, const NoiseSpec& spec) {
    if (spec.position_sigma == 0.0 && spec.id_swap_prob == 0.0) {
        return scenario;
    }
    NoiseSpec pos_spec{spec.position_sigma, 0.0, derive_seed(spec.seed, 1)};
    NoiseSpec swap_spec{0.0, spec.id_swap_prob, derive_seed(spec.seed, 2)};
    Scenario noisy = add_id_swaps(add_position_noise(scenario, pos_spec), swap_spec);
    return recompute_velocities(noisy);
}

std::vector<ScenarioTemplate> standard_suite_templates(std::uint64_t base_seed) {
    struct Row {
        TemplateKind kind;
        double duration;
        double speed_lo, speed_hi;
        int objects;
        double miss;
        double contact;
        double turn_rate;
    };
    // Four scenarios per kind; 60 objects total of which 16 are on a
    // warn-worthy course (roughly a quarter).
    const Row rows[] = {
        {TemplateKind::head_on, 11.0, 0.55, 0.70, 1, 0.00, 9.6, 0.0},
        {TemplateKind::head_on, 12.0, 0.95, 1.10, 1, 0.12, 10.7, 0.0},
        {TemplateKind::head_on, 13.0, 1.30, 1.50, 1, 0.18, 10.0, 0.0},
        {TemplateKind::head_on, 14.0, 1.70, 1.95, 1, 0.08, 10.4, 0.0},
        {TemplateKind::side_collision, 12.0, 0.60, 0.80, 1, 0.35, 8.5, 0.0},
        {TemplateKind::side_collision, 14.0, 0.90, 1.10, 1, 0.55, 9.8, 0.0},
        {TemplateKind::side_collision, 16.0, 1.20, 1.45, 1, 0.70, 11.0, 0.0},
        {TemplateKind::side_collision, 18.0, 1.50, 1.90, 1, 0.45, 12.5, -0.08},
        {TemplateKind::crossing, 12.0, 0.70, 0.90, 1, 0.60, 8.4, 0.0},
        {TemplateKind::crossing, 15.0, 1.00, 1.25, 1, 0.85, 10.5, 0.06},
        {TemplateKind::crossing, 18.0, 0.80, 1.00, 1, 2.60, 12.6, 0.0},
        {TemplateKind::crossing, 21.0, 1.30, 1.60, 1, 3.00, 14.7, 0.0},
        {TemplateKind::crowd_approach, 15.0, 0.60, 0.80, 10, 0.15, 10.5, 0.0},
        {TemplateKind::crowd_approach, 18.0, 0.80, 1.00, 10, 0.22, 12.6, 0.0},
        {TemplateKind::crowd_approach, 22.0, 1.00, 1.20, 10, 0.12, 15.4, 0.05},
        {TemplateKind::crowd_approach, 26.0, 0.70, 0.90, 10, 0.25, 18.2, 0.0},
        {TemplateKind::static_pass, 10.0, 0.80, 1.00, 1, 0.40, 6.5, 0.0},
        {TemplateKind::static_pass, 12.0, 1.00, 1.20, 1, 0.70, 7.8, 0.0},
        {TemplateKind::static_pass, 14.0, 1.20, 1.40, 1, 1.60, 9.1, 0.0},
        {TemplateKind::static_pass, 16.0, 0.90, 1.10, 1, 2.60, 10.4, 0.0},
        {TemplateKind::receding, 10.0, 0.50, 0.70, 1, 2.30, -1.0, 0.0},
        {TemplateKind::receding, 11.0, 0.70, 0.90, 1, 2.50, -1.0, 0.0},
        {TemplateKind::receding, 12.0, 1.00, 1.30, 1, 2.80, -1.0, 0.0},
        {TemplateKind::receding, 13.0, 1.40, 1.80, 1, 3.10, -1.0, 0.0},
    };

    std::vector<ScenarioTemplate> templates;
    templates.reserve(std::size(rows));
    for (std::size_t i = 0; i < std::size(rows); ++i) {
        const Row& r = rows[i];
        ScenarioTemplate t;
        t.kind = r.kind;
        t.duration_s = r.duration;
        t.speed_min = r.speed_lo;
        t.speed_max = r.speed_hi;
        t.object_count = r.objects;
        t.miss_distance = r.miss;
        t.contact_time_s = r.contact;
        t.turn_rate = r.turn_rate;
        t.seed = derive_seed(base_seed, 0x7375697465ull, i);
        templates.push_back(t);
    }
    return templates;
}

std::vector<Scenario> generate_standard_suite(std::uint64_t base_seed) {
    std::vector<Scenario> suite;
    const auto templates = standard_suite_templates(base_seed);
    suite.reserve(templates.size());
    for (std::size_t i = 0; i < templates.size(); ++i) {
        Scenario s = generate_scenario(templates[i]);
        s.metadata["suite_index"] = std::to_string(i);
        suite.push_back(std::move(s));
    }
    return suite;
}

}  // namespace collwarn
