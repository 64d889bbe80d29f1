#include "collwarn/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "collwarn/parallel.hpp"
#include "collwarn/rng.hpp"

namespace collwarn {

std::string to_string(Method method) {
    switch (method) {
        case Method::risk: return "risk";
        case Method::ttc: return "ttc";
        case Method::distance: return "distance";
    }
    return "unknown";
}

std::string to_string(Variant variant) {
    switch (variant) {
        case Variant::plain: return "plain";
        case Variant::hysteresis: return "hyst";
        case Variant::hysteresis_jpdaf: return "hyst-jpdaf";
    }
    return "unknown";
}

Method parse_method(const std::string& name) {
    if (name == "risk") return Method::risk;
    if (name == "ttc") return Method::ttc;
    if (name == "distance") return Method::distance;
    throw std::invalid_argument("unknown method: " + name);
}

Variant parse_variant(const std::string& name) {
    if (name == "plain") return Variant::plain;
    if (name == "hyst" || name == "hysteresis") return Variant::hysteresis;
    if (name == "hyst-jpdaf" || name == "hysteresis_jpdaf") return Variant::hysteresis_jpdaf;
    throw std::invalid_argument("unknown variant: " + name);
}

void RunConfig::validate() const {
    risk.validate();
    ttc.validate();
    distance.validate();
    hysteresis.validate();
    tracker.validate();
    rules.validate();
    if (!(assoc_gate > 0.0)) throw std::invalid_argument("assoc_gate must be > 0");
}

std::vector<Frame> run_tracker_frames(const std::vector<Frame>& observed,
                                      const TrackerParams& params, double frame_rate,
                                      std::uint64_t seed) {
    JpdafTracker tracker(params, 1.0 / frame_rate, seed);
    std::vector<Frame> out;
    out.reserve(observed.size());
    for (const auto& frame : observed) {
        std::vector<Vec2> detections;
        detections.reserve(frame.objects.size());
        for (const auto& obj : frame.objects) {
            detections.push_back(obj.position());
        }
        tracker.step(detections);

        Frame tracked;
        tracked.index = frame.index;
        tracked.objects = tracker.confirmed_states();
        out.push_back(std::move(tracked));
    }
    return out;
}

WarningStream raw_method_stream(const std::vector<Frame>& frames, const RunConfig& config) {
    WarningStream stream;
    for (const auto& frame : frames) {
        switch (config.method) {
            case Method::risk: {
                for (const auto& [id, warn] : risk_warnings(frame, config.risk)) {
                    if (warn) stream.set(frame.index, id);
                }
                break;
            }
            case Method::ttc: {
                for (const auto& obj : frame.objects) {
                    if (ttc_warning(obj, config.ttc)) stream.set(frame.index, obj.id);
                }
                break;
            }
            case Method::distance: {
                for (const auto& obj : frame.objects) {
                    if (distance_warning(obj, config.distance)) stream.set(frame.index, obj.id);
                }
                break;
            }
        }
    }
    return stream;
}

WarningStream apply_stream_hysteresis(const WarningStream& raw,
                                      const std::vector<Frame>& frames,
                                      const HysteresisParams& params) {
    std::set<std::int64_t> ids;
    for (const auto& frame : frames) {
        for (const auto& obj : frame.objects) ids.insert(obj.id);
    }

    WarningStream out;
    const auto frame_count = static_cast<std::int64_t>(frames.size());
    for (const std::int64_t id : ids) {
        HysteresisGate gate(params);
        for (std::int64_t f = 0; f < frame_count; ++f) {
            if (gate.step(raw.warn(f, id))) out.set(f, id);
        }
    }
    return out;
}

EvalResult evaluate_scenario(const Scenario& scenario, const RunConfig& config,
                             std::uint64_t scenario_salt) {
    const std::vector<Frame>* frames = &scenario.observed;
    std::vector<Frame> tracked;
    if (config.variant == Variant::hysteresis_jpdaf) {
        tracked = run_tracker_frames(scenario.observed, config.tracker, scenario.frame_rate,
                                     derive_seed(config.seed, 0x747261ull, scenario_salt));
        frames = &tracked;
    }

    WarningStream stream = raw_method_stream(*frames, config);
    if (config.variant != Variant::plain) {
        stream = apply_stream_hysteresis(stream, *frames, config.hysteresis);
    }

    const WarningStream on_truth =
        associate_streams(stream, *frames, scenario.ground_truth, config.assoc_gate);
    const WarningStream ideal = ideal_warning(scenario, config.rules);

    EvalResult result;
    result.counts = confusion(ideal, on_truth);
    result.iou = iou(result.counts);
    return result;
}

SuiteResult evaluate_suite(const std::vector<Scenario>& suite, const RunConfig& config,
                           int workers) {
    SuiteResult result;
    result.per_scenario.resize(suite.size());
    parallel_for(suite.size(), workers, [&](std::size_t i) {
        result.per_scenario[i] = evaluate_scenario(suite[i], config, i);
    });
    for (const auto& r : result.per_scenario) {
        result.pooled += r.counts;
    }
    result.pooled_iou = iou(result.pooled);
    return result;
}

ParamSpace risk_param_space() {
    return {{
        {"risk_threshold", 1e-3, 0.5, true},
        {"trajectory_length", 3.0, 10.0, false},
        {"trajectory_interval", 0.02, 0.5, true},
        {"escape_rate", 0.01, 2.0, true},
    }};
}

ParamSpace ttc_param_space() {
    return {{
        {"distance_threshold", 0.2, 3.0, false},
        {"time_threshold", 0.5, 8.0, false},
    }};
}

ParamSpace distance_param_space() {
    return {{
        {"distance_threshold", 0.2, 3.0, false},
    }};
}

ParamSpace hysteresis_param_space() {
    return {{
        {"n_on", 1.0, 8.0, false},
        {"n_off", 1.0, 30.0, false},
    }};
}

ParamSpace method_param_space(Method method) {
    switch (method) {
        case Method::risk: return risk_param_space();
        case Method::ttc: return ttc_param_space();
        case Method::distance: return distance_param_space();
    }
    throw std::invalid_argument("unknown method");
}

RiskParams decode_risk_params(const std::vector<double>& v, const RiskParams& base) {
    if (v.size() != 4) throw std::invalid_argument("risk parameter vector must have 4 entries");
    RiskParams params = base;
    params.risk_threshold = v[0];
    params.horizon_s_max = v[1];
    params.interval_ds = v[2];
    params.escape_rate = v[3];
    return params;
}

TtcParams decode_ttc_params(const std::vector<double>& v) {
    if (v.size() != 2) throw std::invalid_argument("ttc parameter vector must have 2 entries");
    return {v[0], v[1]};
}

DistanceParams decode_distance_params(const std::vector<double>& v, const DistanceParams& base) {
    if (v.size() != 1) {
        throw std::invalid_argument("distance parameter vector must have 1 entry");
    }
    DistanceParams params = base;
    params.distance_threshold = v[0];
    return params;
}

HysteresisParams decode_hysteresis_params(const std::vector<double>& v) {
    if (v.size() != 2) {
        throw std::invalid_argument("hysteresis parameter vector must have 2 entries");
    }
    HysteresisParams params;
    params.n_on = std::max(1, static_cast<int>(std::lround(v[0])));
    params.n_off = std::max(1, static_cast<int>(std::lround(v[1])));
    return params;
}

std::vector<double> method_defaults(Method method, const RunConfig& config) {
    switch (method) {
        case Method::risk:
            return {config.risk.risk_threshold, config.risk.horizon_s_max,
                    config.risk.interval_ds, config.risk.escape_rate};
        case Method::ttc:
            return {config.ttc.distance_threshold, config.ttc.time_threshold};
        case Method::distance:
            return {config.distance.distance_threshold};
    }
    throw std::invalid_argument("unknown method");
}

void apply_method_params(RunConfig& config, Method method, const std::vector<double>& v) {
    switch (method) {
        case Method::risk:
            config.risk = decode_risk_params(v, config.risk);
            return;
        case Method::ttc:
            config.ttc = decode_ttc_params(v);
            return;
        case Method::distance:
            config.distance = decode_distance_params(v, config.distance);
            return;
    }
    throw std::invalid_argument("unknown method");
}

namespace {

double noisy_pooled_iou(const std::vector<Scenario>& suite, const RunConfig& config,
                        double sigma, double swap_prob, int noise_repeats,
                        std::uint64_t noise_seed) {
    if (sigma == 0.0 && swap_prob == 0.0) {
        return evaluate_suite(suite, config, 1).pooled_iou;
    }
    double total = 0.0;
    for (int rep = 0; rep < noise_repeats; ++rep) {
        ConfusionCounts pooled;
        for (std::size_t i = 0; i < suite.size(); ++i) {
            const NoiseSpec spec{sigma, swap_prob,
                                 derive_seed(noise_seed, 0x6e6f69ull, rep, i)};
            const Scenario noisy = apply_noise(suite[i], spec);
            pooled += evaluate_scenario(noisy, config, derive_seed(i, rep)).counts;
        }
        total += iou(pooled);
    }
    return total / static_cast<double>(noise_repeats);
}

}  // namespace

FitnessFn make_method_fitness(const std::vector<Scenario>& suite, const RunConfig& base,
                              double sigma, double swap_prob, int noise_repeats,
                              std::uint64_t noise_seed) {
    return [=, &suite](const std::vector<double>& v) {
        RunConfig config = base;
        apply_method_params(config, config.method, v);
        return noisy_pooled_iou(suite, config, sigma, swap_prob, noise_repeats, noise_seed);
    };
}

FitnessFn make_hysteresis_fitness(const std::vector<Scenario>& suite, const RunConfig& base,
                                  double sigma, double swap_prob, int noise_repeats,
                                  std::uint64_t noise_seed) {
    return [=, &suite](const std::vector<double>& v) {
        RunConfig config = base;
        config.hysteresis = decode_hysteresis_params(v);
        return noisy_pooled_iou(suite, config, sigma, swap_prob, noise_repeats, noise_seed);
    };
}

std::vector<SweepCell> sweep_noise(const std::vector<Scenario>& suite,
                                   const std::vector<RunConfig>& configs,
                                   const std::vector<double>& sigma_grid,
                                   const std::vector<double>& p_grid, int repeats,
                                   std::uint64_t base_seed, int workers) {
    if (sigma_grid.empty() || p_grid.empty()) {
        throw std::invalid_argument("noise grids must be non-empty");
    }
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

    std::vector<SweepCell> cells;
    for (const auto& config : configs) {
        for (const double sigma : sigma_grid) {
            for (const double p : p_grid) {
                SweepCell cell;
                cell.method = config.method;
                cell.variant = config.variant;
                cell.sigma = sigma;
                cell.swap_prob = p;
                cell.ious.assign(static_cast<std::size_t>(repeats), 0.0);
                cells.push_back(std::move(cell));
            }
        }
    }

    const std::size_t grid = sigma_grid.size() * p_grid.size();
    const auto reps = static_cast<std::size_t>(repeats);
    parallel_for(cells.size() * reps, workers, [&](std::size_t item) {
        const std::size_t cell_idx = item / reps;
        const std::size_t rep = item % reps;
        SweepCell& cell = cells[cell_idx];
        const RunConfig& config = configs[cell_idx / grid];

        ConfusionCounts pooled;
        for (std::size_t i = 0; i < suite.size(); ++i) {
            // the noise draw depends on (sigma, p, repeat, scenario) but not
            // on the method/variant, so every config sees the same data
            const std::size_t sigma_idx = (cell_idx % grid) / p_grid.size();
            const std::size_t p_idx = cell_idx % p_grid.size();
            const NoiseSpec spec{cell.sigma, cell.swap_prob,
                                 derive_seed(base_seed, sigma_idx * 97 + p_idx, rep, i)};
            const Scenario noisy = apply_noise(suite[i], spec);
            pooled += evaluate_scenario(noisy, config, derive_seed(i, rep)).counts;
        }
        cell.ious[rep] = iou(pooled);
    });

    for (auto& cell : cells) {
        double mean = 0.0;
        for (const double v : cell.ious) mean += v;
        mean /= static_cast<double>(cell.ious.size());
        cell.mean = mean;
        const auto [lo, hi] = std::minmax_element(cell.ious.begin(), cell.ious.end());
        if (*lo == *hi || cell.ious.size() < 2) {
            cell.stddev = 0.0;  // identical repeats carry exactly zero spread
        } else {
            double var = 0.0;
            for (const double v : cell.ious) var += (v - mean) * (v - mean);
            cell.stddev = std::sqrt(var / static_cast<double>(cell.ious.size() - 1));
        }
    }
    return cells;
}

}  // namespace collwarn
