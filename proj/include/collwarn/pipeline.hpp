#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "collwarn/baselines.hpp"
#include "collwarn/core.hpp"
#include "collwarn/hysteresis.hpp"
#include "collwarn/ideal.hpp"
#include "collwarn/jpdaf.hpp"
#include "collwarn/metrics.hpp"
#include "collwarn/risk.hpp"
#include "collwarn/synth.hpp"
#include "collwarn/tune.hpp"

namespace collwarn {

enum class Method { risk, ttc, distance };
enum class Variant { plain, hysteresis, hysteresis_jpdaf };

std::string to_string(Method method);
std::string to_string(Variant variant);
Method parse_method(const std::string& name);
Variant parse_variant(const std::string& name);

/// Everything one evaluation run needs: the chosen method and variant plus
/// the parameter sets they reference.
struct RunConfig {
    Method method = Method::risk;
    Variant variant = Variant::plain;
    RiskParams risk;
    TtcParams ttc;
    DistanceParams distance;
    HysteresisParams hysteresis;
    TrackerParams tracker;
    IdealRules rules;
    double assoc_gate = 0.75;  // m, warning-to-object matching gate
    std::uint64_t seed = 0;

    void validate() const;
};

/// Replays the observed channel through the tracker and returns per-frame
/// confirmed track states (same frame count as the input).
std::vector<Frame> run_tracker_frames(const std::vector<Frame>& observed,
                                      const TrackerParams& params, double frame_rate,
                                      std::uint64_t seed);

/// Raw per-frame method decisions on the given frames (no post-processing).
WarningStream raw_method_stream(const std::vector<Frame>& frames, const RunConfig& config);

/// Applies the per-object hysteresis gate to a raw stream. Frames where an id
/// is absent count as raw-clear frames for that id's gate.
WarningStream apply_stream_hysteresis(const WarningStream& raw,
                                      const std::vector<Frame>& frames,
                                      const HysteresisParams& params);

struct EvalResult {
    ConfusionCounts counts;
    double iou = 1.0;
};

/// Full pipeline for one scenario: observed states -> (optional tracker) ->
/// method warnings -> (optional hysteresis) -> association onto ground-truth
/// ids -> confusion against the ideal warning. `scenario_salt` decorrelates
/// tracker seeds across a suite.
EvalResult evaluate_scenario(const Scenario& scenario, const RunConfig& config,
                             std::uint64_t scenario_salt = 0);

struct SuiteResult {
    std::vector<EvalResult> per_scenario;
    ConfusionCounts pooled;
    double pooled_iou = 1.0;
};

SuiteResult evaluate_suite(const std::vector<Scenario>& suite, const RunConfig& config,
                           int workers = 1);

// Tuned parameter spaces per method (risk threshold, horizon, interval and
// escape rate; TTC distance/time; distance threshold) and the hysteresis pair.
ParamSpace risk_param_space();
ParamSpace ttc_param_space();
ParamSpace distance_param_space();
ParamSpace hysteresis_param_space();
ParamSpace method_param_space(Method method);

RiskParams decode_risk_params(const std::vector<double>& v, const RiskParams& base);
TtcParams decode_ttc_params(const std::vector<double>& v);
DistanceParams decode_distance_params(const std::vector<double>& v, const DistanceParams& base);
HysteresisParams decode_hysteresis_params(const std::vector<double>& v);

/// Default parameter vector of a method, used to plant the current settings
/// into a tuner's initial population.
std::vector<double> method_defaults(Method method, const RunConfig& config);

/// Installs a decoded method parameter vector into the config.
void apply_method_params(RunConfig& config, Method method, const std::vector<double>& v);

/// Pooled-IoU fitness of a method parameter vector over a suite, optionally
/// under observation noise averaged across `noise_repeats` seeded draws.
FitnessFn make_method_fitness(const std::vector<Scenario>& suite, const RunConfig& base,
                              double sigma = 0.0, double swap_prob = 0.0, int noise_repeats = 1,
                              std::uint64_t noise_seed = 0);

/// Same, but the vector being optimised is (n_on, n_off) with the method
/// parameters held fixed.
FitnessFn make_hysteresis_fitness(const std::vector<Scenario>& suite, const RunConfig& base,
                                  double sigma, double swap_prob, int noise_repeats,
                                  std::uint64_t noise_seed);

struct SweepCell {
    Method method = Method::risk;
    Variant variant = Variant::plain;
    double sigma = 0.0;
    double swap_prob = 0.0;
    std::vector<double> ious;  // one pooled IoU per repeat
    double mean = 0.0;
    double stddev = 0.0;
};

/// Noise sweep: for every (config, sigma, p) cell, evaluates `repeats` seeded
/// noise draws of the whole suite and reports pooled IoU per repeat.
std::vector<SweepCell> sweep_noise(const std::vector<Scenario>& suite,
                                   const std::vector<RunConfig>& configs,
                                   const std::vector<double>& sigma_grid,
                                   const std::vector<double>& p_grid, int repeats,
                                   std::uint64_t base_seed, int workers = 1);

}  // namespace collwarn
