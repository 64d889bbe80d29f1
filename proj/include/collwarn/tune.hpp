#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace collwarn {

struct ParamDim {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    bool log_scale = false;
};

/// Box-constrained parameter space. Log-scaled dimensions are handled in the
/// log domain by the optimiser and sampler.
struct ParamSpace {
    std::vector<ParamDim> dims;

    void validate() const;
    std::size_t size() const { return dims.size(); }
};

struct GaConfig {
    int population_size = 50;
    int generations = 40;
    int tournament_size = 3;
    double crossover_rate = 0.9;
    double mutation_rate = 0.2;
    double mutation_sigma = 0.1;  // fraction of each dimension's range
    int elitism_count = 2;
    std::uint64_t seed = 0;

    void validate() const;
};

using FitnessFn = std::function<double(const std::vector<double>&)>;

struct GaResult {
    std::vector<double> best_params;
    double best_fitness = 0.0;
    std::vector<double> history;  // best-ever fitness after each generation
};

/// Real-coded genetic algorithm: tournament selection, blend crossover,
/// Gaussian mutation, elitism. Out-of-range genes are clamped to the box.
/// `initial_guesses` (decoded parameter vectors) are planted into the first
/// population. The fitness function must be deterministic; evaluations within
/// a generation may run on `workers` threads without affecting the result.
GaResult ga_optimize(const ParamSpace& space, const FitnessFn& fitness, const GaConfig& config,
                     const std::vector<std::vector<double>>& initial_guesses = {},
                     int workers = 1);

/// Latin-hypercube design over the box, decoded to parameter values.
std::vector<std::vector<double>> latin_hypercube(const ParamSpace& space, int n_samples,
                                                 std::uint64_t seed);

struct SweepSample {
    std::vector<double> params;
    double value = 0.0;
};

std::vector<SweepSample> parameter_sweep(const ParamSpace& space, const FitnessFn& fitness,
                                         int n_samples, std::uint64_t seed, int workers = 1);

/// Pairwise Spearman rank correlation over the parameter columns plus the
/// swept value as the final row/column. Ties get average ranks. Requires at
/// least 3 samples.
Eigen::MatrixXd spearman_matrix(const std::vector<SweepSample>& samples);

/// Average ranks (1-based) with ties sharing their mean rank.
std::vector<double> average_ranks(const std::vector<double>& values);

}  // namespace collwarn
