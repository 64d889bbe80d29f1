#include "collwarn/tune.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "collwarn/parallel.hpp"
#include "collwarn/rng.hpp"

namespace collwarn {

void ParamSpace::validate() const {
    if (dims.empty()) throw std::invalid_argument("parameter space is empty");
    for (const auto& dim : dims) {
        if (!(dim.lower < dim.upper)) {
            throw std::invalid_argument("parameter " + dim.name + ": lower must be < upper");
        }
        if (dim.log_scale && !(dim.lower > 0.0)) {
            throw std::invalid_argument("parameter " + dim.name +
                                        ": log scale requires lower > 0");
        }
    }
}

void GaConfig::validate() const {
    if (population_size < 4) throw std::invalid_argument("population_size must be >= 4");
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (tournament_size < 1) throw std::invalid_argument("tournament_size must be >= 1");
    if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 ||
        mutation_rate > 1.0) {
        throw std::invalid_argument("rates must be in [0, 1]");
    }
    if (!(mutation_sigma > 0.0)) throw std::invalid_argument("mutation_sigma must be > 0");
    if (elitism_count < 0 || elitism_count >= population_size) {
        throw std::invalid_argument("elitism_count must be in [0, population_size)");
    }
}

namespace {

// Genomes live in the internal domain: the raw value for linear dimensions,
// its logarithm for log-scaled ones.
struct InternalBox {
    std::vector<double> lo, hi;

    explicit InternalBox(const ParamSpace& space) {
        lo.reserve(space.dims.size());
        hi.reserve(space.dims.size());
        for (const auto& dim : space.dims) {
            lo.push_back(dim.log_scale ? std::log(dim.lower) : dim.lower);
            hi.push_back(dim.log_scale ? std::log(dim.upper) : dim.upper);
        }
    }

    std::size_t size() const { return lo.size(); }

    void clamp(std::vector<double>& genome) const {
        for (std::size_t d = 0; d < genome.size(); ++d) {
            genome[d] = std::clamp(genome[d], lo[d], hi[d]);
        }
    }
};

std::vector<double> decode(const ParamSpace& space, const std::vector<double>& genome) {
    std::vector<double> params(genome.size());
    for (std::size_t d = 0; d < genome.size(); ++d) {
        params[d] = space.dims[d].log_scale ? std::exp(genome[d]) : genome[d];
        params[d] = std::clamp(params[d], space.dims[d].lower, space.dims[d].upper);
    }
    return params;
}

std::vector<double> encode(const ParamSpace& space, const std::vector<double>& params) {
    std::vector<double> genome(params.size());
    for (std::size_t d = 0; d < params.size(); ++d) {
        genome[d] = space.dims[d].log_scale ? std::log(params[d]) : params[d];
    }
    return genome;
}

}  // namespace

GaResult ga_optimize(const ParamSpace& space, const FitnessFn& fitness, const GaConfig& config,
                     const std::vector<std::vector<double>>& initial_guesses, int workers) {
    space.validate();
    config.validate();
    const InternalBox box(space);
    const std::size_t n_dims = box.size();
    const auto pop_size = static_cast<std::size_t>(config.population_size);

    auto rng = make_rng(derive_seed(config.seed, 0x6761ull));
    std::uniform_real_distribution<double> uniform01(0.0, 1.0);

    std::vector<std::vector<double>> population;
    population.reserve(pop_size);
    for (const auto& guess : initial_guesses) {
        if (population.size() >= pop_size) break;
        if (guess.size() != n_dims) {
            throw std::invalid_argument("initial guess has wrong dimensionality");
        }
        auto genome = encode(space, guess);
        box.clamp(genome);
        population.push_back(std::move(genome));
    }
    while (population.size() < pop_size) {
        std::vector<double> genome(n_dims);
        for (std::size_t d = 0; d < n_dims; ++d) {
            genome[d] = box.lo[d] + uniform01(rng) * (box.hi[d] - box.lo[d]);
        }
        population.push_back(std::move(genome));
    }

    std::vector<double> scores(pop_size);
    auto evaluate = [&](const std::vector<std::size_t>& indices) {
        parallel_for(indices.size(), workers, [&](std::size_t k) {
            const std::size_t i = indices[k];
            scores[i] = fitness(decode(space, population[i]));
        });
    };
    {
        std::vector<std::size_t> all(pop_size);
        std::iota(all.begin(), all.end(), 0);
        evaluate(all);
    }

    GaResult result;
    auto update_best = [&]() {
        for (std::size_t i = 0; i < pop_size; ++i) {
            if (result.best_params.empty() || scores[i] > result.best_fitness) {
                result.best_fitness = scores[i];
                result.best_params = decode(space, population[i]);
            }
        }
    };
    update_best();

    std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
    auto tournament = [&]() {
        std::size_t best = pick(rng);
        for (int k = 1; k < config.tournament_size; ++k) {
            const std::size_t challenger = pick(rng);
            if (scores[challenger] > scores[best]) best = challenger;
        }
        return best;
    };

    for (int gen = 0; gen < config.generations; ++gen) {
        // rank by fitness for elitism (stable, ties keep their index order)
        std::vector<std::size_t> order(pop_size);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return scores[a] > scores[b];
        });

        std::vector<std::vector<double>> next_pop;
        std::vector<double> next_scores(pop_size, 0.0);
        std::vector<std::size_t> to_evaluate;
        next_pop.reserve(pop_size);
        for (int e = 0; e < config.elitism_count; ++e) {
            next_pop.push_back(population[order[static_cast<std::size_t>(e)]]);
            next_scores[next_pop.size() - 1] = scores[order[static_cast<std::size_t>(e)]];
        }
        while (next_pop.size() < pop_size) {
            const auto& parent_a = population[tournament()];
            const auto& parent_b = population[tournament()];
            std::vector<double> child(n_dims);
            if (uniform01(rng) < config.crossover_rate) {
                // blend crossover: uniform within the parents' span widened by
                // a tenth of that span on each side
                for (std::size_t d = 0; d < n_dims; ++d) {
                    const double lo = std::min(parent_a[d], parent_b[d]);
                    const double hi = std::max(parent_a[d], parent_b[d]);
                    const double span = hi - lo;
                    child[d] = lo - 0.1 * span + uniform01(rng) * (span + 0.2 * span);
                }
            } else {
                child = parent_a;
            }
            for (std::size_t d = 0; d < n_dims; ++d) {
                if (uniform01(rng) < config.mutation_rate) {
                    const double sigma = config.mutation_sigma * (box.hi[d] - box.lo[d]);
                    child[d] += std::normal_distribution<double>(0.0, sigma)(rng);
                }
            }
            box.clamp(child);
            next_pop.push_back(std::move(child));
            to_evaluate.push_back(next_pop.size() - 1);
        }

        population = std::move(next_pop);
        scores = std::move(next_scores);
        evaluate(to_evaluate);
        update_best();
        result.history.push_back(result.best_fitness);
    }
    return result;
}

std::vector<std::vector<double>> latin_hypercube(const ParamSpace& space, int n_samples,
                                                 std::uint64_t seed) {
    space.validate();
    if (n_samples < 2) throw std::invalid_argument("n_samples must be >= 2");
    const InternalBox box(space);
    const std::size_t n = static_cast<std::size_t>(n_samples);

    auto rng = make_rng(derive_seed(seed, 0x6c6873ull));
    std::uniform_real_distribution<double> uniform01(0.0, 1.0);

    std::vector<std::vector<double>> genomes(n, std::vector<double>(box.size()));
    std::vector<std::size_t> bins(n);
    for (std::size_t d = 0; d < box.size(); ++d) {
        std::iota(bins.begin(), bins.end(), 0);
        std::shuffle(bins.begin(), bins.end(), rng);
        const double width = (box.hi[d] - box.lo[d]) / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            genomes[i][d] =
                box.lo[d] + (static_cast<double>(bins[i]) + uniform01(rng)) * width;
        }
    }

    std::vector<std::vector<double>> samples;
    samples.reserve(n);
    for (const auto& genome : genomes) samples.push_back(decode(space, genome));
    return samples;
}

std::vector<SweepSample> parameter_sweep(const ParamSpace& space, const FitnessFn& fitness,
                                         int n_samples, std::uint64_t seed, int workers) {
    const auto designs = latin_hypercube(space, n_samples, seed);
    std::vector<SweepSample> samples(designs.size());
    parallel_for(designs.size(), workers, [&](std::size_t i) {
        samples[i].params = designs[i];
        samples[i].value = fitness(designs[i]);
    });
    return samples;
}

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double mean_rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mean_rank;
        i = j + 1;
    }
    return ranks;
}

Eigen::MatrixXd spearman_matrix(const std::vector<SweepSample>& samples) {
    if (samples.size() < 3) {
        throw std::invalid_argument("spearman_matrix needs at least 3 samples");
    }
    const std::size_t n = samples.size();
    const std::size_t n_params = samples.front().params.size();
    const std::size_t n_cols = n_params + 1;

    std::vector<std::vector<double>> rank_cols(n_cols);
    for (std::size_t c = 0; c < n_cols; ++c) {
        std::vector<double> column(n);
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = c < n_params ? samples[i].params[c] : samples[i].value;
        }
        rank_cols[c] = average_ranks(column);
    }

    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n_cols),
                                                     static_cast<Eigen::Index>(n_cols));
    for (std::size_t a = 0; a < n_cols; ++a) {
        for (std::size_t b = a + 1; b < n_cols; ++b) {
            double mean_a = 0.0, mean_b = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mean_a += rank_cols[a][i];
                mean_b += rank_cols[b][i];
            }
            mean_a /= static_cast<double>(n);
            mean_b /= static_cast<double>(n);
            double cov = 0.0, var_a = 0.0, var_b = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double da = rank_cols[a][i] - mean_a;
                const double db = rank_cols[b][i] - mean_b;
                cov += da * db;
                var_a += da * da;
                var_b += db * db;
            }
            const double denom = std::sqrt(var_a * var_b);
            const double rho = denom > 0.0 ? cov / denom : 0.0;
            corr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = rho;
            corr(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = rho;
        }
    }
    return corr;
}

}  // namespace collwarn
