#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "smem/complexity.hpp"
#include "smem/rng.hpp"
#include "smem/search_space.hpp"
#include "smem/surrogate.hpp"

namespace smem {

// Population member. The raw genotype keeps silent (padded) genes so they
// stay inheritable through crossover; the canonical form is the identity
// used for features, deduplication and reporting. Both objectives are
// minimized: predicted accuracy enters as the negated round-robin score,
// which is population-relative and recomputed whenever the population
// changes.
struct Individual {
    Genotype genotype;
    Genotype canonical;
    Eigen::VectorXf features;
    double madds = 0.0; // millions
    int rank_score = 0;
    Eigen::Vector2d objectives{0.0, 0.0};
    int front = -1;
    double crowding = 0.0;
};

enum class ThresholdPolarity {
    prose,      // threshold < theta -> both parents from the main population
    algorithm2, // flipped comparison, for ablation
};

struct MoeaConfig {
    int generations = 20;               // G
    int vice_size = 20;                 // K_vice
    int offspring_per_generation = 100; // m, even
    double theta = 0.5;
    double crossover_prob = 0.9;
    double mutation_prob = -1.0; // <= 0 resolves to 1 / gene_count
    double eta_m = 20.0;
    bool multipop = true; // false: both parents always from the main population
    ThresholdPolarity polarity = ThresholdPolarity::prose;
    int attempt_factor = 10; // offspring attempts bounded by factor * m
    std::uint64_t seed = 0;

    void check() const;
};

// Fronts of mutually non-dominated points, both objectives minimized;
// a dominates b iff a <= b componentwise with at least one strict.
std::vector<std::vector<int>> fast_nondominated_sort(const std::vector<Eigen::Vector2d>& points);

// NSGA-II crowding: boundary points infinite, interior points sum the
// normalized neighbour gaps per objective; degenerate objective ranges
// contribute 0.
std::vector<double> crowding_distances(const std::vector<Eigen::Vector2d>& front_points);

struct SplitPopulations {
    std::vector<int> main_pop; // entire front 0, population order
    std::vector<int> vice_pop; // top-K of the rest by crowding
};

// Requires front and crowding fields to be set. Vice selection orders the
// dominated remainder by descending crowding, ties by lower front then
// insertion order, and clamps to the remainder size.
SplitPopulations split_populations(const std::vector<Individual>& population, int vice_size);

// Generation-dependent selection threshold. delta is drawn once per
// generation; intervals with inverted endpoints are normalized.
double threshold_schedule(int generation, int total_generations, double delta, Rng& rng);

// Returns indices into the population. threshold < theta (prose polarity):
// two distinct members of the main population when possible; otherwise one
// from each population, falling back to main-only when the vice population
// is empty.
std::pair<int, int> select_parents(const std::vector<int>& main_pop, const std::vector<int>& vice_pop,
                                   const MoeaConfig& cfg, double threshold_value, Rng& rng);

// Swaps the gene segment [a, b) between copies of the parents with
// probability crossover_prob.
std::pair<Genotype, Genotype> two_point_crossover(const Genotype& p1, const Genotype& p2,
                                                  double crossover_prob, Rng& rng);

// Polynomial mutation rewritten for integer genes: the real-valued
// perturbation on [0, U] is rounded to the nearest index; when rounding
// lands back on the original value the gene steps one unit in the
// perturbation direction (reflected at the bounds), so a selected gene with
// U >= 1 always changes.
Genotype int_polynomial_mutation(const Genotype& g, double mutation_prob, double eta_m, Rng& rng,
                                 const SearchSpaceConfig& cfg);

struct GenerationSnapshot {
    int iteration; // outer loop tag, -1 for standalone runs
    int generation;
    std::size_t population_size;
    std::vector<Eigen::Vector2d> front0; // (negated rank score, MAdds millions)
};

using SnapshotSink = std::function<void(const GenerationSnapshot&)>;

// The multi-population evolutionary inner loop. The population only grows
// (by at most m unique offspring per generation, so |P| <= |P0| + m*G);
// every generation re-ranks the whole population with the surrogate and
// rebuilds the main/vice split. Deterministic for a fixed seed and any
// thread count.
std::vector<Individual> mp_moea(const std::vector<Genotype>& initial, const SurrogateModel& model,
                                const MoeaConfig& cfg, const SearchSpaceConfig& space,
                                const ChannelTable& chan, int threads = 1, int iteration_tag = -1,
                                const SnapshotSink& sink = nullptr);

// Individual construction shared with the outer loop.
Individual make_individual(const Genotype& g, const SearchSpaceConfig& space, const ChannelTable& chan);

} // namespace smem
