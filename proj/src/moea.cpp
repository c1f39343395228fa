#include "smem/moea.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "smem/error.hpp"

namespace smem {

void MoeaConfig::check() const {
    if (generations < 0) throw data_error("moea: G must be >= 0");
    if (vice_size < 1) throw data_error("moea: K_vice must be >= 1");
    if (offspring_per_generation < 2 || offspring_per_generation % 2 != 0)
        throw data_error("moea: m must be >= 2 and even");
    if (theta < 0 || theta > 1) throw data_error("moea: theta must be in [0, 1]");
    if (crossover_prob < 0 || crossover_prob > 1) throw data_error("moea: crossover_prob must be in [0, 1]");
    if (mutation_prob > 1) throw data_error("moea: mutation_prob must be <= 1");
    if (eta_m <= 0) throw data_error("moea: eta_m must be > 0");
    if (attempt_factor < 1) throw data_error("moea: attempt_factor must be >= 1");
}

namespace {

bool dominates(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() <= b.x() && a.y() <= b.y() && (a.x() < b.x() || a.y() < b.y());
}

} // namespace

std::vector<std::vector<int>> fast_nondominated_sort(const std::vector<Eigen::Vector2d>& points) {
    const int n = static_cast<int>(points.size());
    std::vector<std::vector<int>> fronts;
    if (n == 0) return fronts;

    // CSR layout of the domination lists keeps this one big allocation.
    std::vector<int> dominated_count(static_cast<std::size_t>(n), 0);
    std::vector<int> list_size(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) {
                ++list_size[i];
                ++dominated_count[j];
            } else if (dominates(points[j], points[i])) {
                ++list_size[j];
                ++dominated_count[i];
            }
        }
    }
    std::vector<std::size_t> offset(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i < n; ++i) offset[i + 1] = offset[i] + static_cast<std::size_t>(list_size[i]);
    std::vector<int> dominated(offset.back());
    std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (dominates(points[i], points[j])) dominated[fill[i]++] = j;
            else if (dominates(points[j], points[i])) dominated[fill[j]++] = i;
        }
    }

    std::vector<int> current;
    for (int i = 0; i < n; ++i)
        if (dominated_count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<int> next;
        for (int i : current) {
            for (std::size_t k = offset[i]; k < offset[i] + static_cast<std::size_t>(list_size[i]); ++k) {
                const int j = dominated[k];
                if (--dominated_count[j] == 0) next.push_back(j);
            }
        }
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

std::vector<double> crowding_distances(const std::vector<Eigen::Vector2d>& front_points) {
    const int n = static_cast<int>(front_points.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int obj = 0; obj < 2; ++obj) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return front_points[a][obj] < front_points[b][obj] ||
                   (front_points[a][obj] == front_points[b][obj] && a < b);
        });
        const double lo = front_points[order.front()][obj];
        const double hi = front_points[order.back()][obj];
        dist[static_cast<std::size_t>(order.front())] = inf;
        dist[static_cast<std::size_t>(order.back())] = inf;
        if (hi == lo) continue;
        for (int k = 1; k + 1 < n; ++k) {
            const double gap = front_points[order[k + 1]][obj] - front_points[order[k - 1]][obj];
            dist[static_cast<std::size_t>(order[k])] += gap / (hi - lo);
        }
    }
    return dist;
}

SplitPopulations split_populations(const std::vector<Individual>& population, int vice_size) {
    if (population.empty()) throw data_error("split_populations: empty population");
    SplitPopulations out;
    std::vector<int> rest;
    for (int i = 0; i < static_cast<int>(population.size()); ++i) {
        if (population[i].front == 0) out.main_pop.push_back(i);
        else rest.push_back(i);
    }
    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
        if (population[a].crowding != population[b].crowding)
            return population[a].crowding > population[b].crowding;
        if (population[a].front != population[b].front) return population[a].front < population[b].front;
        return a < b;
    });
    if (static_cast<int>(rest.size()) > vice_size) rest.resize(static_cast<std::size_t>(vice_size));
    out.vice_pop = std::move(rest);
    return out;
}

double threshold_schedule(int generation, int total_generations, double delta, Rng& rng) {
    double a, b;
    if (4 * generation < total_generations) {
        a = delta;
        b = 0.7;
    } else if (4 * generation <= 3 * total_generations) {
        a = 0.0;
        b = delta;
    } else {
        a = delta;
        b = 1.0;
    }
    return uniform_real(rng, std::min(a, b), std::max(a, b));
}

std::pair<int, int> select_parents(const std::vector<int>& main_pop, const std::vector<int>& vice_pop,
                                   const MoeaConfig& cfg, double threshold_value, Rng& rng) {
    if (main_pop.empty()) throw data_error("select_parents: empty main population");
    const bool prose = cfg.polarity == ThresholdPolarity::prose;
    const bool both_main = !cfg.multipop || vice_pop.empty() ||
                           (prose ? threshold_value < cfg.theta : cfg.theta < threshold_value);
    const int n = static_cast<int>(main_pop.size());
    if (both_main) {
        if (n == 1) return {main_pop[0], main_pop[0]};
        const int i = uniform_int(rng, 0, n - 1);
        int j = uniform_int(rng, 0, n - 2);
        if (j >= i) ++j;
        return {main_pop[static_cast<std::size_t>(i)], main_pop[static_cast<std::size_t>(j)]};
    }
    const int i = uniform_int(rng, 0, n - 1);
    const int j = uniform_int(rng, 0, static_cast<int>(vice_pop.size()) - 1);
    return {main_pop[static_cast<std::size_t>(i)], vice_pop[static_cast<std::size_t>(j)]};
}

std::pair<Genotype, Genotype> two_point_crossover(const Genotype& p1, const Genotype& p2,
                                                  double crossover_prob, Rng& rng) {
    if (p1.genes.size() != p2.genes.size()) throw data_error("crossover: genotype length mismatch");
    Genotype c1 = p1, c2 = p2;
    if (uniform_real(rng, 0.0, 1.0) < crossover_prob) {
        const int len = static_cast<int>(p1.genes.size());
        int a = uniform_int(rng, 0, len);
        int b = uniform_int(rng, 0, len);
        if (a > b) std::swap(a, b);
        for (int k = a; k < b; ++k) std::swap(c1.genes[static_cast<std::size_t>(k)], c2.genes[static_cast<std::size_t>(k)]);
    }
    return {std::move(c1), std::move(c2)};
}

Genotype int_polynomial_mutation(const Genotype& g, double mutation_prob, double eta_m, Rng& rng,
                                 const SearchSpaceConfig& cfg) {
    Genotype out = g;
    for (int i = 0; i < cfg.gene_count(); ++i) {
        if (uniform_real(rng, 0.0, 1.0) >= mutation_prob) continue;
        const int upper = cfg.options_at(i) - 1;
        if (upper < 1) continue;
        const int x = out.genes[static_cast<std::size_t>(i)];
        const double u = uniform_real(rng, 0.0, 1.0);
        const double mut_pow = 1.0 / (eta_m + 1.0);
        double dq;
        if (u <= 0.5) {
            const double rest = 1.0 - static_cast<double>(x) / upper;
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(rest, eta_m + 1.0);
            dq = std::pow(val, mut_pow) - 1.0;
        } else {
            const double rest = static_cast<double>(x) / upper;
            const double val = 2.0 * (1.0 - u) + (2.0 * u - 1.0) * std::pow(rest, eta_m + 1.0);
            dq = 1.0 - std::pow(val, mut_pow);
        }
        int nx = static_cast<int>(std::lround(x + dq * upper));
        nx = std::clamp(nx, 0, upper);
        if (nx == x) {
            // Force a change: one step in the perturbation direction,
            // reflected when that would leave the range.
            const int dir = dq > 0 ? 1 : dq < 0 ? -1 : (u > 0.5 ? 1 : -1);
            nx = x + dir;
            if (nx < 0 || nx > upper) nx = x - dir;
        }
        out.genes[static_cast<std::size_t>(i)] = nx;
    }
    return out;
}

Individual make_individual(const Genotype& g, const SearchSpaceConfig& space, const ChannelTable& chan) {
    Individual ind;
    ind.genotype = g;
    ind.canonical = canonicalize(g, space);
    ind.features = to_features(ind.canonical, space);
    ind.madds = genotype_madds_millions(ind.canonical, space, chan);
    return ind;
}

namespace {

void rank_and_sort(std::vector<Individual>& pop, const SurrogateModel& model, const SearchSpaceConfig& space,
                   int threads) {
    Eigen::MatrixXf features(static_cast<Eigen::Index>(pop.size()), space.gene_count());
    for (std::size_t i = 0; i < pop.size(); ++i) features.row(static_cast<Eigen::Index>(i)) = pop[i].features;
    const std::vector<int> scores = model.round_robin_scores(features, threads);
    std::vector<Eigen::Vector2d> points(pop.size());
    for (std::size_t i = 0; i < pop.size(); ++i) {
        pop[i].rank_score = scores[i];
        pop[i].objectives = Eigen::Vector2d(-static_cast<double>(scores[i]), pop[i].madds);
        points[i] = pop[i].objectives;
    }
    const auto fronts = fast_nondominated_sort(points);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
        std::vector<Eigen::Vector2d> front_points;
        front_points.reserve(fronts[f].size());
        for (int idx : fronts[f]) front_points.push_back(points[static_cast<std::size_t>(idx)]);
        const auto crowd = crowding_distances(front_points);
        for (std::size_t k = 0; k < fronts[f].size(); ++k) {
            Individual& ind = pop[static_cast<std::size_t>(fronts[f][k])];
            ind.front = static_cast<int>(f);
            ind.crowding = crowd[k];
        }
    }
}

} // namespace

std::vector<Individual> mp_moea(const std::vector<Genotype>& initial, const SurrogateModel& model,
                                const MoeaConfig& cfg, const SearchSpaceConfig& space,
                                const ChannelTable& chan, int threads, int iteration_tag,
                                const SnapshotSink& sink) {
    cfg.check();
    if (initial.empty()) throw data_error("mp_moea: empty initial population");
    const double mutation_prob =
        cfg.mutation_prob > 0 ? cfg.mutation_prob : 1.0 / static_cast<double>(space.gene_count());
    Rng rng(cfg.seed);

    std::vector<Individual> pop;
    pop.reserve(initial.size() +
                static_cast<std::size_t>(cfg.offspring_per_generation) * static_cast<std::size_t>(cfg.generations));
    std::unordered_set<std::string> seen;
    for (const Genotype& g : initial) {
        Individual ind = make_individual(g, space, chan);
        if (!seen.insert(to_text(ind.canonical)).second)
            throw data_error("mp_moea: initial population contains canonical duplicates");
        pop.push_back(std::move(ind));
    }

    rank_and_sort(pop, model, space, threads);
    auto split = split_populations(pop, cfg.vice_size);

    for (int g = 0; g < cfg.generations; ++g) {
        const double delta = uniform_real(rng, 0.0, 1.0);
        const double threshold = threshold_schedule(g, cfg.generations, delta, rng);

        std::vector<Individual> offspring;
        const int m = cfg.offspring_per_generation;
        long attempts = 0;
        const long max_attempts = static_cast<long>(cfg.attempt_factor) * m;
        while (static_cast<int>(offspring.size()) < m && attempts < max_attempts) {
            ++attempts;
            const auto [ia, ib] = select_parents(split.main_pop, split.vice_pop, cfg, threshold, rng);
            auto [c1, c2] = two_point_crossover(pop[static_cast<std::size_t>(ia)].genotype,
                                                pop[static_cast<std::size_t>(ib)].genotype,
                                                cfg.crossover_prob, rng);
            for (Genotype* child : {&c1, &c2}) {
                if (static_cast<int>(offspring.size()) >= m) break;
                Genotype mutated = int_polynomial_mutation(*child, mutation_prob, cfg.eta_m, rng, space);
                Individual ind = make_individual(mutated, space, chan);
                if (!seen.insert(to_text(ind.canonical)).second) continue;
                offspring.push_back(std::move(ind));
            }
        }
        for (auto& ind : offspring) pop.push_back(std::move(ind));

        // Scores are population-relative: recompute over all of P.
        rank_and_sort(pop, model, space, threads);
        split = split_populations(pop, cfg.vice_size);

        if (sink) {
            GenerationSnapshot snap;
            snap.iteration = iteration_tag;
            snap.generation = g;
            snap.population_size = pop.size();
            for (int idx : split.main_pop) snap.front0.push_back(pop[static_cast<std::size_t>(idx)].objectives);
            sink(snap);
        }
    }
    return pop;
}

} // namespace smem
