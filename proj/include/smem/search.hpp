#pragma once

#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "smem/complexity.hpp"
#include "smem/evaluation.hpp"
#include "smem/moea.hpp"
#include "smem/surrogate.hpp"

namespace smem {

inline constexpr const char* kToolVersion = "smem 0.1.0";

enum class EvaluatorKind { synthetic, tabular };

struct SearchConfig {
    // The default evaluator adds a small genotype-keyed accuracy jitter so
    // distinct architectures essentially never tie exactly (exact ties
    // carry no pair label and would be dropped from surrogate training).
    SearchConfig() { oracle.noise_sigma = 0.01; }

    int initial_samples = 100;    // N
    int iterations = 25;          // T
    int elites_per_iteration = 8; // K_elite
    std::uint64_t seed = 0;
    int threads = 1;
    std::string output_dir; // empty: in-memory run, no files
    bool emit_snapshots = true;

    EvaluatorKind evaluator_kind = EvaluatorKind::synthetic;
    SyntheticOracleParams oracle;
    std::string tabular_path;

    SurrogateConfig surrogate;
    MoeaConfig moea;
    SearchSpaceConfig space = SearchSpaceConfig::defaults();
    ChannelTable channels;

    void check() const;
};

struct IterationMetrics {
    int iteration = 0;
    long archive_size = 0; // before this iteration's elites were added
    long pair_count = 0;
    long dropped_ties = 0;
    long score_sum = 0; // round-robin scores over the archive
    double ktau = 0.0;  // surrogate scores vs true accuracies over the archive
    double hv = 0.0;    // archive front hypervolume after adding elites
    double seconds = 0.0;
};

struct RunResult {
    std::vector<EvaluatedArch> archive;
    std::vector<std::size_t> front; // indices into archive, mutually non-dominated
    std::vector<IterationMetrics> metrics;
    double hv_reference_madds = 0.0; // millions; error reference is 1.0
    double total_seconds = 0.0;
};

std::unique_ptr<Evaluator> make_evaluator(const SearchConfig& cfg);

// Samples N unique canonical genotypes and evaluates them (batch may run in
// parallel; results committed in sampling order).
std::vector<EvaluatedArch> initialize_archive(const SearchConfig& cfg, const Evaluator& evaluator, Rng& rng);

// Novel solutions (canonical form not yet archived) are non-dominated
// sorted under their predicted objectives; whole fronts are taken in order,
// the last partial front by descending crowding distance. Short selections
// are topped up with fresh random genotypes. Returns exactly k_elite unique
// canonical genotypes.
std::vector<Genotype> select_elites(const std::vector<Individual>& solutions,
                                    const std::vector<EvaluatedArch>& archive, int k_elite,
                                    const SearchSpaceConfig& space, Rng& rng);

// Hypervolume of the archive's true-objective front, objectives normalized
// by the reference (error 1.0, 1.05 * the largest MAdds in the space).
double archive_hypervolume(const std::vector<EvaluatedArch>& archive, double ref_madds_millions);

// Indices of the archive's non-dominated set under (-accuracy, MAdds).
std::vector<std::size_t> archive_front(const std::vector<EvaluatedArch>& archive);

// The full outer loop: archive init, per-iteration online surrogate refresh,
// MP-MOEA over the archive, elite selection and true evaluation. Writes the
// run directory (config.json, manifest.json, archive.jsonl,
// gen_snapshots.jsonl, front.json, metrics.json) when output_dir is set.
RunResult smem_nas(const SearchConfig& cfg);

// Resolved-config serialization; also used for the manifest hash.
nlohmann::json config_to_json(const SearchConfig& cfg);
SearchConfig config_from_json(const nlohmann::json& j);

// Dotted-path override ("moea.G=10") with bare aliases for the usual
// symbols (N, T, K_elite, G, K_vice, m, theta, eta_m, crossover_prob,
// mutation_prob, classifier, evaluator, noise_sigma, seed, threads, ...).
void apply_override(nlohmann::json& config, const std::string& assignment);

nlohmann::json archive_entry_to_json(const EvaluatedArch& a);
EvaluatedArch archive_entry_from_json(const nlohmann::json& j, const SearchSpaceConfig& space);

} // namespace smem
