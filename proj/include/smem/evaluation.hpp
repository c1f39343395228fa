#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "smem/search_space.hpp"

namespace smem {

enum class Origin { initial, elite };

// One truly evaluated architecture; the unit of the archive.
struct EvaluatedArch {
    Genotype genotype; // canonical
    double accuracy = 0.0;
    double madds = 0.0; // millions
    Origin origin = Origin::initial;
    int iteration = -1; // elite iteration; -1 for initial samples
    long eval_order = 0;
};

// Ground-truth accuracy source. Implementations must be deterministic per
// genotype and safe for concurrent evaluate() calls.
class Evaluator {
public:
    virtual ~Evaluator() = default;
    virtual double evaluate(const Genotype& g) const = 0;
};

struct SyntheticOracleParams {
    double base = 0.70;
    double gain = 0.28;
    double tau = 3.0;
    std::vector<double> block_weights{0.6, 0.8, 1.0, 1.2, 1.4};
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void check(const SearchSpaceConfig& cfg) const;
};

// Closed-form stand-in for trained-network accuracy. Capacity is a weighted
// sum of normalized genes over active layers, accuracy saturates
// exponentially in capacity, so accuracy is monotone non-decreasing under
// any single-gene increase while MAdds strictly grows: a genuine trade-off.
// Optional noise is keyed by the canonical genotype hash, so repeated
// evaluation of one genotype always returns the same value.
class SyntheticOracle : public Evaluator {
public:
    SyntheticOracle(SearchSpaceConfig cfg, SyntheticOracleParams params);

    double evaluate(const Genotype& g) const override;

    double capacity(const Genotype& canonical_g) const;
    double noiseless_accuracy(const Genotype& g) const;
    double max_capacity() const;

    const SyntheticOracleParams& params() const { return params_; }

private:
    SearchSpaceConfig cfg_;
    SyntheticOracleParams params_;
};

struct TabularRecord {
    Genotype genotype; // canonical
    double accuracy;
};

// Parsed rows of a benchmark-style table (UTF-8 lines
// "genotype_text,accuracy", '#' comments), deduplicated by canonical
// genotype in file order. Conflicting duplicate accuracies are rejected
// with the offending line number.
std::vector<TabularRecord> load_tabular_records(const std::string& path, const SearchSpaceConfig& cfg);

// Lookup evaluator backed by a benchmark-style table, keyed by canonical
// genotype.
class TabularEvaluator : public Evaluator {
public:
    static TabularEvaluator load(const std::string& path, const SearchSpaceConfig& cfg);

    double evaluate(const Genotype& g) const override;

    std::size_t size() const { return table_.size(); }

private:
    TabularEvaluator(SearchSpaceConfig cfg, std::unordered_map<std::string, double> table)
        : cfg_(std::move(cfg)), table_(std::move(table)) {}

    SearchSpaceConfig cfg_;
    std::unordered_map<std::string, double> table_;
};

} // namespace smem
