#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "smem/pairs.hpp"
#include "smem/rng.hpp"
#include "smem/search_space.hpp"

namespace smem {

enum class SurrogateKind { svm, knn, rf, mlp };

std::string to_string(SurrogateKind kind);
SurrogateKind surrogate_kind_from_string(const std::string& s);

struct SurrogateConfig {
    SurrogateKind kind = SurrogateKind::svm;

    // svm (RBF, trained by sequential minimal optimization)
    double svm_c = 1.0;
    double svm_gamma = 0.0; // <= 0 resolves to 1 / feature_dim
    double svm_tol = 1e-3;
    int svm_max_passes = 16;      // bound on examine-all sweeps
    long svm_max_steps = 200000;  // bound on successful multiplier updates

    // knn
    int knn_k = 5;

    // rf
    int rf_trees = 40;
    int rf_max_depth = 12;
    int rf_min_leaf = 4;

    // mlp
    int mlp_hidden = 32;
    int mlp_epochs = 40;
    double mlp_lr = 5e-3;
    int mlp_batch = 64;

    // Train on both pair orientations (swapped halves, inverted label).
    // Off by default: one fixed (i < j) orientation, matching the
    // n(n-1)/2 sample count.
    bool symmetric_pairs = false;
};

enum class Verdict { first_better, second_better };

// Binary comparator over concatenated genotype features. decision() >= 0
// means the first genotype is predicted better (the sign convention also
// settles the degenerate compare(g, g) case deterministically).
class SurrogateModel {
public:
    virtual ~SurrogateModel() = default;

    virtual SurrogateKind kind() const = 0;
    virtual long training_size() const = 0;
    virtual bool degenerate() const { return false; }

    virtual float decision(const Eigen::Ref<const Eigen::VectorXf>& first,
                           const Eigen::Ref<const Eigen::VectorXf>& second) const = 0;

    // Round-robin win counts over all unordered row pairs {i < j} of
    // `features`, each judged once as (i, j). Score sum is always
    // n(n-1)/2. Results are independent of the thread count.
    virtual std::vector<int> round_robin_scores(const Eigen::MatrixXf& features, int threads = 1) const;

    virtual nlohmann::json to_json() const = 0;
};

Verdict compare(const SurrogateModel& model, const Eigen::Ref<const Eigen::VectorXf>& f1,
                const Eigen::Ref<const Eigen::VectorXf>& f2);
Verdict compare(const SurrogateModel& model, const Genotype& g1, const Genotype& g2,
                const SearchSpaceConfig& cfg);

// Round-robin scores for genotype candidates (featurized canonically).
std::vector<int> rank_candidates(const SurrogateModel& model, const std::vector<Genotype>& candidates,
                                 const SearchSpaceConfig& cfg, int threads = 1);

// Dispatch on cfg.kind. Throws on an empty dataset; a single-class dataset
// yields a constant model flagged degenerate() with a warning on stderr.
std::unique_ptr<SurrogateModel> train_surrogate(const PairDataset& ds, const SurrogateConfig& cfg, Rng& rng);

std::unique_ptr<SurrogateModel> surrogate_from_json(const nlohmann::json& j);

void save_surrogate(const SurrogateModel& model, const std::string& path);
std::unique_ptr<SurrogateModel> load_surrogate(const std::string& path);

// Shared helpers for half-factored models: squared distances between rows
// of a and rows of b via one matrix product.
Eigen::MatrixXf pairwise_sqdist(const Eigen::MatrixXf& a, const Eigen::MatrixXf& b);

} // namespace smem
