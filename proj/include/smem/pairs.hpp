#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "smem/evaluation.hpp"
#include "smem/search_space.hpp"

namespace smem {

// One comparison training sample: features of two genotypes concatenated,
// label 1 iff the first one is more accurate.
struct PairSample {
    Eigen::VectorXf features; // 2 * gene_count
    int label;                // 1 = first better, 0 = second better
};

// Pairwise training set in factored form. Every sample's feature vector is
// the concatenation of two rows of `halves`, so kernels and distances over
// samples reduce to lookups over half rows; sample() materializes the
// conventional concatenated view.
struct PairDataset {
    Eigen::MatrixXf halves;            // one feature row per archive entry
    std::vector<std::uint32_t> first;  // row index of the first genotype
    std::vector<std::uint32_t> second; // row index of the second genotype
    std::vector<std::int8_t> labels;   // 1 or 0
    long dropped_ties = 0;

    std::size_t size() const { return labels.size(); }
    Eigen::Index feature_dim() const { return 2 * halves.cols(); }
    PairSample sample(std::size_t k) const;
};

// Feature rows for a list of genotypes (canonicalized before featurization).
Eigen::MatrixXf feature_matrix(const std::vector<Genotype>& genotypes, const SearchSpaceConfig& cfg);

// All unordered pairs {i < j} in index order, oriented as (i, j); label 1
// iff accuracy_i > accuracy_j. Exact-tie pairs carry no usable label and are
// dropped (counted in dropped_ties). Throws if fewer than 2 entries.
PairDataset build_pair_dataset(const std::vector<EvaluatedArch>& archive, const SearchSpaceConfig& cfg);

} // namespace smem
