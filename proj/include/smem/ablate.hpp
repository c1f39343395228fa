#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smem/search.hpp"

namespace smem {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& table);

struct SurrogateTrial {
    double ktau = 0.0;
    double spearman = 0.0;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;
};

// Train on n_train random evaluated architectures, round-robin rank n_test
// held-out candidates, correlate predicted scores with true accuracies.
SurrogateTrial surrogate_trial(const SearchConfig& cfg, SurrogateKind kind, int n_train, int n_test,
                               std::uint64_t seed);

// One row per classifier kind: median KTau / Spearman over the seeds plus
// mean train/predict times.
Table ablate_classifier(const SearchConfig& base, const std::vector<std::uint64_t>& seeds);

// Paired full runs per seed, with and without the multi-population
// mechanism; final-front hypervolumes side by side, medians last.
Table ablate_multipop(const SearchConfig& base, const std::vector<std::uint64_t>& seeds);

// Initial-surrogate quality per initial population size; optionally also
// runs a search per (size, seed) and reports the final hypervolume.
Table ablate_initsize(const SearchConfig& base, const std::vector<std::uint64_t>& seeds,
                      const std::vector<int>& sizes, bool with_search_hv);

} // namespace smem
