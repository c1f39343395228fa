#include "smem/pairs.hpp"

#include "smem/error.hpp"

namespace smem {

PairSample PairDataset::sample(std::size_t k) const {
    const Eigen::Index d = halves.cols();
    PairSample s;
    s.features.resize(2 * d);
    s.features.head(d) = halves.row(first[k]);
    s.features.tail(d) = halves.row(second[k]);
    s.label = labels[k];
    return s;
}

Eigen::MatrixXf feature_matrix(const std::vector<Genotype>& genotypes, const SearchSpaceConfig& cfg) {
    Eigen::MatrixXf m(static_cast<Eigen::Index>(genotypes.size()), cfg.gene_count());
    for (std::size_t i = 0; i < genotypes.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = to_features(canonicalize(genotypes[i], cfg), cfg);
    return m;
}

PairDataset build_pair_dataset(const std::vector<EvaluatedArch>& archive, const SearchSpaceConfig& cfg) {
    const std::size_t n = archive.size();
    if (n < 2) throw data_error("pair dataset: need at least 2 evaluated architectures");

    PairDataset ds;
    std::vector<Genotype> genotypes;
    genotypes.reserve(n);
    for (const auto& a : archive) genotypes.push_back(a.genotype);
    ds.halves = feature_matrix(genotypes, cfg);

    const std::size_t total = n * (n - 1) / 2;
    ds.first.reserve(total);
    ds.second.reserve(total);
    ds.labels.reserve(total);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (archive[i].accuracy == archive[j].accuracy) {
                ++ds.dropped_ties;
                continue;
            }
            ds.first.push_back(static_cast<std::uint32_t>(i));
            ds.second.push_back(static_cast<std::uint32_t>(j));
            ds.labels.push_back(archive[i].accuracy > archive[j].accuracy ? 1 : 0);
        }
    }
    return ds;
}

} // namespace smem
