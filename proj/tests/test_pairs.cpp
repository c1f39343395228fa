#include <doctest.h>

#include <unordered_set>

#include "smem/complexity.hpp"
#include "smem/error.hpp"
#include "smem/pairs.hpp"

using namespace smem;

namespace {

std::vector<EvaluatedArch> archive_with_accuracies(const SearchSpaceConfig& cfg,
                                                   const std::vector<double>& accs, Rng& rng) {
    std::vector<EvaluatedArch> archive;
    std::unordered_set<std::string> seen;
    while (archive.size() < accs.size()) {
        Genotype g = random_genotype(rng, cfg);
        if (!seen.insert(to_text(g)).second) continue;
        EvaluatedArch a;
        a.genotype = std::move(g);
        a.accuracy = accs[archive.size()];
        a.madds = 1.0;
        a.eval_order = static_cast<long>(archive.size());
        archive.push_back(std::move(a));
    }
    return archive;
}

} // namespace

TEST_CASE("pair dataset: counts, orientation and labels") {
    const auto cfg = SearchSpaceConfig::defaults();
    Rng rng(4);

    SUBCASE("n=3 gives 3 samples") {
        const auto archive = archive_with_accuracies(cfg, {0.9, 0.8, 0.7}, rng);
        const auto ds = build_pair_dataset(archive, cfg);
        CHECK(ds.size() == 3);
        // index order: (0,1), (0,2), (1,2), all labeled 1 (first more accurate)
        CHECK(ds.first == std::vector<std::uint32_t>{0, 0, 1});
        CHECK(ds.second == std::vector<std::uint32_t>{1, 2, 2});
        CHECK(ds.labels == std::vector<std::int8_t>{1, 1, 1});
    }
    SUBCASE("label 0 when the second is better") {
        const auto archive = archive_with_accuracies(cfg, {0.8, 0.9}, rng);
        const auto ds = build_pair_dataset(archive, cfg);
        REQUIRE(ds.size() == 1);
        CHECK(ds.labels[0] == 0);
    }
    SUBCASE("n=300 gives 44850 samples") {
        std::vector<double> accs(300);
        for (int i = 0; i < 300; ++i) accs[static_cast<std::size_t>(i)] = 0.5 + 0.001 * i;
        const auto archive = archive_with_accuracies(cfg, accs, rng);
        const auto ds = build_pair_dataset(archive, cfg);
        CHECK(ds.size() == 44850);
        CHECK(ds.dropped_ties == 0);
    }
    SUBCASE("count is n(n-1)/2 for distinct accuracies") {
        for (int n : {2, 5, 17, 64}) {
            std::vector<double> accs(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) accs[static_cast<std::size_t>(i)] = 0.4 + 0.003 * i;
            const auto ds = build_pair_dataset(archive_with_accuracies(cfg, accs, rng), cfg);
            CHECK(ds.size() == static_cast<std::size_t>(n) * (n - 1) / 2);
        }
    }
    SUBCASE("exact ties are dropped and counted") {
        const auto archive = archive_with_accuracies(cfg, {0.8, 0.8, 0.7}, rng);
        const auto ds = build_pair_dataset(archive, cfg);
        CHECK(ds.size() == 2);
        CHECK(ds.dropped_ties == 1);
    }
    SUBCASE("fewer than two entries is an error") {
        const auto archive = archive_with_accuracies(cfg, {0.8}, rng);
        CHECK_THROWS_AS(build_pair_dataset(archive, cfg), Error);
    }
}

TEST_CASE("materialized samples concatenate the two half feature rows") {
    const auto cfg = SearchSpaceConfig::defaults();
    Rng rng(6);
    const auto archive = archive_with_accuracies(cfg, {0.9, 0.8, 0.7, 0.6}, rng);
    const auto ds = build_pair_dataset(archive, cfg);
    CHECK(ds.feature_dim() == 92);
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const PairSample s = ds.sample(k);
        REQUIRE(s.features.size() == 92);
        CHECK(s.features.head(46) == ds.halves.row(ds.first[k]).transpose());
        CHECK(s.features.tail(46) == ds.halves.row(ds.second[k]).transpose());
        CHECK(s.features.minCoeff() >= 0.0f);
        CHECK(s.features.maxCoeff() <= 1.0f);
        CHECK((s.label == 0 || s.label == 1));
    }
}

TEST_CASE("half features use the canonical genotype") {
    const auto cfg = SearchSpaceConfig::defaults();
    Genotype g;
    g.genes.assign(46, 0);
    g.genes[4] = 2; // inactive under depth idx 0 -> canonicalized away
    const auto feats = feature_matrix({g}, cfg);
    CHECK(feats.row(0).isZero());
}
