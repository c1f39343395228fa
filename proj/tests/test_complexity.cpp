#include <doctest.h>

#include "oracles.hpp"
#include "smem/complexity.hpp"
#include "smem/error.hpp"

using namespace smem;

TEST_CASE("layer madds: three-term inverted bottleneck sum") {
    LayerSpec layer{3, 3, 1, 16, 16}; // k=3, expansion 3 -> E=48
    const auto r = layer_madds(layer, 8, 8);
    // 8*8*16*48 + 8*8*48*9 + 8*8*48*16 = 49152 + 27648 + 49152
    CHECK(r.count == 125952);
    CHECK(r.h_out == 8);
    CHECK(r.w_out == 8);

    SUBCASE("linear in the expansion ratio") {
        LayerSpec doubled = layer;
        doubled.expansion = 6;
        CHECK(layer_madds(doubled, 8, 8).count == 2 * r.count);
    }
    SUBCASE("stride uses ceiling division") {
        LayerSpec strided = layer;
        strided.stride = 2;
        const auto s = layer_madds(strided, 9, 9);
        CHECK(s.h_out == 5);
        CHECK(s.w_out == 5);
        // 9*9*16*48 + 5*5*48*9 + 5*5*48*16
        CHECK(s.count == 81u * 16 * 48 + 25u * 48 * 9 + 25u * 48 * 16);
    }
}

TEST_CASE("total madds: golden all-minimal value and breakdown consistency") {
    const auto cfg = SearchSpaceConfig::defaults();
    const auto chan = ChannelTable::defaults();
    Genotype minimal;
    minimal.genes.assign(46, 0);
    const auto report = total_madds(decode(minimal, cfg, chan), chan);

    CHECK(report.total_count == 85879616u); // frozen from the spreadsheet oracle below
    CHECK(report.total_millions() == doctest::Approx(85.879616));

    const std::uint64_t oracle = oracles::spreadsheet_madds(
        192, {2, 2, 2, 2, 2},
        {{3, 3, 0, 0}, {3, 3, 0, 0}, {3, 3, 0, 0}, {3, 3, 0, 0}, {3, 3, 0, 0}},
        {{3, 3, 0, 0}, {3, 3, 0, 0}, {3, 3, 0, 0}, {3, 3, 0, 0}, {3, 3, 0, 0}});
    CHECK(report.total_count == oracle);

    std::uint64_t sum = 0;
    for (const auto& [label, count] : report.per_layer) sum += count;
    CHECK(sum == report.total_count);
    CHECK(report.per_layer.front().first == "stem");
    CHECK(report.per_layer.back().first == "classifier");
}

TEST_CASE("total madds agrees with the spreadsheet oracle on random genotypes") {
    const auto cfg = SearchSpaceConfig::defaults();
    const auto chan = ChannelTable::defaults();
    Rng rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const Genotype g = random_genotype(rng, cfg);
        std::vector<int> depths;
        std::vector<std::vector<int>> kernels, expansions;
        for (int b = 0; b < 5; ++b) {
            depths.push_back(cfg.depth_options[static_cast<std::size_t>(g.depth_idx(cfg, b))]);
            std::vector<int> ks, es;
            for (int l = 0; l < 4; ++l) {
                ks.push_back(cfg.kernel_options[static_cast<std::size_t>(g.kernel_idx(cfg, b, l))]);
                es.push_back(cfg.expansion_options[static_cast<std::size_t>(g.expansion_idx(cfg, b, l))]);
            }
            kernels.push_back(ks);
            expansions.push_back(es);
        }
        const std::uint64_t expect = oracles::spreadsheet_madds(
            cfg.resolutions[static_cast<std::size_t>(g.resolution_idx())], depths, kernels, expansions);
        CHECK(total_madds(decode(g, cfg, chan), chan).total_count == expect);
    }
}

TEST_CASE("single-gene increases never decrease madds, strictly for active spatial genes") {
    const auto cfg = SearchSpaceConfig::defaults();
    const auto chan = ChannelTable::defaults();
    Rng rng(23);
    int strict_checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        Genotype g = random_genotype(rng, cfg);
        const int gene = uniform_int(rng, 0, cfg.gene_count() - 1);
        if (g.genes[static_cast<std::size_t>(gene)] >= cfg.options_at(gene) - 1) continue;
        Genotype up = g;
        up.genes[static_cast<std::size_t>(gene)] += 1;
        const auto before = total_madds(decode(g, cfg, chan), chan).total_count;
        const auto after = total_madds(decode(up, cfg, chan), chan).total_count;
        CHECK(after >= before);
        if (gene == 0) {
            CHECK(after > before); // resolution is always active
            ++strict_checked;
        }
    }
    CHECK(strict_checked > 0);

    SUBCASE("kernel increase on an active layer is strict") {
        Genotype g;
        g.genes.assign(46, 0);
        Genotype up = g;
        up.genes[2] = 1; // block 1, layer 1 kernel: depth 2 keeps it active
        CHECK(total_madds(decode(up, cfg, chan), chan).total_count >
              total_madds(decode(g, cfg, chan), chan).total_count);
    }
}

TEST_CASE("madds is a pure function") {
    const auto cfg = SearchSpaceConfig::defaults();
    const auto chan = ChannelTable::defaults();
    Rng rng(5);
    const Genotype g = random_genotype(rng, cfg);
    const auto a = total_madds(decode(g, cfg, chan), chan);
    const auto b = total_madds(decode(g, cfg, chan), chan);
    CHECK(a.total_count == b.total_count);
    CHECK(a.per_layer == b.per_layer);
}

TEST_CASE("channel table invariants") {
    const auto cfg = SearchSpaceConfig::defaults();
    ChannelTable chan;
    chan.block_strides = {2, 2, 3, 1, 2};
    CHECK_THROWS_AS(chan.check(cfg), Error);
    chan = ChannelTable::defaults();
    chan.block_out_channels.pop_back();
    CHECK_THROWS_AS(chan.check(cfg), Error);
}
