#include <doctest.h>

#include <cmath>
#include <set>

#include "smem/complexity.hpp"
#include "smem/error.hpp"
#include "smem/search_space.hpp"

using namespace smem;

namespace {

Genotype zeros(const SearchSpaceConfig& cfg) {
    Genotype g;
    g.genes.assign(static_cast<std::size_t>(cfg.gene_count()), 0);
    return g;
}

void set_block(Genotype& g, const SearchSpaceConfig& cfg, int block, int depth_idx,
               std::vector<int> kernel_idx, std::vector<int> expansion_idx) {
    const int off = cfg.block_offset(block);
    g.genes[static_cast<std::size_t>(off)] = depth_idx;
    for (int l = 0; l < cfg.max_layers_per_block; ++l) {
        g.genes[static_cast<std::size_t>(off + 1 + l)] = kernel_idx[static_cast<std::size_t>(l)];
        g.genes[static_cast<std::size_t>(off + 1 + cfg.max_layers_per_block + l)] =
            expansion_idx[static_cast<std::size_t>(l)];
    }
}

} // namespace

TEST_CASE("default space shape") {
    const auto cfg = SearchSpaceConfig::defaults();
    CHECK(cfg.resolutions.size() == 17);
    CHECK(cfg.resolutions.front() == 192);
    CHECK(cfg.resolutions.back() == 256);
    CHECK(cfg.gene_count() == 46);
    CHECK(cfg.options_at(0) == 17);
    CHECK(cfg.options_at(1) == 3);  // depth
    CHECK(cfg.options_at(2) == 3);  // kernel
    CHECK(cfg.options_at(6) == 3);  // expansion
    cfg.check();
}

TEST_CASE("decode reads the first depth layers with mapped options") {
    const auto cfg = SearchSpaceConfig::defaults();
    const auto chan = ChannelTable::defaults();
    Genotype g = zeros(cfg);
    set_block(g, cfg, 0, 2, {1, 1, 2, 0}, {0, 0, 1, 2});
    const auto arch = decode(g, cfg, chan);

    CHECK(arch.resolution == 192); // resolution_idx 0
    REQUIRE(arch.blocks[0].size() == 4);
    CHECK(arch.blocks[0][0].kernel == 5);
    CHECK(arch.blocks[0][1].kernel == 5);
    CHECK(arch.blocks[0][2].kernel == 7);
    CHECK(arch.blocks[0][3].kernel == 3);
    CHECK(arch.blocks[0][0].expansion == 3);
    CHECK(arch.blocks[0][1].expansion == 3);
    CHECK(arch.blocks[0][2].expansion == 4);
    CHECK(arch.blocks[0][3].expansion == 6);
    // stride only on the first layer of a downsampling block
    CHECK(arch.blocks[0][0].stride == 2);
    CHECK(arch.blocks[0][1].stride == 1);
    // channel chain
    CHECK(arch.blocks[0][0].in_channels == 16);
    CHECK(arch.blocks[0][0].out_channels == 24);
    CHECK(arch.blocks[0][3].in_channels == 24);

    SUBCASE("depth truncation") {
        Genotype g2 = zeros(cfg);
        set_block(g2, cfg, 1, 0, {2, 2, 2, 2}, {0, 0, 0, 0});
        const auto arch2 = decode(g2, cfg, chan);
        REQUIRE(arch2.blocks[1].size() == 2);
        CHECK(arch2.blocks[1][0].kernel == 7);
        CHECK(arch2.blocks[1][1].kernel == 7);
    }
}

TEST_CASE("validate flags out-of-range genes with their position") {
    const auto cfg = SearchSpaceConfig::defaults();
    CHECK(validate(zeros(cfg), cfg).empty());

    Genotype g = zeros(cfg);
    g.genes[0] = 17;
    auto bad = validate(g, cfg);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].position == 0);
    CHECK(bad[0].value == 17);
    CHECK(bad[0].max_allowed == 16);

    Genotype g2 = zeros(cfg);
    g2.genes[3] = 3; // a kernel gene
    bad = validate(g2, cfg);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].position == 3);
    CHECK_THROWS_AS(require_valid(g2, cfg), Error);
}

TEST_CASE("canonicalize zeroes only inactive layer genes") {
    const auto cfg = SearchSpaceConfig::defaults();
    Genotype g = zeros(cfg);
    set_block(g, cfg, 0, 0, {1, 2, 1, 2}, {2, 1, 2, 1}); // depth 2
    const Genotype c = canonicalize(g, cfg);
    CHECK(c.genes[2] == 1);
    CHECK(c.genes[3] == 2);
    CHECK(c.genes[4] == 0);
    CHECK(c.genes[5] == 0);
    CHECK(c.genes[6] == 2);
    CHECK(c.genes[7] == 1);
    CHECK(c.genes[8] == 0);
    CHECK(c.genes[9] == 0);
    CHECK(canonicalize(c, cfg) == c); // idempotent
    CHECK(is_canonical(c, cfg));

    Genotype full = zeros(cfg);
    set_block(full, cfg, 0, 2, {1, 2, 1, 2}, {2, 1, 2, 1}); // depth 4: nothing inactive
    CHECK(canonicalize(full, cfg) == full);
}

TEST_CASE("random genotypes are valid, canonical and deterministic") {
    const auto cfg = SearchSpaceConfig::defaults();
    Rng a(42), b(42);
    for (int i = 0; i < 50; ++i) {
        const Genotype g1 = random_genotype(a, cfg);
        const Genotype g2 = random_genotype(b, cfg);
        CHECK(g1 == g2);
        CHECK(validate(g1, cfg).empty());
        CHECK(is_canonical(g1, cfg));
    }
}

TEST_CASE("random gene frequencies are uniform over options") {
    const auto cfg = SearchSpaceConfig::defaults();
    Rng rng(7);
    const int n = 10000;
    int depth_counts[3] = {0, 0, 0};
    for (int i = 0; i < n; ++i) {
        const Genotype g = random_genotype(rng, cfg);
        ++depth_counts[g.depth_idx(cfg, 0)];
    }
    const double p = 1.0 / 3.0;
    const double sigma = std::sqrt(n * p * (1 - p));
    for (int c : depth_counts) CHECK(std::abs(c - n * p) < 3 * sigma);
}

TEST_CASE("features normalize gene indices into [0,1]") {
    const auto cfg = SearchSpaceConfig::defaults();
    CHECK(to_features(zeros(cfg), cfg).isZero());

    Genotype g = zeros(cfg);
    g.genes[0] = 16;
    g.genes[1] = 2; // depth max so the kernel gene stays active/canonical
    g.genes[2] = 1; // kernel gene, 3 options
    const auto f = to_features(g, cfg);
    CHECK(f[0] == doctest::Approx(1.0));
    CHECK(f[2] == doctest::Approx(0.5));

    SUBCASE("single-option lists map to zero") {
        SearchSpaceConfig tiny = cfg;
        tiny.expansion_options = {4};
        Genotype z = zeros(tiny);
        CHECK(to_features(z, tiny).isZero());
    }
}

TEST_CASE("inactive genes never affect decoding") {
    const auto cfg = SearchSpaceConfig::defaults();
    const auto chan = ChannelTable::defaults();
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        Genotype g = random_genotype(rng, cfg);
        // randomize inactive positions
        Genotype noisy = g;
        for (int b = 0; b < cfg.num_blocks; ++b) {
            const int off = cfg.block_offset(b);
            const int depth =
                cfg.depth_options[static_cast<std::size_t>(noisy.genes[static_cast<std::size_t>(off)])];
            for (int l = depth; l < cfg.max_layers_per_block; ++l) {
                noisy.genes[static_cast<std::size_t>(off + 1 + l)] = uniform_int(rng, 0, 2);
                noisy.genes[static_cast<std::size_t>(off + 1 + cfg.max_layers_per_block + l)] =
                    uniform_int(rng, 0, 2);
            }
        }
        CHECK(canonicalize(noisy, cfg) == g);
        const auto a1 = decode(noisy, cfg, chan);
        const auto a2 = decode(g, cfg, chan);
        CHECK(a1.resolution == a2.resolution);
        REQUIRE(a1.blocks.size() == a2.blocks.size());
        for (std::size_t b = 0; b < a1.blocks.size(); ++b) {
            REQUIRE(a1.blocks[b].size() == a2.blocks[b].size());
            for (std::size_t l = 0; l < a1.blocks[b].size(); ++l) {
                CHECK(a1.blocks[b][l].kernel == a2.blocks[b][l].kernel);
                CHECK(a1.blocks[b][l].expansion == a2.blocks[b][l].expansion);
            }
        }
    }
}

TEST_CASE("text form round-trips and rejects malformed input") {
    const auto cfg = SearchSpaceConfig::defaults();
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const Genotype g = random_genotype(rng, cfg);
        const std::string text = to_text(g);
        CHECK(text.size() == 46);
        CHECK(genotype_from_text(text, cfg) == g);
    }

    Genotype hi = zeros(cfg);
    hi.genes[0] = 16;
    CHECK(to_text(hi)[0] == 'g'); // indices past 9 use letters

    CHECK_THROWS_WITH_AS(genotype_from_text(std::string(45, '0'), cfg),
                         doctest::Contains("expected 46"), Error);
    CHECK_THROWS_AS(genotype_from_text(std::string(46, 'z'), cfg), Error); // out of range
    CHECK_THROWS_AS(genotype_from_text(std::string(46, '!'), cfg), Error);
}

TEST_CASE("config invariants are enforced") {
    auto cfg = SearchSpaceConfig::defaults();
    cfg.kernel_options = {5, 5};
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = SearchSpaceConfig::defaults();
    cfg.resolutions.clear();
    CHECK_THROWS_AS(cfg.check(), Error);
    cfg = SearchSpaceConfig::defaults();
    cfg.num_blocks = 0;
    CHECK_THROWS_AS(cfg.check(), Error);
}
