#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "smem/complexity.hpp"
#include "smem/error.hpp"
#include "smem/evaluation.hpp"

using namespace smem;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "eval_test_" + std::to_string(counter++) + ".tmp";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

Genotype all_genes(const SearchSpaceConfig& cfg, bool maximal) {
    Genotype g;
    g.genes.resize(static_cast<std::size_t>(cfg.gene_count()));
    for (int i = 0; i < cfg.gene_count(); ++i)
        g.genes[static_cast<std::size_t>(i)] = maximal ? cfg.options_at(i) - 1 : 0;
    return g;
}

} // namespace

TEST_CASE("synthetic oracle endpoints") {
    const auto cfg = SearchSpaceConfig::defaults();
    const SyntheticOracle oracle(cfg, {});

    // all features zero -> capacity 0 -> exactly base
    CHECK(oracle.evaluate(all_genes(cfg, false)) == 0.70);

    // all features one: c = 1 + sum_b w_b * (1 + (1/4) * sum_{l<4} (1+1)/2)
    //                     = 1 + 2 * (0.6+0.8+1.0+1.2+1.4) = 11
    const double c_max = 11.0;
    CHECK(oracle.max_capacity() == doctest::Approx(c_max).epsilon(1e-12));
    const double expect = 0.70 + 0.28 * (1.0 - std::exp(-c_max / 3.0));
    CHECK(oracle.evaluate(all_genes(cfg, true)) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("synthetic oracle is deterministic and keys on canonical form") {
    const auto cfg = SearchSpaceConfig::defaults();
    SyntheticOracleParams params;
    params.noise_sigma = 0.05;
    params.seed = 9;
    const SyntheticOracle oracle(cfg, params);
    Rng rng(1);
    for (int i = 0; i < 50; ++i) {
        const Genotype g = random_genotype(rng, cfg);
        const double a1 = oracle.evaluate(g);
        CHECK(a1 == oracle.evaluate(g)); // repeated evaluation, fixed value
        CHECK(a1 >= 0.0);
        CHECK(a1 <= 1.0);

        Genotype padded = g; // same canonical form, noisy inactive genes
        bool changed = false;
        for (int b = 0; b < cfg.num_blocks && !changed; ++b) {
            const int off = cfg.block_offset(b);
            const int depth =
                cfg.depth_options[static_cast<std::size_t>(padded.genes[static_cast<std::size_t>(off)])];
            if (depth < cfg.max_layers_per_block) {
                padded.genes[static_cast<std::size_t>(off + 1 + depth)] = 2;
                changed = true;
            }
        }
        if (changed) CHECK(oracle.evaluate(padded) == a1);
    }
}

TEST_CASE("noiseless accuracy is monotone under single-gene increases") {
    const auto cfg = SearchSpaceConfig::defaults();
    const SyntheticOracle oracle(cfg, {});
    Rng rng(2);
    for (int trial = 0; trial < 500; ++trial) {
        Genotype g = random_genotype(rng, cfg);
        const int gene = uniform_int(rng, 0, cfg.gene_count() - 1);
        if (g.genes[static_cast<std::size_t>(gene)] >= cfg.options_at(gene) - 1) continue;
        Genotype up = g;
        up.genes[static_cast<std::size_t>(gene)] += 1;
        CHECK(oracle.noiseless_accuracy(up) >= oracle.noiseless_accuracy(g));
    }
}

TEST_CASE("synthetic oracle parameter validation") {
    const auto cfg = SearchSpaceConfig::defaults();
    SyntheticOracleParams p;
    p.base = 0.9;
    p.gain = 0.2;
    CHECK_THROWS_AS(SyntheticOracle(cfg, p), Error);
    p = {};
    p.block_weights = {1.0};
    CHECK_THROWS_AS(SyntheticOracle(cfg, p), Error);
    p = {};
    p.tau = 0.0;
    CHECK_THROWS_AS(SyntheticOracle(cfg, p), Error);
}

TEST_CASE("tabular evaluator: lookups, comments, duplicates, conflicts") {
    const auto cfg = SearchSpaceConfig::defaults();
    const std::string g1(46, '0');
    std::string g2(46, '0');
    g2[0] = '5';
    std::string g3(46, '0');
    g3[1] = '1'; // depth idx 1 on block 1

    SUBCASE("basic lookups") {
        TempFile f("# comment line\n" + g1 + ",0.71\n" + g2 + ",0.85  \n\n" + g3 + ",0.9 # inline\n");
        const auto ev = TabularEvaluator::load(f.path, cfg);
        CHECK(ev.size() == 3);
        CHECK(ev.evaluate(genotype_from_text(g1, cfg)) == 0.71);
        CHECK(ev.evaluate(genotype_from_text(g2, cfg)) == 0.85);
        CHECK(ev.evaluate(genotype_from_text(g3, cfg)) == 0.9);

        std::string absent(46, '0');
        absent[0] = '9';
        CHECK_THROWS_WITH_AS(ev.evaluate(genotype_from_text(absent, cfg)),
                             doctest::Contains(absent.c_str()), Error);
    }
    SUBCASE("idempotent duplicates accepted") {
        TempFile f(g1 + ",0.71\n" + g1 + ",0.71\n");
        CHECK(TabularEvaluator::load(f.path, cfg).size() == 1);
    }
    SUBCASE("conflicting duplicates rejected with line number") {
        TempFile f(g1 + ",0.71\n" + g1 + ",0.72\n");
        CHECK_THROWS_WITH_AS(TabularEvaluator::load(f.path, cfg), doctest::Contains("line 2"), Error);
    }
    SUBCASE("canonical-equal rows are the same key") {
        std::string noncanon(46, '0');
        noncanon[4] = '2'; // inactive kernel position under depth idx 0
        TempFile f(g1 + ",0.71\n" + noncanon + ",0.71\n");
        const auto ev = TabularEvaluator::load(f.path, cfg);
        CHECK(ev.size() == 1);
        CHECK(ev.evaluate(genotype_from_text(noncanon, cfg)) == 0.71);
    }
    SUBCASE("parse errors carry line numbers") {
        TempFile f(g1 + ",0.71\nnot a record\n");
        CHECK_THROWS_WITH_AS(TabularEvaluator::load(f.path, cfg), doctest::Contains("line 2"), Error);
        TempFile f2(g1 + ",1.5\n");
        CHECK_THROWS_WITH_AS(TabularEvaluator::load(f2.path, cfg), doctest::Contains("[0, 1]"), Error);
        TempFile f3(std::string(45, '0') + ",0.5\n");
        CHECK_THROWS_AS(TabularEvaluator::load(f3.path, cfg), Error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(TabularEvaluator::load("does_not_exist.tmp", cfg), Error);
    }
}
