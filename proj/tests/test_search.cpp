#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "oracles.hpp"
#include "smem/error.hpp"
#include "smem/pairs.hpp"
#include "smem/search.hpp"

using namespace smem;
namespace fs = std::filesystem;

namespace {

SearchConfig small_config(std::uint64_t seed) {
    SearchConfig cfg;
    cfg.initial_samples = 16;
    cfg.iterations = 3;
    cfg.elites_per_iteration = 4;
    cfg.moea.generations = 4;
    cfg.moea.offspring_per_generation = 12;
    cfg.moea.vice_size = 5;
    cfg.seed = seed;
    return cfg;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("initialize_archive samples N unique canonical genotypes deterministically") {
    const SearchConfig cfg = small_config(5);
    const auto evaluator = make_evaluator(cfg);
    Rng r1(9), r2(9);
    const auto a1 = initialize_archive(cfg, *evaluator, r1);
    const auto a2 = initialize_archive(cfg, *evaluator, r2);
    REQUIRE(a1.size() == 16);
    std::unordered_set<std::string> keys;
    for (std::size_t i = 0; i < a1.size(); ++i) {
        CHECK(a1[i].genotype == a2[i].genotype);
        CHECK(a1[i].accuracy == a2[i].accuracy);
        CHECK(a1[i].eval_order == static_cast<long>(i));
        CHECK(is_canonical(a1[i].genotype, cfg.space));
        CHECK(keys.insert(to_text(a1[i].genotype)).second);
        CHECK(a1[i].accuracy >= 0.0);
        CHECK(a1[i].accuracy <= 1.0);
        CHECK(a1[i].madds > 0.0);
    }
}

TEST_CASE("select_elites: whole fronts first, crowding breaks the last front") {
    const auto space = SearchSpaceConfig::defaults();
    // 10 novel solutions in fronts of size 3 / 4 / 3
    const std::vector<Eigen::Vector2d> pts = {
        {0, 2}, {1, 1}, {2, 0},                 // front 0
        {1, 3}, {2, 2}, {3, 1}, {4, 0},         // front 1
        {2, 4}, {3, 3}, {4, 2},                 // front 2
    };
    Rng grng(404);
    std::vector<Individual> solutions;
    std::unordered_set<std::string> seen;
    while (solutions.size() < pts.size()) {
        Genotype g = random_genotype(grng, space);
        if (!seen.insert(to_text(g)).second) continue;
        Individual ind;
        ind.genotype = g;
        ind.canonical = g;
        ind.objectives = pts[solutions.size()];
        solutions.push_back(std::move(ind));
    }

    Rng rng(7);
    const auto elites = select_elites(solutions, {}, 8, space, rng);
    REQUIRE(elites.size() == 8);
    // fronts 0 and 1 complete, then one crowding-selected member of front 2;
    // (2,4) is a boundary point of front 2 and precedes the other boundary by index
    std::vector<std::string> keys;
    for (const auto& g : elites) keys.push_back(to_text(g));
    for (int i = 0; i < 7; ++i) CHECK(keys[static_cast<std::size_t>(i)] == to_text(solutions[static_cast<std::size_t>(i)].canonical));
    CHECK(keys[7] == to_text(solutions[7].canonical));

    SUBCASE("already-archived solutions are discarded; fallback is random and unique") {
        std::vector<EvaluatedArch> archive;
        for (const auto& s : solutions) {
            EvaluatedArch a;
            a.genotype = s.canonical;
            a.accuracy = 0.8;
            a.madds = 1.0;
            archive.push_back(std::move(a));
        }
        Rng rng2(8);
        const auto fresh = select_elites(solutions, archive, 5, space, rng2);
        REQUIRE(fresh.size() == 5);
        std::unordered_set<std::string> unique;
        for (const auto& g : fresh) {
            const std::string key = to_text(g);
            CHECK(unique.insert(key).second);
            for (const auto& a : archive) CHECK(key != to_text(a.genotype));
        }
    }
}

TEST_CASE("smem_nas: bookkeeping, determinism, outputs") {
    const fs::path dir1 = fs::temp_directory_path() / "smem_test_run1";
    const fs::path dir2 = fs::temp_directory_path() / "smem_test_run2";
    fs::remove_all(dir1);
    fs::remove_all(dir2);

    SearchConfig cfg = small_config(12);
    cfg.output_dir = dir1.string();
    const RunResult r1 = smem_nas(cfg);

    SUBCASE("archive grows by exactly K_elite per iteration, unique and ordered") {
        CHECK(r1.archive.size() == 16 + 3 * 4);
        std::unordered_set<std::string> keys;
        for (std::size_t i = 0; i < r1.archive.size(); ++i) {
            CHECK(r1.archive[i].eval_order == static_cast<long>(i));
            CHECK(keys.insert(to_text(r1.archive[i].genotype)).second);
        }
        for (std::size_t t = 0; t < r1.metrics.size(); ++t) {
            const auto& m = r1.metrics[t];
            CHECK(m.archive_size == 16 + 4 * static_cast<long>(t));
            CHECK(m.pair_count + m.dropped_ties == m.archive_size * (m.archive_size - 1) / 2);
            CHECK(m.score_sum == m.archive_size * (m.archive_size - 1) / 2);
        }
    }

    SUBCASE("final front is exactly the brute-force non-dominated set") {
        std::vector<Eigen::Vector2d> pts;
        for (const auto& a : r1.archive) pts.emplace_back(-a.accuracy, a.madds);
        const auto levels = oracles::brute_force_fronts(pts);
        std::vector<std::size_t> expect;
        for (std::size_t i = 0; i < levels.size(); ++i)
            if (levels[i] == 0) expect.push_back(i);
        CHECK(r1.front == expect);
    }

    SUBCASE("hypervolume of the archive front never decreases over iterations") {
        double prev = 0.0;
        for (const auto& m : r1.metrics) {
            CHECK(m.hv >= prev);
            prev = m.hv;
        }
    }

    SUBCASE("identical config and seed give byte-identical archives, threads included") {
        SearchConfig cfg2 = small_config(12);
        cfg2.output_dir = dir2.string();
        cfg2.threads = 3;
        smem_nas(cfg2);
        CHECK(read_file(dir1 / "archive.jsonl") == read_file(dir2 / "archive.jsonl"));
    }

    SUBCASE("run directory contents") {
        for (const char* name :
             {"config.json", "manifest.json", "archive.jsonl", "gen_snapshots.jsonl", "front.json",
              "metrics.json"})
            CHECK(fs::exists(dir1 / name));

        std::ifstream archive_file(dir1 / "archive.jsonl");
        std::string line;
        std::size_t lines = 0;
        while (std::getline(archive_file, line)) {
            const auto entry = archive_entry_from_json(nlohmann::json::parse(line), cfg.space);
            CHECK(entry.eval_order == static_cast<long>(lines));
            ++lines;
        }
        CHECK(lines == r1.archive.size());

        const auto manifest = nlohmann::json::parse(read_file(dir1 / "manifest.json"));
        CHECK(manifest.at("version").get<std::string>() == kToolVersion);
        CHECK_FALSE(manifest.at("end_time").is_null());
        CHECK(manifest.at("multipop").get<bool>());

        // snapshots: one line per (iteration, generation)
        std::ifstream snaps(dir1 / "gen_snapshots.jsonl");
        std::size_t snap_lines = 0;
        while (std::getline(snaps, line)) ++snap_lines;
        CHECK(snap_lines == 3u * 4u);
    }

    fs::remove_all(dir1);
    fs::remove_all(dir2);
}

TEST_CASE("smem_nas validates its configuration before touching the filesystem") {
    SearchConfig cfg = small_config(1);
    cfg.initial_samples = 1;
    const fs::path dir = fs::temp_directory_path() / "smem_should_not_exist";
    fs::remove_all(dir);
    cfg.output_dir = dir.string();
    CHECK_THROWS_AS(smem_nas(cfg), Error);
    CHECK_FALSE(fs::exists(dir));

    cfg = small_config(1);
    cfg.evaluator_kind = EvaluatorKind::tabular; // no path given
    cfg.output_dir = dir.string();
    CHECK_THROWS_AS(smem_nas(cfg), Error);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("config JSON round-trip and overrides") {
    SearchConfig cfg;
    cfg.seed = 99;
    cfg.moea.generations = 7;
    cfg.surrogate.kind = SurrogateKind::knn;
    const auto j = config_to_json(cfg);
    const SearchConfig back = config_from_json(j);
    CHECK(back.seed == 99);
    CHECK(back.moea.generations == 7);
    CHECK(back.surrogate.kind == SurrogateKind::knn);
    CHECK(back.oracle.noise_sigma == cfg.oracle.noise_sigma);
    CHECK(config_to_json(back) == j);

    SUBCASE("aliases and dotted paths") {
        auto doc = config_to_json(SearchConfig{});
        apply_override(doc, "N=50");
        apply_override(doc, "G=9");
        apply_override(doc, "classifier=rf");
        apply_override(doc, "moea.theta=0.25");
        apply_override(doc, "evaluator.noise_sigma=0");
        apply_override(doc, "multipop=false");
        const SearchConfig out = config_from_json(doc);
        CHECK(out.initial_samples == 50);
        CHECK(out.moea.generations == 9);
        CHECK(out.surrogate.kind == SurrogateKind::rf);
        CHECK(out.moea.theta == 0.25);
        CHECK(out.oracle.noise_sigma == 0.0);
        CHECK_FALSE(out.moea.multipop);
    }
    SUBCASE("malformed overrides are usage errors") {
        auto doc = config_to_json(SearchConfig{});
        CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), Error);
    }
}
