#include "smem/search.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <unordered_set>

#include "smem/error.hpp"
#include "smem/metrics.hpp"
#include "smem/pairs.hpp"
#include "smem/parallel.hpp"

namespace smem {

namespace fs = std::filesystem;

void SearchConfig::check() const {
    if (initial_samples < 2) throw data_error("search: N must be >= 2");
    if (iterations < 1) throw data_error("search: T must be >= 1");
    if (elites_per_iteration < 1) throw data_error("search: K_elite must be >= 1");
    if (threads < 1) throw data_error("search: threads must be >= 1");
    space.check();
    channels.check(space);
    moea.check();
    if (moea.generations < 1) throw data_error("search: moea G must be >= 1");
    if (evaluator_kind == EvaluatorKind::synthetic) oracle.check(space);
    else if (tabular_path.empty()) throw data_error("search: tabular evaluator needs a path");
}

std::unique_ptr<Evaluator> make_evaluator(const SearchConfig& cfg) {
    if (cfg.evaluator_kind == EvaluatorKind::synthetic)
        return std::make_unique<SyntheticOracle>(cfg.space, cfg.oracle);
    return std::make_unique<TabularEvaluator>(TabularEvaluator::load(cfg.tabular_path, cfg.space));
}

namespace {

// Batch-evaluate genotypes; results committed in input order.
std::vector<double> evaluate_batch(const std::vector<Genotype>& genotypes, const Evaluator& evaluator,
                                   int threads) {
    std::vector<double> acc(genotypes.size());
    parallel_for_n(genotypes.size(), threads, [&](std::size_t i) { acc[i] = evaluator.evaluate(genotypes[i]); });
    return acc;
}

} // namespace

std::vector<EvaluatedArch> initialize_archive(const SearchConfig& cfg, const Evaluator& evaluator, Rng& rng) {
    std::vector<Genotype> samples;
    std::unordered_set<std::string> seen;
    long attempts = 0;
    const long max_attempts = 1000L * cfg.initial_samples;
    while (static_cast<int>(samples.size()) < cfg.initial_samples && attempts < max_attempts) {
        ++attempts;
        Genotype g = random_genotype(rng, cfg.space);
        if (seen.insert(to_text(g)).second) samples.push_back(std::move(g));
    }
    if (static_cast<int>(samples.size()) < cfg.initial_samples)
        throw data_error("initialize_archive: could not sample enough unique genotypes");

    const std::vector<double> acc = evaluate_batch(samples, evaluator, cfg.threads);
    std::vector<EvaluatedArch> archive;
    archive.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        EvaluatedArch a;
        a.genotype = std::move(samples[i]);
        a.accuracy = acc[i];
        a.madds = genotype_madds_millions(a.genotype, cfg.space, cfg.channels);
        a.origin = Origin::initial;
        a.iteration = -1;
        a.eval_order = static_cast<long>(i);
        archive.push_back(std::move(a));
    }
    return archive;
}

std::vector<Genotype> select_elites(const std::vector<Individual>& solutions,
                                    const std::vector<EvaluatedArch>& archive, int k_elite,
                                    const SearchSpaceConfig& space, Rng& rng) {
    if (solutions.empty()) throw data_error("select_elites: empty solution set");
    std::unordered_set<std::string> taken;
    for (const auto& a : archive) taken.insert(to_text(a.genotype));

    std::vector<int> novel;
    for (int i = 0; i < static_cast<int>(solutions.size()); ++i)
        if (!taken.contains(to_text(solutions[static_cast<std::size_t>(i)].canonical))) novel.push_back(i);

    std::vector<Genotype> elites;
    if (!novel.empty()) {
        std::vector<Eigen::Vector2d> points;
        points.reserve(novel.size());
        for (int i : novel) points.push_back(solutions[static_cast<std::size_t>(i)].objectives);
        const auto fronts = fast_nondominated_sort(points);
        for (const auto& front : fronts) {
            if (static_cast<int>(elites.size()) >= k_elite) break;
            const int room = k_elite - static_cast<int>(elites.size());
            std::vector<int> picked = front;
            if (static_cast<int>(front.size()) > room) {
                std::vector<Eigen::Vector2d> front_points;
                front_points.reserve(front.size());
                for (int idx : front) front_points.push_back(points[static_cast<std::size_t>(idx)]);
                const auto crowd = crowding_distances(front_points);
                std::stable_sort(picked.begin(), picked.end(), [&](int a, int b) {
                    const double ca = crowd[static_cast<std::size_t>(
                        std::find(front.begin(), front.end(), a) - front.begin())];
                    const double cb = crowd[static_cast<std::size_t>(
                        std::find(front.begin(), front.end(), b) - front.begin())];
                    return ca > cb;
                });
                picked.resize(static_cast<std::size_t>(room));
            }
            for (int idx : picked) {
                const Genotype& g = solutions[static_cast<std::size_t>(novel[static_cast<std::size_t>(idx)])].canonical;
                taken.insert(to_text(g));
                elites.push_back(g);
            }
        }
    }

    long attempts = 0;
    const long max_attempts = 10000L * k_elite;
    while (static_cast<int>(elites.size()) < k_elite && attempts < max_attempts) {
        ++attempts;
        Genotype g = random_genotype(rng, space);
        if (taken.insert(to_text(g)).second) elites.push_back(std::move(g));
    }
    if (static_cast<int>(elites.size()) < k_elite)
        throw data_error("select_elites: could not find enough novel genotypes");
    return elites;
}

double archive_hypervolume(const std::vector<EvaluatedArch>& archive, double ref_madds_millions) {
    std::vector<Eigen::Vector2d> points;
    points.reserve(archive.size());
    for (const auto& a : archive)
        points.emplace_back(1.0 - a.accuracy, a.madds / ref_madds_millions);
    return hypervolume_2d(std::move(points), Eigen::Vector2d(1.0, 1.0));
}

std::vector<std::size_t> archive_front(const std::vector<EvaluatedArch>& archive) {
    std::vector<Eigen::Vector2d> points;
    points.reserve(archive.size());
    for (const auto& a : archive) points.emplace_back(-a.accuracy, a.madds);
    const auto fronts = fast_nondominated_sort(points);
    std::vector<std::size_t> out;
    if (!fronts.empty())
        for (int i : fronts.front()) out.push_back(static_cast<std::size_t>(i));
    return out;
}

nlohmann::json archive_entry_to_json(const EvaluatedArch& a) {
    return {{"accuracy", a.accuracy},
            {"eval_order", a.eval_order},
            {"genotype", to_text(a.genotype)},
            {"iteration", a.iteration},
            {"madds", a.madds},
            {"origin", a.origin == Origin::initial ? "initial" : "elite"}};
}

EvaluatedArch archive_entry_from_json(const nlohmann::json& j, const SearchSpaceConfig& space) {
    EvaluatedArch a;
    a.genotype = genotype_from_text(j.at("genotype").get<std::string>(), space);
    a.accuracy = j.at("accuracy").get<double>();
    a.madds = j.at("madds").get<double>();
    a.origin = j.at("origin").get<std::string>() == "initial" ? Origin::initial : Origin::elite;
    a.iteration = j.at("iteration").get<int>();
    a.eval_order = j.at("eval_order").get<long>();
    return a;
}

namespace {

std::string iso_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Owns the run directory files. Nothing is written until start(), so
// failures during config validation or evaluator construction leave the
// filesystem untouched.
class RunWriter {
public:
    explicit RunWriter(const SearchConfig& cfg) : cfg_(cfg), enabled_(!cfg.output_dir.empty()) {}

    void start() {
        if (!enabled_) return;
        dir_ = fs::path(cfg_.output_dir);
        fs::create_directories(dir_);
        resolved_ = config_to_json(cfg_);
        {
            std::ofstream out(dir_ / "config.json");
            out << resolved_.dump(2) << '\n';
        }
        manifest_["config_hash"] = hash_hex(resolved_.dump());
        manifest_["seed"] = cfg_.seed;
        manifest_["version"] = kToolVersion;
        manifest_["multipop"] = cfg_.moea.multipop;
        manifest_["start_time"] = iso_utc_now();
        manifest_["end_time"] = nullptr;
        manifest_["outputs"] = {{"archive", "archive.jsonl"},
                                {"snapshots", "gen_snapshots.jsonl"},
                                {"front", "front.json"},
                                {"metrics", "metrics.json"}};
        write_manifest();
        if (cfg_.emit_snapshots) snapshots_.open(dir_ / "gen_snapshots.jsonl");
    }

    SnapshotSink snapshot_sink() {
        if (!enabled_ || !cfg_.emit_snapshots) return nullptr;
        return [this](const GenerationSnapshot& snap) {
            nlohmann::json front = nlohmann::json::array();
            for (const auto& p : snap.front0) front.push_back({p.x(), p.y()});
            const nlohmann::json line = {{"front0", std::move(front)},
                                         {"generation", snap.generation},
                                         {"iteration", snap.iteration},
                                         {"population", snap.population_size}};
            snapshots_ << line.dump() << '\n';
        };
    }

    void finish(const RunResult& result) {
        if (!enabled_) return;
        snapshots_.close();
        {
            std::ofstream out(dir_ / "archive.jsonl");
            for (const auto& a : result.archive) out << archive_entry_to_json(a).dump() << '\n';
        }
        {
            nlohmann::json front = nlohmann::json::array();
            for (std::size_t idx : result.front) {
                nlohmann::json row = archive_entry_to_json(result.archive[idx]);
                row["error"] = 1.0 - result.archive[idx].accuracy;
                front.push_back(std::move(row));
            }
            std::ofstream out(dir_ / "front.json");
            out << nlohmann::json{{"front", std::move(front)}}.dump(2) << '\n';
        }
        {
            nlohmann::json iters = nlohmann::json::array();
            for (const auto& m : result.metrics)
                iters.push_back({{"archive_size", m.archive_size},
                                 {"dropped_ties", m.dropped_ties},
                                 {"hv", m.hv},
                                 {"iteration", m.iteration},
                                 {"ktau", m.ktau},
                                 {"pair_count", m.pair_count},
                                 {"score_sum", m.score_sum},
                                 {"seconds", m.seconds}});
            const nlohmann::json metrics = {
                {"hv_reference", {{"error", 1.0}, {"madds_millions", result.hv_reference_madds}}},
                {"iterations", std::move(iters)},
                {"final_front_size", result.front.size()},
                {"total_seconds", result.total_seconds}};
            std::ofstream out(dir_ / "metrics.json");
            out << metrics.dump(2) << '\n';
        }
        manifest_["end_time"] = iso_utc_now();
        write_manifest();
    }

private:
    static std::string hash_hex(const std::string& s) {
        char buf[17];
        std::snprintf(buf, sizeof(buf), "%016llx",
                      static_cast<unsigned long long>(hash_bytes(s)));
        return buf;
    }

    void write_manifest() {
        std::ofstream out(dir_ / "manifest.json");
        out << manifest_.dump(2) << '\n';
    }

    const SearchConfig& cfg_;
    bool enabled_;
    fs::path dir_;
    nlohmann::json resolved_;
    nlohmann::json manifest_;
    std::ofstream snapshots_;
};

} // namespace

RunResult smem_nas(const SearchConfig& cfg) {
    using clock = std::chrono::steady_clock;
    const auto run_start = clock::now();
    cfg.check();
    const auto evaluator = make_evaluator(cfg);

    RunWriter writer(cfg);
    writer.start();
    const SnapshotSink sink = writer.snapshot_sink();

    RunResult result;
    result.hv_reference_madds = 1.05 * max_madds_millions(cfg.space, cfg.channels);

    Rng sample_rng(derive_seed(cfg.seed, 1));
    result.archive = initialize_archive(cfg, *evaluator, sample_rng);

    std::vector<Genotype> archive_genotypes;
    archive_genotypes.reserve(result.archive.size());
    for (const auto& a : result.archive) archive_genotypes.push_back(a.genotype);

    for (int t = 0; t < cfg.iterations; ++t) {
        const auto iter_start = clock::now();
        IterationMetrics metrics;
        metrics.iteration = t;
        metrics.archive_size = static_cast<long>(result.archive.size());

        // Online surrogate refresh from all archive pairs.
        const PairDataset ds = build_pair_dataset(result.archive, cfg.space);
        metrics.pair_count = static_cast<long>(ds.size());
        metrics.dropped_ties = ds.dropped_ties;
        Rng train_rng(derive_seed(cfg.seed, 2, static_cast<std::uint64_t>(t)));
        const auto model = train_surrogate(ds, cfg.surrogate, train_rng);

        // Surrogate quality over the archive: predicted scores vs truth.
        const std::vector<int> scores =
            model->round_robin_scores(feature_matrix(archive_genotypes, cfg.space), cfg.threads);
        std::vector<double> score_values(scores.size()), acc_values(scores.size());
        for (std::size_t i = 0; i < scores.size(); ++i) {
            score_values[i] = scores[i];
            acc_values[i] = result.archive[i].accuracy;
            metrics.score_sum += scores[i];
        }
        metrics.ktau = kendall_tau(score_values, acc_values);

        MoeaConfig moea_cfg = cfg.moea;
        moea_cfg.seed = derive_seed(cfg.seed, 3, static_cast<std::uint64_t>(t));
        const std::vector<Individual> population =
            mp_moea(archive_genotypes, *model, moea_cfg, cfg.space, cfg.channels, cfg.threads, t, sink);

        Rng elite_rng(derive_seed(cfg.seed, 4, static_cast<std::uint64_t>(t)));
        const std::vector<Genotype> elites =
            select_elites(population, result.archive, cfg.elites_per_iteration, cfg.space, elite_rng);

        const std::vector<double> acc = evaluate_batch(elites, *evaluator, cfg.threads);
        for (std::size_t i = 0; i < elites.size(); ++i) {
            EvaluatedArch a;
            a.genotype = elites[i];
            a.accuracy = acc[i];
            a.madds = genotype_madds_millions(a.genotype, cfg.space, cfg.channels);
            a.origin = Origin::elite;
            a.iteration = t;
            a.eval_order = static_cast<long>(result.archive.size());
            archive_genotypes.push_back(a.genotype);
            result.archive.push_back(std::move(a));
        }

        metrics.hv = archive_hypervolume(result.archive, result.hv_reference_madds);
        metrics.seconds = std::chrono::duration<double>(clock::now() - iter_start).count();
        result.metrics.push_back(metrics);
    }

    result.front = archive_front(result.archive);
    result.total_seconds = std::chrono::duration<double>(clock::now() - run_start).count();
    writer.finish(result);
    return result;
}

} // namespace smem
