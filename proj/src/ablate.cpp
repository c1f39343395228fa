#include "smem/ablate.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <unordered_set>

#include "smem/error.hpp"
#include "smem/metrics.hpp"
#include "smem/pairs.hpp"

namespace smem {

std::string to_csv(const Table& table) {
    std::ostringstream out;
    auto emit_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    };
    emit_row(table.header);
    for (const auto& row : table.rows) emit_row(row);
    return out.str();
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) throw internal_error("median of empty set");
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::string fmt(double x) {
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

std::vector<Genotype> sample_unique(Rng& rng, const SearchSpaceConfig& space, int count) {
    std::vector<Genotype> out;
    std::unordered_set<std::string> seen;
    long attempts = 0;
    while (static_cast<int>(out.size()) < count && attempts < 1000L * count) {
        ++attempts;
        Genotype g = random_genotype(rng, space);
        if (seen.insert(to_text(g)).second) out.push_back(std::move(g));
    }
    if (static_cast<int>(out.size()) < count) throw data_error("could not sample enough unique genotypes");
    return out;
}

} // namespace

SurrogateTrial surrogate_trial(const SearchConfig& cfg, SurrogateKind kind, int n_train, int n_test,
                               std::uint64_t seed) {
    using clock = std::chrono::steady_clock;
    const auto evaluator = make_evaluator(cfg);
    Rng rng(derive_seed(seed, 10));
    const std::vector<Genotype> all = sample_unique(rng, cfg.space, n_train + n_test);

    std::vector<EvaluatedArch> train_archive;
    for (int i = 0; i < n_train; ++i) {
        EvaluatedArch a;
        a.genotype = all[static_cast<std::size_t>(i)];
        a.accuracy = evaluator->evaluate(a.genotype);
        a.madds = genotype_madds_millions(a.genotype, cfg.space, cfg.channels);
        a.eval_order = i;
        train_archive.push_back(std::move(a));
    }
    std::vector<Genotype> holdout(all.begin() + n_train, all.end());
    std::vector<double> truth;
    truth.reserve(holdout.size());
    for (const auto& g : holdout) truth.push_back(evaluator->evaluate(g));

    SurrogateConfig scfg = cfg.surrogate;
    scfg.kind = kind;
    const PairDataset ds = build_pair_dataset(train_archive, cfg.space);
    Rng train_rng(derive_seed(seed, 11));

    SurrogateTrial trial;
    const auto t0 = clock::now();
    const auto model = train_surrogate(ds, scfg, train_rng);
    const auto t1 = clock::now();
    const std::vector<int> scores = rank_candidates(*model, holdout, cfg.space, cfg.threads);
    const auto t2 = clock::now();

    std::vector<double> score_values(scores.begin(), scores.end());
    trial.ktau = kendall_tau(score_values, truth);
    trial.spearman = spearman_rho(score_values, truth);
    trial.train_seconds = std::chrono::duration<double>(t1 - t0).count();
    trial.predict_seconds = std::chrono::duration<double>(t2 - t1).count();
    return trial;
}

Table ablate_classifier(const SearchConfig& base, const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw usage_error("classifier ablation needs at least one seed");
    Table table;
    table.header = {"classifier", "median_ktau", "median_spearman", "mean_train_seconds",
                    "mean_predict_seconds"};
    for (SurrogateKind kind :
         {SurrogateKind::svm, SurrogateKind::rf, SurrogateKind::knn, SurrogateKind::mlp}) {
        std::vector<double> ktaus, rhos, train_s, predict_s;
        for (std::uint64_t seed : seeds) {
            const SurrogateTrial t = surrogate_trial(base, kind, base.initial_samples, 50, seed);
            ktaus.push_back(t.ktau);
            rhos.push_back(t.spearman);
            train_s.push_back(t.train_seconds);
            predict_s.push_back(t.predict_seconds);
        }
        table.rows.push_back({to_string(kind), fmt(median(ktaus)), fmt(median(rhos)), fmt(mean(train_s)),
                              fmt(mean(predict_s))});
    }
    return table;
}

Table ablate_multipop(const SearchConfig& base, const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw usage_error("multipop ablation needs at least one seed");
    Table table;
    table.header = {"seed", "hv_with_multipop", "hv_without_multipop"};
    std::vector<double> with_hv, without_hv;
    for (std::uint64_t seed : seeds) {
        SearchConfig cfg = base;
        cfg.output_dir.clear();
        cfg.emit_snapshots = false;
        cfg.seed = seed;
        cfg.moea.multipop = true;
        const double hv1 = smem_nas(cfg).metrics.back().hv;
        cfg.moea.multipop = false;
        const double hv0 = smem_nas(cfg).metrics.back().hv;
        with_hv.push_back(hv1);
        without_hv.push_back(hv0);
        table.rows.push_back({std::to_string(seed), fmt(hv1), fmt(hv0)});
    }
    table.rows.push_back({"median", fmt(median(with_hv)), fmt(median(without_hv))});
    return table;
}

Table ablate_initsize(const SearchConfig& base, const std::vector<std::uint64_t>& seeds,
                      const std::vector<int>& sizes, bool with_search_hv) {
    if (seeds.empty()) throw usage_error("initsize ablation needs at least one seed");
    Table table;
    table.header = {"N", "median_ktau", "median_spearman"};
    if (with_search_hv) table.header.push_back("median_hv");
    for (int n : sizes) {
        std::vector<double> ktaus, rhos, hvs;
        for (std::uint64_t seed : seeds) {
            const SurrogateTrial t = surrogate_trial(base, base.surrogate.kind, n, 50, seed);
            ktaus.push_back(t.ktau);
            rhos.push_back(t.spearman);
            if (with_search_hv) {
                SearchConfig cfg = base;
                cfg.output_dir.clear();
                cfg.emit_snapshots = false;
                cfg.seed = seed;
                cfg.initial_samples = n;
                hvs.push_back(smem_nas(cfg).metrics.back().hv);
            }
        }
        std::vector<std::string> row{std::to_string(n), fmt(median(ktaus)), fmt(median(rhos))};
        if (with_search_hv) row.push_back(fmt(median(hvs)));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace smem
