#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smem/ablate.hpp"
#include "smem/complexity.hpp"
#include "smem/error.hpp"
#include "smem/metrics.hpp"
#include "smem/pairs.hpp"
#include "smem/search.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigArgs {
    std::string config_path;
    std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("-c,--config", args.config_path, "JSON config file (merged over built-in defaults)")
        ->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", args.overrides,
                    "Override a config key, e.g. --set N=50 --set moea.G=10 --set classifier=knn");
}

smem::SearchConfig resolve_config(const ConfigArgs& args) {
    json resolved = smem::config_to_json(smem::SearchConfig{});
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path);
        json file_cfg;
        try {
            in >> file_cfg;
        } catch (const json::exception& e) {
            throw smem::data_error("config " + args.config_path + ": " + e.what());
        }
        resolved.update(file_cfg, true);
    }
    for (const auto& assignment : args.overrides) smem::apply_override(resolved, assignment);
    return smem::config_from_json(resolved);
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv, int num_seeds) {
    std::vector<std::uint64_t> seeds;
    if (!csv.empty()) {
        std::stringstream ss(csv);
        std::string item;
        while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
    } else {
        for (int i = 1; i <= num_seeds; ++i) seeds.push_back(static_cast<std::uint64_t>(i));
    }
    if (seeds.empty()) throw smem::usage_error("no seeds given");
    return seeds;
}

smem::Genotype parse_genotype_arg(const std::string& text, const smem::SearchSpaceConfig& space) {
    if (!text.empty() && text.front() == '[') {
        const auto values = json::parse(text).get<std::vector<int>>();
        if (static_cast<int>(values.size()) != space.gene_count())
            throw smem::data_error("genotype array has " + std::to_string(values.size()) +
                                   " genes, expected " + std::to_string(space.gene_count()));
        smem::Genotype g{values};
        smem::require_valid(g, space);
        return g;
    }
    return smem::genotype_from_text(text, space);
}

int cmd_search(const ConfigArgs& cfg_args, const std::string& out_dir, bool no_multipop,
               std::optional<std::uint64_t> seed, std::optional<int> threads) {
    smem::SearchConfig cfg = resolve_config(cfg_args);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (no_multipop) cfg.moea.multipop = false;
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (cfg.output_dir.empty()) cfg.output_dir = "run";

    const smem::RunResult result = smem::smem_nas(cfg);
    std::printf("archive: %zu evaluated architectures\n", result.archive.size());
    std::printf("front:   %zu non-dominated\n", result.front.size());
    std::printf("hv:      %.6f (ref error 1.0, madds %.1fM)\n",
                result.metrics.back().hv, result.hv_reference_madds);
    std::printf("output:  %s\n", cfg.output_dir.c_str());
    return 0;
}

int cmd_madds(const ConfigArgs& cfg_args, const std::string& genotype_text) {
    const smem::SearchConfig cfg = resolve_config(cfg_args);
    const smem::Genotype g = parse_genotype_arg(genotype_text, cfg.space);
    const smem::DecodedArchitecture arch = smem::decode(g, cfg.space, cfg.channels);
    const smem::MAddsReport report = smem::total_madds(arch, cfg.channels);
    json per_layer = json::array();
    for (const auto& [label, count] : report.per_layer) per_layer.push_back({{"label", label}, {"madds", count}});
    const json out = {{"genotype", smem::to_text(g)},
                      {"resolution", arch.resolution},
                      {"total_madds", report.total_count},
                      {"total_madds_millions", report.total_millions()},
                      {"per_layer", std::move(per_layer)}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_ablate(const ConfigArgs& cfg_args, const std::string& kind, const std::string& seeds_csv,
               int num_seeds, bool with_hv, const std::string& out_path) {
    const smem::SearchConfig cfg = resolve_config(cfg_args);
    const auto seeds = parse_seeds(seeds_csv, num_seeds);
    smem::Table table;
    if (kind == "classifier") table = smem::ablate_classifier(cfg, seeds);
    else if (kind == "multipop") table = smem::ablate_multipop(cfg, seeds);
    else if (kind == "initsize") table = smem::ablate_initsize(cfg, seeds, {25, 50, 100, 150}, with_hv);
    else throw smem::usage_error("unknown ablation kind '" + kind + "' (classifier|multipop|initsize)");
    const std::string csv = smem::to_csv(table);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        if (!out) throw smem::data_error("cannot write " + out_path);
        out << csv;
        std::printf("wrote %s\n", out_path.c_str());
    }
    return 0;
}

int cmd_front(const std::string& run_dir) {
    const fs::path dir(run_dir);
    const fs::path front_path = dir / "front.json";
    if (!fs::exists(front_path)) throw smem::data_error("no front.json in " + run_dir + " (incomplete run?)");

    std::ifstream in(front_path);
    json front_doc;
    try {
        in >> front_doc;
    } catch (const json::exception& e) {
        throw smem::data_error(front_path.string() + ": " + e.what());
    }
    {
        std::ofstream out(dir / "front.csv");
        out << "error,madds_millions,accuracy,genotype\n";
        for (const auto& row : front_doc.at("front"))
            out << row.at("error").get<double>() << ',' << row.at("madds").get<double>() << ','
                << row.at("accuracy").get<double>() << ',' << row.at("genotype").get<std::string>() << '\n';
    }
    std::printf("wrote %s\n", (dir / "front.csv").string().c_str());

    const fs::path snap_path = dir / "gen_snapshots.jsonl";
    if (fs::exists(snap_path)) {
        std::ifstream snaps(snap_path);
        std::ofstream out(dir / "snapshots.csv");
        out << "iteration,generation,population,neg_rank_score,madds_millions\n";
        std::string line;
        while (std::getline(snaps, line)) {
            if (line.empty()) continue;
            const json snap = json::parse(line);
            for (const auto& p : snap.at("front0"))
                out << snap.at("iteration").get<int>() << ',' << snap.at("generation").get<int>() << ','
                    << snap.at("population").get<long>() << ',' << p[0].get<double>() << ','
                    << p[1].get<double>() << '\n';
        }
        std::printf("wrote %s\n", (dir / "snapshots.csv").string().c_str());
    }
    return 0;
}

int cmd_rank(const ConfigArgs& cfg_args, const std::string& table_path, int holdout,
             const std::string& model_out, std::optional<int> threads) {
    smem::SearchConfig cfg = resolve_config(cfg_args);
    if (threads) cfg.threads = *threads;
    const auto records = smem::load_tabular_records(table_path, cfg.space);
    if (static_cast<int>(records.size()) < 2 + holdout)
        throw smem::data_error("need at least " + std::to_string(2 + holdout) + " records, got " +
                               std::to_string(records.size()));
    if (holdout < 0) throw smem::usage_error("--holdout must be >= 0");

    const std::size_t n_train = records.size() - static_cast<std::size_t>(holdout);
    std::vector<smem::EvaluatedArch> train_archive;
    for (std::size_t i = 0; i < n_train; ++i) {
        smem::EvaluatedArch a;
        a.genotype = records[i].genotype;
        a.accuracy = records[i].accuracy;
        a.madds = smem::genotype_madds_millions(a.genotype, cfg.space, cfg.channels);
        a.eval_order = static_cast<long>(i);
        train_archive.push_back(std::move(a));
    }
    const smem::PairDataset ds = smem::build_pair_dataset(train_archive, cfg.space);
    smem::Rng rng(smem::derive_seed(cfg.seed, 2));
    const auto model = smem::train_surrogate(ds, cfg.surrogate, rng);

    std::vector<smem::Genotype> candidates;
    std::vector<double> truth;
    const std::size_t begin = holdout > 0 ? n_train : 0;
    for (std::size_t i = begin; i < records.size(); ++i) {
        candidates.push_back(records[i].genotype);
        truth.push_back(records[i].accuracy);
    }
    const std::vector<int> scores = smem::rank_candidates(*model, candidates, cfg.space, cfg.threads);
    std::vector<double> score_values(scores.begin(), scores.end());
    const json out = {{"classifier", smem::to_string(cfg.surrogate.kind)},
                      {"n_train", n_train},
                      {"n_scored", candidates.size()},
                      {"pairs", ds.size()},
                      {"ktau", smem::kendall_tau(score_values, truth)},
                      {"spearman", smem::spearman_rho(score_values, truth)}};
    std::cout << out.dump(2) << '\n';
    if (!model_out.empty()) {
        smem::save_surrogate(*model, model_out);
        std::fprintf(stderr, "model saved to %s\n", model_out.c_str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surrogate-assisted multi-objective evolutionary architecture search"};
    app.require_subcommand(1);

    ConfigArgs search_cfg, madds_cfg, ablate_cfg, rank_cfg;

    auto* search = app.add_subcommand("search", "Run the full search and write a run directory");
    add_config_options(search, search_cfg);
    std::string search_out;
    bool no_multipop = false;
    std::optional<std::uint64_t> search_seed;
    std::optional<int> search_threads;
    search->add_option("-o,--out", search_out, "Run output directory (default 'run')");
    search->add_flag("--no-multipop", no_multipop, "Disable the multi-population mechanism (ablation)");
    search->add_option("--seed", search_seed, "Master seed");
    search->add_option("--threads", search_threads, "Worker threads for evaluation and ranking");

    auto* madds = app.add_subcommand("madds", "Print the MAdds report for a genotype");
    add_config_options(madds, madds_cfg);
    std::string genotype_text;
    madds->add_option("genotype", genotype_text, "Genotype text (one char per gene) or JSON int array")
        ->required();

    auto* ablate = app.add_subcommand("ablate", "Run an ablation study and emit CSV");
    add_config_options(ablate, ablate_cfg);
    std::string ablate_kind, ablate_seeds, ablate_out;
    int ablate_num_seeds = 5;
    bool ablate_hv = false;
    ablate->add_option("kind", ablate_kind, "classifier | multipop | initsize")->required();
    ablate->add_option("--seeds", ablate_seeds, "Comma-separated seed list (default 1..num-seeds)");
    ablate->add_option("--num-seeds", ablate_num_seeds, "Number of default seeds");
    ablate->add_flag("--hv", ablate_hv, "initsize: also run a search per size and report hypervolume");
    ablate->add_option("-o,--out", ablate_out, "Write CSV here instead of stdout");

    auto* front = app.add_subcommand("front", "Export front.csv and snapshots.csv from a run directory");
    std::string front_dir;
    front->add_option("rundir", front_dir, "Completed run directory")->required();

    auto* rank = app.add_subcommand("rank", "Train a surrogate on a tabular file and print rank quality");
    add_config_options(rank, rank_cfg);
    std::string rank_table, rank_model_out;
    int rank_holdout = 0;
    std::optional<int> rank_threads;
    rank->add_option("table", rank_table, "Tabular file: genotype_text,accuracy lines")->required();
    rank->add_option("--holdout", rank_holdout, "Score only the last K records (trained on the rest)");
    rank->add_option("--model-out", rank_model_out, "Save the trained model JSON here");
    rank->add_option("--threads", rank_threads, "Worker threads for ranking");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*search) return cmd_search(search_cfg, search_out, no_multipop, search_seed, search_threads);
        if (*madds) return cmd_madds(madds_cfg, genotype_text);
        if (*ablate) return cmd_ablate(ablate_cfg, ablate_kind, ablate_seeds, ablate_num_seeds, ablate_hv, ablate_out);
        if (*front) return cmd_front(front_dir);
        if (*rank) return cmd_rank(rank_cfg, rank_table, rank_holdout, rank_model_out, rank_threads);
    } catch (const smem::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
    return 1;
}
