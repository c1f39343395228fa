#include <map>
#include <string>

#include "smem/error.hpp"
#include "smem/search.hpp"

namespace smem {

namespace {

std::string polarity_to_string(ThresholdPolarity p) {
    return p == ThresholdPolarity::prose ? "prose" : "algorithm2";
}

ThresholdPolarity polarity_from_string(const std::string& s) {
    if (s == "prose") return ThresholdPolarity::prose;
    if (s == "algorithm2") return ThresholdPolarity::algorithm2;
    throw data_error("moea.threshold_polarity must be 'prose' or 'algorithm2'");
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (const auto it = j.find(key); it != j.end()) out = it->get<T>();
}

} // namespace

nlohmann::json config_to_json(const SearchConfig& cfg) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["output_dir"] = cfg.output_dir;
    j["snapshots"] = cfg.emit_snapshots;
    j["N"] = cfg.initial_samples;
    j["T"] = cfg.iterations;
    j["K_elite"] = cfg.elites_per_iteration;
    j["evaluator"] = {{"kind", cfg.evaluator_kind == EvaluatorKind::synthetic ? "synthetic" : "tabular"},
                      {"base", cfg.oracle.base},
                      {"gain", cfg.oracle.gain},
                      {"tau", cfg.oracle.tau},
                      {"block_weights", cfg.oracle.block_weights},
                      {"noise_sigma", cfg.oracle.noise_sigma},
                      {"oracle_seed", cfg.oracle.seed},
                      {"path", cfg.tabular_path}};
    j["surrogate"] = {{"kind", to_string(cfg.surrogate.kind)},
                      {"C", cfg.surrogate.svm_c},
                      {"gamma", cfg.surrogate.svm_gamma},
                      {"tol", cfg.surrogate.svm_tol},
                      {"max_steps", cfg.surrogate.svm_max_steps},
                      {"knn_k", cfg.surrogate.knn_k},
                      {"rf_trees", cfg.surrogate.rf_trees},
                      {"rf_max_depth", cfg.surrogate.rf_max_depth},
                      {"rf_min_leaf", cfg.surrogate.rf_min_leaf},
                      {"mlp_hidden", cfg.surrogate.mlp_hidden},
                      {"mlp_epochs", cfg.surrogate.mlp_epochs},
                      {"mlp_lr", cfg.surrogate.mlp_lr},
                      {"mlp_batch", cfg.surrogate.mlp_batch},
                      {"symmetric_pairs", cfg.surrogate.symmetric_pairs}};
    j["moea"] = {{"G", cfg.moea.generations},
                 {"K_vice", cfg.moea.vice_size},
                 {"m", cfg.moea.offspring_per_generation},
                 {"theta", cfg.moea.theta},
                 {"crossover_prob", cfg.moea.crossover_prob},
                 {"mutation_prob", cfg.moea.mutation_prob},
                 {"eta_m", cfg.moea.eta_m},
                 {"multipop", cfg.moea.multipop},
                 {"threshold_polarity", polarity_to_string(cfg.moea.polarity)},
                 {"attempt_factor", cfg.moea.attempt_factor}};
    j["space"] = {{"resolutions", cfg.space.resolutions},
                  {"depth_options", cfg.space.depth_options},
                  {"kernel_options", cfg.space.kernel_options},
                  {"expansion_options", cfg.space.expansion_options},
                  {"num_blocks", cfg.space.num_blocks},
                  {"max_layers_per_block", cfg.space.max_layers_per_block}};
    j["channels"] = {{"stem", cfg.channels.stem_channels},
                     {"block_out", cfg.channels.block_out_channels},
                     {"block_strides", cfg.channels.block_strides},
                     {"head", cfg.channels.head_channels},
                     {"features", cfg.channels.feature_channels},
                     {"num_classes", cfg.channels.num_classes}};
    return j;
}

SearchConfig config_from_json(const nlohmann::json& j) {
    SearchConfig cfg;
    read(j, "seed", cfg.seed);
    read(j, "threads", cfg.threads);
    read(j, "output_dir", cfg.output_dir);
    read(j, "snapshots", cfg.emit_snapshots);
    read(j, "N", cfg.initial_samples);
    read(j, "T", cfg.iterations);
    read(j, "K_elite", cfg.elites_per_iteration);
    if (const auto it = j.find("evaluator"); it != j.end()) {
        const auto& e = *it;
        std::string kind = "synthetic";
        read(e, "kind", kind);
        if (kind == "synthetic") cfg.evaluator_kind = EvaluatorKind::synthetic;
        else if (kind == "tabular") cfg.evaluator_kind = EvaluatorKind::tabular;
        else throw data_error("evaluator.kind must be 'synthetic' or 'tabular'");
        read(e, "base", cfg.oracle.base);
        read(e, "gain", cfg.oracle.gain);
        read(e, "tau", cfg.oracle.tau);
        read(e, "block_weights", cfg.oracle.block_weights);
        read(e, "noise_sigma", cfg.oracle.noise_sigma);
        read(e, "oracle_seed", cfg.oracle.seed);
        read(e, "path", cfg.tabular_path);
    }
    if (const auto it = j.find("surrogate"); it != j.end()) {
        const auto& s = *it;
        std::string kind = "svm";
        read(s, "kind", kind);
        cfg.surrogate.kind = surrogate_kind_from_string(kind);
        read(s, "C", cfg.surrogate.svm_c);
        read(s, "gamma", cfg.surrogate.svm_gamma);
        read(s, "tol", cfg.surrogate.svm_tol);
        read(s, "max_steps", cfg.surrogate.svm_max_steps);
        read(s, "knn_k", cfg.surrogate.knn_k);
        read(s, "rf_trees", cfg.surrogate.rf_trees);
        read(s, "rf_max_depth", cfg.surrogate.rf_max_depth);
        read(s, "rf_min_leaf", cfg.surrogate.rf_min_leaf);
        read(s, "mlp_hidden", cfg.surrogate.mlp_hidden);
        read(s, "mlp_epochs", cfg.surrogate.mlp_epochs);
        read(s, "mlp_lr", cfg.surrogate.mlp_lr);
        read(s, "mlp_batch", cfg.surrogate.mlp_batch);
        read(s, "symmetric_pairs", cfg.surrogate.symmetric_pairs);
    }
    if (const auto it = j.find("moea"); it != j.end()) {
        const auto& m = *it;
        read(m, "G", cfg.moea.generations);
        read(m, "K_vice", cfg.moea.vice_size);
        read(m, "m", cfg.moea.offspring_per_generation);
        read(m, "theta", cfg.moea.theta);
        read(m, "crossover_prob", cfg.moea.crossover_prob);
        read(m, "mutation_prob", cfg.moea.mutation_prob);
        read(m, "eta_m", cfg.moea.eta_m);
        read(m, "multipop", cfg.moea.multipop);
        read(m, "attempt_factor", cfg.moea.attempt_factor);
        if (const auto p = m.find("threshold_polarity"); p != m.end())
            cfg.moea.polarity = polarity_from_string(p->get<std::string>());
    }
    if (const auto it = j.find("space"); it != j.end()) {
        const auto& s = *it;
        read(s, "resolutions", cfg.space.resolutions);
        read(s, "depth_options", cfg.space.depth_options);
        read(s, "kernel_options", cfg.space.kernel_options);
        read(s, "expansion_options", cfg.space.expansion_options);
        read(s, "num_blocks", cfg.space.num_blocks);
        read(s, "max_layers_per_block", cfg.space.max_layers_per_block);
    }
    if (const auto it = j.find("channels"); it != j.end()) {
        const auto& c = *it;
        read(c, "stem", cfg.channels.stem_channels);
        read(c, "block_out", cfg.channels.block_out_channels);
        read(c, "block_strides", cfg.channels.block_strides);
        read(c, "head", cfg.channels.head_channels);
        read(c, "features", cfg.channels.feature_channels);
        read(c, "num_classes", cfg.channels.num_classes);
    }
    return cfg;
}

void apply_override(nlohmann::json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw usage_error("--set expects key=value, got '" + assignment + "'");
    std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    static const std::map<std::string, std::string> aliases = {
        {"N", "/N"},
        {"T", "/T"},
        {"K_elite", "/K_elite"},
        {"G", "/moea/G"},
        {"K_vice", "/moea/K_vice"},
        {"m", "/moea/m"},
        {"theta", "/moea/theta"},
        {"eta_m", "/moea/eta_m"},
        {"crossover_prob", "/moea/crossover_prob"},
        {"mutation_prob", "/moea/mutation_prob"},
        {"multipop", "/moea/multipop"},
        {"threshold_polarity", "/moea/threshold_polarity"},
        {"classifier", "/surrogate/kind"},
        {"evaluator", "/evaluator/kind"},
        {"noise_sigma", "/evaluator/noise_sigma"},
        {"seed", "/seed"},
        {"threads", "/threads"},
        {"output_dir", "/output_dir"},
        {"snapshots", "/snapshots"},
    };

    std::string pointer;
    if (const auto it = aliases.find(key); it != aliases.end()) {
        pointer = it->second;
    } else {
        pointer = "/" + key;
        for (auto& c : pointer)
            if (c == '.') c = '/';
    }

    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(value);
    } catch (const nlohmann::json::exception&) {
        parsed = value; // plain string
    }
    try {
        config[nlohmann::json::json_pointer(pointer)] = std::move(parsed);
    } catch (const nlohmann::json::exception& e) {
        throw usage_error("bad --set key '" + key + "': " + e.what());
    }
}

} // namespace smem
