#include "smem/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "smem/error.hpp"
#include "smem/rng.hpp"

namespace smem {

void SyntheticOracleParams::check(const SearchSpaceConfig& cfg) const {
    if (base < 0 || gain < 0 || base + gain > 1.0)
        throw data_error("synthetic oracle: need base, gain >= 0 and base + gain <= 1");
    if (tau <= 0) throw data_error("synthetic oracle: tau must be > 0");
    if (noise_sigma < 0) throw data_error("synthetic oracle: noise_sigma must be >= 0");
    if (static_cast<int>(block_weights.size()) != cfg.num_blocks)
        throw data_error("synthetic oracle: block_weights must have num_blocks entries");
    for (double w : block_weights)
        if (w <= 0) throw data_error("synthetic oracle: block_weights must be positive");
}

SyntheticOracle::SyntheticOracle(SearchSpaceConfig cfg, SyntheticOracleParams params)
    : cfg_(std::move(cfg)), params_(std::move(params)) {
    params_.check(cfg_);
}

double SyntheticOracle::capacity(const Genotype& g) const {
    const Eigen::VectorXf f = to_features(g, cfg_);
    double c = f[0];
    for (int b = 0; b < cfg_.num_blocks; ++b) {
        const int off = cfg_.block_offset(b);
        const int depth = cfg_.depth_options[g.genes[off]];
        double layers = 0.0;
        for (int l = 0; l < depth; ++l) {
            const double k = f[off + 1 + l];
            const double e = f[off + 1 + cfg_.max_layers_per_block + l];
            layers += 0.5 * (k + e);
        }
        c += params_.block_weights[b] * (f[off] + layers / cfg_.max_layers_per_block);
    }
    return c;
}

double SyntheticOracle::noiseless_accuracy(const Genotype& g) const {
    const Genotype canon = canonicalize(g, cfg_);
    const double c = capacity(canon);
    return params_.base + params_.gain * (1.0 - std::exp(-c / params_.tau));
}

double SyntheticOracle::max_capacity() const {
    Genotype g;
    g.genes.resize(cfg_.gene_count());
    for (int i = 0; i < cfg_.gene_count(); ++i) g.genes[i] = cfg_.options_at(i) - 1;
    return capacity(canonicalize(g, cfg_));
}

double SyntheticOracle::evaluate(const Genotype& g) const {
    require_valid(g, cfg_);
    const Genotype canon = canonicalize(g, cfg_);
    double acc = params_.base + params_.gain * (1.0 - std::exp(-capacity(canon) / params_.tau));
    if (params_.noise_sigma > 0) {
        // Noise keyed by genotype so evaluation never injects fresh
        // randomness across calls.
        Rng rng(hash_bytes(to_text(canon), params_.seed));
        acc += params_.noise_sigma * std::normal_distribution<double>(0.0, 1.0)(rng);
        acc = std::clamp(acc, 0.0, 1.0);
    }
    return acc;
}

std::vector<TabularRecord> load_tabular_records(const std::string& path, const SearchSpaceConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open tabular file: " + path);
    std::vector<TabularRecord> records;
    std::unordered_map<std::string, double> seen;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        line.erase(0, start);

        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw data_error("tabular file " + path + ": line " + std::to_string(line_no) +
                             ": expected 'genotype_text,accuracy'");
        const std::string geno_text = line.substr(0, comma);
        const std::string acc_text = line.substr(comma + 1);
        Genotype g;
        double acc;
        try {
            g = genotype_from_text(geno_text, cfg);
            std::size_t used = 0;
            acc = std::stod(acc_text, &used);
            if (used != acc_text.size()) throw data_error("trailing characters after accuracy");
        } catch (const std::exception& e) {
            throw data_error("tabular file " + path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
        if (acc < 0.0 || acc > 1.0)
            throw data_error("tabular file " + path + ": line " + std::to_string(line_no) +
                             ": accuracy must be in [0, 1]");
        const Genotype canon = canonicalize(g, cfg);
        const std::string key = to_text(canon);
        const auto it = seen.find(key);
        if (it != seen.end()) {
            if (it->second != acc)
                throw data_error("tabular file " + path + ": line " + std::to_string(line_no) +
                                 ": conflicting accuracy for genotype " + key);
            continue; // idempotent duplicate
        }
        seen.emplace(key, acc);
        records.push_back({canon, acc});
    }
    return records;
}

TabularEvaluator TabularEvaluator::load(const std::string& path, const SearchSpaceConfig& cfg) {
    std::unordered_map<std::string, double> table;
    for (const auto& rec : load_tabular_records(path, cfg)) table.emplace(to_text(rec.genotype), rec.accuracy);
    return TabularEvaluator(cfg, std::move(table));
}

double TabularEvaluator::evaluate(const Genotype& g) const {
    const std::string key = to_text(canonicalize(g, cfg_));
    const auto it = table_.find(key);
    if (it == table_.end()) throw data_error("genotype not in table: " + key);
    return it->second;
}

} // namespace smem
