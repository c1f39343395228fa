#include "smem/search_space.hpp"

#include <algorithm>

#include "smem/complexity.hpp"
#include "smem/error.hpp"

namespace smem {

SearchSpaceConfig SearchSpaceConfig::defaults() {
    SearchSpaceConfig cfg;
    for (int r = 192; r <= 256; r += 4) cfg.resolutions.push_back(r);
    cfg.depth_options = {2, 3, 4};
    cfg.kernel_options = {3, 5, 7};
    cfg.expansion_options = {3, 4, 6};
    cfg.num_blocks = 5;
    cfg.max_layers_per_block = 4;
    return cfg;
}

int SearchSpaceConfig::options_at(int gene) const {
    if (gene == 0) return static_cast<int>(resolutions.size());
    const int span = 1 + 2 * max_layers_per_block;
    const int within = (gene - 1) % span;
    if (within == 0) return static_cast<int>(depth_options.size());
    if (within <= max_layers_per_block) return static_cast<int>(kernel_options.size());
    return static_cast<int>(expansion_options.size());
}

static void check_increasing(const std::vector<int>& v, const char* name) {
    if (v.empty()) throw data_error(std::string("search space: ") + name + " must not be empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1])
            throw data_error(std::string("search space: ") + name + " must be strictly increasing");
}

void SearchSpaceConfig::check() const {
    check_increasing(resolutions, "resolutions");
    check_increasing(depth_options, "depth_options");
    check_increasing(kernel_options, "kernel_options");
    check_increasing(expansion_options, "expansion_options");
    if (num_blocks < 1) throw data_error("search space: num_blocks must be >= 1");
    if (max_layers_per_block < 1) throw data_error("search space: max_layers_per_block must be >= 1");
    if (depth_options.back() > max_layers_per_block)
        throw data_error("search space: largest depth option exceeds max_layers_per_block");
    if (depth_options.front() < 0) throw data_error("search space: depth options must be >= 0");
}

std::vector<GeneViolation> validate(const Genotype& g, const SearchSpaceConfig& cfg) {
    std::vector<GeneViolation> out;
    if (static_cast<int>(g.genes.size()) != cfg.gene_count()) {
        out.push_back({-1, static_cast<int>(g.genes.size()), cfg.gene_count()});
        return out;
    }
    for (int i = 0; i < cfg.gene_count(); ++i) {
        const int v = g.genes[i];
        const int hi = cfg.options_at(i) - 1;
        if (v < 0 || v > hi) out.push_back({i, v, hi});
    }
    return out;
}

void require_valid(const Genotype& g, const SearchSpaceConfig& cfg) {
    const auto bad = validate(g, cfg);
    if (bad.empty()) return;
    const auto& b = bad.front();
    if (b.position < 0)
        throw data_error("genotype has " + std::to_string(b.value) + " genes, expected " +
                         std::to_string(b.max_allowed));
    throw data_error("gene " + std::to_string(b.position) + " = " + std::to_string(b.value) +
                     " outside allowed range [0, " + std::to_string(b.max_allowed) + "]");
}

Genotype canonicalize(const Genotype& g, const SearchSpaceConfig& cfg) {
    Genotype out = g;
    for (int b = 0; b < cfg.num_blocks; ++b) {
        const int off = cfg.block_offset(b);
        const int depth = cfg.depth_options[g.genes[off]];
        for (int l = depth; l < cfg.max_layers_per_block; ++l) {
            out.genes[off + 1 + l] = 0;
            out.genes[off + 1 + cfg.max_layers_per_block + l] = 0;
        }
    }
    return out;
}

bool is_canonical(const Genotype& g, const SearchSpaceConfig& cfg) {
    for (int b = 0; b < cfg.num_blocks; ++b) {
        const int off = cfg.block_offset(b);
        const int depth = cfg.depth_options[g.genes[off]];
        for (int l = depth; l < cfg.max_layers_per_block; ++l)
            if (g.genes[off + 1 + l] != 0 || g.genes[off + 1 + cfg.max_layers_per_block + l] != 0)
                return false;
    }
    return true;
}

DecodedArchitecture decode(const Genotype& g, const SearchSpaceConfig& cfg, const ChannelTable& chan) {
    require_valid(g, cfg);
    DecodedArchitecture arch;
    arch.resolution = cfg.resolutions[g.resolution_idx()];
    arch.blocks.resize(cfg.num_blocks);
    int in_ch = chan.stem_channels;
    for (int b = 0; b < cfg.num_blocks; ++b) {
        const int depth = cfg.depth_options[g.depth_idx(cfg, b)];
        const int out_ch = chan.block_out_channels[b];
        for (int l = 0; l < depth; ++l) {
            LayerSpec layer;
            layer.kernel = cfg.kernel_options[g.kernel_idx(cfg, b, l)];
            layer.expansion = cfg.expansion_options[g.expansion_idx(cfg, b, l)];
            layer.stride = l == 0 ? chan.block_strides[b] : 1;
            layer.in_channels = l == 0 ? in_ch : out_ch;
            layer.out_channels = out_ch;
            arch.blocks[b].push_back(layer);
        }
        in_ch = out_ch;
    }
    return arch;
}

Genotype random_genotype(Rng& rng, const SearchSpaceConfig& cfg) {
    Genotype g;
    g.genes.resize(cfg.gene_count());
    for (int i = 0; i < cfg.gene_count(); ++i)
        g.genes[i] = uniform_int(rng, 0, cfg.options_at(i) - 1);
    return canonicalize(g, cfg);
}

Eigen::VectorXf to_features(const Genotype& g, const SearchSpaceConfig& cfg) {
    Eigen::VectorXf f(cfg.gene_count());
    for (int i = 0; i < cfg.gene_count(); ++i) {
        const int n = cfg.options_at(i);
        f[i] = n > 1 ? static_cast<float>(g.genes[i]) / static_cast<float>(n - 1) : 0.0f;
    }
    return f;
}

static char gene_char(int v) {
    return v < 10 ? static_cast<char>('0' + v) : static_cast<char>('a' + v - 10);
}

std::string to_text(const Genotype& g) {
    std::string s;
    s.reserve(g.genes.size());
    for (int v : g.genes) {
        if (v < 0 || v >= 36) throw data_error("gene value " + std::to_string(v) + " not representable as text");
        s.push_back(gene_char(v));
    }
    return s;
}

Genotype genotype_from_text(const std::string& text, const SearchSpaceConfig& cfg) {
    if (static_cast<int>(text.size()) != cfg.gene_count())
        throw data_error("genotype text has length " + std::to_string(text.size()) + ", expected " +
                         std::to_string(cfg.gene_count()));
    Genotype g;
    g.genes.reserve(text.size());
    for (char c : text) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'z') v = c - 'a' + 10;
        else throw data_error(std::string("invalid genotype character '") + c + "'");
        g.genes.push_back(v);
    }
    require_valid(g, cfg);
    return g;
}

} // namespace smem
