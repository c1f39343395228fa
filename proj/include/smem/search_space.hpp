#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "smem/rng.hpp"

namespace smem {

struct ChannelTable; // complexity.hpp

// Layered MobileNet-style search space. An architecture is a fixed-length
// integer string; every gene is an INDEX into one of the option lists below,
// never a raw value. Layout: gene 0 selects the input resolution, then each
// block contributes (1 depth gene, max_layers kernel genes, max_layers
// expansion genes) in that order. Defaults give 1 + 5*(1+2*4) = 46 genes.
struct SearchSpaceConfig {
    std::vector<int> resolutions;       // input pixels
    std::vector<int> depth_options;     // layers per block
    std::vector<int> kernel_options;    // depthwise kernel, pixels
    std::vector<int> expansion_options; // bottleneck expansion ratio
    int num_blocks = 5;
    int max_layers_per_block = 4;

    static SearchSpaceConfig defaults();

    int gene_count() const { return 1 + num_blocks * (1 + 2 * max_layers_per_block); }
    int block_offset(int block) const { return 1 + block * (1 + 2 * max_layers_per_block); }
    int options_at(int gene) const;

    // Throws data_error if option lists are not strictly increasing or counts < 1.
    void check() const;
};

struct Genotype {
    std::vector<int> genes;

    bool operator==(const Genotype&) const = default;

    int resolution_idx() const { return genes[0]; }
    int depth_idx(const SearchSpaceConfig& cfg, int block) const {
        return genes[cfg.block_offset(block)];
    }
    int kernel_idx(const SearchSpaceConfig& cfg, int block, int layer) const {
        return genes[cfg.block_offset(block) + 1 + layer];
    }
    int expansion_idx(const SearchSpaceConfig& cfg, int block, int layer) const {
        return genes[cfg.block_offset(block) + 1 + cfg.max_layers_per_block + layer];
    }
};

struct LayerSpec {
    int kernel;
    int expansion;
    int stride;
    int in_channels;
    int out_channels;
};

struct DecodedArchitecture {
    int resolution;
    std::vector<std::vector<LayerSpec>> blocks;
};

struct GeneViolation {
    int position;
    int value;
    int max_allowed; // valid range is [0, max_allowed]
};

// Empty result means the genotype is valid.
std::vector<GeneViolation> validate(const Genotype& g, const SearchSpaceConfig& cfg);

// Throws data_error naming the first offending gene position.
void require_valid(const Genotype& g, const SearchSpaceConfig& cfg);

// Zeroes kernel/expansion genes at layer positions >= the decoded depth of
// their block. Idempotent; canonical form is the deduplication key. Silent
// genes are otherwise preserved during evolution so crossover can inherit
// them.
Genotype canonicalize(const Genotype& g, const SearchSpaceConfig& cfg);

bool is_canonical(const Genotype& g, const SearchSpaceConfig& cfg);

// Reads only the first `depth` layers of each block; inactive genes never
// affect the result. Channel chain and strides come from `chan`.
DecodedArchitecture decode(const Genotype& g, const SearchSpaceConfig& cfg, const ChannelTable& chan);

// Each gene uniform over its option indices, then canonicalized. Note the
// induced distribution over *decoded* architectures is not uniform (per
// block there are sum_d |K|^d * |E|^d distinct decodings but genotypes pad
// every block to max_layers); sampling matches the genotype-level scheme.
Genotype random_genotype(Rng& rng, const SearchSpaceConfig& cfg);

// Gene i mapped to idx / (num_options_i - 1), single-option genes map to 0.
// Expects a valid canonical genotype.
Eigen::VectorXf to_features(const Genotype& g, const SearchSpaceConfig& cfg);

// One character per gene: 0-9 then a-z (the default space only needs a-g for
// resolution indices 10-16; every other gene is a plain decimal digit).
std::string to_text(const Genotype& g);

// Strict: length must equal cfg.gene_count() and every gene must be in range.
Genotype genotype_from_text(const std::string& text, const SearchSpaceConfig& cfg);

} // namespace smem
