#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "smem/search_space.hpp"

namespace smem {

// Fixed (non-searched) parts of the network. The paper-style backbone names
// the block structure but not channel widths, so these are configurable;
// defaults follow a MobileNetV3-Large-like table.
struct ChannelTable {
    int stem_channels = 16;
    std::vector<int> block_out_channels{24, 40, 80, 112, 160};
    std::vector<int> block_strides{2, 2, 2, 1, 2};
    int head_channels = 960;
    int feature_channels = 1280;
    int num_classes = 1000;

    static ChannelTable defaults() { return ChannelTable{}; }

    void check(const SearchSpaceConfig& cfg) const;
};

struct MAddsReport {
    std::uint64_t total_count = 0;                               // exact multiply-adds
    std::vector<std::pair<std::string, std::uint64_t>> per_layer;

    double total_millions() const { return static_cast<double>(total_count) / 1e6; }
};

struct LayerMAdds {
    std::uint64_t count;
    int h_out;
    int w_out;
};

// Inverted bottleneck: 1x1 expand (C -> E at input resolution), depthwise
// k x k at stride s, 1x1 project (E -> O). Spatial downsampling uses ceiling
// division (same-padding convention). Only convolution multiplies counted.
LayerMAdds layer_madds(const LayerSpec& layer, int h_in, int w_in);

// Stem 3x3/s2 conv + searched blocks + 1x1 head conv + post-pool 1x1 feature
// conv + classifier. Pure and exact; total equals the breakdown sum.
MAddsReport total_madds(const DecodedArchitecture& arch, const ChannelTable& chan);

// MAdds (millions) of a genotype under the given tables; decodes internally.
double genotype_madds_millions(const Genotype& g, const SearchSpaceConfig& cfg, const ChannelTable& chan);

// Largest reachable MAdds in the space (every gene at its maximal index);
// used as the hypervolume reference scale.
double max_madds_millions(const SearchSpaceConfig& cfg, const ChannelTable& chan);

} // namespace smem
