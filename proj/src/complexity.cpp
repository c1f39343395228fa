#include "smem/complexity.hpp"

#include "smem/error.hpp"

namespace smem {

void ChannelTable::check(const SearchSpaceConfig& cfg) const {
    if (static_cast<int>(block_out_channels.size()) != cfg.num_blocks ||
        static_cast<int>(block_strides.size()) != cfg.num_blocks)
        throw data_error("channel table: block lists must have num_blocks entries");
    if (stem_channels < 1 || head_channels < 1 || feature_channels < 1 || num_classes < 1)
        throw data_error("channel table: channel counts must be >= 1");
    for (int c : block_out_channels)
        if (c < 1) throw data_error("channel table: block channels must be >= 1");
    for (int s : block_strides)
        if (s != 1 && s != 2) throw data_error("channel table: strides must be 1 or 2");
}

static int ceil_div(int a, int b) { return (a + b - 1) / b; }

LayerMAdds layer_madds(const LayerSpec& layer, int h_in, int w_in) {
    const std::uint64_t c = layer.in_channels;
    const std::uint64_t e = c * static_cast<std::uint64_t>(layer.expansion);
    const std::uint64_t o = layer.out_channels;
    const std::uint64_t k2 = static_cast<std::uint64_t>(layer.kernel) * layer.kernel;
    const int h_out = ceil_div(h_in, layer.stride);
    const int w_out = ceil_div(w_in, layer.stride);
    const std::uint64_t in_px = static_cast<std::uint64_t>(h_in) * w_in;
    const std::uint64_t out_px = static_cast<std::uint64_t>(h_out) * w_out;
    const std::uint64_t count = in_px * c * e    // 1x1 expand
                              + out_px * e * k2  // depthwise
                              + out_px * e * o;  // 1x1 project
    return {count, h_out, w_out};
}

MAddsReport total_madds(const DecodedArchitecture& arch, const ChannelTable& chan) {
    MAddsReport report;
    auto add = [&report](std::string label, std::uint64_t count) {
        report.per_layer.emplace_back(std::move(label), count);
        report.total_count += count;
    };

    // Stem: 3x3 conv, stride 2, 3 -> stem_channels.
    int h = ceil_div(arch.resolution, 2);
    int w = ceil_div(arch.resolution, 2);
    add("stem", static_cast<std::uint64_t>(h) * w * 9 * 3 * chan.stem_channels);

    int last_channels = chan.stem_channels;
    for (std::size_t b = 0; b < arch.blocks.size(); ++b) {
        for (std::size_t l = 0; l < arch.blocks[b].size(); ++l) {
            const LayerMAdds lm = layer_madds(arch.blocks[b][l], h, w);
            add("block" + std::to_string(b + 1) + ".layer" + std::to_string(l + 1), lm.count);
            h = lm.h_out;
            w = lm.w_out;
            last_channels = arch.blocks[b][l].out_channels;
        }
    }

    add("head", static_cast<std::uint64_t>(h) * w * last_channels * chan.head_channels);
    // 1x1 feature conv applies after global pooling, so spatial size is 1.
    add("features", static_cast<std::uint64_t>(chan.head_channels) * chan.feature_channels);
    add("classifier", static_cast<std::uint64_t>(chan.feature_channels) * chan.num_classes);
    return report;
}

double genotype_madds_millions(const Genotype& g, const SearchSpaceConfig& cfg, const ChannelTable& chan) {
    return total_madds(decode(g, cfg, chan), chan).total_millions();
}

double max_madds_millions(const SearchSpaceConfig& cfg, const ChannelTable& chan) {
    Genotype g;
    g.genes.resize(cfg.gene_count());
    for (int i = 0; i < cfg.gene_count(); ++i) g.genes[i] = cfg.options_at(i) - 1;
    return genotype_madds_millions(g, cfg, chan);
}

} // namespace smem
