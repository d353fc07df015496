#include "malvis/obfuscation.hpp"

#include <algorithm>
#include <cstring>

#include "malvis/common.hpp"
#include "malvis/rng.hpp"

namespace malvis {

void ObfuscationConfig::validate() const {
    if (segment_height < 1)
        throw ConfigError("obfuscation: segment_height must be >= 1");
    if (chunk_size < 1)
        throw ConfigError("obfuscation: chunk_size must be >= 1");
    if (unreadable_fraction < 0.0 || unreadable_fraction > 1.0)
        throw ConfigError(
            "obfuscation: unreadable_fraction must be in [0, 1]");
}

namespace {

struct BlockView {
    const std::uint8_t* data;
    std::size_t len;
};

std::vector<BlockView> split_blocks(const std::vector<std::uint8_t>& bytes,
                                    std::size_t chunk_size) {
    std::vector<BlockView> blocks;
    blocks.reserve(bytes.size() / chunk_size + 1);
    for (std::size_t off = 0; off < bytes.size(); off += chunk_size)
        blocks.push_back(
            {bytes.data() + off, std::min(chunk_size, bytes.size() - off)});
    return blocks;
}

}  // namespace

std::vector<RawBinary> stealthy_generator(
    std::span<const RawBinary> benign, std::span<const RawBinary> malware,
    const ObfuscationConfig& cfg) {
    cfg.validate();
    if (benign.empty())
        throw ConfigError("stealthy_generator: no benign inputs");
    if (malware.empty())
        throw ConfigError("stealthy_generator: no malware inputs");
    const std::size_t chunk = static_cast<std::size_t>(cfg.chunk_size);
    for (const RawBinary& b : benign)
        if (b.bytes.size() < chunk)
            throw ConfigError("stealthy_generator: chunk_size exceeds size of " +
                              b.id);
    for (const RawBinary& m : malware)
        if (m.bytes.size() < chunk)
            throw ConfigError("stealthy_generator: chunk_size exceeds size of " +
                              m.id);

    std::vector<RawBinary> out;
    out.reserve(benign.size() * malware.size());

    for (std::size_t i = 0; i < benign.size(); ++i) {
        for (std::size_t j = 0; j < malware.size(); ++j) {
            const std::uint64_t pair_seed =
                derive_seed(cfg.seed, "stealthy", i, j);
            Rng rng(pair_seed);

            std::vector<BlockView> blocks = split_blocks(benign[i].bytes, chunk);
            const std::vector<BlockView> malware_blocks =
                split_blocks(malware[j].bytes, chunk);
            blocks.insert(blocks.end(), malware_blocks.begin(),
                          malware_blocks.end());
            rng.shuffle(blocks);

            RawBinary sample;
            sample.bytes.reserve(benign[i].bytes.size() +
                                 malware[j].bytes.size());
            for (const BlockView& block : blocks)
                sample.bytes.insert(sample.bytes.end(), block.data,
                                    block.data + block.len);

            // Mask a fraction of blocks with noise, after interleaving.
            const std::size_t mask_count = static_cast<std::size_t>(
                cfg.unreadable_fraction * static_cast<double>(blocks.size()));
            if (mask_count > 0) {
                std::vector<std::size_t> order = rng.permutation(blocks.size());
                std::vector<std::size_t> offsets(blocks.size());
                std::size_t off = 0;
                for (std::size_t k = 0; k < blocks.size(); ++k) {
                    offsets[k] = off;
                    off += blocks[k].len;
                }
                for (std::size_t k = 0; k < mask_count; ++k) {
                    const std::size_t target = order[k];
                    for (std::size_t p = 0; p < blocks[target].len; ++p)
                        sample.bytes[offsets[target] + p] =
                            static_cast<std::uint8_t>(rng.below(256));
                }
            }

            sample.id = "s" + benign[i].id + "x" + malware[j].id;
            sample.label = ClassLabel::StealthyMalware;
            sample.family = malware[j].family;
            sample.seed = pair_seed;
            out.push_back(std::move(sample));
        }
    }
    return out;
}

std::vector<int> segment_heights(int image_height, int segment_height) {
    if (image_height < 1)
        throw ConfigError("segment_heights: image height must be >= 1");
    if (segment_height < 1)
        throw ConfigError("segment_heights: segment height must be >= 1");
    std::vector<int> heights(image_height / segment_height, segment_height);
    if (image_height % segment_height != 0)
        heights.push_back(image_height % segment_height);
    return heights;
}

GrayImage apply_segment_permutation(const GrayImage& image,
                                    std::span<const std::size_t> perm,
                                    int segment_height) {
    const std::vector<int> heights =
        segment_heights(image.height, segment_height);
    if (perm.size() != heights.size())
        throw StageError("segment permutation has wrong length");

    std::vector<int> offsets(heights.size());
    int row = 0;
    for (std::size_t s = 0; s < heights.size(); ++s) {
        offsets[s] = row;
        row += heights[s];
    }

    std::vector<bool> seen(heights.size(), false);
    GrayImage out;
    out.width = image.width;
    out.height = image.height;
    out.payload_len = image.payload_len;
    out.pixels.resize(image.pixels.size());

    std::size_t out_row = 0;
    for (std::size_t seg : perm) {
        if (seg >= heights.size() || seen[seg])
            throw StageError("segment permutation is not a permutation");
        seen[seg] = true;
        std::memcpy(
            out.pixels.data() + out_row * image.width,
            image.pixels.data() +
                static_cast<std::size_t>(offsets[seg]) * image.width,
            static_cast<std::size_t>(heights[seg]) * image.width);
        out_row += static_cast<std::size_t>(heights[seg]);
    }
    return out;
}

GrayImage random_obfuscate_one(const GrayImage& image, int segment_height,
                               std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t segments =
        segment_heights(image.height, segment_height).size();
    const std::vector<std::size_t> perm = rng.permutation(segments);
    return apply_segment_permutation(image, perm, segment_height);
}

std::vector<GrayImage> random_obfuscator(std::span<const GrayImage> images,
                                         const ObfuscationConfig& cfg) {
    cfg.validate();
    std::vector<GrayImage> out;
    out.reserve(images.size());
    for (std::size_t idx = 0; idx < images.size(); ++idx) {
        if (images[idx].height < 1)
            throw ConfigError("random_obfuscator: image height must be >= 1");
        out.push_back(random_obfuscate_one(
            images[idx], cfg.segment_height,
            derive_seed(cfg.seed, "obfuscate", idx)));
    }
    return out;
}

}  // namespace malvis
