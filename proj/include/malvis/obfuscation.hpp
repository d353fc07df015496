#ifndef MALVIS_OBFUSCATION_HPP
#define MALVIS_OBFUSCATION_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "malvis/corpus.hpp"
#include "malvis/image.hpp"

namespace malvis {

struct ObfuscationConfig {
    int segment_height = 10;          // pixels per horizontal band
    int chunk_size = 64;              // bytes per interleaving block
    std::uint64_t seed = 0;
    double unreadable_fraction = 0.1; // blocks overwritten with noise

    void validate() const;
};

// Builds one stealthy sample per (benign, malware) pair: both files are
// cut into chunk_size blocks, the combined block list is shuffled with
// a per-pair sub-seed, and a fraction of blocks is overwritten with
// noise. Output length is the sum of the two input lengths.
std::vector<RawBinary> stealthy_generator(
    std::span<const RawBinary> benign, std::span<const RawBinary> malware,
    const ObfuscationConfig& cfg);

// Heights of the horizontal bands an image of the given height is cut
// into: full segments of segment_height plus one trailing partial.
std::vector<int> segment_heights(int image_height, int segment_height);

// Reassembles the image with its bands in the given order. perm must be
// a permutation of the band indices.
GrayImage apply_segment_permutation(const GrayImage& image,
                                    std::span<const std::size_t> perm,
                                    int segment_height);

// One seeded random band shuffle.
GrayImage random_obfuscate_one(const GrayImage& image, int segment_height,
                               std::uint64_t seed);

// Shuffles each image's bands with a per-image sub-seed. Preserves
// dimensions and the multiset of rows.
std::vector<GrayImage> random_obfuscator(std::span<const GrayImage> images,
                                         const ObfuscationConfig& cfg);

}  // namespace malvis

#endif  // MALVIS_OBFUSCATION_HPP
