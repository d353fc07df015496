#ifndef MALVIS_CORPUS_HPP
#define MALVIS_CORPUS_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "malvis/labels.hpp"

namespace malvis {

// Labeled byte sequence standing in for an application file.
struct RawBinary {
    std::string id;
    std::vector<std::uint8_t> bytes;
    ClassLabel label = ClassLabel::Benign;
    std::optional<Family> family;
    std::uint64_t seed = 0;  // sub-seed this sample was generated from
};

enum class Waveform : int { Sine = 0, Square = 1, Sawtooth = 2, Triangle = 3 };

// Periodic byte motif. Each sample draws its own period, phase and
// amplitude scale, so a class is a cloud around the template rather
// than a single point.
struct MotifSpec {
    Waveform waveform = Waveform::Sine;
    int period_min = 48;
    int period_max = 80;
    double base = 70.0;       // mean byte level
    double amplitude = 35.0;  // wave amplitude in byte units
    double row_ramp = 0.0;    // added linearly from 0 (top row) to this
                              // value (bottom row); breaks periodicity
};

struct CorpusSpec {
    int benign_count = 0;
    int malware_count = 0;
    double noise_level = 0.1;        // in [0, 1]
    std::size_t min_length = 4096;   // bytes, >= 256
    std::size_t max_length = 32768;
    std::uint64_t master_seed = 0;
    std::vector<Family> family_mix = {Family::Backdoor, Family::Trojan,
                                      Family::Virus, Family::Worm};
    MotifSpec benign_motif = {};
    std::map<Family, MotifSpec> family_motifs = default_family_motifs();

    static std::map<Family, MotifSpec> default_family_motifs();
    void validate() const;  // throws ConfigError naming the bad field
};

// Deterministic function of the spec. Benign samples are pure periodic
// motifs plus noise; malware samples add a family motif and a vertical
// intensity ramp. Lengths are drawn uniformly over multiples of 256
// inside the configured range.
std::vector<RawBinary> generate_corpus(const CorpusSpec& spec);

struct ByteStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    std::array<std::uint64_t, 256> histogram = {};
};

// Per-class byte value summary.
std::map<ClassLabel, ByteStats> corpus_stats(
    std::span<const RawBinary> binaries);

// Directory of raw .bin files plus a JSON-lines manifest (one record
// per sample: id, label, family, length, seed, relative path).
void write_corpus(const std::filesystem::path& dir,
                  std::span<const RawBinary> binaries);
std::vector<RawBinary> read_corpus(const std::filesystem::path& dir);

}  // namespace malvis

#endif  // MALVIS_CORPUS_HPP
