#ifndef MALVIS_COMMON_HPP
#define MALVIS_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace malvis {

// Invalid user input: bad flags, malformed config files, out-of-range
// parameters. Mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Failure while executing a stage: I/O problems, corrupt artifacts,
// numerical blow-ups. Mapped to exit code 2 by the CLI.
class StageError : public std::runtime_error {
public:
    explicit StageError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline std::uint64_t fnv1a(const void* data, std::size_t len,
                           std::uint64_t hash = kFnvOffsetBasis) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        hash ^= bytes[i];
        hash *= kFnvPrime;
    }
    return hash;
}

inline std::uint64_t fnv1a(std::string_view text,
                           std::uint64_t hash = kFnvOffsetBasis) {
    return fnv1a(text.data(), text.size(), hash);
}

// Sub-seed derivation used by every stage. FNV-1a over the UTF-8 stage
// name, XORed with the master seed. Reproducible in any language.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::string_view stage) {
    return fnv1a(stage) ^ master_seed;
}

// Indexed variant: the 8 little-endian bytes of the index are fed into
// the hash after the stage name.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::string_view stage,
                                 std::uint64_t index) {
    std::uint64_t h = fnv1a(stage);
    for (int i = 0; i < 8; ++i) {
        h ^= (index >> (8 * i)) & 0xffu;
        h *= kFnvPrime;
    }
    return h ^ master_seed;
}

inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::string_view stage, std::uint64_t i,
                                 std::uint64_t j) {
    std::uint64_t h = fnv1a(stage);
    for (int k = 0; k < 8; ++k) {
        h ^= (i >> (8 * k)) & 0xffu;
        h *= kFnvPrime;
    }
    for (int k = 0; k < 8; ++k) {
        h ^= (j >> (8 * k)) & 0xffu;
        h *= kFnvPrime;
    }
    return h ^ master_seed;
}

}  // namespace malvis

#endif  // MALVIS_COMMON_HPP
