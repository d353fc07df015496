#ifndef MALVIS_LABELS_HPP
#define MALVIS_LABELS_HPP

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "malvis/common.hpp"

namespace malvis {

// The four sample classes. The numeric order is also the argmax
// tie-break order used by the classifier.
enum class ClassLabel : int {
    Benign = 0,
    Malware = 1,
    ObfuscatedMalware = 2,
    StealthyMalware = 3,
};

inline constexpr int kNumClasses = 4;

inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses = {
    ClassLabel::Benign, ClassLabel::Malware, ClassLabel::ObfuscatedMalware,
    ClassLabel::StealthyMalware};

enum class Family : int {
    Backdoor = 0,
    Trojan = 1,
    Virus = 2,
    Worm = 3,
    Rootkit = 4,
};

// Where a sample came from. Corpus-derived datasets carry `real`; the
// augmentation generators tag their own outputs.
enum class Provenance : int {
    Real = 0,
    GeneratedGan = 1,
    GeneratedStealthy = 2,
    GeneratedObfuscated = 3,
};

std::string to_string(ClassLabel label);
std::string to_string(Family family);
std::string to_string(Provenance provenance);

ClassLabel parse_class_label(std::string_view text);
Family parse_family(std::string_view text);
Provenance parse_provenance(std::string_view text);

inline bool is_generated(Provenance p) { return p != Provenance::Real; }

}  // namespace malvis

#endif  // MALVIS_LABELS_HPP
