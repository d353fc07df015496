#include "malvis/labels.hpp"

namespace malvis {

std::string to_string(ClassLabel label) {
    switch (label) {
        case ClassLabel::Benign: return "benign";
        case ClassLabel::Malware: return "malware";
        case ClassLabel::ObfuscatedMalware: return "obfuscated";
        case ClassLabel::StealthyMalware: return "stealthy";
    }
    throw ConfigError("unknown class label value");
}

std::string to_string(Family family) {
    switch (family) {
        case Family::Backdoor: return "backdoor";
        case Family::Trojan: return "trojan";
        case Family::Virus: return "virus";
        case Family::Worm: return "worm";
        case Family::Rootkit: return "rootkit";
    }
    throw ConfigError("unknown family value");
}

std::string to_string(Provenance provenance) {
    switch (provenance) {
        case Provenance::Real: return "real";
        case Provenance::GeneratedGan: return "generated:gan";
        case Provenance::GeneratedStealthy: return "generated:stealthy";
        case Provenance::GeneratedObfuscated: return "generated:obfuscated";
    }
    throw ConfigError("unknown provenance value");
}

ClassLabel parse_class_label(std::string_view text) {
    if (text == "benign") return ClassLabel::Benign;
    if (text == "malware") return ClassLabel::Malware;
    if (text == "obfuscated") return ClassLabel::ObfuscatedMalware;
    if (text == "stealthy") return ClassLabel::StealthyMalware;
    throw ConfigError("unknown class label: " + std::string(text));
}

Family parse_family(std::string_view text) {
    if (text == "backdoor") return Family::Backdoor;
    if (text == "trojan") return Family::Trojan;
    if (text == "virus") return Family::Virus;
    if (text == "worm") return Family::Worm;
    if (text == "rootkit") return Family::Rootkit;
    throw ConfigError("unknown family: " + std::string(text));
}

Provenance parse_provenance(std::string_view text) {
    if (text == "real") return Provenance::Real;
    if (text == "generated:gan") return Provenance::GeneratedGan;
    if (text == "generated:stealthy") return Provenance::GeneratedStealthy;
    if (text == "generated:obfuscated") return Provenance::GeneratedObfuscated;
    throw ConfigError("unknown provenance: " + std::string(text));
}

}  // namespace malvis
