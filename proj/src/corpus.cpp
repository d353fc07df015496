#include "malvis/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "malvis/common.hpp"
#include "malvis/rng.hpp"

namespace malvis {

namespace {

double wave_value(Waveform waveform, int pos, int period) {
    const double t = static_cast<double>(pos) / period;  // [0, 1)
    switch (waveform) {
        case Waveform::Sine:
            return std::sin(2.0 * 3.14159265358979323846 * t);
        case Waveform::Square:
            return t < 0.5 ? 1.0 : -1.0;
        case Waveform::Sawtooth:
            return 2.0 * t - 1.0;
        case Waveform::Triangle:
            return 1.0 - 4.0 * std::abs(t - 0.5);
    }
    throw ConfigError("unknown waveform");
}

std::uint8_t clamp_byte(double v) {
    const double r = std::floor(v + 0.5);
    if (r < 0.0) return 0;
    if (r > 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

std::vector<std::uint8_t> synthesize_bytes(const MotifSpec& motif,
                                           double noise_level, Rng& rng,
                                           std::size_t min_length,
                                           std::size_t max_length,
                                           int width = 256) {
    const std::size_t lo_rows = (min_length + width - 1) / width;
    const std::size_t hi_rows = max_length / width;
    const std::size_t rows =
        lo_rows + rng.below(hi_rows - lo_rows + 1);
    const std::size_t length = rows * width;

    const int period =
        motif.period_min +
        static_cast<int>(rng.below(motif.period_max - motif.period_min + 1));
    const int phase = static_cast<int>(rng.below(period));
    const double amp_scale = rng.uniform(0.75, 1.0);
    const double base_jitter = rng.uniform(-8.0, 8.0);
    const double noise_span = 127.0 * noise_level;

    std::vector<std::uint8_t> bytes(length);
    for (std::size_t k = 0; k < length; ++k) {
        double v = motif.base + base_jitter +
                   amp_scale * motif.amplitude *
                       wave_value(motif.waveform,
                                  static_cast<int>((k + phase) % period),
                                  period);
        if (motif.row_ramp != 0.0 && rows > 1) {
            const std::size_t row = k / width;
            v += motif.row_ramp * static_cast<double>(row) / (rows - 1);
        }
        if (noise_level > 0.0)
            v += noise_span * (2.0 * rng.unit() - 1.0);
        bytes[k] = clamp_byte(v);
    }
    return bytes;
}

std::string sample_id(ClassLabel label, int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%05d",
                  label == ClassLabel::Benign ? 'b' : 'm', index);
    return buf;
}

}  // namespace

std::map<Family, MotifSpec> CorpusSpec::default_family_motifs() {
    return {
        {Family::Backdoor,
         {Waveform::Square, 8, 10, 150.0, 70.0, 70.0}},
        {Family::Trojan,
         {Waveform::Sawtooth, 12, 14, 165.0, 75.0, 70.0}},
        {Family::Virus,
         {Waveform::Triangle, 16, 18, 175.0, 60.0, 70.0}},
        {Family::Worm, {Waveform::Sine, 22, 26, 185.0, 65.0, 70.0}},
        {Family::Rootkit,
         {Waveform::Square, 28, 32, 140.0, 85.0, 70.0}},
    };
}

void CorpusSpec::validate() const {
    if (benign_count <= 0)
        throw ConfigError("corpus spec: benign_count must be > 0");
    if (malware_count <= 0)
        throw ConfigError("corpus spec: malware_count must be > 0");
    if (noise_level < 0.0 || noise_level > 1.0)
        throw ConfigError("corpus spec: noise_level must be in [0, 1]");
    if (min_length < 256)
        throw ConfigError("corpus spec: min_length must be >= 256");
    if (max_length < min_length)
        throw ConfigError("corpus spec: max_length must be >= min_length");
    if (max_length / 256 < (min_length + 255) / 256)
        throw ConfigError(
            "corpus spec: length range contains no multiple of 256");
    if (family_mix.empty())
        throw ConfigError("corpus spec: family_mix must be non-empty");
    for (Family f : family_mix)
        if (!family_motifs.count(f))
            throw ConfigError("corpus spec: no motif for family " +
                              to_string(f));
    auto check_motif = [](const MotifSpec& m, const std::string& who) {
        if (m.period_min < 1 || m.period_max < m.period_min)
            throw ConfigError("corpus spec: bad motif period for " + who);
    };
    check_motif(benign_motif, "benign");
    for (const auto& [family, motif] : family_motifs)
        check_motif(motif, to_string(family));
}

std::vector<RawBinary> generate_corpus(const CorpusSpec& spec) {
    spec.validate();

    std::vector<RawBinary> out;
    out.reserve(static_cast<std::size_t>(spec.benign_count) +
                spec.malware_count);

    for (int i = 0; i < spec.benign_count; ++i) {
        RawBinary sample;
        sample.id = sample_id(ClassLabel::Benign, i);
        sample.label = ClassLabel::Benign;
        sample.seed = derive_seed(spec.master_seed, "corpus",
                                  static_cast<std::uint64_t>(i));
        Rng rng(sample.seed);
        sample.bytes = synthesize_bytes(spec.benign_motif, spec.noise_level,
                                        rng, spec.min_length,
                                        spec.max_length);
        out.push_back(std::move(sample));
    }
    for (int i = 0; i < spec.malware_count; ++i) {
        RawBinary sample;
        sample.id = sample_id(ClassLabel::Malware, i);
        sample.label = ClassLabel::Malware;
        sample.family = spec.family_mix[i % spec.family_mix.size()];
        sample.seed =
            derive_seed(spec.master_seed, "corpus",
                        static_cast<std::uint64_t>(spec.benign_count + i));
        Rng rng(sample.seed);
        sample.bytes =
            synthesize_bytes(spec.family_motifs.at(*sample.family),
                             spec.noise_level, rng, spec.min_length,
                             spec.max_length);
        out.push_back(std::move(sample));
    }
    return out;
}

std::map<ClassLabel, ByteStats> corpus_stats(
    std::span<const RawBinary> binaries) {
    if (binaries.empty()) throw ConfigError("corpus_stats: empty input");

    std::map<ClassLabel, ByteStats> stats;
    for (const RawBinary& sample : binaries) {
        ByteStats& s = stats[sample.label];
        for (std::uint8_t b : sample.bytes) {
            s.histogram[b] += 1;
            s.count += 1;
        }
    }
    for (auto& [label, s] : stats) {
        double sum = 0.0;
        for (int v = 0; v < 256; ++v)
            sum += static_cast<double>(s.histogram[v]) * v;
        s.mean = s.count ? sum / static_cast<double>(s.count) : 0.0;
    }
    return stats;
}

void write_corpus(const std::filesystem::path& dir,
                  std::span<const RawBinary> binaries) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::ofstream manifest(dir / "manifest.jsonl", std::ios::binary);
    if (!manifest)
        throw StageError("cannot write corpus manifest in " + dir.string());

    for (const RawBinary& sample : binaries) {
        const std::string rel = sample.id + ".bin";
        std::ofstream bin(dir / rel, std::ios::binary);
        if (!bin) throw StageError("cannot write " + (dir / rel).string());
        bin.write(reinterpret_cast<const char*>(sample.bytes.data()),
                  static_cast<std::streamsize>(sample.bytes.size()));

        nlohmann::ordered_json record;
        record["id"] = sample.id;
        record["label"] = to_string(sample.label);
        record["family"] =
            sample.family ? nlohmann::json(to_string(*sample.family))
                          : nlohmann::json(nullptr);
        record["length"] = sample.bytes.size();
        record["seed"] = sample.seed;
        record["path"] = rel;
        manifest << record.dump() << "\n";
    }
}

std::vector<RawBinary> read_corpus(const std::filesystem::path& dir) {
    std::ifstream manifest(dir / "manifest.jsonl");
    if (!manifest)
        throw StageError("missing corpus manifest: " +
                         (dir / "manifest.jsonl").string());

    std::vector<RawBinary> out;
    std::string line;
    while (std::getline(manifest, line)) {
        if (line.empty()) continue;
        const auto record = nlohmann::json::parse(line);
        RawBinary sample;
        sample.id = record.at("id").get<std::string>();
        sample.label = parse_class_label(record.at("label").get<std::string>());
        if (!record.at("family").is_null())
            sample.family = parse_family(record.at("family").get<std::string>());
        sample.seed = record.at("seed").get<std::uint64_t>();
        const auto path = dir / record.at("path").get<std::string>();
        std::ifstream bin(path, std::ios::binary);
        if (!bin) throw StageError("missing corpus file: " + path.string());
        const auto length = record.at("length").get<std::size_t>();
        sample.bytes.resize(length);
        bin.read(reinterpret_cast<char*>(sample.bytes.data()),
                 static_cast<std::streamsize>(length));
        if (bin.gcount() != static_cast<std::streamsize>(length))
            throw StageError("truncated corpus file: " + path.string());
        out.push_back(std::move(sample));
    }
    if (out.empty())
        throw StageError("corpus manifest is empty: " + dir.string());
    return out;
}

}  // namespace malvis
