#include <bit>
#include <cstring>
#include <string>

#include <zlib.h>

#include "cvxs/csv.hpp"
#include "cvxs/error.hpp"
#include "cvxs/synthesizer.hpp"

namespace cvxs {

namespace {

constexpr char kMagic[4] = {'C', 'V', 'X', 'S'};

// little-endian primitive serialization

class Writer {
public:
    void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
    void u16(std::uint16_t v) { raw(&v, sizeof v); }
    void u32(std::uint32_t v) { raw(&v, sizeof v); }
    void u64(std::uint64_t v) { raw(&v, sizeof v); }
    void f64(double v) { raw(&v, sizeof v); }
    void str(const std::string& s) {
        u64(s.size());
        out_.append(s);
    }
    void f64s(const std::vector<double>& v) {
        u64(v.size());
        for (const double x : v) f64(x);
    }
    void u64s(const std::vector<std::uint64_t>& v) {
        u64(v.size());
        for (const auto x : v) u64(x);
    }
    std::string take() { return std::move(out_); }

private:
    void raw(const void* p, std::size_t n) {
        static_assert(std::endian::native == std::endian::little,
                      "bundle format is little-endian");
        out_.append(static_cast<const char*>(p), n);
    }
    std::string out_;
};

class Reader {
public:
    explicit Reader(const std::string& bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint16_t u16() { return read_as<std::uint16_t>(); }
    std::uint32_t u32() { return read_as<std::uint32_t>(); }
    std::uint64_t u64() { return read_as<std::uint64_t>(); }
    double f64() { return read_as<double>(); }
    std::string str() {
        const auto n = u64();
        return std::string(take(n), n);
    }
    std::vector<double> f64s() {
        const auto n = u64();
        std::vector<double> v(n);
        for (auto& x : v) x = f64();
        return v;
    }
    std::vector<std::uint64_t> u64s() {
        const auto n = u64();
        std::vector<std::uint64_t> v(n);
        for (auto& x : v) x = u64();
        return v;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    template <typename T>
    T read_as() {
        T v;
        std::memcpy(&v, take(sizeof(T)), sizeof(T));
        return v;
    }
    const char* take(std::size_t n) {
        if (pos_ + n > bytes_.size()) {
            fail("ChecksumError", "bundle payload truncated");
        }
        const char* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }
    const std::string& bytes_;
    std::size_t pos_ = 0;
};

void write_matrix(Writer& w, const Matrix& m) {
    w.u64(m.rows());
    w.u64(m.cols());
    for (const double v : m.data()) w.f64(v);
}

Matrix read_matrix(Reader& r) {
    const auto rows = r.u64();
    const auto cols = r.u64();
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = r.f64();
    return m;
}

void write_optimizer(Writer& w, const Optimizer& opt) {
    const auto& cfg = opt.config();
    w.u8(cfg.kind == OptimizerConfig::Kind::adam ? 1 : 0);
    w.f64(cfg.learning_rate);
    w.f64(cfg.beta1);
    w.f64(cfg.beta2);
    w.f64(cfg.epsilon);
    w.u64(opt.step_count());
    w.f64s(opt.first_moment());
    w.f64s(opt.second_moment());
}

Optimizer read_optimizer(Reader& r) {
    OptimizerConfig cfg;
    cfg.kind = r.u8() == 1 ? OptimizerConfig::Kind::adam : OptimizerConfig::Kind::sgd;
    cfg.learning_rate = r.f64();
    cfg.beta1 = r.f64();
    cfg.beta2 = r.f64();
    cfg.epsilon = r.f64();
    const auto steps = r.u64();
    auto m = r.f64s();
    auto v = r.f64s();
    Optimizer opt(cfg, m.size());
    opt.restore(steps, std::move(m), std::move(v));
    return opt;
}

std::string serialize_payload(const SynthesizerBundle& b) {
    Writer w;
    w.str(schema_to_json(b.data.schema));

    // transforms
    w.u64(b.data.codecs.size());
    for (const auto& codec : b.data.codecs) {
        w.u8(static_cast<std::uint8_t>(codec.kind));
        w.f64(codec.min);
        w.f64(codec.max);
        w.u8(codec.degenerate ? 1 : 0);
        w.u64(codec.dictionary.size());
        for (const auto& [enc, raw] : codec.dictionary) {
            w.f64(enc);
            w.f64(raw);
        }
        w.u32(static_cast<std::uint32_t>(codec.category_count));
    }
    write_matrix(w, b.data.values);

    // neighborhood index
    w.u64(b.index.k);
    w.u64(b.index.neighbors.size());
    for (const auto& row : b.index.neighbors) {
        for (const auto idx : row) w.u64(idx);
    }

    // training configuration
    w.u64(b.config.k);
    w.u64(b.config.gen);
    w.u64(b.config.disc_train_count);
    w.u64(b.config.neb_epochs);
    w.f64(b.config.alpha_clip);
    w.u8(b.config.optimizer.kind == OptimizerConfig::Kind::adam ? 1 : 0);
    w.f64(b.config.optimizer.learning_rate);
    w.f64(b.config.optimizer.beta1);
    w.f64(b.config.optimizer.beta2);
    w.f64(b.config.optimizer.epsilon);
    w.u64(b.config.seed);

    // networks: shape manifest first, then layer-ordered 64-bit parameters
    w.u64(b.generator.feature_dim);
    w.u64(b.generator.k);
    w.f64(b.generator.clip_fraction);
    w.f64s(b.generator.params);

    w.u64(b.discriminator.feature_dim);
    w.u64s(std::vector<std::uint64_t>(b.discriminator.layer_sizes.begin(),
                                      b.discriminator.layer_sizes.end()));
    w.f64s(b.discriminator.params);

    write_optimizer(w, b.gen_opt);
    write_optimizer(w, b.disc_opt);

    for (const auto word : b.rng_state) w.u64(word);
    w.u64(b.epochs_done);
    w.u64(b.disc_updates);
    w.u64(b.gen_updates);
    return w.take();
}

SynthesizerBundle parse_payload(const std::string& payload, std::uint16_t version) {
    Reader r(payload);
    SynthesizerBundle b;
    b.version = SynthesizerBundle::kCurrentVersion;
    if (version < SynthesizerBundle::kCurrentVersion) {
        b.migration_notes.push_back("migrated bundle from format version " +
                                    std::to_string(version));
    }

    b.data.schema = parse_schema_json(r.str());
    const auto n_codecs = r.u64();
    b.data.codecs.resize(n_codecs);
    for (auto& codec : b.data.codecs) {
        codec.kind = static_cast<FeatureKind>(r.u8());
        codec.min = r.f64();
        codec.max = r.f64();
        codec.degenerate = r.u8() != 0;
        const auto dict_size = r.u64();
        codec.dictionary.resize(dict_size);
        for (auto& [enc, raw] : codec.dictionary) {
            enc = r.f64();
            raw = r.f64();
        }
        codec.category_count = static_cast<std::int32_t>(r.u32());
    }
    b.data.values = read_matrix(r);

    b.index.k = r.u64();
    const auto n_rows = r.u64();
    b.index.neighbors.assign(n_rows, std::vector<std::size_t>(b.index.k));
    for (auto& row : b.index.neighbors) {
        for (auto& idx : row) idx = r.u64();
    }

    b.config.k = r.u64();
    b.config.gen = r.u64();
    b.config.disc_train_count = r.u64();
    b.config.neb_epochs = r.u64();
    b.config.alpha_clip = r.f64();
    b.config.optimizer.kind =
        r.u8() == 1 ? OptimizerConfig::Kind::adam : OptimizerConfig::Kind::sgd;
    b.config.optimizer.learning_rate = r.f64();
    b.config.optimizer.beta1 = r.f64();
    b.config.optimizer.beta2 = r.f64();
    b.config.optimizer.epsilon = r.f64();
    b.config.seed = r.u64();

    b.generator.feature_dim = r.u64();
    b.generator.k = r.u64();
    b.generator.clip_fraction = r.f64();
    b.generator.params = r.f64s();

    b.discriminator.feature_dim = r.u64();
    const auto sizes = r.u64s();
    b.discriminator.layer_sizes.assign(sizes.begin(), sizes.end());
    b.discriminator.params = r.f64s();

    b.gen_opt = read_optimizer(r);
    b.disc_opt = read_optimizer(r);

    for (auto& word : b.rng_state) word = r.u64();
    b.epochs_done = r.u64();
    b.disc_updates = r.u64();
    b.gen_updates = r.u64();
    if (!r.done()) fail("ChecksumError", "trailing bytes after bundle payload");
    return b;
}

} // namespace

std::string bundle_to_bytes(const SynthesizerBundle& bundle) {
    const std::string payload = serialize_payload(bundle);

    uLongf bound = compressBound(static_cast<uLong>(payload.size()));
    std::string compressed(bound, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &bound,
                  reinterpret_cast<const Bytef*>(payload.data()),
                  static_cast<uLong>(payload.size()), Z_BEST_COMPRESSION) != Z_OK) {
        fail("IoError", "bundle compression failed");
    }
    compressed.resize(bound);

    Writer header;
    header.u8(static_cast<std::uint8_t>(kMagic[0]));
    header.u8(static_cast<std::uint8_t>(kMagic[1]));
    header.u8(static_cast<std::uint8_t>(kMagic[2]));
    header.u8(static_cast<std::uint8_t>(kMagic[3]));
    header.u16(bundle.version);
    header.u64(compressed.size());
    header.u64(payload.size());

    std::string out = header.take() + compressed;
    const auto crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(compressed.data()),
              static_cast<uInt>(compressed.size())));
    Writer tail;
    tail.u32(crc);
    return out + tail.take();
}

SynthesizerBundle bundle_from_bytes(const std::string& bytes) {
    constexpr std::size_t kHeaderSize = 4 + 2 + 8 + 8;
    if (bytes.size() < kHeaderSize + 4) fail("ChecksumError", "bundle file truncated");
    if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
        fail("VersionMismatch", "not a CVXS bundle (bad magic)");
    }
    Reader header(bytes);
    header.u32(); // magic, already checked
    const auto version = header.u16();
    if (version == 0 || version > SynthesizerBundle::kCurrentVersion) {
        fail("VersionMismatch",
             "unsupported bundle format version " + std::to_string(version));
    }
    const auto compressed_size = header.u64();
    const auto raw_size = header.u64();
    if (bytes.size() != kHeaderSize + compressed_size + 4) {
        fail("ChecksumError", "bundle file truncated");
    }

    const char* compressed = bytes.data() + kHeaderSize;
    std::uint32_t stored_crc = 0;
    std::memcpy(&stored_crc, bytes.data() + kHeaderSize + compressed_size, 4);
    const auto crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(compressed),
              static_cast<uInt>(compressed_size)));
    if (crc != stored_crc) fail("ChecksumError", "bundle checksum mismatch");

    std::string payload(raw_size, '\0');
    uLongf out_size = static_cast<uLongf>(raw_size);
    if (uncompress(reinterpret_cast<Bytef*>(payload.data()), &out_size,
                   reinterpret_cast<const Bytef*>(compressed),
                   static_cast<uLong>(compressed_size)) != Z_OK ||
        out_size != raw_size) {
        fail("ChecksumError", "bundle payload corrupt");
    }
    return parse_payload(payload, version);
}

void save(const SynthesizerBundle& bundle, const std::string& path) {
    write_text_file(path, bundle_to_bytes(bundle));
}

SynthesizerBundle load(const std::string& path) {
    return bundle_from_bytes(read_text_file(path, "FileNotFound"));
}

} // namespace cvxs
