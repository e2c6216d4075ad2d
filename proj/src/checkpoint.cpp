#include "hrlnav/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hrlnav/errors.hpp"

namespace hrlnav::io {

namespace {

enum class Tag : uint8_t { Scalar = 0, Integer = 1, Vector = 2, Network = 3, Adam = 4, Text = 5 };

class ByteWriter {
public:
    std::vector<uint8_t> bytes;

    void u8(uint8_t v) { bytes.push_back(v); }
    void u32(uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void u64(uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
    void i64(int64_t v) { u64(std::bit_cast<uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<uint32_t>(s.size()));
        bytes.insert(bytes.end(), s.begin(), s.end());
    }
    void f64_vec(const std::vector<double>& v) {
        u64(v.size());
        for (double x : v) f64(x);
    }
};

class ByteReader {
public:
    explicit ByteReader(const std::vector<uint8_t>& b) : bytes_(b) {}

    uint8_t u8() { return take(1)[0]; }
    uint32_t u32() {
        const uint8_t* p = take(4);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
        return v;
    }
    uint64_t u64() {
        const uint8_t* p = take(8);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
        return v;
    }
    int64_t i64() { return std::bit_cast<int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const uint32_t n = u32();
        const uint8_t* p = take(n);
        return std::string(reinterpret_cast<const char*>(p), n);
    }
    std::vector<double> f64_vec() {
        const uint64_t n = u64();
        if (n > (bytes_.size() - pos_) / 8) throw IoError("checkpoint: truncated vector");
        std::vector<double> v(n);
        for (uint64_t i = 0; i < n; ++i) v[i] = f64();
        return v;
    }
    bool done() const { return pos_ == bytes_.size(); }

private:
    const uint8_t* take(size_t n) {
        if (pos_ + n > bytes_.size()) throw IoError("checkpoint: file truncated");
        const uint8_t* p = bytes_.data() + pos_;
        pos_ += n;
        return p;
    }

    const std::vector<uint8_t>& bytes_;
    size_t pos_ = 0;
};

void write_network(ByteWriter& w, const nn::Network& net) {
    w.u32(static_cast<uint32_t>(net.layers.size()));
    for (const auto& l : net.layers) {
        w.u32(static_cast<uint32_t>(l.in));
        w.u32(static_cast<uint32_t>(l.out));
        w.u8(static_cast<uint8_t>(l.act));
        w.f64_vec(l.w);
        w.f64_vec(l.b);
    }
}

nn::Network read_network(ByteReader& r) {
    nn::Network net;
    const uint32_t n_layers = r.u32();
    net.layers.resize(n_layers);
    for (auto& l : net.layers) {
        l.in = static_cast<int>(r.u32());
        l.out = static_cast<int>(r.u32());
        const uint8_t act = r.u8();
        if (act > 2) throw IoError("checkpoint: invalid activation tag");
        l.act = static_cast<nn::Activation>(act);
        l.w = r.f64_vec();
        l.b = r.f64_vec();
        if (l.w.size() != static_cast<size_t>(l.in) * l.out ||
            l.b.size() != static_cast<size_t>(l.out)) {
            throw IoError("checkpoint: layer shape inconsistent");
        }
    }
    return net;
}

void write_adam(ByteWriter& w, const nn::AdamState& st) {
    w.f64(st.cfg.lr);
    w.f64(st.cfg.beta1);
    w.f64(st.cfg.beta2);
    w.f64(st.cfg.eps);
    w.i64(st.step);
    for (const auto* group : {&st.mw, &st.vw, &st.mb, &st.vb}) {
        w.u32(static_cast<uint32_t>(group->size()));
        for (const auto& v : *group) w.f64_vec(v);
    }
}

nn::AdamState read_adam(ByteReader& r) {
    nn::AdamState st;
    st.cfg.lr = r.f64();
    st.cfg.beta1 = r.f64();
    st.cfg.beta2 = r.f64();
    st.cfg.eps = r.f64();
    st.step = r.i64();
    for (auto* group : {&st.mw, &st.vw, &st.mb, &st.vb}) {
        const uint32_t n = r.u32();
        group->resize(n);
        for (auto& v : *group) v = r.f64_vec();
    }
    return st;
}

const Checkpoint::Section& find_section(const Checkpoint& cp, const std::string& name) {
    auto it = cp.sections.find(name);
    if (it == cp.sections.end()) throw IoError("checkpoint: missing section '" + name + "'");
    return it->second;
}

template <typename T>
const T& section_as(const Checkpoint& cp, const std::string& name) {
    const auto& s = find_section(cp, name);
    const T* v = std::get_if<T>(&s);
    if (!v) throw IoError("checkpoint: section '" + name + "' has the wrong type");
    return *v;
}

}  // namespace

double Checkpoint::scalar(const std::string& name) const { return section_as<double>(*this, name); }
int64_t Checkpoint::integer(const std::string& name) const {
    return section_as<int64_t>(*this, name);
}
const std::vector<double>& Checkpoint::vector(const std::string& name) const {
    return section_as<std::vector<double>>(*this, name);
}
const nn::Network& Checkpoint::network(const std::string& name) const {
    return section_as<nn::Network>(*this, name);
}
const nn::AdamState& Checkpoint::adam(const std::string& name) const {
    return section_as<nn::AdamState>(*this, name);
}
const std::string& Checkpoint::text(const std::string& name) const {
    return section_as<std::string>(*this, name);
}

std::vector<uint8_t> serialize_checkpoint(const Checkpoint& cp) {
    ByteWriter w;
    w.bytes.insert(w.bytes.end(), std::begin(Checkpoint::kMagic), std::end(Checkpoint::kMagic));
    w.u32(Checkpoint::kFormatVersion);
    w.u32(static_cast<uint32_t>(cp.sections.size()));
    for (const auto& [name, section] : cp.sections) {
        w.u8(static_cast<uint8_t>(section.index()));
        w.str(name);
        std::visit(
            [&w](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    w.f64(v);
                } else if constexpr (std::is_same_v<T, int64_t>) {
                    w.i64(v);
                } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    w.f64_vec(v);
                } else if constexpr (std::is_same_v<T, nn::Network>) {
                    write_network(w, v);
                } else if constexpr (std::is_same_v<T, nn::AdamState>) {
                    write_adam(w, v);
                } else {
                    w.str(v);
                }
            },
            section);
    }
    return std::move(w.bytes);
}

Checkpoint deserialize_checkpoint(const std::vector<uint8_t>& bytes) {
    ByteReader r(bytes);
    char magic[8];
    for (char& c : magic) c = static_cast<char>(r.u8());
    if (std::memcmp(magic, Checkpoint::kMagic, 8) != 0) {
        throw IoError("checkpoint: bad magic bytes (not a checkpoint file)");
    }
    const uint32_t version = r.u32();
    if (version != Checkpoint::kFormatVersion) {
        throw IoError("checkpoint: unsupported format_version " + std::to_string(version));
    }
    Checkpoint cp;
    const uint32_t n_sections = r.u32();
    for (uint32_t i = 0; i < n_sections; ++i) {
        const uint8_t tag = r.u8();
        const std::string name = r.str();
        switch (static_cast<Tag>(tag)) {
            case Tag::Scalar: cp.sections[name] = r.f64(); break;
            case Tag::Integer: cp.sections[name] = r.i64(); break;
            case Tag::Vector: cp.sections[name] = r.f64_vec(); break;
            case Tag::Network: cp.sections[name] = read_network(r); break;
            case Tag::Adam: cp.sections[name] = read_adam(r); break;
            case Tag::Text: cp.sections[name] = r.str(); break;
            default: throw IoError("checkpoint: unknown section tag");
        }
    }
    if (!r.done()) throw IoError("checkpoint: trailing bytes after last section");
    return cp;
}

void save_checkpoint(const std::string& path, const Checkpoint& cp) {
    const std::vector<uint8_t> bytes = serialize_checkpoint(cp);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("checkpoint write failed: " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return deserialize_checkpoint(bytes);
}

std::string describe_checkpoint(const Checkpoint& cp) {
    std::ostringstream out;
    for (const auto& [name, section] : cp.sections) {
        out << name << ": ";
        std::visit(
            [&out](const auto& v) {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, double>) {
                    out << "scalar " << v;
                } else if constexpr (std::is_same_v<T, int64_t>) {
                    out << "int " << v;
                } else if constexpr (std::is_same_v<T, std::vector<double>>) {
                    out << "vector[" << v.size() << "]";
                } else if constexpr (std::is_same_v<T, nn::Network>) {
                    out << "network ";
                    for (size_t i = 0; i < v.layers.size(); ++i) {
                        if (i == 0) out << v.layers[i].in;
                        out << "-" << v.layers[i].out;
                    }
                    out << " (" << v.param_count() << " params)";
                } else if constexpr (std::is_same_v<T, nn::AdamState>) {
                    out << "adam state (step " << v.step << ")";
                } else {
                    out << "text[" << v.size() << "]";
                }
            },
            section);
        out << "\n";
    }
    return out.str();
}

}  // namespace hrlnav::io
