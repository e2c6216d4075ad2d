#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "hrlnav/nn.hpp"

namespace hrlnav::io {

/// In-memory checkpoint: named sections holding scalars, vectors, networks
/// and optimizer states. Serialized as a little-endian binary file with
/// magic bytes and a format version; parameter doubles round-trip exactly.
struct Checkpoint {
    static constexpr char kMagic[8] = {'H', 'R', 'L', 'N', 'A', 'V', 'C', 'K'};
    static constexpr uint32_t kFormatVersion = 1;

    using Section = std::variant<double, int64_t, std::vector<double>, nn::Network, nn::AdamState,
                                 std::string>;

    std::map<std::string, Section> sections;

    void put_scalar(const std::string& name, double v) { sections[name] = v; }
    void put_int(const std::string& name, int64_t v) { sections[name] = v; }
    void put_vector(const std::string& name, std::vector<double> v) { sections[name] = std::move(v); }
    void put_network(const std::string& name, nn::Network net) { sections[name] = std::move(net); }
    void put_adam(const std::string& name, nn::AdamState st) { sections[name] = std::move(st); }
    void put_text(const std::string& name, std::string v) { sections[name] = std::move(v); }

    bool has(const std::string& name) const { return sections.count(name) > 0; }

    /// Typed accessors; throw IoError naming the section when absent or of
    /// the wrong type.
    double scalar(const std::string& name) const;
    int64_t integer(const std::string& name) const;
    const std::vector<double>& vector(const std::string& name) const;
    const nn::Network& network(const std::string& name) const;
    const nn::AdamState& adam(const std::string& name) const;
    const std::string& text(const std::string& name) const;
};

std::vector<uint8_t> serialize_checkpoint(const Checkpoint& cp);
Checkpoint deserialize_checkpoint(const std::vector<uint8_t>& bytes);

void save_checkpoint(const std::string& path, const Checkpoint& cp);
Checkpoint load_checkpoint(const std::string& path);

/// One line per section: name, kind, shape. For the inspect command.
std::string describe_checkpoint(const Checkpoint& cp);

}  // namespace hrlnav::io
