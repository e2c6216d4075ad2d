#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hrlnav {

// Deterministic random source. Only the raw mt19937_64 stream is consumed;
// the distributions are implemented here so that sequences are bit-identical
// across standard library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_index(uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller, cosine branch only (no cached spare).
    double normal() {
        double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Derive a seed for an independent child stream.
    uint64_t fork_seed() { return next_u64(); }

    /// Full engine state as text, so an interrupted run can resume on the
    /// exact same stream.
    std::string state() const {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << engine_;
        return os.str();
    }

    void set_state(const std::string& s) {
        std::istringstream is(s);
        is.imbue(std::locale::classic());
        is >> engine_;
        if (is.fail()) throw std::invalid_argument("rng: malformed engine state");
    }

private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;
    std::mt19937_64 engine_;
};

}  // namespace hrlnav
