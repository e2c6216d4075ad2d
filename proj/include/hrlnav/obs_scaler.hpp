#pragma once

#include <vector>

namespace hrlnav::agents {

/// Fixed per-feature multipliers applied to flattened observations before
/// they reach a network. Derived from world/sensor geometry, not learned;
/// run snapshots carry it so a policy keeps its input scaling when
/// evaluated on other worlds. Empty scale = identity.
struct ObsScaler {
    std::vector<double> scale;

    std::vector<double> apply(const std::vector<double>& raw) const {
        if (scale.empty()) return raw;
        std::vector<double> out(raw.size());
        for (size_t i = 0; i < raw.size(); ++i) {
            out[i] = i < scale.size() ? raw[i] * scale[i] : raw[i];
        }
        return out;
    }
};

/// Scaler for [scan..., distance, bearing, last_lin, last_ang] vectors:
/// ranges to (0,1], distances by the arena diagonal, bearings to (-1,1].
ObsScaler make_obs_scaler(size_t n_beams, double max_range, double arena_diagonal);

}  // namespace hrlnav::agents
