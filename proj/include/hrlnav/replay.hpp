#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hrlnav/rng.hpp"

namespace hrlnav::replay {

/// One stored experience. ActionT is a discrete index for the subgoal
/// policy and a continuous pair for the motion policy. `span` counts the
/// environment timesteps the transition covers (> 1 for subgoal-level
/// transitions, used for semi-Markov discounting). `done` is true only for
/// environment terminals; a timeout keeps bootstrapping.
template <typename ActionT>
struct Transition {
    std::vector<double> obs;
    ActionT action{};
    double reward = 0.0;
    std::vector<double> next_obs;
    bool done = false;
    int span = 1;
};

/// Fixed-capacity FIFO ring with uniform sampling (with replacement).
template <typename ActionT>
class ReplayBuffer {
public:
    explicit ReplayBuffer(size_t capacity, size_t obs_dim)
        : capacity_(capacity), obs_dim_(obs_dim) {
        if (capacity == 0) throw std::invalid_argument("replay: capacity must be positive");
        if (obs_dim == 0) throw std::invalid_argument("replay: obs_dim must be positive");
        storage_.reserve(capacity);
    }

    size_t capacity() const { return capacity_; }
    size_t size() const { return storage_.size(); }
    size_t obs_dim() const { return obs_dim_; }

    void push(Transition<ActionT> t) {
        if (t.obs.size() != obs_dim_ || t.next_obs.size() != obs_dim_) {
            throw std::invalid_argument("replay: observation length mismatch");
        }
        if (storage_.size() < capacity_) {
            storage_.push_back(std::move(t));
        } else {
            storage_[cursor_] = std::move(t);
        }
        cursor_ = (cursor_ + 1) % capacity_;
    }

    /// Raw uniform index stream (with replacement); may repeat and may
    /// exceed size(). Empty buffers cannot be sampled.
    std::vector<size_t> sample_indices(size_t batch_size, Rng& rng) const {
        if (batch_size == 0) throw std::invalid_argument("replay: batch_size must be positive");
        if (storage_.empty()) throw std::invalid_argument("replay: buffer is empty");
        std::vector<size_t> idx(batch_size);
        for (size_t& i : idx) i = rng.uniform_index(storage_.size());
        return idx;
    }

    /// Uniform minibatch; training code must not request more transitions
    /// than are stored.
    std::vector<Transition<ActionT>> sample(size_t batch_size, Rng& rng) const {
        if (batch_size > storage_.size()) {
            throw std::invalid_argument("replay: batch larger than stored transitions");
        }
        std::vector<Transition<ActionT>> batch;
        batch.reserve(batch_size);
        for (size_t i : sample_indices(batch_size, rng)) batch.push_back(storage_[i]);
        return batch;
    }

    /// k-th most recently retained transition in insertion order:
    /// nth_oldest(0) is the oldest still stored.
    const Transition<ActionT>& nth_oldest(size_t k) const {
        if (k >= storage_.size()) throw std::out_of_range("replay: index past stored size");
        if (storage_.size() < capacity_) return storage_[k];
        return storage_[(cursor_ + k) % capacity_];
    }

    /// Physical slot layout plus the write cursor. Sampling indexes slots
    /// directly, so resuming a run must restore this layout verbatim, not
    /// just the logical FIFO order.
    const std::vector<Transition<ActionT>>& slots() const { return storage_; }
    size_t cursor() const { return cursor_; }

    void restore_slots(std::vector<Transition<ActionT>> slots, size_t cursor) {
        if (slots.size() > capacity_) throw std::invalid_argument("replay: more slots than capacity");
        if (cursor >= capacity_) throw std::invalid_argument("replay: cursor out of range");
        if (slots.size() < capacity_ && cursor != slots.size()) {
            throw std::invalid_argument("replay: cursor inconsistent with a part-filled buffer");
        }
        for (const auto& t : slots) {
            if (t.obs.size() != obs_dim_ || t.next_obs.size() != obs_dim_) {
                throw std::invalid_argument("replay: observation length mismatch");
            }
        }
        storage_ = std::move(slots);
        cursor_ = cursor;
    }

private:
    size_t capacity_;
    size_t obs_dim_;
    size_t cursor_ = 0;
    std::vector<Transition<ActionT>> storage_;
};

}  // namespace hrlnav::replay
