#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hrlnav/rng.hpp"

namespace hrlnav::nn {

enum class Activation { Relu, Tanh, Linear };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

/// Dense layer, weights row-major [out][in]. All math in 64-bit floats.
struct Layer {
    int in = 0;
    int out = 0;
    Activation act = Activation::Linear;
    std::vector<double> w;  // size in*out
    std::vector<double> b;  // size out
};

struct Network {
    std::vector<Layer> layers;

    int input_size() const { return layers.empty() ? 0 : layers.front().in; }
    int output_size() const { return layers.empty() ? 0 : layers.back().out; }
    size_t param_count() const;
    bool same_arch(const Network& other) const;
};

/// Build a network of len(sizes)-1 dense layers. Weights and biases drawn
/// uniformly from +/- 1/sqrt(fan_in); deterministic per seed.
Network init(const std::vector<int>& sizes, const std::vector<Activation>& activations,
             uint64_t seed);

/// Activations recorded during forward, consumed by backward.
/// post[0] is the input; post[i] the output of layer i-1.
struct ForwardCache {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;
};

std::vector<double> forward(const Network& net, const std::vector<double>& input);
std::vector<double> forward(const Network& net, const std::vector<double>& input,
                            ForwardCache& cache);

/// Parameter gradients, same shapes as the network they were taken from.
struct Gradients {
    std::vector<std::vector<double>> w;
    std::vector<std::vector<double>> b;

    void accumulate(const Gradients& other);
    void scale(double s);
};

Gradients zero_gradients(const Network& net);

/// Reverse-mode gradients of the forward map. Accumulates parameter
/// gradients into `grads` and returns the gradient with respect to the
/// input vector.
std::vector<double> backward(const Network& net, const ForwardCache& cache,
                             std::vector<double> out_grad, Gradients& grads);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// Per-parameter first/second moment accumulators plus the step counter.
struct AdamState {
    AdamConfig cfg;
    std::vector<std::vector<double>> mw, vw, mb, vb;
    int64_t step = 0;
};

AdamState make_adam(const Network& net, AdamConfig cfg = {});

/// One bias-corrected Adam update. Rejects non-finite gradients; guarantees
/// parameters stay finite.
void adam_step(Network& net, const Gradients& grads, AdamState& state);

/// theta_target <- tau*theta_online + (1-tau)*theta_target, elementwise.
void soft_update(Network& target, const Network& online, double tau);

/// Hard copy of the online parameters into the target.
void hard_update(Network& target, const Network& online);

/// Mean squared error and its gradient 2*(pred-target)/n.
std::pair<double, std::vector<double>> mse_loss(const std::vector<double>& pred,
                                                const std::vector<double>& target);

}  // namespace hrlnav::nn
