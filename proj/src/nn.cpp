#include "hrlnav/nn.hpp"

#include <cmath>
#include <stdexcept>

#include "hrlnav/errors.hpp"

namespace hrlnav::nn {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Relu: return "relu";
        case Activation::Tanh: return "tanh";
        case Activation::Linear: return "linear";
    }
    return "?";
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "tanh") return Activation::Tanh;
    if (name == "linear") return Activation::Linear;
    throw ConfigError("unknown activation: " + name);
}

size_t Network::param_count() const {
    size_t n = 0;
    for (const auto& l : layers) n += l.w.size() + l.b.size();
    return n;
}

bool Network::same_arch(const Network& other) const {
    if (layers.size() != other.layers.size()) return false;
    for (size_t i = 0; i < layers.size(); ++i) {
        if (layers[i].in != other.layers[i].in || layers[i].out != other.layers[i].out ||
            layers[i].act != other.layers[i].act) {
            return false;
        }
    }
    return true;
}

Network init(const std::vector<int>& sizes, const std::vector<Activation>& activations,
             uint64_t seed) {
    if (sizes.size() < 2) throw std::invalid_argument("init: need at least one layer");
    if (activations.size() != sizes.size() - 1) {
        throw std::invalid_argument("init: one activation per layer required");
    }
    for (int s : sizes) {
        if (s < 1) throw std::invalid_argument("init: layer sizes must be positive");
    }
    Rng rng(seed);
    Network net;
    net.layers.resize(sizes.size() - 1);
    for (size_t i = 0; i + 1 < sizes.size(); ++i) {
        Layer& l = net.layers[i];
        l.in = sizes[i];
        l.out = sizes[i + 1];
        l.act = activations[i];
        const double bound = 1.0 / std::sqrt(static_cast<double>(l.in));
        l.w.resize(static_cast<size_t>(l.in) * l.out);
        l.b.resize(static_cast<size_t>(l.out));
        for (double& x : l.w) x = rng.uniform(-bound, bound);
        for (double& x : l.b) x = rng.uniform(-bound, bound);
    }
    return net;
}

namespace {

void apply_activation(Activation act, std::vector<double>& v) {
    switch (act) {
        case Activation::Relu:
            for (double& x : v) x = x > 0.0 ? x : 0.0;
            break;
        case Activation::Tanh:
            for (double& x : v) x = std::tanh(x);
            break;
        case Activation::Linear: break;
    }
}

std::vector<double> affine(const Layer& l, const std::vector<double>& x) {
    std::vector<double> y(static_cast<size_t>(l.out));
    for (int o = 0; o < l.out; ++o) {
        const double* row = l.w.data() + static_cast<size_t>(o) * l.in;
        double acc = l.b[static_cast<size_t>(o)];
        for (int i = 0; i < l.in; ++i) acc += row[i] * x[static_cast<size_t>(i)];
        y[static_cast<size_t>(o)] = acc;
    }
    return y;
}

}  // namespace

std::vector<double> forward(const Network& net, const std::vector<double>& input) {
    if (static_cast<int>(input.size()) != net.input_size()) {
        throw std::invalid_argument("forward: input length does not match first layer");
    }
    std::vector<double> x = input;
    for (const auto& l : net.layers) {
        x = affine(l, x);
        apply_activation(l.act, x);
    }
    return x;
}

std::vector<double> forward(const Network& net, const std::vector<double>& input,
                            ForwardCache& cache) {
    if (static_cast<int>(input.size()) != net.input_size()) {
        throw std::invalid_argument("forward: input length does not match first layer");
    }
    cache.pre.clear();
    cache.post.clear();
    cache.pre.reserve(net.layers.size());
    cache.post.reserve(net.layers.size() + 1);
    cache.post.push_back(input);
    for (const auto& l : net.layers) {
        std::vector<double> z = affine(l, cache.post.back());
        cache.pre.push_back(z);
        apply_activation(l.act, z);
        cache.post.push_back(std::move(z));
    }
    return cache.post.back();
}

void Gradients::accumulate(const Gradients& other) {
    if (w.size() != other.w.size()) throw std::invalid_argument("gradient shape mismatch");
    for (size_t i = 0; i < w.size(); ++i) {
        if (w[i].size() != other.w[i].size() || b[i].size() != other.b[i].size()) {
            throw std::invalid_argument("gradient shape mismatch");
        }
        for (size_t j = 0; j < w[i].size(); ++j) w[i][j] += other.w[i][j];
        for (size_t j = 0; j < b[i].size(); ++j) b[i][j] += other.b[i][j];
    }
}

void Gradients::scale(double s) {
    for (auto& layer : w) {
        for (double& x : layer) x *= s;
    }
    for (auto& layer : b) {
        for (double& x : layer) x *= s;
    }
}

Gradients zero_gradients(const Network& net) {
    Gradients g;
    g.w.reserve(net.layers.size());
    g.b.reserve(net.layers.size());
    for (const auto& l : net.layers) {
        g.w.emplace_back(l.w.size(), 0.0);
        g.b.emplace_back(l.b.size(), 0.0);
    }
    return g;
}

std::vector<double> backward(const Network& net, const ForwardCache& cache,
                             std::vector<double> out_grad, Gradients& grads) {
    const size_t n_layers = net.layers.size();
    if (cache.pre.size() != n_layers || cache.post.size() != n_layers + 1) {
        throw std::invalid_argument("backward: cache does not match network");
    }
    if (grads.w.size() != n_layers) {
        throw std::invalid_argument("backward: gradient buffers do not match network");
    }
    if (out_grad.size() != static_cast<size_t>(net.output_size())) {
        throw std::invalid_argument("backward: output gradient length mismatch");
    }

    std::vector<double> delta = std::move(out_grad);
    for (size_t li = n_layers; li-- > 0;) {
        const Layer& l = net.layers[li];
        const std::vector<double>& pre = cache.pre[li];
        const std::vector<double>& x = cache.post[li];

        switch (l.act) {
            case Activation::Relu:
                for (int o = 0; o < l.out; ++o) {
                    if (pre[static_cast<size_t>(o)] <= 0.0) delta[static_cast<size_t>(o)] = 0.0;
                }
                break;
            case Activation::Tanh:
                for (int o = 0; o < l.out; ++o) {
                    const double t = std::tanh(pre[static_cast<size_t>(o)]);
                    delta[static_cast<size_t>(o)] *= 1.0 - t * t;
                }
                break;
            case Activation::Linear: break;
        }

        double* gw = grads.w[li].data();
        double* gb = grads.b[li].data();
        for (int o = 0; o < l.out; ++o) {
            const double d = delta[static_cast<size_t>(o)];
            gb[o] += d;
            double* row = gw + static_cast<size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) row[i] += d * x[static_cast<size_t>(i)];
        }

        std::vector<double> prev(static_cast<size_t>(l.in), 0.0);
        for (int o = 0; o < l.out; ++o) {
            const double d = delta[static_cast<size_t>(o)];
            const double* row = l.w.data() + static_cast<size_t>(o) * l.in;
            for (int i = 0; i < l.in; ++i) prev[static_cast<size_t>(i)] += d * row[i];
        }
        delta = std::move(prev);
    }
    return delta;
}

AdamState make_adam(const Network& net, AdamConfig cfg) {
    AdamState st;
    st.cfg = cfg;
    for (const auto& l : net.layers) {
        st.mw.emplace_back(l.w.size(), 0.0);
        st.vw.emplace_back(l.w.size(), 0.0);
        st.mb.emplace_back(l.b.size(), 0.0);
        st.vb.emplace_back(l.b.size(), 0.0);
    }
    return st;
}

namespace {

void adam_update_span(double* p, const double* g, double* m, double* v, size_t n,
                      const AdamConfig& c, double bc1, double bc2) {
    for (size_t i = 0; i < n; ++i) {
        m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
        v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
    }
}

double sum_all(const std::vector<std::vector<double>>& vv) {
    double s = 0.0;
    for (const auto& v : vv) {
        for (double x : v) s += x;
    }
    return s;
}

}  // namespace

void adam_step(Network& net, const Gradients& grads, AdamState& state) {
    if (grads.w.size() != net.layers.size() || state.mw.size() != net.layers.size()) {
        throw std::invalid_argument("adam_step: shape mismatch");
    }
    if (!std::isfinite(sum_all(grads.w)) || !std::isfinite(sum_all(grads.b))) {
        throw NumericError("adam_step: non-finite gradient");
    }
    state.step += 1;
    const AdamConfig& c = state.cfg;
    const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
    double param_sum = 0.0;
    for (size_t li = 0; li < net.layers.size(); ++li) {
        Layer& l = net.layers[li];
        if (grads.w[li].size() != l.w.size() || grads.b[li].size() != l.b.size()) {
            throw std::invalid_argument("adam_step: shape mismatch");
        }
        adam_update_span(l.w.data(), grads.w[li].data(), state.mw[li].data(),
                         state.vw[li].data(), l.w.size(), c, bc1, bc2);
        adam_update_span(l.b.data(), grads.b[li].data(), state.mb[li].data(),
                         state.vb[li].data(), l.b.size(), c, bc1, bc2);
        for (double x : l.w) param_sum += x;
        for (double x : l.b) param_sum += x;
    }
    if (!std::isfinite(param_sum)) throw NumericError("adam_step: parameters became non-finite");
}

void soft_update(Network& target, const Network& online, double tau) {
    if (!target.same_arch(online)) throw std::invalid_argument("soft_update: architecture mismatch");
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("soft_update: tau outside [0, 1]");
    for (size_t li = 0; li < target.layers.size(); ++li) {
        Layer& t = target.layers[li];
        const Layer& o = online.layers[li];
        for (size_t i = 0; i < t.w.size(); ++i) t.w[i] = tau * o.w[i] + (1.0 - tau) * t.w[i];
        for (size_t i = 0; i < t.b.size(); ++i) t.b[i] = tau * o.b[i] + (1.0 - tau) * t.b[i];
    }
}

void hard_update(Network& target, const Network& online) {
    if (!target.same_arch(online)) throw std::invalid_argument("hard_update: architecture mismatch");
    target = online;
}

std::pair<double, std::vector<double>> mse_loss(const std::vector<double>& pred,
                                                const std::vector<double>& target) {
    if (pred.size() != target.size()) throw std::invalid_argument("mse_loss: length mismatch");
    if (pred.empty()) throw std::invalid_argument("mse_loss: empty vectors");
    const double n = static_cast<double>(pred.size());
    double loss = 0.0;
    std::vector<double> grad(pred.size());
    for (size_t i = 0; i < pred.size(); ++i) {
        const double e = pred[i] - target[i];
        loss += e * e;
        grad[i] = 2.0 * e / n;
    }
    return {loss / n, std::move(grad)};
}

}  // namespace hrlnav::nn
