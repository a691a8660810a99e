#include "uqbench/network.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "uqbench/numerics.hpp"

namespace uqbench {

namespace {

// out = x * w^T + b, row by row; w rows are contiguous so the inner loop is a
// plain dot product.
void affine_forward(const Matrix& x, const Matrix& w, const Vec& b, Matrix& out) {
    out.rows = x.rows;
    out.cols = w.rows;
    out.data.assign(out.rows * out.cols, 0.0);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* xi = x.data.data() + i * x.cols;
        double* oi = out.data.data() + i * out.cols;
        for (std::size_t j = 0; j < w.rows; ++j) {
            const double* wj = w.data.data() + j * w.cols;
            double acc = b[j];
            for (std::size_t k = 0; k < w.cols; ++k) acc += xi[k] * wj[k];
            oi[j] = acc;
        }
    }
}

// dw += delta^T * a  (delta is n x out, a is n x in, dw is out x in)
void accumulate_weight_grad(const Matrix& delta, const Matrix& a, Matrix& dw) {
    for (std::size_t i = 0; i < delta.rows; ++i) {
        const double* di = delta.data.data() + i * delta.cols;
        const double* ai = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < delta.cols; ++j) {
            double* dwj = dw.data.data() + j * dw.cols;
            const double dij = di[j];
            if (dij == 0.0) continue;
            for (std::size_t k = 0; k < a.cols; ++k) dwj[k] += dij * ai[k];
        }
    }
}

// out = delta * w  (delta is n x out, w is out x in, result n x in)
void backprop_through_weights(const Matrix& delta, const Matrix& w, Matrix& out) {
    out.rows = delta.rows;
    out.cols = w.cols;
    out.data.assign(out.rows * out.cols, 0.0);
    for (std::size_t i = 0; i < delta.rows; ++i) {
        const double* di = delta.data.data() + i * delta.cols;
        double* oi = out.data.data() + i * out.cols;
        for (std::size_t j = 0; j < delta.cols; ++j) {
            const double dij = di[j];
            if (dij == 0.0) continue;
            const double* wj = w.data.data() + j * w.cols;
            for (std::size_t k = 0; k < w.cols; ++k) oi[k] += dij * wj[k];
        }
    }
}

}  // namespace

std::vector<std::size_t> Network::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.push_back(input_dim());
    for (const Layer& l : layers) sizes.push_back(l.weights.rows);
    return sizes;
}

std::size_t Network::parameter_count() const {
    std::size_t n = 0;
    for (const Layer& l : layers) n += l.weights.size() + l.biases.size();
    return n;
}

void Gradients::add(const Gradients& other) {
    for (std::size_t k = 0; k < weights.size(); ++k) {
        for (std::size_t i = 0; i < weights[k].size(); ++i) {
            weights[k].data[i] += other.weights[k].data[i];
        }
        for (std::size_t i = 0; i < biases[k].size(); ++i) {
            biases[k][i] += other.biases[k][i];
        }
    }
}

Network init_network(const std::vector<std::size_t>& layer_sizes, double dropout_rate,
                     std::uint64_t seed) {
    if (layer_sizes.size() < 3) {
        throw std::invalid_argument("init_network: need at least one hidden layer");
    }
    for (std::size_t s : layer_sizes) {
        if (s < 1) throw std::invalid_argument("init_network: layer sizes must be >= 1");
    }
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw std::invalid_argument("init_network: dropout rate must be in [0, 1)");
    }
    Rng rng(seed);
    Network net;
    net.n_classes = layer_sizes.back();
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        const std::size_t fan_in = layer_sizes[k];
        const std::size_t fan_out = layer_sizes[k + 1];
        Layer layer;
        layer.weights = Matrix(fan_out, fan_in);
        const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
        for (double& w : layer.weights.data) w = scale * rng.gaussian();
        layer.biases.assign(fan_out, 0.0);
        const bool hidden = k + 2 < layer_sizes.size();
        layer.dropout_rate = hidden ? dropout_rate : 0.0;
        net.layers.push_back(std::move(layer));
    }
    return net;
}

DropoutMask sample_mask(const Network& net, Rng& rng) {
    DropoutMask mask;
    for (std::size_t k = 0; k + 1 < net.layers.size(); ++k) {
        const double rate = net.layers[k].dropout_rate;
        Vec keep(net.layers[k].weights.rows);
        for (double& m : keep) m = rng.uniform() >= rate ? 1.0 : 0.0;
        mask.keep.push_back(std::move(keep));
        mask.scale.push_back(1.0 / (1.0 - rate));
    }
    return mask;
}

ForwardCache forward_masked(const Network& net, const Matrix& x, const DropoutMask* mask) {
    if (x.cols != net.input_dim()) {
        throw std::invalid_argument("forward: input dimension mismatch");
    }
    if (mask && mask->keep.size() + 1 != net.layers.size()) {
        throw std::invalid_argument("forward: mask does not match network depth");
    }
    ForwardCache cache;
    cache.input = x;
    const Matrix* current = &cache.input;
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        Matrix z;
        affine_forward(*current, net.layers[k].weights, net.layers[k].biases, z);
        const bool last = k + 1 == net.layers.size();
        if (last) {
            cache.pre_act.push_back(std::move(z));
            cache.probs = softmax_rows(cache.pre_act.back());
        } else {
            Matrix h(z.rows, z.cols);
            const Vec* keep = mask ? &mask->keep[k] : nullptr;
            const double scale = mask ? mask->scale[k] : 1.0;
            for (std::size_t i = 0; i < z.rows; ++i) {
                const double* zi = z.data.data() + i * z.cols;
                double* hi = h.data.data() + i * h.cols;
                for (std::size_t j = 0; j < z.cols; ++j) {
                    double v = zi[j] > 0.0 ? zi[j] : 0.0;
                    if (keep) v *= (*keep)[j] * scale;
                    hi[j] = v;
                }
            }
            cache.pre_act.push_back(std::move(z));
            cache.hidden_out.push_back(std::move(h));
            current = &cache.hidden_out.back();
        }
    }
    return cache;
}

ForwardResult forward(const Network& net, const Matrix& x, ForwardMode mode, Rng* rng) {
    ForwardResult result;
    if (mode == ForwardMode::Stochastic) {
        if (!rng) throw std::invalid_argument("forward: stochastic mode needs an rng");
        result.mask = sample_mask(net, *rng);
        result.cache = forward_masked(net, x, &*result.mask);
    } else {
        result.cache = forward_masked(net, x, nullptr);
    }
    result.probs = result.cache.probs;
    return result;
}

Gradients zero_gradients(const Network& net) {
    Gradients g;
    for (const Layer& l : net.layers) {
        g.weights.emplace_back(l.weights.rows, l.weights.cols);
        g.biases.emplace_back(l.biases.size(), 0.0);
    }
    return g;
}

Gradients backward(const Network& net, const DropoutMask* mask, const ForwardCache& cache,
                   const Matrix& dloss_dprobs) {
    if (!dloss_dprobs.same_shape(cache.probs)) {
        throw std::invalid_argument("backward: gradient shape does not match probabilities");
    }
    Gradients grads = zero_gradients(net);

    // Through softmax: dL/dz_j = p_j * (g_j - sum_k g_k p_k).
    const Matrix& probs = cache.probs;
    Matrix delta(probs.rows, probs.cols);
    for (std::size_t i = 0; i < probs.rows; ++i) {
        const double* gi = dloss_dprobs.data.data() + i * probs.cols;
        const double* pi = probs.data.data() + i * probs.cols;
        double dot = 0.0;
        for (std::size_t j = 0; j < probs.cols; ++j) dot += gi[j] * pi[j];
        double* di = delta.data.data() + i * probs.cols;
        for (std::size_t j = 0; j < probs.cols; ++j) di[j] = pi[j] * (gi[j] - dot);
    }

    for (std::size_t k = net.layers.size(); k-- > 0;) {
        const Matrix& layer_input = k == 0 ? cache.input : cache.hidden_out[k - 1];
        accumulate_weight_grad(delta, layer_input, grads.weights[k]);
        for (std::size_t i = 0; i < delta.rows; ++i) {
            const double* di = delta.data.data() + i * delta.cols;
            for (std::size_t j = 0; j < delta.cols; ++j) grads.biases[k][j] += di[j];
        }
        if (k == 0) break;
        Matrix da;
        backprop_through_weights(delta, net.layers[k].weights, da);
        // Through the dropout scale and the ReLU of layer k-1.
        const Matrix& z_prev = cache.pre_act[k - 1];
        const Vec* keep = mask ? &mask->keep[k - 1] : nullptr;
        const double scale = mask ? mask->scale[k - 1] : 1.0;
        for (std::size_t i = 0; i < da.rows; ++i) {
            const double* zi = z_prev.data.data() + i * z_prev.cols;
            double* ai = da.data.data() + i * da.cols;
            for (std::size_t j = 0; j < da.cols; ++j) {
                double v = ai[j];
                if (keep) v *= (*keep)[j] * scale;
                ai[j] = zi[j] > 0.0 ? v : 0.0;
            }
        }
        delta = std::move(da);
    }
    return grads;
}

void sgd_step_inplace(Network& net, const Gradients& grads, double lr) {
    if (lr <= 0.0) throw std::invalid_argument("sgd_step: learning rate must be positive");
    if (grads.weights.size() != net.layers.size()) {
        throw std::invalid_argument("sgd_step: gradient/network layer count mismatch");
    }
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        Layer& layer = net.layers[k];
        if (!grads.weights[k].same_shape(layer.weights) ||
            grads.biases[k].size() != layer.biases.size()) {
            throw std::invalid_argument("sgd_step: gradient shape mismatch");
        }
        for (std::size_t i = 0; i < layer.weights.size(); ++i) {
            layer.weights.data[i] -= lr * grads.weights[k].data[i];
        }
        for (std::size_t i = 0; i < layer.biases.size(); ++i) {
            layer.biases[i] -= lr * grads.biases[k][i];
        }
    }
}

Network sgd_step(const Network& net, const Gradients& grads, double lr) {
    Network updated = net;
    sgd_step_inplace(updated, grads, lr);
    return updated;
}

std::string to_json(const Network& net) {
    nlohmann::json doc;
    doc["layer_sizes"] = net.layer_sizes();
    double rate = 0.0;
    for (const Layer& l : net.layers) rate = std::max(rate, l.dropout_rate);
    doc["dropout_rate"] = rate;
    nlohmann::json weights = nlohmann::json::array();
    nlohmann::json biases = nlohmann::json::array();
    for (const Layer& l : net.layers) {
        weights.push_back(l.weights.data);
        biases.push_back(l.biases);
    }
    doc["weights"] = std::move(weights);
    doc["biases"] = std::move(biases);
    return doc.dump(2);
}

Network network_from_json(const std::string& text) {
    const nlohmann::json doc = nlohmann::json::parse(text);
    const auto sizes = doc.at("layer_sizes").get<std::vector<std::size_t>>();
    const double rate = doc.at("dropout_rate").get<double>();
    Network net = init_network(sizes, rate, 0);
    const auto& weights = doc.at("weights");
    const auto& biases = doc.at("biases");
    if (weights.size() != net.layers.size() || biases.size() != net.layers.size()) {
        throw std::invalid_argument("network_from_json: layer count mismatch");
    }
    for (std::size_t k = 0; k < net.layers.size(); ++k) {
        const auto w = weights[k].get<Vec>();
        const auto b = biases[k].get<Vec>();
        if (w.size() != net.layers[k].weights.size() || b.size() != net.layers[k].biases.size()) {
            throw std::invalid_argument("network_from_json: parameter shape mismatch");
        }
        net.layers[k].weights.data = w;
        net.layers[k].biases = b;
    }
    return net;
}

}  // namespace uqbench
