#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uqbench/matrix.hpp"
#include "uqbench/rng.hpp"

namespace uqbench {

/// One fully connected layer. `weights` is out x in, one bias per output unit.
/// `dropout_rate` applies to this layer's post-activation output (hidden
/// layers only; the final layer always carries rate 0).
struct Layer {
    Matrix weights;
    Vec biases;
    double dropout_rate = 0.0;
};

struct Network {
    std::vector<Layer> layers;
    std::size_t n_classes = 0;

    std::size_t input_dim() const { return layers.front().weights.cols; }
    std::vector<std::size_t> layer_sizes() const;
    std::size_t parameter_count() const;
};

/// A sampled thinned network: one binary keep vector per hidden layer,
/// shared by every sample of the batch in one forward pass, plus the
/// inverted-dropout scale 1/(1-rate) applied to kept units.
struct DropoutMask {
    std::vector<Vec> keep;
    std::vector<double> scale;
};

/// Loss gradients, shaped exactly like the owning Network's parameters.
struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vec> biases;

    void add(const Gradients& other);
};

enum class ForwardMode { Deterministic, Stochastic };

/// Everything backward() needs from the matching forward call.
struct ForwardCache {
    Matrix input;
    std::vector<Matrix> pre_act;     // z_k per layer
    std::vector<Matrix> hidden_out;  // masked activation fed to layer k+1
    Matrix probs;
};

struct ForwardResult {
    Matrix probs;
    std::optional<DropoutMask> mask;
    ForwardCache cache;
};

/// He-scaled zero-mean weights (std sqrt(2/fan_in)), zero biases. `layer_sizes`
/// runs input -> hidden... -> n_classes; `dropout_rate` applies to every
/// hidden layer. Deterministic given seed.
Network init_network(const std::vector<std::size_t>& layer_sizes, double dropout_rate,
                     std::uint64_t seed);

/// Draw one keep vector per hidden layer at that layer's dropout rate.
DropoutMask sample_mask(const Network& net, Rng& rng);

/// Forward pass with an explicit mask (nullptr = deterministic). Inverted
/// dropout means the deterministic path needs no rescaling.
ForwardCache forward_masked(const Network& net, const Matrix& x, const DropoutMask* mask);

/// Spec-facing forward: Stochastic samples a fresh mask from `rng`,
/// Deterministic ignores it.
ForwardResult forward(const Network& net, const Matrix& x, ForwardMode mode, Rng* rng);

/// Exact gradients of the scalar loss w.r.t. every weight and bias, given
/// dLoss/dProbs for the batch. The mask (if any) is treated as a constant;
/// it must be the one used in the matching forward call.
Gradients backward(const Network& net, const DropoutMask* mask, const ForwardCache& cache,
                   const Matrix& dloss_dprobs);

Gradients zero_gradients(const Network& net);

/// Decrement every parameter by lr * gradient.
void sgd_step_inplace(Network& net, const Gradients& grads, double lr);
Network sgd_step(const Network& net, const Gradients& grads, double lr);

/// Flat JSON document {layer_sizes, dropout_rate, weights, biases} with
/// row-major weight arrays; the format the CLI train/evaluate commands speak.
std::string to_json(const Network& net);
Network network_from_json(const std::string& text);

}  // namespace uqbench
