#pragma once

#include <cstdint>
#include <vector>

namespace catstream {

enum class activation { sigmoid, relu };
enum class loss_kind { mse, bce };

// Fully-connected net: widths input-first, chosen hidden activation, sigmoid
// on the output layer always. Parameters are one flat vector, per layer the
// weight matrix row-major (rows = output neurons) followed by the biases.
struct mlp_spec {
    std::vector<std::size_t> layers;
    activation hidden = activation::sigmoid;
};

std::size_t param_count(const mlp_spec& spec);

// sequential uniform [-0.5, 0.5] draws in flat parameter order
std::vector<double> init_params(const mlp_spec& spec, std::uint64_t seed);

// throws dimension_mismatch_error on wrong input or parameter size
std::vector<double> mlp_forward(const mlp_spec& spec, const std::vector<double>& params,
                                const std::vector<double>& x);

// per-layer activations, input first, output last
std::vector<std::vector<double>> mlp_activations(const mlp_spec& spec,
                                                 const std::vector<double>& params,
                                                 const std::vector<double>& x);

// mse is the mean over outputs; bce the mean binary cross entropy
double loss_value(loss_kind loss, const std::vector<double>& y,
                  const std::vector<double>& target);

struct mlp_gradients {
    std::vector<double> by_param;
    std::vector<double> by_input;
    std::vector<double> output;  // forward pass, reused by callers
};

// backprop of the loss at (x, target) through the net
mlp_gradients mlp_grad(const mlp_spec& spec, loss_kind loss, const std::vector<double>& params,
                       const std::vector<double>& x, const std::vector<double>& target);

}  // namespace catstream
