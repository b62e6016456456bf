#pragma once

#include <cstddef>
#include <vector>

#include "catstream/mlp.hpp"

namespace catstream {

enum class optimizer_kind { sgd, adam };

struct optimizer_spec {
    optimizer_kind kind = optimizer_kind::sgd;
    double lr = 0.5;
    double beta1 = 0.9;  // adam only
    double beta2 = 0.999;
    double eps = 1e-8;
    loss_kind loss = loss_kind::mse;
};

// first and second moment accumulators, zero-initialized to the param size
struct adam_state {
    std::vector<double> m;
    std::vector<double> v;
};

// One parameter update. step_index is 0-based (adam's bias correction uses
// step_index + 1). adam mutates *state; sgd ignores it.
std::vector<double> optimizer_step(const optimizer_spec& opt, const std::vector<double>& params,
                                   const std::vector<double>& grad, std::size_t step_index,
                                   adam_state* state);

}  // namespace catstream
