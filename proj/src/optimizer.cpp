#include "catstream/optimizer.hpp"

#include <cmath>

#include "catstream/errors.hpp"

namespace catstream {

std::vector<double> optimizer_step(const optimizer_spec& opt, const std::vector<double>& params,
                                   const std::vector<double>& grad, std::size_t step_index,
                                   adam_state* state) {
    if (grad.size() != params.size())
        throw dimension_mismatch_error("gradient and parameter sizes differ");
    std::vector<double> out(params.size());
    if (opt.kind == optimizer_kind::sgd) {
        for (std::size_t k = 0; k < params.size(); ++k) out[k] = params[k] - opt.lr * grad[k];
        return out;
    }
    if (!state) throw dimension_mismatch_error("adam needs moment state");
    if (state->m.empty()) {
        state->m.assign(params.size(), 0.0);
        state->v.assign(params.size(), 0.0);
    }
    if (state->m.size() != params.size())
        throw dimension_mismatch_error("adam state has the wrong size");
    double t = static_cast<double>(step_index + 1);
    double c1 = 1.0 - std::pow(opt.beta1, t);
    double c2 = 1.0 - std::pow(opt.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k) {
        state->m[k] = opt.beta1 * state->m[k] + (1.0 - opt.beta1) * grad[k];
        state->v[k] = opt.beta2 * state->v[k] + (1.0 - opt.beta2) * grad[k] * grad[k];
        double mh = state->m[k] / c1;
        double vh = state->v[k] / c2;
        out[k] = params[k] - opt.lr * mh / (std::sqrt(vh) + opt.eps);
    }
    return out;
}

}  // namespace catstream
