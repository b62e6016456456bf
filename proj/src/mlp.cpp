#include "catstream/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "catstream/errors.hpp"
#include "catstream/rng.hpp"

namespace catstream {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void check_spec(const mlp_spec& spec) {
    if (spec.layers.size() < 2)
        throw dimension_mismatch_error("a net needs an input and an output layer");
    for (std::size_t w : spec.layers)
        if (w == 0) throw dimension_mismatch_error("zero-width layer");
}

}  // namespace

std::size_t param_count(const mlp_spec& spec) {
    check_spec(spec);
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < spec.layers.size(); ++l)
        n += (spec.layers[l] + 1) * spec.layers[l + 1];
    return n;
}

std::vector<double> init_params(const mlp_spec& spec, std::uint64_t seed) {
    rng r(seed);
    std::vector<double> p(param_count(spec));
    for (double& x : p) x = r.uniform(-0.5, 0.5);
    return p;
}

namespace {

// forward pass keeping pre-activations; acts[0] = x
void forward_full(const mlp_spec& spec, const std::vector<double>& params,
                  const std::vector<double>& x, std::vector<std::vector<double>>& acts,
                  std::vector<std::vector<double>>& zs) {
    check_spec(spec);
    if (params.size() != param_count(spec))
        throw dimension_mismatch_error("parameter vector has the wrong size");
    if (x.size() != spec.layers.front())
        throw dimension_mismatch_error("input has the wrong dimension");
    acts.clear();
    zs.clear();
    acts.push_back(x);
    std::size_t off = 0;
    std::size_t depth = spec.layers.size() - 1;
    for (std::size_t l = 0; l < depth; ++l) {
        std::size_t n_in = spec.layers[l], n_out = spec.layers[l + 1];
        const std::vector<double>& a = acts.back();
        std::vector<double> z(n_out), out(n_out);
        for (std::size_t i = 0; i < n_out; ++i) {
            double s = params[off + n_out * n_in + i];
            for (std::size_t j = 0; j < n_in; ++j) s += params[off + i * n_in + j] * a[j];
            z[i] = s;
            bool last = l + 1 == depth;
            if (last) out[i] = sigmoid(s);
            else if (spec.hidden == activation::relu) out[i] = std::max(0.0, s);
            else out[i] = sigmoid(s);
        }
        zs.push_back(std::move(z));
        acts.push_back(std::move(out));
        off += n_out * n_in + n_out;
    }
}

}  // namespace

std::vector<double> mlp_forward(const mlp_spec& spec, const std::vector<double>& params,
                                const std::vector<double>& x) {
    std::vector<std::vector<double>> acts, zs;
    forward_full(spec, params, x, acts, zs);
    return acts.back();
}

std::vector<std::vector<double>> mlp_activations(const mlp_spec& spec,
                                                 const std::vector<double>& params,
                                                 const std::vector<double>& x) {
    std::vector<std::vector<double>> acts, zs;
    forward_full(spec, params, x, acts, zs);
    return acts;
}

double loss_value(loss_kind loss, const std::vector<double>& y,
                  const std::vector<double>& target) {
    if (y.size() != target.size())
        throw dimension_mismatch_error("prediction and target sizes differ");
    double m = static_cast<double>(y.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (loss == loss_kind::mse) {
            double d = y[i] - target[i];
            acc += d * d;
        } else {
            // clamp away from 0/1 so the value stays finite; the gradient
            // below uses the exact sigmoid + cross-entropy form instead
            double p = std::clamp(y[i], 1e-12, 1.0 - 1e-12);
            acc += -(target[i] * std::log(p) + (1.0 - target[i]) * std::log(1.0 - p));
        }
    }
    return acc / m;
}

mlp_gradients mlp_grad(const mlp_spec& spec, loss_kind loss, const std::vector<double>& params,
                       const std::vector<double>& x, const std::vector<double>& target) {
    std::vector<std::vector<double>> acts, zs;
    forward_full(spec, params, x, acts, zs);
    const std::vector<double>& y = acts.back();
    if (target.size() != y.size())
        throw dimension_mismatch_error("target has the wrong dimension");
    double m = static_cast<double>(y.size());

    // delta = dL/dz at the output layer; the sigmoid is already folded in
    std::vector<double> delta(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (loss == loss_kind::mse)
            delta[i] = 2.0 * (y[i] - target[i]) / m * y[i] * (1.0 - y[i]);
        else
            delta[i] = (y[i] - target[i]) / m;
    }

    std::vector<std::size_t> offs;
    std::size_t off = 0;
    std::size_t depth = spec.layers.size() - 1;
    for (std::size_t l = 0; l < depth; ++l) {
        offs.push_back(off);
        off += (spec.layers[l] + 1) * spec.layers[l + 1];
    }

    mlp_gradients g;
    g.by_param.assign(params.size(), 0.0);
    g.output = y;
    for (std::size_t li = depth; li-- > 0;) {
        std::size_t n_in = spec.layers[li], n_out = spec.layers[li + 1];
        const std::vector<double>& a = acts[li];
        std::size_t o = offs[li];
        for (std::size_t i = 0; i < n_out; ++i) {
            for (std::size_t j = 0; j < n_in; ++j) g.by_param[o + i * n_in + j] = delta[i] * a[j];
            g.by_param[o + n_out * n_in + i] = delta[i];
        }
        std::vector<double> nd(n_in);
        for (std::size_t j = 0; j < n_in; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n_out; ++i) s += params[o + i * n_in + j] * delta[i];
            if (li > 0) {
                if (spec.hidden == activation::relu) s *= zs[li - 1][j] > 0.0 ? 1.0 : 0.0;
                else s *= a[j] * (1.0 - a[j]);
            }
            nd[j] = s;
        }
        delta = std::move(nd);
    }
    g.by_input = std::move(delta);
    return g;
}

}  // namespace catstream
