#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "catstream/errors.hpp"
#include "catstream/mlp.hpp"
#include "catstream/optimizer.hpp"
#include "catstream/rng.hpp"

using namespace catstream;

namespace {

// independent forward pass, written dumbly from the layout contract:
// per layer the row-major weight matrix, then the biases
std::vector<double> forward_by_hand(const mlp_spec& spec, const std::vector<double>& p,
                                    const std::vector<double>& x) {
    std::vector<double> a = x;
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < spec.layers.size(); ++l) {
        std::size_t in = spec.layers[l], out = spec.layers[l + 1];
        std::vector<double> z(out);
        for (std::size_t j = 0; j < out; ++j) {
            double s = p[off + out * in + j];  // bias
            for (std::size_t i = 0; i < in; ++i) s += p[off + j * in + i] * a[i];
            z[j] = s;
        }
        off += (in + 1) * out;
        bool last = l + 2 == spec.layers.size();
        for (double& v : z) {
            if (last || spec.hidden == activation::sigmoid)
                v = 1.0 / (1.0 + std::exp(-v));
            else
                v = v > 0.0 ? v : 0.0;
        }
        a = std::move(z);
    }
    return a;
}

mlp_spec random_spec(rng& r) {
    mlp_spec s;
    std::size_t depth = 2 + r.below(3);
    for (std::size_t i = 0; i <= depth; ++i) s.layers.push_back(1 + r.below(4));
    s.hidden = r.coin() ? activation::sigmoid : activation::relu;
    return s;
}

std::vector<double> random_vec(rng& r, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& x : v) x = r.uniform(lo, hi);
    return v;
}

double splitmix_unit(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_CASE("parameter counts follow the dense-layer formula") {
    CHECK(param_count({{2, 4, 1}}) == 17);
    CHECK(param_count({{2, 3, 1}}) == 13);
    CHECK(param_count({{2, 2, 1}}) == 9);
    CHECK(param_count({{1, 1}}) == 2);

    rng r(1);
    for (int i = 0; i < 50; ++i) {
        mlp_spec s = random_spec(r);
        std::size_t expect = 0;
        for (std::size_t l = 0; l + 1 < s.layers.size(); ++l)
            expect += (s.layers[l] + 1) * s.layers[l + 1];
        CHECK(param_count(s) == expect);
        CHECK(init_params(s, 7).size() == expect);
    }

    CHECK_THROWS_AS(param_count({{3}}), dimension_mismatch_error);
    CHECK_THROWS_AS(param_count({{2, 0, 1}}), dimension_mismatch_error);
}

TEST_CASE("initial parameters are a reproducible uniform stream") {
    mlp_spec s{{2, 4, 1}};
    std::vector<double> a = init_params(s, 0);
    CHECK(a == init_params(s, 0));
    CHECK(a != init_params(s, 1));

    std::uint64_t state = 0;
    for (double x : a) {
        CHECK(x == -0.5 + splitmix_unit(state));
        CHECK(x >= -0.5);
        CHECK(x < 0.5);
    }

    // a prefix-sized net draws the same leading values from the same seed
    std::vector<double> b = init_params({{2, 3, 1}}, 0);
    for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == a[i]);
}

TEST_CASE("forward pass pins on tiny nets") {
    mlp_spec one{{1, 1}};
    CHECK(mlp_forward(one, {1.0, 0.0}, {0.0})[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mlp_forward(one, {2.0, -1.0}, {1.0})[0] ==
          doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));

    // all-zero parameters leave every sigmoid at one half
    mlp_spec s{{2, 4, 2}};
    std::vector<double> y = mlp_forward(s, std::vector<double>(param_count(s), 0.0), {3.0, -2.0});
    REQUIRE(y.size() == 2);
    CHECK(y[0] == 0.5);
    CHECK(y[1] == 0.5);

    // relu hidden layer clips the negative preactivation to zero
    mlp_spec deep{{1, 1, 1}, activation::relu};
    // w1=-1 b1=0 w2=5 b2=0: x=2 -> hidden relu(-2)=0 -> out sigmoid(0)
    CHECK(mlp_forward(deep, {-1.0, 0.0, 5.0, 0.0}, {2.0})[0] == 0.5);
    // x=-3 -> hidden 3 -> out sigmoid(15)
    CHECK(mlp_forward(deep, {-1.0, 0.0, 5.0, 0.0}, {-3.0})[0] ==
          doctest::Approx(1.0 / (1.0 + std::exp(-15.0))).epsilon(1e-15));

    CHECK_THROWS_AS(mlp_forward(one, {1.0, 0.0}, {0.0, 0.0}), dimension_mismatch_error);
    CHECK_THROWS_AS(mlp_forward(one, {1.0}, {0.0}), dimension_mismatch_error);
}

TEST_CASE("forward pass agrees with an independent reimplementation") {
    rng r(2);
    for (int i = 0; i < 150; ++i) {
        mlp_spec s = random_spec(r);
        std::vector<double> p = init_params(s, r.next_u64());
        std::vector<double> x = random_vec(r, s.layers.front(), -2.0, 2.0);
        std::vector<double> got = mlp_forward(s, p, x);
        std::vector<double> want = forward_by_hand(s, p, x);
        REQUIRE(got.size() == want.size());
        for (std::size_t j = 0; j < got.size(); ++j)
            CHECK(std::abs(got[j] - want[j]) <= 1e-12);
    }
}

TEST_CASE("activation traces start at the input and end at the output") {
    rng r(3);
    for (int i = 0; i < 40; ++i) {
        mlp_spec s = random_spec(r);
        std::vector<double> p = init_params(s, r.next_u64());
        std::vector<double> x = random_vec(r, s.layers.front(), -2.0, 2.0);
        auto acts = mlp_activations(s, p, x);
        REQUIRE(acts.size() == s.layers.size());
        for (std::size_t l = 0; l < acts.size(); ++l) CHECK(acts[l].size() == s.layers[l]);
        CHECK(acts.front() == x);
        CHECK(acts.back() == mlp_forward(s, p, x));
    }
}

TEST_CASE("loss values match hand arithmetic") {
    CHECK(loss_value(loss_kind::mse, {0.5}, {0.0}) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(loss_value(loss_kind::mse, {1.0, 0.0}, {0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(loss_value(loss_kind::mse, {0.3, 0.7}, {0.1, 0.2}) ==
          doctest::Approx(0.145).epsilon(1e-12));

    CHECK(loss_value(loss_kind::bce, {0.5}, {1.0}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(loss_value(loss_kind::bce, {0.5, 0.5}, {1.0, 0.0}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(loss_value(loss_kind::bce, {0.9}, {1.0}) ==
          doctest::Approx(-std::log(0.9)).epsilon(1e-12));

    // saturated predictions stay finite
    CHECK(std::isfinite(loss_value(loss_kind::bce, {0.0, 1.0}, {1.0, 0.0})));
    CHECK_THROWS_AS(loss_value(loss_kind::mse, {0.5}, {0.0, 0.0}), dimension_mismatch_error);
}

TEST_CASE("gradients vanish at an attainable minimum and pin on one neuron") {
    mlp_spec one{{1, 1}};
    // target equals the prediction: mse gradient is identically zero
    std::vector<double> p{0.7, -0.2};
    double y = mlp_forward(one, p, {0.3})[0];
    mlp_gradients g0 = mlp_grad(one, loss_kind::mse, p, {0.3}, {y});
    for (double v : g0.by_param) CHECK(std::abs(v) <= 1e-15);
    for (double v : g0.by_input) CHECK(std::abs(v) <= 1e-15);

    // zero weights, x=1, target 1: y=1/2, so
    //   mse: dL/dz = 2(y-t)*y(1-y) = -1/4; bce: dL/dz = y-t = -1/2
    mlp_gradients gm = mlp_grad(one, loss_kind::mse, {0.0, 0.0}, {1.0}, {1.0});
    CHECK(gm.by_param[0] == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(gm.by_param[1] == doctest::Approx(-0.25).epsilon(1e-15));
    CHECK(gm.by_input[0] == doctest::Approx(0.0));
    CHECK(gm.output == std::vector<double>{0.5});

    mlp_gradients gb = mlp_grad(one, loss_kind::bce, {0.0, 0.0}, {1.0}, {1.0});
    CHECK(gb.by_param[0] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(gb.by_param[1] == doctest::Approx(-0.5).epsilon(1e-15));

    // with weight w: dL/dx = dL/dz * w
    mlp_gradients gw = mlp_grad(one, loss_kind::bce, {3.0, 0.0}, {0.0}, {1.0});
    CHECK(gw.by_input[0] == doctest::Approx(3.0 * (0.5 - 1.0)).epsilon(1e-12));
}

TEST_CASE("backprop matches central finite differences across random nets") {
    const double step = 1e-5;
    const double tol = 1e-4;
    auto close = [&](double g, double fd) { return std::abs(g - fd) <= tol * std::max(1.0, std::abs(fd)); };

    rng r(4);
    int configs = 0;
    for (int i = 0; i < 120; ++i) {
        mlp_spec s = random_spec(r);
        loss_kind loss = r.coin() ? loss_kind::mse : loss_kind::bce;
        std::vector<double> p = init_params(s, r.next_u64());
        std::vector<double> x = random_vec(r, s.layers.front(), -1.5, 1.5);
        std::vector<double> t = random_vec(r, s.layers.back(), 0.05, 0.95);

        mlp_gradients g = mlp_grad(s, loss, p, x, t);
        CHECK(g.output == mlp_forward(s, p, x));

        for (std::size_t k = 0; k < p.size(); ++k) {
            std::vector<double> hi = p, lo = p;
            hi[k] += step;
            lo[k] -= step;
            double fd = (loss_value(loss, mlp_forward(s, hi, x), t) -
                         loss_value(loss, mlp_forward(s, lo, x), t)) /
                        (2.0 * step);
            INFO("param ", k, " of net ", i);
            CHECK(close(g.by_param[k], fd));
        }
        for (std::size_t k = 0; k < x.size(); ++k) {
            std::vector<double> hi = x, lo = x;
            hi[k] += step;
            lo[k] -= step;
            double fd = (loss_value(loss, mlp_forward(s, p, hi), t) -
                         loss_value(loss, mlp_forward(s, p, lo), t)) /
                        (2.0 * step);
            INFO("input ", k, " of net ", i);
            CHECK(close(g.by_input[k], fd));
        }
        ++configs;
    }
    CHECK(configs >= 100);
}

TEST_CASE("plain gradient steps move against the gradient") {
    optimizer_spec opt;
    opt.kind = optimizer_kind::sgd;
    opt.lr = 0.1;
    std::vector<double> p = optimizer_step(opt, {1.0}, {2.0}, 0, nullptr);
    CHECK(p == std::vector<double>{1.0 - 0.1 * 2.0});

    rng r(5);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> params = random_vec(r, 1 + r.below(8), -2.0, 2.0);
        std::vector<double> grad = random_vec(r, params.size(), -3.0, 3.0);
        std::vector<double> next = optimizer_step(opt, params, grad, i, nullptr);
        for (std::size_t k = 0; k < params.size(); ++k)
            CHECK(next[k] == params[k] - opt.lr * grad[k]);
        // the step index and any adam accumulator are ignored
        adam_state st{std::vector<double>(params.size(), 9.0),
                      std::vector<double>(params.size(), 9.0)};
        CHECK(optimizer_step(opt, params, grad, 7, &st) == next);
        CHECK(st.m == std::vector<double>(params.size(), 9.0));
    }

    CHECK(optimizer_step(opt, {1.0, 2.0}, {0.0, 0.0}, 0, nullptr) ==
          std::vector<double>{1.0, 2.0});
}

TEST_CASE("adaptive first steps reduce to a signed learning-rate move") {
    optimizer_spec opt;
    opt.kind = optimizer_kind::adam;
    opt.lr = 0.01;

    std::vector<double> params{1.0, -2.0, 0.5};
    std::vector<double> grad{0.3, -4.0, 0.0};
    adam_state st{std::vector<double>(3, 0.0), std::vector<double>(3, 0.0)};
    std::vector<double> next = optimizer_step(opt, params, grad, 0, &st);

    for (std::size_t k = 0; k < 3; ++k) {
        // bias-corrected first step: mhat = g, vhat = g^2
        double want = params[k] - opt.lr * grad[k] / (std::abs(grad[k]) + opt.eps);
        CHECK(next[k] == doctest::Approx(want).epsilon(1e-12));
        CHECK(st.m[k] == doctest::Approx((1.0 - opt.beta1) * grad[k]).epsilon(1e-15));
        CHECK(st.v[k] == doctest::Approx((1.0 - opt.beta2) * grad[k] * grad[k]).epsilon(1e-15));
    }
    CHECK(next[2] == 0.5);  // zero gradient leaves the coordinate alone
}

TEST_CASE("adaptive state threads the moment recursion across steps") {
    optimizer_spec opt;
    opt.kind = optimizer_kind::adam;
    opt.lr = 0.05;

    rng r(6);
    std::vector<double> p = random_vec(r, 5, -1.0, 1.0);
    std::vector<double> g1 = random_vec(r, 5, -2.0, 2.0);
    std::vector<double> g2 = random_vec(r, 5, -2.0, 2.0);

    adam_state st{std::vector<double>(5, 0.0), std::vector<double>(5, 0.0)};
    std::vector<double> p1 = optimizer_step(opt, p, g1, 0, &st);
    std::vector<double> p2 = optimizer_step(opt, p1, g2, 1, &st);

    // oracle: run the textbook recursion by hand
    std::vector<double> m(5, 0.0), v(5, 0.0), q = p;
    for (int t = 0; t < 2; ++t) {
        const std::vector<double>& g = t == 0 ? g1 : g2;
        for (std::size_t k = 0; k < 5; ++k) {
            m[k] = opt.beta1 * m[k] + (1.0 - opt.beta1) * g[k];
            v[k] = opt.beta2 * v[k] + (1.0 - opt.beta2) * g[k] * g[k];
            double mhat = m[k] / (1.0 - std::pow(opt.beta1, t + 1));
            double vhat = v[k] / (1.0 - std::pow(opt.beta2, t + 1));
            q[k] -= opt.lr * mhat / (std::sqrt(vhat) + opt.eps);
        }
    }
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(p2[k] == doctest::Approx(q[k]).epsilon(1e-14));
        CHECK(st.m[k] == doctest::Approx(m[k]).epsilon(1e-14));
        CHECK(st.v[k] == doctest::Approx(v[k]).epsilon(1e-14));
    }

    // restarting the accumulators at a later index changes the move
    adam_state fresh{std::vector<double>(5, 0.0), std::vector<double>(5, 0.0)};
    std::vector<double> other = optimizer_step(opt, p1, g2, 1, &fresh);
    CHECK(other != p2);
}
