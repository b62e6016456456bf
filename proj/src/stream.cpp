#include "catstream/stream.hpp"

#include <algorithm>
#include <utility>

#include "catstream/errors.hpp"

namespace catstream {

namespace {

// construction-time shape checks probe this many leading steps; boundary
// membership is still checked per step during evaluation
constexpr std::size_t k_probe_horizon = 8;

bool space_ends_with(const value_space& whole, const value_space& suffix) {
    const auto& w = whole.factors();
    const auto& s = suffix.factors();
    if (s.size() > w.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(w[w.size() - s.size() + i] == s[i])) return false;
    }
    return true;
}

}  // namespace

struct stream_node {
    enum class kind { kernel, compose, tensor, feedback };
    kind k;
    space_seq dom;
    space_seq cod;

    // kernel
    kernel_fn fn;
    std::string name;

    // compose / tensor
    std::shared_ptr<const stream_node> a;
    std::shared_ptr<const stream_node> b;
    space_seq a_dom;  // tensor input split point

    // feedback
    std::shared_ptr<const stream_node> body;
    space_seq state;
};

const space_seq& stream_morphism::dom() const { return node_->dom; }
const space_seq& stream_morphism::cod() const { return node_->cod; }

stream_morphism make_kernel(space_seq dom, space_seq cod, kernel_fn fn, std::string name) {
    auto n = std::make_shared<stream_node>();
    n->k = stream_node::kind::kernel;
    n->dom = std::move(dom);
    n->cod = std::move(cod);
    n->fn = std::move(fn);
    n->name = std::move(name);
    return stream_morphism(std::move(n));
}

stream_morphism stream_identity(const space_seq& s) {
    return make_kernel(s, s, [](std::size_t, const std::vector<value>& h) { return h.back(); },
                       "id");
}

stream_morphism stream_copy(const space_seq& s) {
    return make_kernel(s, space_seq::product(s, s),
                       [](std::size_t, const std::vector<value>& h) {
                           return value::concat(h.back(), h.back());
                       },
                       "copy");
}

stream_morphism stream_discard(const space_seq& s) {
    return make_kernel(s, space_seq::constant(value_space::singleton()),
                       [](std::size_t, const std::vector<value>&) { return value::star(); },
                       "discard");
}

stream_morphism stream_symmetry(const space_seq& a, const space_seq& b) {
    space_seq left = a;
    return make_kernel(space_seq::product(a, b), space_seq::product(b, a),
                       [left](std::size_t n, const std::vector<value>& h) {
                           const value& x = h.back();
                           std::size_t na = left.at(n).size();
                           value xa = x.slice(0, na);
                           value xb = x.slice(na, x.size() - na);
                           return value::concat(xb, xa);
                       },
                       "sym");
}

stream_morphism stream_compose(const stream_morphism& f, const stream_morphism& g) {
    std::size_t probe =
        (f.cod().is_constant() && g.dom().is_constant()) ? 0 : k_probe_horizon;
    for (std::size_t n = 0; n <= probe; ++n) {
        if (!(f.cod().at(n) == g.dom().at(n))) {
            throw space_mismatch_error("compose: middle spaces differ at step " +
                                       std::to_string(n) + ": " + f.cod().at(n).str() +
                                       " vs " + g.dom().at(n).str());
        }
    }
    auto n = std::make_shared<stream_node>();
    n->k = stream_node::kind::compose;
    n->dom = f.dom();
    n->cod = g.cod();
    n->a = f.node_;
    n->b = g.node_;
    return stream_morphism(std::move(n));
}

stream_morphism stream_tensor(const stream_morphism& f, const stream_morphism& g) {
    auto n = std::make_shared<stream_node>();
    n->k = stream_node::kind::tensor;
    n->dom = space_seq::product(f.dom(), g.dom());
    n->cod = space_seq::product(f.cod(), g.cod());
    n->a = f.node_;
    n->b = g.node_;
    n->a_dom = f.dom();
    return stream_morphism(std::move(n));
}

stream_morphism stream_feedback(const stream_morphism& body, const space_seq& state,
                                state_mode mode) {
    space_seq fstate = space_seq::delay(state);
    for (std::size_t n = 0; n <= k_probe_horizon; ++n) {
        const value_space in_suffix = (mode == state_mode::plain) ? state.at(n) : fstate.at(n);
        if (!space_ends_with(body.dom().at(n), in_suffix)) {
            throw feedback_shape_error("feedback: body input at step " + std::to_string(n) +
                                       " (" + body.dom().at(n).str() +
                                       ") does not end with the state space " +
                                       in_suffix.str());
        }
        if (!space_ends_with(body.cod().at(n), state.at(n))) {
            throw feedback_shape_error("feedback: body output at step " + std::to_string(n) +
                                       " (" + body.cod().at(n).str() +
                                       ") does not end with the state space " +
                                       state.at(n).str());
        }
    }

    space_seq bdom = body.dom();
    space_seq bcod = body.cod();
    space_seq st = state;
    space_seq dom = space_seq::varying([bdom, st, fstate, mode](std::size_t n) {
        std::size_t k =
            (mode == state_mode::plain) ? st.at(n).size() : fstate.at(n).size();
        return drop_space_suffix(bdom.at(n), k);
    });
    space_seq cod = space_seq::varying(
        [bcod, st](std::size_t n) { return drop_space_suffix(bcod.at(n), st.at(n).size()); });

    auto n = std::make_shared<stream_node>();
    n->k = stream_node::kind::feedback;
    n->dom = std::move(dom);
    n->cod = std::move(cod);
    n->body = body.node_;
    n->state = state;
    return stream_morphism(std::move(n));
}

// -------- evaluator --------

struct evaluator::node_state {
    const stream_node* node;
    std::size_t n = 0;

    std::vector<value> hist;  // kernel input history

    std::unique_ptr<node_state> a;
    std::unique_ptr<node_state> b;

    std::unique_ptr<node_state> body;
    value last_state;
    std::size_t trace_row = 0;  // index into eval_trace::feedback_states

    static std::unique_ptr<node_state> build(const stream_node* nd, std::size_t& fbk_count) {
        auto s = std::make_unique<node_state>();
        s->node = nd;
        switch (nd->k) {
            case stream_node::kind::kernel:
                break;
            case stream_node::kind::compose:
            case stream_node::kind::tensor:
                s->a = build(nd->a.get(), fbk_count);
                s->b = build(nd->b.get(), fbk_count);
                break;
            case stream_node::kind::feedback:
                s->trace_row = fbk_count++;
                s->body = build(nd->body.get(), fbk_count);
                break;
        }
        return s;
    }

    value step(const value& x, eval_trace* trace) {
        std::size_t k = n++;
        switch (node->k) {
            case stream_node::kind::kernel:
                hist.push_back(x);
                return node->fn(k, hist);
            case stream_node::kind::compose:
                return b->step(a->step(x, trace), trace);
            case stream_node::kind::tensor: {
                std::size_t na = std::min(node->a_dom.at(k).size(), x.size());
                value ya = a->step(x.slice(0, na), trace);
                value yb = b->step(x.slice(na, x.size() - na), trace);
                return value::concat(ya, yb);
            }
            case stream_node::kind::feedback: {
                // step 0 sees star; afterwards the previous state rides in on
                // the trailing wires
                value in = (k == 0) ? x : value::concat(x, last_state);
                value out = body->step(in, trace);
                // a degenerate loop body can emit a short tuple at step 0;
                // the state register then simply stays star
                std::size_t ns = std::min(node->state.at(k).size(), out.size());
                value y = out.slice(0, out.size() - ns);
                last_state = out.slice(out.size() - ns, ns);
                if (trace) trace->feedback_states[trace_row].push_back(last_state);
                return y;
            }
        }
        return value::star();
    }
};

evaluator::evaluator(const stream_morphism& m, bool record_trace, bool check_membership)
    : m_(m), record_(record_trace), check_(check_membership) {
    std::size_t fbk_count = 0;
    root_ = node_state::build(m.node_.get(), fbk_count);
    trace_.feedback_states.resize(fbk_count);
}

evaluator::~evaluator() = default;
evaluator::evaluator(evaluator&&) noexcept = default;
evaluator& evaluator::operator=(evaluator&&) noexcept = default;

value evaluator::step(const value& x) {
    std::size_t k = n_++;
    if (check_ && !member(x, m_.dom().at(k))) {
        throw space_mismatch_error("input at step " + std::to_string(k) + " (" + x.str() +
                                   ") is not in " + m_.dom().at(k).str());
    }
    value y = root_->step(x, record_ ? &trace_ : nullptr);
    if (record_) {
        trace_.inputs.push_back(x);
        trace_.outputs.push_back(y);
    }
    return y;
}

std::vector<value> prefix_evaluate(const stream_morphism& f, const std::vector<value>& inputs) {
    evaluator ev(f);
    std::vector<value> out;
    out.reserve(inputs.size());
    for (const value& x : inputs) out.push_back(ev.step(x));
    return out;
}

eval_trace prefix_trace(const stream_morphism& f, const std::vector<value>& inputs) {
    evaluator ev(f, true);
    for (const value& x : inputs) ev.step(x);
    return ev.trace();
}

stream_morphism delay_morphism(const stream_morphism& g) {
    stream_morphism inner = g;
    // re-runs the shifted history through a fresh interpreter each step;
    // quadratic, fine at axiom-checking horizons
    kernel_fn fn = [inner](std::size_t n, const std::vector<value>& h) {
        if (n == 0) return value::star();
        evaluator ev(inner, false, false);
        value y;
        for (std::size_t k = 1; k <= n; ++k) y = ev.step(h[k]);
        return y;
    };
    return make_kernel(space_seq::delay(g.dom()), space_seq::delay(g.cod()), std::move(fn),
                       "delay");
}

std::optional<stream_mismatch> find_mismatch(const stream_morphism& f, const stream_morphism& g,
                                             std::size_t horizon, std::size_t samples,
                                             std::uint64_t seed, double tol) {
    if (!spaces_agree(f.dom(), g.dom(), horizon) || !spaces_agree(f.cod(), g.cod(), horizon)) {
        throw space_mismatch_error("extensional comparison of morphisms with different boundaries");
    }
    rng r(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        std::vector<value> inputs;
        inputs.reserve(horizon + 1);
        for (std::size_t n = 0; n <= horizon; ++n) inputs.push_back(sample_value(r, f.dom().at(n)));
        evaluator ef(f), eg(g);
        for (std::size_t n = 0; n <= horizon; ++n) {
            value ya = ef.step(inputs[n]);
            value yb = eg.step(inputs[n]);
            if (!values_equal(ya, yb, tol)) {
                return stream_mismatch{
                    n, std::vector<value>(inputs.begin(), inputs.begin() + n + 1), ya, yb};
            }
        }
    }
    return std::nullopt;
}

bool extensional_equal(const stream_morphism& f, const stream_morphism& g, std::size_t horizon,
                       std::size_t samples, std::uint64_t seed, double tol) {
    return !find_mismatch(f, g, horizon, samples, seed, tol).has_value();
}

}  // namespace catstream
