#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catstream/value.hpp"

namespace catstream {

// Component family of a stream morphism: called once per step with the full
// input history (history.size() == n+1, history[k] = step-k input). Must be
// total on its declared spaces and causal by construction (it never sees the
// future). Kernels bound inside a feedback loop receive star as the step-0
// state input and are expected to handle it (that is where concrete agents
// do their parameter initialization).
using kernel_fn = std::function<value(std::size_t n, const std::vector<value>& history)>;

class stream_morphism;

stream_morphism make_kernel(space_seq dom, space_seq cod, kernel_fn fn, std::string name = "");
stream_morphism stream_identity(const space_seq& s);
stream_morphism stream_copy(const space_seq& s);
stream_morphism stream_discard(const space_seq& s);
stream_morphism stream_symmetry(const space_seq& a, const space_seq& b);
// (f;g): g's component consumes the history of f's outputs
stream_morphism stream_compose(const stream_morphism& f, const stream_morphism& g);
stream_morphism stream_tensor(const stream_morphism& f, const stream_morphism& g);

enum class state_mode {
    plain,    // body declared with the state at its plain per-step space
    delayed,  // body declared against the delayed state (singleton at step 0)
};

// Feedback over `state`: body : X x F(S) -> Y x S becomes X -> Y. The state
// output at step n is fed back as the state input of step n+1; step 0 gets
// star. `mode` says how the body's domain spells the state suffix (compiled
// term bodies use the plain spelling, hand-built axiom instances the delayed
// one); evaluation is identical either way.
stream_morphism stream_feedback(const stream_morphism& body, const space_seq& state,
                                state_mode mode = state_mode::plain);

// The delay endofunctor on morphisms: output at step 0 is star, at n+1 the
// step-n output of g on the shifted history.
stream_morphism delay_morphism(const stream_morphism& g);

struct stream_node;

class stream_morphism {
public:
    stream_morphism() = default;

    const space_seq& dom() const;
    const space_seq& cod() const;
    bool valid() const { return static_cast<bool>(node_); }

private:
    explicit stream_morphism(std::shared_ptr<const stream_node> n) : node_(std::move(n)) {}
    std::shared_ptr<const stream_node> node_;

    friend stream_morphism make_kernel(space_seq, space_seq, kernel_fn, std::string);
    friend stream_morphism stream_compose(const stream_morphism&, const stream_morphism&);
    friend stream_morphism stream_tensor(const stream_morphism&, const stream_morphism&);
    friend stream_morphism stream_feedback(const stream_morphism&, const space_seq&, state_mode);
    friend class evaluator;
};

struct eval_trace {
    std::vector<value> inputs;
    std::vector<value> outputs;
    // one row per feedback node (preorder over the morphism tree), one entry
    // per step: the state value the loop produced at that step
    std::vector<std::vector<value>> feedback_states;
};

// Incremental interpreter. Holds all per-run state (kernel input histories,
// feedback registers), so morphisms stay immutable and runs are independent.
class evaluator {
public:
    // check_membership guards the outer boundary only; internal replays (the
    // delay functor, fault-injection fixtures) turn it off because loop wires
    // legitimately carry star where a space expects data
    explicit evaluator(const stream_morphism& m, bool record_trace = false,
                       bool check_membership = true);
    ~evaluator();
    evaluator(evaluator&&) noexcept;
    evaluator& operator=(evaluator&&) noexcept;

    // n-th call computes output step n; checks membership of x in dom().at(n)
    value step(const value& x);
    const eval_trace& trace() const { return trace_; }

private:
    struct node_state;
    stream_morphism m_;
    std::unique_ptr<node_state> root_;
    std::size_t n_ = 0;
    bool record_;
    bool check_;
    eval_trace trace_;
};

// Runs the morphism over a full input prefix and returns the outputs.
// Throws space_mismatch_error if some input is not in the declared space.
std::vector<value> prefix_evaluate(const stream_morphism& f, const std::vector<value>& inputs);
eval_trace prefix_trace(const stream_morphism& f, const std::vector<value>& inputs);

struct stream_mismatch {
    std::size_t step;
    std::vector<value> inputs;
    value lhs;
    value rhs;
};

// Sampled extensional comparison on a finite horizon: enum atoms must match
// exactly, real atoms within tol. Throws space_mismatch_error when the two
// morphisms do not even have the same boundary spaces.
std::optional<stream_mismatch> find_mismatch(const stream_morphism& f, const stream_morphism& g,
                                             std::size_t horizon, std::size_t samples,
                                             std::uint64_t seed, double tol);

bool extensional_equal(const stream_morphism& f, const stream_morphism& g, std::size_t horizon,
                       std::size_t samples, std::uint64_t seed, double tol);

}  // namespace catstream
