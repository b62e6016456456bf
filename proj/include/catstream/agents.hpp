#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "catstream/institution.hpp"
#include "catstream/mlp.hpp"
#include "catstream/optimizer.hpp"
#include "catstream/stream.hpp"
#include "catstream/term.hpp"
#include "catstream/translator.hpp"

namespace catstream {

// -------------------------------------------------------------- datasets ---

struct dataset {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<std::vector<double>> inputs;
    std::vector<std::vector<double>> targets;

    std::size_t size() const { return inputs.size(); }
};

// Rows are in_dim input columns followed by out_dim target columns. A first
// line whose first field is not numeric is taken as a header and skipped.
// Throws dataset_format_error on a bad cell or row width.
dataset parse_dataset_csv(const std::string& text, std::size_t in_dim, std::size_t out_dim);
dataset load_dataset_csv(const std::string& path, std::size_t in_dim, std::size_t out_dim);

// the four xor rows, in the order every demo and test uses
dataset xor_dataset();

// ---------------------------------------------------------- wiring flags ---

// What an agent's input wires carry relative to some base model, recorded by
// the builders and consumed by classify(). base_frozen stays unset for agents
// that never see the base parameters; classify() only consults it when the
// flags alone cannot separate the frozen and fine-tuning readouts.
struct wiring_descriptor {
    bool sees_base_output = false;
    bool sees_base_input = false;
    bool sees_base_params = false;
    bool params_processed = false;  // params arrive through a gradient, not verbatim
    bool own_training_data = false;
    bool concept_factored = false;  // parameters split at a concept layer
    std::optional<bool> base_frozen;
    bool supervised = false;        // the correction wire is nontrivial
    bool constant_architecture = true;
};

enum class agent_kind {
    plain_learning_agent,
    post_hoc,
    model_specific,
    model_agnostic,
    forward_based,
    backward_based,
    intrinsic,
    concept_bottleneck,
};

std::string kind_name(agent_kind k);
agent_kind kind_from_name(const std::string& name);  // unsupported_kind_error
std::string mode_name(explanation_mode m);

struct taxonomy_label {
    agent_kind kind = agent_kind::plain_learning_agent;
    explanation_mode mode = explanation_mode::none;
    bool supervised = false;
    bool constant_architecture = true;

    bool operator==(const taxonomy_label&) const = default;
};

std::string label_str(const taxonomy_label& l);

// ------------------------------------------------------- concrete agents ---

// A learning agent ready to run: the loop term over its own presentation, the
// translator binding its objects and generators, and the compiled stream.
struct concrete_agent {
    std::string name;
    translator trans;
    term wiring;
    stream_morphism compiled;
    wiring_descriptor descriptor;
    mlp_spec net;         // the primary architecture, where one exists
    optimizer_spec opt;
    double expl_tau = 0.5;
    std::uint64_t seed = 0;
};

// Network forward pass as a loop kernel over (x, params): a tuple short its
// trailing parameter atom (the step-0 state gap) initializes from `seed`.
kernel_fn mlp_forward_kernel(const mlp_spec& net, std::uint64_t seed);

// One optimizer update as a loop kernel over (y*, y, x, params...). The
// parameter vector may arrive split across param_atoms trailing atoms; adam
// replays its moment recursion over the whole history so the kernel stays a
// pure function of it.
kernel_fn mlp_update_kernel(const mlp_spec& net, const optimizer_spec& opt, std::uint64_t seed,
                            std::vector<std::size_t> param_atoms);

// Architecture-schedule kernels: the network is `early` before `switch_step`
// and `late` from it on; the parameter wire is sized for the larger network
// and only its active prefix is live. Both architectures must agree on input
// and output width; the update kernel supports sgd only.
kernel_fn nas_forward_kernel(const mlp_spec& early, const mlp_spec& late,
                             std::size_t switch_step, std::uint64_t seed);
kernel_fn nas_update_kernel(const mlp_spec& early, const mlp_spec& late,
                            std::size_t switch_step, const optimizer_spec& opt,
                            std::uint64_t seed);

// A supervised feedforward learner: eta runs the network, nabla applies one
// optimizer update. Parameters initialize from `seed` on the first step.
concrete_agent build_mlp_agent(const mlp_spec& net, const optimizer_spec& opt,
                               std::uint64_t seed);

// Architecture switches from `early` to `late` at step `switch_step`; the
// parameter wire is sized for the larger network and the active prefix is the
// live weight vector. Only sgd updates are supported. The two architectures
// must agree on input and output width.
concrete_agent build_nas_agent(const mlp_spec& early, const mlp_spec& late,
                               std::size_t switch_step, const optimizer_spec& opt,
                               std::uint64_t seed);

// An Elman recurrence: the loop state is (hidden, weights), eta emits the
// first out_dim coordinates of the next hidden state, nabla rolls the state
// forward without a correction wire. Requires hidden_dim >= out_dim.
concrete_agent build_rnn_agent(std::size_t in_dim, std::size_t hidden_dim,
                               std::size_t out_dim, std::uint64_t seed);

// An explainer of the given kind attached to `base`. The dataset supplies
// training rows for the kinds that learn (intrinsic, concept_bottleneck) and
// lookup targets for the gradient readouts; model_agnostic trains a frozen
// copy of the base internally. Throws unsupported_kind_error for
// plain_learning_agent (build_mlp_agent covers it) and
// dimension_mismatch_error when the base shape does not fit the kind.
concrete_agent build_explainer(agent_kind kind, const mlp_spec& base,
                               const optimizer_spec& base_opt, const dataset& data,
                               std::uint64_t seed,
                               explanation_mode mode = explanation_mode::semantic,
                               double tau = 0.5);

// Reads the taxonomy cell off the wiring flags alone. Throws
// ambiguous_wiring_error when the flags see output+input+params but
// base_frozen is unset, since that cell splits on it.
taxonomy_label classify(const concrete_agent& a);

// -------------------------------------------------------------- training ---

struct training_result {
    std::vector<double> losses;        // one per step, before that step's update
    std::vector<double> final_params;  // empty unless the trace was recorded
    eval_trace trace;
};

// Cycles the dataset through the compiled loop. Supervised agents receive
// (target, input) per step; unsupervised ones just the input. Loss is read
// off the first output atom against the row target.
training_result run_training(const concrete_agent& a, const dataset& data,
                             std::size_t steps, bool record_trace = false);

// The same schedule written as a plain loop over mlp_forward / mlp_grad /
// optimizer_step, for bit-level comparison against the compiled agent.
training_result reference_training_loop(const mlp_spec& net, const optimizer_spec& opt,
                                        const dataset& data, std::size_t steps,
                                        std::uint64_t seed);

// -------------------------------------------------------------- readouts ---

struct explanation {
    std::vector<double> degrees;
    semantic_model model;
    sentence saliency;
};

// Splits an agent output value into (prediction, degrees) and renders the
// degrees as a relevance model and its saliency sentence.
explanation explanation_from_output(const concrete_agent& a, const value& output);

// Assembles the agent's observation of (base, params, x) per its wiring
// flags, runs one step, and reads the explanation off. Only meaningful for
// the readout kinds whose parameter object is trivial.
explanation explain_input(const concrete_agent& a, const mlp_spec& base,
                          const std::vector<double>& base_params,
                          const std::vector<double>& x);

// For the kinds that train with the model (intrinsic, concept-bottleneck):
// runs the training schedule, then queries one extra step at `x` and reads
// the explanation off that step's output.
explanation explain_after_training(const concrete_agent& a, const dataset& data,
                                   std::size_t steps, const std::vector<double>& x);

// ------------------------------------------------------------- witnesses ---

struct witness {
    std::string name;
    concrete_agent agent;
    taxonomy_label expected;
};

// One inhabitant per taxonomy cell: the plain learner with its syntactic and
// semantic explainer variants, the six remaining explainer kinds, the
// architecture-search agent, and the unsupervised recurrence.
std::vector<witness> table_witnesses(const dataset& data, std::uint64_t seed);

}  // namespace catstream
