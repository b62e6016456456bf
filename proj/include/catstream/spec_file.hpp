#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catstream/agents.hpp"
#include "catstream/presentation.hpp"
#include "catstream/term.hpp"
#include "catstream/translator.hpp"
#include "catstream/value.hpp"

namespace catstream {

// One [translator] binding. mlp and nas recipes become forward kernels,
// sgd/adam recipes one-update kernels sized against the unique forward
// recipe, and table recipes deterministic lookup-table kernels (enough to
// give purely structural specs runnable semantics). A nas recipe holds the
// early architecture in `net`, the late one in `net2`, and the step at which
// they swap in `switch_step`.
struct generator_recipe {
    enum class backend { mlp, nas, sgd, adam, table };
    backend kind = backend::table;
    mlp_spec net;
    mlp_spec net2;
    optimizer_spec opt;
    std::size_t window = 3;
    std::size_t switch_step = 0;
    std::uint64_t salt = 0;
};

struct explainer_config {
    agent_kind kind = agent_kind::post_hoc;
    explanation_mode mode = explanation_mode::semantic;
    double tau = 0.5;
    std::size_t train_steps = 2000;
    std::string signature_name = "S";
};

// Parsed form of a .spec file. Sections:
//   [objects]     NAME = space          (space syntax below)
//   [generators]  NAME : obj -> obj
//   [terms]       NAME = term           (surface term syntax, one per line)
//   [translator]  NAME = mlp(layers=[2,4,1], act=relu) | sgd(lr=0.5)
//                        | adam(lr=0.01, b1=0.9, b2=0.999, eps=1e-8)
//                        | nas(early=[2,2,1], late=[2,4,1], switch=100, act=relu)
//                        | table(window=3, salt=7)
//   [explainer]   kind/mode/tau/train_steps/signature = ...
//   [dataset]     path = file.csv       (resolved against the spec's directory)
// '#' starts a comment; everything is line-oriented.
//
// Terms that lex fine but fail to typecheck do not abort the parse: each
// failure lands in term_errors (message with line:column) and the term is
// dropped, so a checker can report every bad term in one pass. Syntax errors
// anywhere stay fatal.
struct spec_document {
    presentation pres;
    std::vector<std::pair<std::string, term>> terms;
    std::vector<std::string> term_errors;
    std::map<std::string, value_space> spaces;
    std::map<std::string, generator_recipe> recipes;
    bool has_translator = false;
    std::optional<explainer_config> expl;
    std::string dataset_path;

    const term* find_term(const std::string& name) const;
};

spec_document parse_spec_file(const std::string& text);
spec_document load_spec_file(const std::string& path);

// space ::= part ("x" part)*
// part  ::= "unit" | "I" | R^n | [0,1]^n | enum{a, b, c}
value_space parse_space(const std::string& text);

// Materializes the [translator] section against the declared object spaces.
// Kernels that keep parameters initialize them from `seed` on the first
// step. Explanation mode is none when the explanation object E is trivial or
// absent, otherwise the [explainer] mode (default semantic) over feature
// predicates sized to E. Throws spec_error on missing or ill-typed bindings.
translator build_spec_translator(const spec_document& d, std::uint64_t seed);

// The named term (default "agent" when name is empty) compiled through the
// materialized translator, wrapped as a runnable agent. Supervision is read
// off the term's boundary: a leading nontrivial correction factor. A nas
// recipe marks the agent as evolving-architecture. Throws spec_error when the
// document carries term errors or lacks the term.
concrete_agent spec_agent(const spec_document& d, const std::string& term_name,
                          std::uint64_t seed);

}  // namespace catstream
