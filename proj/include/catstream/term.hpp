#pragma once

#include <memory>
#include <string>
#include <vector>

#include "catstream/object.hpp"
#include "catstream/presentation.hpp"

namespace catstream {

enum class term_kind { gen, identity, compose, tensor, symmetry, copy, discard, feedback };

struct term_node;
using term = std::shared_ptr<const term_node>;

// Morphism syntax of the free feedback cartesian category. Nodes are immutable
// and typed at construction; dom/cod are always flattened objects.
struct term_node {
    term_kind kind;
    object_expr dom;
    object_expr cod;

    std::string gen_name;    // gen
    object_expr obj_a;       // identity/copy/discard: the object; symmetry: left; feedback: state
    object_expr obj_b;       // symmetry: right
    term left, right;        // compose (left;right), tensor (left*right)
    term body;               // feedback

    std::string str() const;  // surface-grammar rendering, for diagnostics
};

// constructors; each typechecks and throws on failure
term gen(const presentation& p, const std::string& name);       // unknown_generator_error
term identity(const object_expr& obj);
term symmetry(const object_expr& a, const object_expr& b);      // a x b -> b x a
term copy_of(const object_expr& obj);                           // obj -> obj x obj
term discard_of(const object_expr& obj);                        // obj -> I
term compose(const term& f, const term& g);                     // type_mismatch_error
term tensor(const term& f, const term& g);
// body : A x F(S) -> B x S (the state suffix of the domain may carry the
// delay mark or be plain S; the delay itself is semantic). Result: A -> B.
term feedback(const object_expr& state, const term& body);      // feedback_shape_error

inline std::pair<object_expr, object_expr> infer_type(const term& t) { return {t->dom, t->cod}; }

bool contains_feedback(const term& t);

// The supervised learning agent over a presentation shaped like build_xlearn()
// (object names may differ; generators are matched by shape):
//   fbk_P of: copy the incoming parameters to the model and the optimizer,
//   run the model, copy its prediction and explanation to the boundary,
//   discard the spare explanation, and let the optimizer emit the next
//   parameters. Type: Y* x X -> Y x E.
// Throws shape_error when no suitably-typed generator pair exists.
term abstract_learning_agent(const presentation& p);

// Same wiring, for presentations whose optimizer also consumes the model
// input (nabla : Y* x Y x X x P -> P). Gradient-descent kernels need x, so the
// runnable demos compile this variant; the boundary type is unchanged.
term training_learning_agent(const presentation& p);

}  // namespace catstream
