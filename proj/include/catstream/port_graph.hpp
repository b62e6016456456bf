#pragma once

#include <string>
#include <vector>

#include "catstream/object.hpp"
#include "catstream/term.hpp"

namespace catstream {

enum class node_kind { generator, copier, discarder };

struct diagram_node {
    node_kind kind;
    std::string label;  // generator name; for copier/discarder the factor carried
    int n_in = 0;
    int n_out = 0;
};

// One endpoint of a wire. Sources are boundary inputs or node outputs; sinks
// are boundary outputs or node inputs.
struct port_ref {
    enum class end { boundary_in, boundary_out, node_in, node_out };
    end where;
    int node = -1;
    int index = 0;

    bool operator==(const port_ref&) const = default;
    std::string str() const;
};

struct wire {
    port_ref from;
    port_ref to;
    bool feedback = false;
    std::string label;  // factor carried
};

// String-diagram IR. Invariants: every node port has exactly one incident
// wire; boundary ports have at most one; with feedback wires removed the
// graph is acyclic. `canonical` marks diagrams produced by the normal-form
// path (feedback-free terms only), for which serialize() is a complete
// equality invariant.
struct port_diagram {
    std::vector<diagram_node> nodes;
    std::vector<wire> wires;
    std::vector<factor> inputs;
    std::vector<factor> outputs;
    bool canonical = false;

    bool has_feedback() const;
    std::string serialize() const;
};

// Feedback-free terms normalize to the canonical maximally-shared graph:
// symmetries are absorbed into the wiring, copies/discards pushed to the
// boundary (copy naturality merges repeated applications, discard naturality
// drops dead ones), unit wires erased. Terms containing feedback are laid out
// structurally instead, with the loop inlined as marked feedback wires.
port_diagram normalize(const term& t);

// Rebuilds the canonical form from an existing feedback-free diagram; the
// idempotence half of the normalize contract. Throws
// unsupported_feedback_equality on diagrams with feedback wires.
port_diagram renormalize(const port_diagram& d);

// Equality modulo the cartesian axioms, decided on canonical forms with
// boundary ports pinned. Throws unsupported_feedback_equality when either
// diagram contains feedback wires (compare those extensionally instead).
bool diagrams_equal(const port_diagram& a, const port_diagram& b);

}  // namespace catstream
