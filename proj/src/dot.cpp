#include "catstream/dot.hpp"

namespace catstream {

namespace {

std::string endpoint(const port_ref& p) {
    switch (p.where) {
        case port_ref::end::boundary_in: return "in" + std::to_string(p.index);
        case port_ref::end::boundary_out: return "out" + std::to_string(p.index);
        default: return "n" + std::to_string(p.node);
    }
}

}  // namespace

std::string to_dot(const port_diagram& d, const std::string& graph_name) {
    std::string s = "digraph " + graph_name + " {\n";
    s += "  rankdir=LR;\n  node [fontname=\"Helvetica\"];\n";
    for (std::size_t i = 0; i < d.inputs.size(); ++i)
        s += "  in" + std::to_string(i) + " [shape=plaintext, label=\"" + d.inputs[i].base +
             "\"];\n";
    for (std::size_t i = 0; i < d.outputs.size(); ++i)
        s += "  out" + std::to_string(i) + " [shape=plaintext, label=\"" + d.outputs[i].base +
             "\"];\n";
    for (std::size_t i = 0; i < d.nodes.size(); ++i) {
        const auto& n = d.nodes[i];
        std::string id = "n" + std::to_string(i);
        switch (n.kind) {
            case node_kind::generator:
                s += "  " + id + " [shape=box, label=\"" + n.label + "\"];\n";
                break;
            case node_kind::copier:
                s += "  " + id + " [shape=circle, label=\"copy " + n.label + "\"];\n";
                break;
            case node_kind::discarder:
                s += "  " + id + " [shape=circle, label=\"discard " + n.label + "\"];\n";
                break;
        }
    }
    for (const auto& w : d.wires) {
        s += "  " + endpoint(w.from) + " -> " + endpoint(w.to) + " [label=\"" + w.label + "\"";
        if (w.feedback) s += ", style=dashed";
        s += "];\n";
    }
    s += "}\n";
    return s;
}

}  // namespace catstream
