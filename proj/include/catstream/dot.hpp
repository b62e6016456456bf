#pragma once

#include <string>

#include "catstream/port_graph.hpp"

namespace catstream {

// Graphviz rendering of a port diagram. Output is a pure function of the
// diagram (stable node order, no timestamps), so repeated renders are
// byte-identical. Feedback wires are dashed.
std::string to_dot(const port_diagram& d, const std::string& graph_name = "diagram");

}  // namespace catstream
