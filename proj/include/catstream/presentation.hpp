#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "catstream/object.hpp"

namespace catstream {

struct generator_decl {
    std::string name;
    object_expr dom;
    object_expr cod;
};

// A monoidal signature: named base objects plus typed generators. Everything
// downstream (terms, diagrams, translators) is built over one of these.
struct presentation {
    std::set<std::string> objects;
    std::vector<generator_decl> generators;

    const generator_decl* find(const std::string& name) const;
};

// Validates: generator types mention only declared objects (with no delay
// marks), generator names are unique. Throws unknown_object_error /
// duplicate_generator_error.
presentation make_presentation(std::vector<std::string> objects,
                               std::vector<generator_decl> generators);

// The free feedback cartesian signature the learning constructions live over:
// objects X, Y, Y*, P, E; generators
//   eta   : X x P -> Y x E        (the model)
//   nabla : Y* x Y x P -> P       (the optimizer)
presentation build_xlearn();

}  // namespace catstream
