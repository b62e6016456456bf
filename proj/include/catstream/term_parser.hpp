#pragma once

#include <string>

#include "catstream/presentation.hpp"
#include "catstream/term.hpp"

namespace catstream {

// Surface syntax for objects:
//   obj  ::= atom ("x" atom)*        the product token is the bare name x
//   atom ::= "I" | NAME | "(" obj ")"
// NAME = [A-Za-z_][A-Za-z0-9_'*]* inside objects (so Y* is a name), which is
// why the product token must be surrounded by whitespace and no object may
// itself be called x. Names must be declared in p.
object_expr parse_object(const std::string& text, const presentation& p);

// Surface syntax for terms, matching term_node::str():
//   term   ::= tensor (";" tensor)*              composition binds loosest
//   tensor ::= factor ("*" factor)*
//   factor ::= NAME | id(obj) | sym(obj, obj) | copy(obj) | discard(obj)
//            | fbk[obj](term) | "(" term ")"
// Generator names follow the term-level NAME rule [A-Za-z_][A-Za-z0-9_']*
// (no stars, since * is the tensor operator). Typechecks while parsing;
// all failures surface as parse_error with a line:col position.
term parse_term(const std::string& text, const presentation& p);

}  // namespace catstream
