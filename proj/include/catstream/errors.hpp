#pragma once

#include <stdexcept>
#include <string>

namespace catstream {

// Base for every error this library throws on purpose. Callers that want a
// single catch site can use this; tests usually catch the concrete type.
struct cat_error : std::runtime_error {
    explicit cat_error(const std::string& msg) : std::runtime_error(msg) {}
};

// diagram core
struct type_mismatch_error : cat_error { using cat_error::cat_error; };
struct feedback_shape_error : cat_error { using cat_error::cat_error; };
struct unknown_object_error : cat_error { using cat_error::cat_error; };
struct unknown_generator_error : cat_error { using cat_error::cat_error; };
struct duplicate_generator_error : cat_error { using cat_error::cat_error; };
struct shape_error : cat_error { using cat_error::cat_error; };
struct unsupported_feedback_equality : cat_error { using cat_error::cat_error; };

// stream semantics
struct space_mismatch_error : cat_error { using cat_error::cat_error; };

// translator
struct generator_type_mismatch_error : cat_error { using cat_error::cat_error; };
struct explanation_mode_mismatch_error : cat_error { using cat_error::cat_error; };

// institutions
struct signature_mismatch_error : cat_error { using cat_error::cat_error; };
struct non_injective_morphism_error : cat_error { using cat_error::cat_error; };
struct arity_mismatch_error : cat_error { using cat_error::cat_error; };
struct malformed_sentence_error : cat_error { using cat_error::cat_error; };
struct malformed_model_error : cat_error { using cat_error::cat_error; };
struct not_comparable_error : cat_error { using cat_error::cat_error; };

// agents / taxonomy
struct dimension_mismatch_error : cat_error { using cat_error::cat_error; };
struct unsupported_kind_error : cat_error { using cat_error::cat_error; };
struct ambiguous_wiring_error : cat_error { using cat_error::cat_error; };
struct dataset_format_error : cat_error { using cat_error::cat_error; };
struct spec_error : cat_error { using cat_error::cat_error; };

// surface syntax
struct parse_error : cat_error {
    parse_error(const std::string& msg, int line, int col)
        : cat_error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
          line(line), col(col) {}
    int line;
    int col;
};

// a term that lexes fine but fails to typecheck (composition or feedback
// shape mismatch, unknown generator); split out so a checker can collect
// these per term while syntax errors stay fatal
struct term_typecheck_error : parse_error {
    using parse_error::parse_error;
};

// an explanation was requested from a plain learning agent
struct not_an_explainer_error : cat_error {
    using cat_error::cat_error;
};

// a file could not be opened or written
struct io_error : cat_error {
    using cat_error::cat_error;
};

}  // namespace catstream
