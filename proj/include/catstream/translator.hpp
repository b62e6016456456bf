#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catstream/institution.hpp"
#include "catstream/laws.hpp"
#include "catstream/presentation.hpp"
#include "catstream/stream.hpp"
#include "catstream/term.hpp"

namespace catstream {

// What the explanation wire means. none: the agent explains nothing (its
// explanation object is trivial). syntactic: readouts are sentences over the
// attached signature. semantic: readouts are degree models over it.
enum class explanation_mode { none, syntactic, semantic };

// A structure-preserving assignment of per-step spaces to objects and stream
// morphisms to generators; translate_term() extends it to all terms.
struct translator {
    presentation source;
    std::map<std::string, space_seq> objects;
    std::map<std::string, stream_morphism> generators;
    explanation_mode mode = explanation_mode::none;
    std::string explanation_object;           // name of the object carrying explanations
    std::optional<signature> expl_signature;  // present unless mode == none
};

// Validates the assignment: every declared object and generator is bound,
// generator boundaries match their declared types pointwise, and the
// explanation mode matches the explanation object (none exactly when the
// object's space is the singleton; otherwise a signature must be attached).
// Throws unknown_object_error, unknown_generator_error,
// generator_type_mismatch_error, explanation_mode_mismatch_error.
translator make_translator(presentation source, std::map<std::string, space_seq> objects,
                           std::map<std::string, stream_morphism> generators,
                           explanation_mode mode = explanation_mode::none,
                           std::string explanation_object = {},
                           std::optional<signature> expl_signature = {});

// delay marks on factors become the delay on space sequences
space_seq translate_object(const translator& t, const object_expr& obj);

// structural recursion over the term; feedback closes the loop over the
// translated state with the plain-state spelling
stream_morphism translate_term(const translator& t, const term& m);

// every object gets a small random space, every generator a deterministic
// lookup-table kernel of the right boundary
translator random_translator(rng& r, const presentation& p, std::size_t window);

// identity/compose/tensor/structure/feedback preservation on random terms
// over t's signature, checked extensionally
std::vector<law_report> check_functor_laws(const translator& t, const law_options& opt);

// the compiled learning-agent term against the same loop wired directly from
// stream combinators, for a translator over the shape of build_xlearn()
law_report check_agent_translation(const translator& t, const law_options& opt);

}  // namespace catstream
