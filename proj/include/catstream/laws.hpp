#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "catstream/presentation.hpp"
#include "catstream/rng.hpp"
#include "catstream/stream.hpp"
#include "catstream/term.hpp"

namespace catstream {

// -------- random instances --------

// small mixed space: 0..max_factors factors, enums of 2..4 symbols or real
// vectors of dimension 1..3
value_space random_space(rng& r, std::size_t max_factors);

// Deterministic stream morphism whose component at step n is a hash-table
// lookup keyed on the serialized last `window` inputs (plus n and the salt).
// Total, causal, and wildly non-structural, which is what the law checkers
// need from an "arbitrary" morphism.
stream_morphism random_table_kernel(std::uint64_t salt, const space_seq& dom,
                                    const space_seq& cod, std::size_t window,
                                    const std::string& name);

// signature with a few objects of small random shapes and generators with
// random doms/cods over them (every object is used by some generator)
presentation random_presentation(rng& r, std::size_t n_objects, std::size_t n_generators);

// well-typed feedback-free term built layer by layer from `dom`
term random_term_with_dom(rng& r, const presentation& p, const object_expr& dom,
                          std::size_t layers);
term random_term(rng& r, const presentation& p, std::size_t layers);

// -------- law checking --------

struct law_report {
    std::string name;
    std::size_t instances = 0;
    std::size_t failures = 0;
    std::string counterexample;  // first failure, human-readable
    bool passed() const { return failures == 0; }
};

// how a checker closes a loop; swapped out by the fault-injection fixture
using fbk_builder =
    std::function<stream_morphism(const stream_morphism& body, const space_seq& state,
                                  state_mode mode)>;

fbk_builder standard_feedback();
// lags the state wire by one extra step before the body sees it; makes the
// sliding law fail while leaving e.g. tightening intact
fbk_builder corrupted_feedback();

struct law_options {
    std::size_t instances = 200;
    std::size_t horizon = 5;
    std::size_t samples = 3;  // input prefixes per instance
    std::size_t window = 3;
    std::uint64_t seed = 0;
    double tol = 0.0;
    bool parallel = true;
};

// The five feedback axioms (tightening, joining, vanishing, strength,
// sliding), each checked extensionally on `instances` random instances.
std::vector<law_report> check_feedback_axioms(const law_options& opt,
                                              const fbk_builder& fbk = standard_feedback());

// category + comonoid laws on random table-kernel morphisms, checked
// extensionally
std::vector<law_report> check_stream_laws(const law_options& opt);

// the same laws on random feedback-free terms, checked by canonical-form
// equality of their wiring diagrams
std::vector<law_report> check_diagram_laws(const law_options& opt);

std::string format_reports(const std::vector<law_report>& reports);
bool all_passed(const std::vector<law_report>& reports);

}  // namespace catstream
