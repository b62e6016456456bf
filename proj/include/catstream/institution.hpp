#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catstream/laws.hpp"
#include "catstream/rng.hpp"

namespace catstream {

// Two explanation logics, packaged as institutions so they can be compared
// and mapped into each other: plain propositional logic, and a fragment with
// one unary relevance predicate over named features, interpreted by degree
// models with a threshold.
enum class institution_kind { propositional, unary_relevance };

struct signature {
    institution_kind kind = institution_kind::propositional;
    std::vector<std::string> symbols;  // propositions, or feature constants (order matters)
    std::string predicate;             // unary_relevance only

    bool operator==(const signature&) const = default;
};

signature make_propositional_signature(std::vector<std::string> props);
// requires at least one constant; the single predicate is unary
signature make_relevance_signature(std::string predicate, std::vector<std::string> constants);

enum class sentence_kind { atom, pred_app, neg, conj, disj, impl };

struct sentence_node;
using sentence = std::shared_ptr<const sentence_node>;

struct sentence_node {
    sentence_kind kind;
    std::string name;  // atom: proposition; pred_app: constant
    std::string pred;  // pred_app only
    sentence a, b;
};

sentence atom(const std::string& prop);
sentence pred_app(const std::string& pred, const std::string& constant);
sentence neg(const sentence& s);
sentence conj(const sentence& a, const sentence& b);
sentence disj(const sentence& a, const sentence& b);
sentence impl(const sentence& a, const sentence& b);

bool sentence_equal(const sentence& a, const sentence& b);
// minimal-parenthesis rendering; parse_sentence inverts it
std::string sentence_str(const sentence& s);

// grammar: impl is right-associative, precedence ! > & > | > ->; atoms are
// bare names or pred(name). Validates symbols against the signature.
// Throws malformed_sentence_error.
sentence parse_sentence(const signature& sig, const std::string& text);

// well-formedness of a sentence over a signature (used by translation)
void check_sentence(const signature& sig, const sentence& s);

struct semantic_model {
    institution_kind kind = institution_kind::propositional;
    std::map<std::string, bool> valuation;   // propositional
    std::map<std::string, double> degrees;   // unary_relevance, values in [0,1]
    double tau = 0.5;
};

semantic_model make_propositional_model(const signature& sig, std::map<std::string, bool> val);
semantic_model make_relevance_model(const signature& sig, std::map<std::string, double> degrees,
                                    double tau);

// lines of `name = value` (degrees or true/false), optional `tau = t`;
// throws malformed_model_error
semantic_model parse_model(const signature& sig, const std::string& text);
std::string model_str(const semantic_model& m);

// pred_app holds iff the feature's degree reaches the model threshold;
// connectives are classical
bool satisfies(const signature& sig, const semantic_model& m, const sentence& s);

// injective, kind- and arity-preserving symbol renaming
struct signature_morphism {
    signature from;
    signature to;
    std::map<std::string, std::string> symbol_map;
};

signature_morphism make_signature_morphism(const signature& from, const signature& to,
                                           std::map<std::string, std::string> symbol_map);
signature_morphism compose_morphisms(const signature_morphism& f, const signature_morphism& g);
signature_morphism identity_morphism(const signature& sig);

// the sentence functor: rename symbols along the morphism
sentence translate_sentence(const signature_morphism& rho, const sentence& s);
// the model functor, contravariant: pull a `to`-model back to `from`
semantic_model reduct_model(const signature_morphism& rho, const semantic_model& m);

// random sentence over the signature, depth-bounded
sentence random_sentence(rng& r, const signature& sig, std::size_t depth);
semantic_model random_model(rng& r, const signature& sig);

struct satisfaction_options {
    std::size_t random_instances = 500;
    std::size_t sentence_depth = 3;
    std::uint64_t seed = 0;
    bool parallel = true;
};

// m' |= rho(e)  iff  reduct(m') |= e, checked on random models and sentences
law_report check_satisfaction_random(const signature_morphism& rho,
                                     const satisfaction_options& opt);
// exhaustive over all boolean patterns and all sentences of depth <= 2;
// intended for signatures of at most 3 symbols
law_report check_satisfaction_exhaustive(const signature_morphism& rho);
// Sen respects identity/composition, Mod respects them contravariantly
std::vector<law_report> check_functoriality(const signature_morphism& f,
                                            const signature_morphism& g,
                                            const satisfaction_options& opt);

// all sentences of depth <= 2 over the signature (atoms at depth 0)
std::vector<sentence> enumerate_sentences(const signature& sig);

// Saliency readout: the conjunction of relevance claims for the features
// whose degree reaches tau, in signature order. No feature relevant yields
// the designated tautology over the first symbol.
sentence saliency_sentence(const signature& sig, const std::vector<double>& degrees, double tau);
semantic_model saliency_model(const signature& sig, const std::vector<double>& degrees,
                              double tau);

// The order-respecting dictionary between a propositional signature and a
// relevance signature of the same size: p_i <-> pred(c_i). Sentences map both
// ways exactly; models map by thresholding degrees / planting degrees on
// either side of tau.
struct expressive_equivalence {
    signature prop_sig;
    signature rel_sig;
};

// throws not_comparable_error when the sizes differ or kinds are wrong
expressive_equivalence make_equivalence(const signature& prop_sig, const signature& rel_sig);

sentence to_propositional(const expressive_equivalence& eq, const sentence& s);
sentence to_relevance(const expressive_equivalence& eq, const sentence& s);
semantic_model model_to_propositional(const expressive_equivalence& eq, const semantic_model& m);
semantic_model model_to_relevance(const expressive_equivalence& eq, const semantic_model& m);

}  // namespace catstream
