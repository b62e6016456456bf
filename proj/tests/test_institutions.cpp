#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "catstream/errors.hpp"
#include "catstream/institution.hpp"
#include "catstream/rng.hpp"

using namespace catstream;

namespace {

signature props4() { return make_propositional_signature({"p1", "p2", "p3", "p4"}); }
signature props6() { return make_propositional_signature({"q1", "q2", "q3", "q4", "q5", "q6"}); }

signature pixels(std::size_t n, const std::string& pred = "S") {
    std::vector<std::string> cs;
    for (std::size_t i = 1; i <= n; ++i) cs.push_back("p" + std::to_string(i));
    return make_relevance_signature(pred, cs);
}

signature features(std::size_t n, const std::string& pred = "R") {
    std::vector<std::string> cs;
    for (std::size_t i = 1; i <= n; ++i) cs.push_back("f" + std::to_string(i));
    return make_relevance_signature(pred, cs);
}

signature_morphism shift_into(const signature& from, const signature& to) {
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < from.symbols.size(); ++i)
        m[from.symbols[i]] = to.symbols[i + 1];
    return make_signature_morphism(from, to, std::move(m));
}

// every boolean valuation over the signature, as models
std::vector<semantic_model> all_models(const signature& sig) {
    std::vector<semantic_model> out;
    const std::size_t n = sig.symbols.size();
    for (std::size_t bits = 0; bits < (1ull << n); ++bits) {
        std::map<std::string, bool> val;
        for (std::size_t i = 0; i < n; ++i) val[sig.symbols[i]] = (bits >> i) & 1;
        out.push_back(make_propositional_model(sig, std::move(val)));
    }
    return out;
}

}  // namespace

TEST_CASE("propositional satisfaction is classical") {
    signature sig = make_propositional_signature({"x_flies", "x_animal", "x_plane"});
    semantic_model m = make_propositional_model(
        sig, {{"x_flies", true}, {"x_animal", false}, {"x_plane", true}});

    CHECK(satisfies(sig, m, atom("x_flies")));
    CHECK_FALSE(satisfies(sig, m, atom("x_animal")));
    sentence rule = impl(conj(atom("x_flies"), neg(atom("x_animal"))), atom("x_plane"));
    CHECK(satisfies(sig, m, rule));

    semantic_model grounded = make_propositional_model(
        sig, {{"x_flies", true}, {"x_animal", false}, {"x_plane", false}});
    CHECK_FALSE(satisfies(sig, grounded, rule));
}

TEST_CASE("relevance claims hold exactly at the threshold and above") {
    signature sig = pixels(4);
    semantic_model m = make_relevance_model(
        sig, {{"p1", 0.9}, {"p2", 0.5}, {"p3", 0.7}, {"p4", 0.2}}, 0.5);
    CHECK(satisfies(sig, m, pred_app("S", "p3")));
    CHECK_FALSE(satisfies(sig, m, pred_app("S", "p4")));
    CHECK(satisfies(sig, m, pred_app("S", "p2")));  // degree equal to tau counts
    CHECK(satisfies(sig, m, disj(pred_app("S", "p4"), pred_app("S", "p1"))));
}

TEST_CASE("model constructors demand totality and sane degrees") {
    signature sig = pixels(2);
    CHECK_THROWS_AS(make_relevance_model(sig, {{"p1", 0.5}}, 0.5), malformed_model_error);
    CHECK_THROWS_AS(make_relevance_model(sig, {{"p1", 0.5}, {"p2", 1.5}}, 0.5),
                    malformed_model_error);
    signature ps = make_propositional_signature({"a", "b"});
    CHECK_THROWS_AS(make_propositional_model(ps, {{"a", true}}), malformed_model_error);
}

TEST_CASE("signature morphisms are injective and stay inside one institution") {
    signature a = props4();
    signature b = props6();
    CHECK_NOTHROW(shift_into(a, b));

    std::map<std::string, std::string> collapse{
        {"p1", "q1"}, {"p2", "q1"}, {"p3", "q2"}, {"p4", "q3"}};
    CHECK_THROWS_AS(make_signature_morphism(a, b, collapse), non_injective_morphism_error);

    std::map<std::string, std::string> partial{{"p1", "q1"}};
    CHECK_THROWS_AS(make_signature_morphism(a, b, partial), signature_mismatch_error);

    CHECK_THROWS_AS(make_signature_morphism(a, pixels(4), {}), signature_mismatch_error);
}

TEST_CASE("sentence translation renames symbols and preserves structure") {
    signature a = props4();
    signature b = props6();
    signature_morphism rho = shift_into(a, b);

    CHECK(sentence_equal(translate_sentence(identity_morphism(a), atom("p1")), atom("p1")));

    sentence s = impl(conj(atom("p1"), neg(atom("p2"))), disj(atom("p3"), atom("p4")));
    sentence t = translate_sentence(rho, s);

    // structural-induction oracle: walk both trees in lockstep
    std::function<void(const sentence&, const sentence&)> against =
        [&](const sentence& x, const sentence& y) {
            REQUIRE(x->kind == y->kind);
            if (x->kind == sentence_kind::atom) {
                CHECK(y->name == rho.symbol_map.at(x->name));
                return;
            }
            if (x->a) against(x->a, y->a);
            if (x->b) against(x->b, y->b);
        };
    against(s, t);
    CHECK(sentence_str(t) == "q2 & !q3 -> q4 | q5");
}

TEST_CASE("model reducts pull degrees and valuations back along the map") {
    signature a = pixels(3);
    signature b = features(4);
    std::map<std::string, std::string> mm{{"p1", "f1"}, {"p2", "f2"}, {"p3", "f3"}};
    signature_morphism rho = make_signature_morphism(a, b, mm);

    semantic_model big = make_relevance_model(
        b, {{"f1", 0.9}, {"f2", 0.3}, {"f3", 0.6}, {"f4", 0.1}}, 0.4);
    semantic_model back = reduct_model(rho, big);
    CHECK(back.kind == institution_kind::unary_relevance);
    CHECK(back.tau == 0.4);
    REQUIRE(back.degrees.size() == 3);
    for (const auto& [from_sym, to_sym] : mm)
        CHECK(back.degrees.at(from_sym) == big.degrees.at(to_sym));

    semantic_model same = reduct_model(identity_morphism(a),
                                       make_relevance_model(a, back.degrees, back.tau));
    CHECK(same.degrees == back.degrees);
}

TEST_CASE("translation and reduct preserve satisfaction on random draws") {
    // hand-rolled oracle loop, independent of the packaged checkers
    auto proves = [](const signature_morphism& rho, std::uint64_t seed, int trials) {
        rng r(seed);
        for (int i = 0; i < trials; ++i) {
            sentence s = random_sentence(r, rho.from, 3);
            semantic_model big = random_model(r, rho.to);
            bool outer = satisfies(rho.to, big, translate_sentence(rho, s));
            bool inner = satisfies(rho.from, reduct_model(rho, big), s);
            if (outer != inner) return false;
        }
        return true;
    };
    CHECK(proves(shift_into(props4(), props6()), 1, 500));
    CHECK(proves(shift_into(pixels(6), features(8)), 2, 500));

    satisfaction_options opt;
    opt.random_instances = 500;
    law_report pl = check_satisfaction_random(shift_into(props4(), props6()), opt);
    CHECK(pl.instances >= 500);
    CHECK(pl.failures == 0);
    law_report ur = check_satisfaction_random(shift_into(pixels(6), features(8)), opt);
    CHECK(ur.failures == 0);
}

TEST_CASE("satisfaction preservation holds exhaustively on small signatures") {
    signature two = make_propositional_signature({"a", "b"});
    signature three = make_propositional_signature({"u", "v", "w"});
    signature_morphism rho =
        make_signature_morphism(two, three, {{"a", "v"}, {"b", "w"}});

    // oracle: every depth-bounded sentence against every valuation
    for (const sentence& s : enumerate_sentences(two))
        for (const semantic_model& big : all_models(three)) {
            bool outer = satisfies(three, big, translate_sentence(rho, s));
            bool inner = satisfies(two, reduct_model(rho, big), s);
            REQUIRE(outer == inner);
        }

    CHECK(check_satisfaction_exhaustive(rho).failures == 0);
    CHECK(check_satisfaction_exhaustive(shift_into(pixels(2), features(3))).failures == 0);
}

TEST_CASE("sentence and model functors respect identity and composition") {
    signature a = props4();
    signature b = props6();
    signature c = make_propositional_signature({"r1", "r2", "r3", "r4", "r5", "r6", "r7"});
    signature_morphism f = shift_into(a, b);
    signature_morphism g = shift_into(b, c);
    signature_morphism fg = compose_morphisms(f, g);

    rng r(3);
    for (int i = 0; i < 200; ++i) {
        sentence s = random_sentence(r, a, 3);
        CHECK(sentence_equal(translate_sentence(fg, s),
                             translate_sentence(g, translate_sentence(f, s))));
        CHECK(sentence_equal(translate_sentence(identity_morphism(a), s), s));

        semantic_model big = random_model(r, c);
        semantic_model once = reduct_model(fg, big);
        semantic_model twice = reduct_model(f, reduct_model(g, big));
        CHECK(once.valuation == twice.valuation);
    }

    satisfaction_options opt;
    for (const law_report& rep : check_functoriality(f, g, opt)) {
        INFO(rep.name);
        CHECK(rep.failures == 0);
    }
}

TEST_CASE("saliency readouts conjoin exactly the strong features") {
    signature sig = pixels(3);
    std::vector<double> degrees{0.9, 0.1, 0.6};

    // oracle: filter by threshold, in signature order
    std::vector<std::string> strong;
    for (std::size_t i = 0; i < degrees.size(); ++i)
        if (degrees[i] >= 0.5) strong.push_back(sig.symbols[i]);
    REQUIRE(strong == std::vector<std::string>{"p1", "p3"});

    sentence s = saliency_sentence(sig, degrees, 0.5);
    CHECK(sentence_str(s) == "S(p1) & S(p3)");

    semantic_model m = saliency_model(sig, degrees, 0.5);
    CHECK(satisfies(sig, m, s));
    CHECK(m.degrees.at("p2") == 0.1);

    // any model that keeps the strong set strong also satisfies it
    semantic_model other = make_relevance_model(
        sig, {{"p1", 0.51}, {"p2", 0.49}, {"p3", 0.99}}, 0.5);
    CHECK(satisfies(sig, other, s));
}

TEST_CASE("an all-weak readout degrades to a tautology") {
    signature sig = pixels(3);
    sentence s = saliency_sentence(sig, {0.1, 0.2, 0.3}, 0.5);
    for (const semantic_model& any :
         {saliency_model(sig, {0.1, 0.2, 0.3}, 0.5), saliency_model(sig, {0.9, 0.9, 0.9}, 0.5)})
        CHECK(satisfies(sig, any, s));
}

TEST_CASE("sentence text round trips through the parser") {
    signature sig = props4();
    CHECK(sentence_str(parse_sentence(sig, "p1 & p2 | p3")) == "p1 & p2 | p3");
    CHECK(sentence_equal(parse_sentence(sig, "p1 & p2 | p3"),
                         disj(conj(atom("p1"), atom("p2")), atom("p3"))));
    CHECK(sentence_equal(parse_sentence(sig, "p1 -> p2 -> p3"),
                         impl(atom("p1"), impl(atom("p2"), atom("p3")))));
    CHECK(sentence_equal(parse_sentence(sig, "!p1 & p2"), conj(neg(atom("p1")), atom("p2"))));
    CHECK(sentence_equal(parse_sentence(sig, "(p1 | p2) & p3"),
                         conj(disj(atom("p1"), atom("p2")), atom("p3"))));
    CHECK_THROWS_AS(parse_sentence(sig, "p9"), malformed_sentence_error);
    CHECK_THROWS_AS(parse_sentence(sig, "p1 &"), malformed_sentence_error);

    signature rel = pixels(3);
    CHECK(sentence_equal(parse_sentence(rel, "S(p1) -> !S(p2)"),
                         impl(pred_app("S", "p1"), neg(pred_app("S", "p2")))));
    CHECK_THROWS_AS(parse_sentence(rel, "T(p1)"), malformed_sentence_error);

    rng r(7);
    for (int i = 0; i < 300; ++i) {
        signature& owner = i % 2 ? sig : rel;
        sentence s = random_sentence(r, owner, 4);
        CHECK(sentence_equal(parse_sentence(owner, sentence_str(s)), s));
    }
}

TEST_CASE("model text round trips through the parser") {
    signature sig = pixels(2);
    semantic_model m = make_relevance_model(sig, {{"p1", 0.73}, {"p2", 0.25}}, 0.4);
    semantic_model back = parse_model(sig, model_str(m));
    CHECK(back.degrees == m.degrees);
    CHECK(back.tau == m.tau);

    semantic_model direct = parse_model(sig, "p1 = 0.73\n# comment\np2 = 0.25\ntau = 0.4\n");
    CHECK(direct.degrees == m.degrees);
    CHECK(direct.tau == 0.4);
    CHECK_THROWS_AS(parse_model(sig, "p1 = toast\np2 = 0.5\n"), malformed_model_error);
    CHECK_THROWS_AS(parse_model(sig, "p1 = 0.5\n"), malformed_model_error);

    signature ps = make_propositional_signature({"a", "b"});
    semantic_model pm = parse_model(ps, "a = true\nb = false\n");
    CHECK(pm.valuation.at("a"));
    CHECK_FALSE(pm.valuation.at("b"));
}

TEST_CASE("matched signatures expose one canonical dictionary") {
    CHECK_THROWS_AS(make_equivalence(props4(), features(3)), not_comparable_error);
    CHECK_THROWS_AS(make_equivalence(props4(), props4()), not_comparable_error);

    signature prop = make_propositional_signature({"a", "b", "c"});
    signature rel = features(3);
    expressive_equivalence eq = make_equivalence(prop, rel);

    sentence s = impl(atom("a"), conj(atom("b"), neg(atom("c"))));
    sentence rs = to_relevance(eq, s);
    CHECK(sentence_str(rs) == "R(f1) -> R(f2) & !R(f3)");
    CHECK(sentence_equal(to_propositional(eq, rs), s));
}

TEST_CASE("the dictionary preserves satisfaction exhaustively on three symbols") {
    signature prop = make_propositional_signature({"a", "b", "c"});
    signature rel = features(3);
    expressive_equivalence eq = make_equivalence(prop, rel);

    for (const sentence& s : enumerate_sentences(prop)) {
        sentence rs = to_relevance(eq, s);
        CHECK(sentence_equal(to_propositional(eq, rs), s));
        for (const semantic_model& m : all_models(prop)) {
            semantic_model rm = model_to_relevance(eq, m);
            CHECK(satisfies(prop, m, s) == satisfies(rel, rm, rs));
            semantic_model back = model_to_propositional(eq, rm);
            CHECK(back.valuation == m.valuation);
        }
    }

    // and in the other direction, over threshold-definite degree patterns
    for (const sentence& rs : enumerate_sentences(rel)) {
        for (std::size_t bits = 0; bits < 8; ++bits) {
            std::map<std::string, double> degrees;
            for (std::size_t i = 0; i < 3; ++i)
                degrees[rel.symbols[i]] = (bits >> i) & 1 ? 0.9 : 0.1;
            semantic_model rm = make_relevance_model(rel, degrees, 0.5);
            semantic_model pm = model_to_propositional(eq, rm);
            CHECK(satisfies(rel, rm, rs) == satisfies(prop, pm, to_propositional(eq, rs)));
        }
    }
}

TEST_CASE("the dictionary preserves satisfaction on random eight-symbol draws") {
    std::vector<std::string> ps, fs;
    for (int i = 1; i <= 8; ++i) {
        ps.push_back("a" + std::to_string(i));
        fs.push_back("f" + std::to_string(i));
    }
    signature prop = make_propositional_signature(ps);
    signature rel = make_relevance_signature("R", fs);
    expressive_equivalence eq = make_equivalence(prop, rel);

    rng r(11);
    for (int i = 0; i < 500; ++i) {
        sentence s = random_sentence(r, prop, 3);
        semantic_model m = random_model(r, prop);
        CHECK(satisfies(prop, m, s) ==
              satisfies(rel, model_to_relevance(eq, m), to_relevance(eq, s)));
        CHECK(sentence_equal(to_propositional(eq, to_relevance(eq, s)), s));

        sentence rs = random_sentence(r, rel, 3);
        semantic_model rm = random_model(r, rel);
        CHECK(satisfies(rel, rm, rs) ==
              satisfies(prop, model_to_propositional(eq, rm), to_propositional(eq, rs)));
    }
}

TEST_CASE("saliency sentences transport exactly to feature importance") {
    signature pix = pixels(5);
    signature feat = features(5, "R");
    std::map<std::string, std::string> mm;
    for (std::size_t i = 0; i < 5; ++i) mm[pix.symbols[i]] = feat.symbols[i];
    signature_morphism rho = make_signature_morphism(pix, feat, mm);

    std::vector<double> degrees{0.8, 0.2, 0.55, 0.0, 0.0};
    sentence moved = translate_sentence(rho, saliency_sentence(pix, degrees, 0.5));
    CHECK(sentence_equal(moved, saliency_sentence(feat, degrees, 0.5)));

    semantic_model feat_model = saliency_model(feat, degrees, 0.5);
    semantic_model pulled = reduct_model(rho, feat_model);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(pulled.degrees.at(pix.symbols[i]) == degrees[i]);
}

TEST_CASE("depth-two enumeration covers the full closure") {
    signature sig = make_propositional_signature({"a", "b"});

    // oracle: two closure rounds over the atoms, deduplicated by rendering
    std::set<std::string> expect;
    std::vector<sentence> layer{atom("a"), atom("b")};
    for (int round = 0; round < 2; ++round) {
        std::vector<sentence> next = layer;
        for (const sentence& s : layer) next.push_back(neg(s));
        for (const sentence& x : layer)
            for (const sentence& y : layer) {
                next.push_back(conj(x, y));
                next.push_back(disj(x, y));
                next.push_back(impl(x, y));
            }
        layer = std::move(next);
    }
    for (const sentence& s : layer) expect.insert(sentence_str(s));

    std::set<std::string> got;
    for (const sentence& s : enumerate_sentences(sig)) {
        CHECK_NOTHROW(check_sentence(sig, s));
        got.insert(sentence_str(s));
    }
    CHECK(got == expect);
    CHECK(got.count("!a & b"));
    CHECK(got.count("a -> b | a"));
}
