#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "catstream/errors.hpp"
#include "catstream/object.hpp"
#include "catstream/presentation.hpp"
#include "catstream/term.hpp"

using namespace catstream;

namespace {

// structure walker used to assert what a built term is made of
struct term_stats {
    int feedbacks = 0;
    int copies = 0;
    int discards = 0;
    int gens = 0;
    std::vector<object_expr> feedback_states;
    std::vector<object_expr> copy_objects;
    std::vector<object_expr> discard_objects;
    std::vector<std::string> gen_names;
};

void walk(const term& t, term_stats& s) {
    switch (t->kind) {
        case term_kind::gen:
            ++s.gens;
            s.gen_names.push_back(t->gen_name);
            break;
        case term_kind::copy:
            ++s.copies;
            s.copy_objects.push_back(t->obj_a);
            break;
        case term_kind::discard:
            ++s.discards;
            s.discard_objects.push_back(t->obj_a);
            break;
        case term_kind::feedback:
            ++s.feedbacks;
            s.feedback_states.push_back(t->obj_a);
            walk(t->body, s);
            break;
        case term_kind::compose:
        case term_kind::tensor:
            walk(t->left, s);
            walk(t->right, s);
            break;
        default:
            break;
    }
}

term_stats stats_of(const term& t) {
    term_stats s;
    walk(t, s);
    return s;
}

}  // namespace

TEST_CASE("object products flatten and the unit is erased") {
    object_expr x = object_expr::base("X");
    object_expr y = object_expr::base("Y");
    object_expr p = object_expr::base("P");

    object_expr xy_p = object_expr::product(object_expr::product(x, y), p);
    object_expr x_yp = object_expr::product(x, object_expr::product(y, p));
    CHECK(xy_p == x_yp);
    CHECK(xy_p.size() == 3);

    object_expr u = object_expr::unit();
    CHECK(u.is_unit());
    CHECK(object_expr::product(u, x) == x);
    CHECK(object_expr::product(x, u) == x);
    CHECK(object_expr::product(u, u).is_unit());
}

TEST_CASE("delay marks distribute over factors and vanish on the unit") {
    object_expr xp = object_expr::product(object_expr::base("X"), object_expr::base("P"));
    object_expr d = object_expr::delayed(xp);
    REQUIRE(d.size() == 2);
    CHECK(d.factors()[0].delay == 1);
    CHECK(d.factors()[1].delay == 1);
    CHECK(d.undelayed() == xp);
    CHECK(object_expr::delayed(object_expr::unit()).is_unit());
    CHECK(object_expr::delayed(d).factors()[0].delay == 2);
}

TEST_CASE("object rendering names factors, the unit and delays") {
    object_expr x = object_expr::base("X");
    object_expr ys = object_expr::base("Y*");
    CHECK(object_expr::product(ys, x).str() == "Y* x X");
    CHECK(object_expr::unit().str() == "I");
    CHECK(object_expr::delayed(object_expr::base("P")).str() == "F(P)");
}

TEST_CASE("suffix helpers compare and trim factor lists") {
    object_expr x = object_expr::base("X");
    object_expr p = object_expr::base("P");
    object_expr xp = object_expr::product(x, p);
    CHECK(ends_with(xp, p));
    CHECK_FALSE(ends_with(xp, x));
    CHECK(ends_with(xp, xp));
    CHECK(ends_with(xp, object_expr::unit()));
    CHECK(drop_suffix(xp, 1) == x);
    CHECK(drop_suffix(xp, 2).is_unit());
    CHECK(drop_suffix(xp, 5).is_unit());
}

TEST_CASE("presentations validate their generator types") {
    CHECK_THROWS_AS(make_presentation({"A"}, {{"f", object_expr::base("A"),
                                               object_expr::base("B")}}),
                    unknown_object_error);
    CHECK_THROWS_AS(
        make_presentation({"A"}, {{"f", object_expr::base("A"), object_expr::base("A")},
                                  {"f", object_expr::base("A"), object_expr::base("A")}}),
        duplicate_generator_error);
    // delay marks are a semantic device, not part of declared generator types
    CHECK_THROWS_AS(make_presentation({"A"}, {{"f", object_expr::delayed(object_expr::base("A")),
                                               object_expr::base("A")}}),
                    unknown_object_error);

    presentation p = make_presentation(
        {"A", "B"}, {{"f", object_expr::base("A"), object_expr::base("B")}});
    REQUIRE(p.find("f") != nullptr);
    CHECK(p.find("f")->cod == object_expr::base("B"));
    CHECK(p.find("g") == nullptr);
}

TEST_CASE("the learning signature carries the model and optimizer generators") {
    presentation p = build_xlearn();
    CHECK(p.objects == std::set<std::string>{"E", "P", "X", "Y", "Y*"});
    REQUIRE(p.generators.size() == 2);

    const generator_decl* eta = p.find("eta");
    REQUIRE(eta != nullptr);
    CHECK(eta->dom == object_expr::product(object_expr::base("X"), object_expr::base("P")));
    CHECK(eta->cod == object_expr::product(object_expr::base("Y"), object_expr::base("E")));

    const generator_decl* nabla = p.find("nabla");
    REQUIRE(nabla != nullptr);
    CHECK(nabla->dom == object_expr::product({object_expr::base("Y*"), object_expr::base("Y"),
                                              object_expr::base("P")}));
    CHECK(nabla->cod == object_expr::base("P"));

    // building twice yields the same declarations
    presentation q = build_xlearn();
    CHECK(q.objects == p.objects);
    REQUIRE(q.generators.size() == p.generators.size());
    for (std::size_t i = 0; i < p.generators.size(); ++i) {
        CHECK(q.generators[i].name == p.generators[i].name);
        CHECK(q.generators[i].dom == p.generators[i].dom);
        CHECK(q.generators[i].cod == p.generators[i].cod);
    }
}

TEST_CASE("term constructors type their boundaries") {
    presentation p = build_xlearn();
    object_expr x = object_expr::base("X");
    object_expr y = object_expr::base("Y");

    term e = gen(p, "eta");
    CHECK(infer_type(e).first == p.find("eta")->dom);
    CHECK(infer_type(e).second == p.find("eta")->cod);
    CHECK_THROWS_AS(gen(p, "missing"), unknown_generator_error);

    CHECK(infer_type(identity(object_expr::unit())) ==
          std::pair{object_expr::unit(), object_expr::unit()});

    term c = copy_of(x);
    CHECK(c->dom == x);
    CHECK(c->cod == object_expr::product(x, x));

    term d = discard_of(x);
    CHECK(d->dom == x);
    CHECK(d->cod.is_unit());

    term s = symmetry(x, y);
    CHECK(s->dom == object_expr::product(x, y));
    CHECK(s->cod == object_expr::product(y, x));
}

TEST_CASE("composition requires matching boundaries and flattens types") {
    presentation p = build_xlearn();
    object_expr x = object_expr::base("X");
    object_expr pp = object_expr::base("P");

    term e = gen(p, "eta");
    CHECK_THROWS_AS(compose(e, e), type_mismatch_error);

    term ok = compose(identity(object_expr::product(x, pp)), e);
    CHECK(ok->dom == e->dom);
    CHECK(ok->cod == e->cod);

    term t = tensor(identity(x), e);
    CHECK(t->dom == object_expr::product(x, e->dom));
    CHECK(t->cod == object_expr::product(x, e->cod));
}

TEST_CASE("feedback needs a state-shaped body and hides the state") {
    presentation p = build_xlearn();
    object_expr x = object_expr::base("X");
    object_expr st = object_expr::base("P");

    // body : X x F(P) -> X x P via a symmetry-free rearrangement
    term body = identity(object_expr::product(x, st));
    term looped_plain = feedback(st, body);
    CHECK(looped_plain->dom == x);
    CHECK(looped_plain->cod == x);

    term dbody = identity(object_expr::product(x, object_expr::delayed(st)));
    // a delayed-state body must still emit the plain state; identity does not
    CHECK_THROWS_AS(feedback(st, dbody), feedback_shape_error);

    CHECK_THROWS_AS(feedback(st, identity(x)), feedback_shape_error);

    // unit-state feedback is allowed and acts as the body itself
    term unit_loop = feedback(object_expr::unit(), identity(x));
    CHECK(unit_loop->dom == x);
    CHECK(unit_loop->cod == x);
}

TEST_CASE("the learning-agent terms have the supervised boundary type") {
    presentation p = build_xlearn();
    object_expr want_dom =
        object_expr::product(object_expr::base("Y*"), object_expr::base("X"));
    object_expr want_cod = object_expr::product(object_expr::base("Y"), object_expr::base("E"));

    term agent = abstract_learning_agent(p);
    CHECK(infer_type(agent).first == want_dom);
    CHECK(infer_type(agent).second == want_cod);
    CHECK(contains_feedback(agent));

    term_stats s = stats_of(agent);
    CHECK(s.feedbacks == 1);
    REQUIRE(s.feedback_states.size() == 1);
    CHECK(s.feedback_states[0] == object_expr::base("P"));
    CHECK(s.gen_names == std::vector<std::string>{"eta", "nabla"});

    // exactly one copy on the parameter wire splits it between the generators
    int p_copies = 0;
    for (const object_expr& o : s.copy_objects)
        if (o == object_expr::base("P")) ++p_copies;
    CHECK(p_copies == 1);

    // the spare explanation is dropped before the optimizer
    bool drops_e = false;
    for (const object_expr& o : s.discard_objects)
        if (o == object_expr::base("E")) drops_e = true;
    CHECK(drops_e);
}

TEST_CASE("the runnable agent variant also feeds the input to the optimizer") {
    presentation p = make_presentation(
        {"X", "Y", "Y*", "P", "E"},
        {{"eta", object_expr::product(object_expr::base("X"), object_expr::base("P")),
          object_expr::product(object_expr::base("Y"), object_expr::base("E"))},
         {"nabla",
          object_expr::product({object_expr::base("Y*"), object_expr::base("Y"),
                                object_expr::base("X"), object_expr::base("P")}),
          object_expr::base("P")}});
    term agent = training_learning_agent(p);
    CHECK(infer_type(agent).first ==
          object_expr::product(object_expr::base("Y*"), object_expr::base("X")));
    CHECK(infer_type(agent).second ==
          object_expr::product(object_expr::base("Y"), object_expr::base("E")));
    CHECK(contains_feedback(agent));

    term_stats s = stats_of(agent);
    CHECK(s.feedbacks == 1);
    // the input is copied once more so both generators can consume it
    int x_copies = 0;
    for (const object_expr& o : s.copy_objects)
        if (o == object_expr::base("X")) ++x_copies;
    CHECK(x_copies >= 1);
}

TEST_CASE("agent construction rejects presentations without the right generators") {
    presentation p = make_presentation(
        {"A"}, {{"f", object_expr::base("A"), object_expr::base("A")}});
    CHECK_THROWS_AS(abstract_learning_agent(p), shape_error);
    CHECK_THROWS_AS(training_learning_agent(p), shape_error);
}

TEST_CASE("contains_feedback sees through compositions") {
    presentation p = build_xlearn();
    term e = gen(p, "eta");
    CHECK_FALSE(contains_feedback(e));
    CHECK_FALSE(contains_feedback(tensor(e, identity(object_expr::base("X")))));
    CHECK(contains_feedback(tensor(identity(object_expr::base("X")),
                                   abstract_learning_agent(p))));
}

TEST_CASE("term rendering is stable and definite") {
    presentation p = build_xlearn();
    term agent = abstract_learning_agent(p);
    std::string once = agent->str();
    CHECK(once == agent->str());
    CHECK(once.find("fbk[P]") != std::string::npos);
    CHECK(once.find("eta") != std::string::npos);
    CHECK(once.find("nabla") != std::string::npos);
    CHECK(identity(object_expr::base("X"))->str() == "id(X)");
    CHECK(copy_of(object_expr::base("P"))->str() == "copy(P)");
    CHECK(symmetry(object_expr::base("X"), object_expr::base("Y"))->str() == "sym(X, Y)");
}
