#include "catstream/term.hpp"

#include <initializer_list>

#include "catstream/errors.hpp"

namespace catstream {

namespace {

term make_node(term_node n) { return std::make_shared<const term_node>(std::move(n)); }

term compose_all(std::initializer_list<term> parts) {
    term acc;
    for (const auto& p : parts) acc = acc ? compose(acc, p) : p;
    return acc;
}

term tensor_all(std::initializer_list<term> parts) {
    term acc;
    for (const auto& p : parts) acc = acc ? tensor(acc, p) : p;
    return acc;
}

}  // namespace

std::string term_node::str() const {
    switch (kind) {
        case term_kind::gen: return gen_name;
        case term_kind::identity: return "id(" + obj_a.str() + ")";
        case term_kind::symmetry: return "sym(" + obj_a.str() + ", " + obj_b.str() + ")";
        case term_kind::copy: return "copy(" + obj_a.str() + ")";
        case term_kind::discard: return "discard(" + obj_a.str() + ")";
        case term_kind::compose: return "(" + left->str() + " ; " + right->str() + ")";
        case term_kind::tensor: return "(" + left->str() + " * " + right->str() + ")";
        case term_kind::feedback: return "fbk[" + obj_a.str() + "](" + body->str() + ")";
    }
    return "?";
}

term gen(const presentation& p, const std::string& name) {
    const generator_decl* g = p.find(name);
    if (!g) throw unknown_generator_error("unknown generator '" + name + "'");
    term_node n;
    n.kind = term_kind::gen;
    n.gen_name = name;
    n.dom = g->dom;
    n.cod = g->cod;
    return make_node(std::move(n));
}

term identity(const object_expr& obj) {
    term_node n;
    n.kind = term_kind::identity;
    n.obj_a = obj;
    n.dom = obj;
    n.cod = obj;
    return make_node(std::move(n));
}

term symmetry(const object_expr& a, const object_expr& b) {
    term_node n;
    n.kind = term_kind::symmetry;
    n.obj_a = a;
    n.obj_b = b;
    n.dom = object_expr::product(a, b);
    n.cod = object_expr::product(b, a);
    return make_node(std::move(n));
}

term copy_of(const object_expr& obj) {
    term_node n;
    n.kind = term_kind::copy;
    n.obj_a = obj;
    n.dom = obj;
    n.cod = object_expr::product(obj, obj);
    return make_node(std::move(n));
}

term discard_of(const object_expr& obj) {
    term_node n;
    n.kind = term_kind::discard;
    n.obj_a = obj;
    n.dom = obj;
    n.cod = object_expr::unit();
    return make_node(std::move(n));
}

term compose(const term& f, const term& g) {
    if (!(f->cod == g->dom))
        throw type_mismatch_error("cannot compose: cod " + f->cod.str() + " of " + f->str() +
                                  " differs from dom " + g->dom.str() + " of " + g->str());
    term_node n;
    n.kind = term_kind::compose;
    n.left = f;
    n.right = g;
    n.dom = f->dom;
    n.cod = g->cod;
    return make_node(std::move(n));
}

term tensor(const term& f, const term& g) {
    term_node n;
    n.kind = term_kind::tensor;
    n.left = f;
    n.right = g;
    n.dom = object_expr::product(f->dom, g->dom);
    n.cod = object_expr::product(f->cod, g->cod);
    return make_node(std::move(n));
}

term feedback(const object_expr& state, const term& body) {
    for (const auto& f : state.factors())
        if (f.delay != 0) throw feedback_shape_error("feedback state must be delay-free");
    const object_expr delayed = object_expr::delayed(state);
    std::size_t k = state.size();
    bool dom_ok = ends_with(body->dom, delayed) || ends_with(body->dom, state);
    if (!dom_ok || !ends_with(body->cod, state))
        throw feedback_shape_error("feedback over " + state.str() + ": body " + body->dom.str() +
                                   " -> " + body->cod.str() +
                                   " does not carry the state as a trailing factor");
    term_node n;
    n.kind = term_kind::feedback;
    n.obj_a = state;
    n.body = body;
    n.dom = drop_suffix(body->dom, k);
    n.cod = drop_suffix(body->cod, k);
    return make_node(std::move(n));
}

bool contains_feedback(const term& t) {
    switch (t->kind) {
        case term_kind::feedback: return true;
        case term_kind::compose:
        case term_kind::tensor: return contains_feedback(t->left) || contains_feedback(t->right);
        default: return false;
    }
}

namespace {

struct agent_shape {
    term model;      // eta-shaped
    term optimizer;  // nabla-shaped
    object_expr X, Y, Ys, P, E;
};

// Matches g1: x p -> y e against g2's expected dom/cod, by factor; the
// optimizer dom layout differs between the abstract and runnable agents.
bool match_pair(const generator_decl& g1, const generator_decl& g2, bool optimizer_takes_input,
                agent_shape& out, const presentation& p) {
    const auto& d1 = g1.dom.factors();
    const auto& c1 = g1.cod.factors();
    if (d1.size() != 2 || c1.size() != 2) return false;
    factor x = d1[0], pp = d1[1], y = c1[0], e = c1[1];
    const auto& d2 = g2.dom.factors();
    const auto& c2 = g2.cod.factors();
    if (c2.size() != 1 || !(c2[0] == pp)) return false;
    if (!optimizer_takes_input) {
        if (d2.size() != 3) return false;
        if (!(d2[1] == y) || !(d2[2] == pp)) return false;
        out.Ys = object_expr::base(d2[0].base);
    } else {
        if (d2.size() != 4) return false;
        if (!(d2[1] == y) || !(d2[2] == x) || !(d2[3] == pp)) return false;
        out.Ys = object_expr::base(d2[0].base);
    }
    out.X = object_expr::base(x.base);
    out.Y = object_expr::base(y.base);
    out.P = object_expr::base(pp.base);
    out.E = object_expr::base(e.base);
    out.model = gen(p, g1.name);
    out.optimizer = gen(p, g2.name);
    return true;
}

agent_shape find_shape(const presentation& p, bool optimizer_takes_input) {
    agent_shape s;
    for (const auto& g1 : p.generators)
        for (const auto& g2 : p.generators)
            if (match_pair(g1, g2, optimizer_takes_input, s, p)) return s;
    throw shape_error("presentation has no model/optimizer generator pair of the required shapes");
}

}  // namespace

term abstract_learning_agent(const presentation& p) {
    agent_shape s = find_shape(p, false);
    const auto &X = s.X, &Y = s.Y, &Ys = s.Ys, &P = s.P, &E = s.E;
    auto prod = [](std::initializer_list<object_expr> os) {
        return object_expr::product(std::vector<object_expr>(os));
    };
    term body = compose_all({
        tensor_all({identity(prod({Ys, X})), copy_of(P)}),
        tensor_all({identity(Ys), s.model, identity(P)}),
        tensor_all({identity(Ys), copy_of(Y), identity(prod({E, P}))}),
        tensor_all({identity(prod({Ys, Y, Y})), copy_of(E), identity(P)}),
        tensor_all({identity(prod({Ys, Y, Y, E})), discard_of(E), identity(P)}),
        tensor_all({symmetry(Ys, Y), identity(prod({Y, E, P}))}),
        tensor_all({identity(Y), symmetry(prod({Ys, Y}), E), identity(P)}),
        tensor_all({identity(prod({Y, E})), s.optimizer}),
    });
    return feedback(P, body);
}

term training_learning_agent(const presentation& p) {
    agent_shape s = find_shape(p, true);
    const auto &X = s.X, &Y = s.Y, &Ys = s.Ys, &P = s.P, &E = s.E;
    auto prod = [](std::initializer_list<object_expr> os) {
        return object_expr::product(std::vector<object_expr>(os));
    };
    // Parameter wires must stay rightmost through every stage: the loop
    // state is absent at step 0, and only a trailing gap keeps the earlier
    // tensor splits aligned. The first X copy rides along for the optimizer;
    // the model consumes the second, adjacent to the parameters.
    term body = compose_all({
        tensor_all({identity(Ys), copy_of(X), identity(P)}),
        tensor_all({identity(prod({Ys, X, X})), copy_of(P)}),
        tensor_all({identity(prod({Ys, X})), s.model, identity(P)}),
        tensor_all({identity(prod({Ys, X})), copy_of(Y), identity(prod({E, P}))}),
        tensor_all({identity(prod({Ys, X, Y, Y})), copy_of(E), identity(P)}),
        tensor_all({identity(prod({Ys, X, Y, Y, E})), discard_of(E), identity(P)}),
        tensor_all({identity(Ys), symmetry(X, prod({Y, Y, E})), identity(P)}),
        tensor_all({symmetry(Ys, Y), identity(prod({Y, E, X, P}))}),
        tensor_all({identity(Y), symmetry(prod({Ys, Y}), E), identity(prod({X, P}))}),
        tensor_all({identity(prod({Y, E})), s.optimizer}),
    });
    return feedback(P, body);
}

}  // namespace catstream
