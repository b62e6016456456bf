#include "catstream/translator.hpp"

#include <utility>

#include "catstream/errors.hpp"
#include "catstream/parallel.hpp"

namespace catstream {

namespace {
constexpr std::size_t k_probe_horizon = 8;
}

translator make_translator(presentation source, std::map<std::string, space_seq> objects,
                           std::map<std::string, stream_morphism> generators,
                           explanation_mode mode, std::string explanation_object,
                           std::optional<signature> expl_signature) {
    translator t;
    t.source = std::move(source);
    t.objects = std::move(objects);
    t.generators = std::move(generators);
    t.mode = mode;
    t.explanation_object = std::move(explanation_object);
    t.expl_signature = std::move(expl_signature);

    for (const auto& name : t.source.objects) {
        if (!t.objects.count(name))
            throw unknown_object_error("object '" + name + "' has no space assigned");
    }
    for (const auto& g : t.source.generators) {
        auto it = t.generators.find(g.name);
        if (it == t.generators.end())
            throw unknown_generator_error("generator '" + g.name + "' has no morphism assigned");
        space_seq want_dom = translate_object(t, g.dom);
        space_seq want_cod = translate_object(t, g.cod);
        if (!spaces_agree(it->second.dom(), want_dom, k_probe_horizon) ||
            !spaces_agree(it->second.cod(), want_cod, k_probe_horizon)) {
            throw generator_type_mismatch_error(
                "generator '" + g.name + "' is bound to a morphism of the wrong shape: want " +
                want_dom.at(1).str() + " -> " + want_cod.at(1).str() + ", got " +
                it->second.dom().at(1).str() + " -> " + it->second.cod().at(1).str());
        }
    }

    if (!t.explanation_object.empty() && !t.source.objects.count(t.explanation_object))
        throw unknown_object_error("explanation object '" + t.explanation_object +
                                   "' is not declared");
    bool trivial = true;
    if (!t.explanation_object.empty()) {
        const space_seq& es = t.objects.at(t.explanation_object);
        for (std::size_t n = 0; n <= k_probe_horizon; ++n)
            if (!es.at(n).is_singleton()) trivial = false;
    }
    if (t.mode == explanation_mode::none) {
        if (!trivial)
            throw explanation_mode_mismatch_error(
                "explanation object carries data but the mode says there are no explanations");
    } else {
        if (t.explanation_object.empty() || trivial)
            throw explanation_mode_mismatch_error(
                "explaining agents need a nontrivial explanation object");
        if (!t.expl_signature)
            throw explanation_mode_mismatch_error(
                "syntactic and semantic explanations need a signature");
    }
    return t;
}

space_seq translate_object(const translator& t, const object_expr& obj) {
    space_seq acc = space_seq::constant(value_space::singleton());
    bool first = true;
    for (const auto& f : obj.factors()) {
        auto it = t.objects.find(f.base);
        if (it == t.objects.end())
            throw unknown_object_error("object '" + f.base + "' has no space assigned");
        space_seq s = it->second;
        for (int d = 0; d < f.delay; ++d) s = space_seq::delay(s);
        acc = first ? s : space_seq::product(acc, s);
        first = false;
    }
    return acc;
}

stream_morphism translate_term(const translator& t, const term& m) {
    switch (m->kind) {
        case term_kind::gen: {
            auto it = t.generators.find(m->gen_name);
            if (it == t.generators.end())
                throw unknown_generator_error("generator '" + m->gen_name +
                                              "' has no morphism assigned");
            return it->second;
        }
        case term_kind::identity: return stream_identity(translate_object(t, m->obj_a));
        case term_kind::symmetry:
            return stream_symmetry(translate_object(t, m->obj_a), translate_object(t, m->obj_b));
        case term_kind::copy: return stream_copy(translate_object(t, m->obj_a));
        case term_kind::discard: return stream_discard(translate_object(t, m->obj_a));
        case term_kind::compose: return stream_compose(translate_term(t, m->left), translate_term(t, m->right));
        case term_kind::tensor: return stream_tensor(translate_term(t, m->left), translate_term(t, m->right));
        case term_kind::feedback:
            return stream_feedback(translate_term(t, m->body), translate_object(t, m->obj_a),
                                   state_mode::plain);
    }
    throw shape_error("unreachable term kind");
}

translator random_translator(rng& r, const presentation& p, std::size_t window) {
    std::map<std::string, space_seq> objects;
    for (const auto& name : p.objects)
        objects[name] = space_seq::constant(random_space(r, 2));
    translator probe;
    probe.objects = objects;
    std::map<std::string, stream_morphism> gens;
    for (const auto& g : p.generators) {
        gens[g.name] = random_table_kernel(r.next_u64(), translate_object(probe, g.dom),
                                           translate_object(probe, g.cod), window, g.name);
    }
    return make_translator(p, std::move(objects), std::move(gens));
}

namespace {

law_report reduce_results(const std::string& name, std::size_t instances,
                          const std::vector<std::string>& results) {
    law_report rep;
    rep.name = name;
    rep.instances = instances;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].empty()) continue;
        if (rep.failures == 0)
            rep.counterexample = "instance " + std::to_string(i) + ": " + results[i];
        ++rep.failures;
    }
    return rep;
}

std::string describe(const stream_mismatch& m) {
    std::string s = "step " + std::to_string(m.step) + "; inputs";
    for (const auto& v : m.inputs) s += " <" + v.str() + ">";
    s += "; lhs " + m.lhs.str() + "; rhs " + m.rhs.str();
    return s;
}

law_report run_functor_law(const std::string& name, const law_options& opt,
                           const std::function<std::string(rng&)>& one) {
    std::function<std::string(std::size_t)> body = [&](std::size_t i) -> std::string {
        rng r(hash_key(opt.seed, name + "#" + std::to_string(i)));
        try {
            return one(r);
        } catch (const cat_error& e) {
            return std::string("error: ") + e.what();
        }
    };
    return reduce_results(name, opt.instances,
                          run_instances<std::string>(opt.instances, body, opt.parallel));
}

object_expr random_object_over(rng& r, const presentation& p, std::size_t max_len) {
    std::vector<std::string> names(p.objects.begin(), p.objects.end());
    std::vector<object_expr> fs;
    std::size_t len = r.below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i)
        fs.push_back(object_expr::base(names[r.below(names.size())]));
    return object_expr::product(fs);
}

}  // namespace

std::vector<law_report> check_functor_laws(const translator& t, const law_options& opt) {
    std::vector<law_report> out;
    const presentation& p = t.source;

    auto mismatch_or_empty = [&](const stream_morphism& lhs, const stream_morphism& rhs,
                                 rng& r) -> std::string {
        auto bad = find_mismatch(lhs, rhs, opt.horizon, opt.samples, r.next_u64(), opt.tol);
        return bad ? describe(*bad) : std::string{};
    };

    out.push_back(run_functor_law("functor-identity", opt, [&](rng& r) {
        object_expr a = random_object_over(r, p, 3);
        return mismatch_or_empty(translate_term(t, identity(a)), stream_identity(translate_object(t, a)),
                                 r);
    }));

    out.push_back(run_functor_law("functor-compose", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        term g = random_term_with_dom(r, p, f->cod, 2);
        return mismatch_or_empty(translate_term(t, compose(f, g)),
                                 stream_compose(translate_term(t, f), translate_term(t, g)), r);
    }));

    out.push_back(run_functor_law("functor-tensor", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        term g = random_term(r, p, 2);
        return mismatch_or_empty(translate_term(t, tensor(f, g)),
                                 stream_tensor(translate_term(t, f), translate_term(t, g)), r);
    }));

    out.push_back(run_functor_law("functor-structure", opt, [&](rng& r) {
        object_expr a = random_object_over(r, p, 2);
        object_expr b = random_object_over(r, p, 2);
        space_seq sa = translate_object(t, a), sb = translate_object(t, b);
        std::string bad = mismatch_or_empty(translate_term(t, symmetry(a, b)), stream_symmetry(sa, sb), r);
        if (!bad.empty()) return "sym: " + bad;
        bad = mismatch_or_empty(translate_term(t, copy_of(a)), stream_copy(sa), r);
        if (!bad.empty()) return "copy: " + bad;
        bad = mismatch_or_empty(translate_term(t, discard_of(a)), stream_discard(sa), r);
        if (!bad.empty()) return "discard: " + bad;
        return std::string{};
    }));

    out.push_back(run_functor_law("functor-feedback", opt, [&](rng& r) {
        std::vector<std::string> names(p.objects.begin(), p.objects.end());
        object_expr s = object_expr::base(names[r.below(names.size())]);
        term f = random_term(r, p, 2);
        term body = tensor(f, identity(s));
        term looped = feedback(s, body);
        return mismatch_or_empty(translate_term(t, looped),
                                 stream_feedback(translate_term(t, body), translate_object(t, s),
                                                 state_mode::plain),
                                 r);
    }));

    return out;
}

law_report check_agent_translation(const translator& t, const law_options& opt) {
    return run_functor_law("functor-agent", opt, [&](rng& r) -> std::string {
        term agent = abstract_learning_agent(t.source);
        stream_morphism compiled = translate_term(t, agent);

        // the same loop, wired by hand from stream combinators
        const generator_decl* eta = nullptr;
        const generator_decl* nab = nullptr;
        for (const auto& g : t.source.generators) {
            if (g.cod.size() == 2) eta = &g;
            if (g.cod.size() == 1 && g.dom.size() == 3) nab = &g;
        }
        if (!eta || !nab) return "signature lacks the model/optimizer pair";
        space_seq X = t.objects.at(eta->dom.factors()[0].base);
        space_seq P = t.objects.at(eta->dom.factors()[1].base);
        space_seq Y = t.objects.at(eta->cod.factors()[0].base);
        space_seq E = t.objects.at(eta->cod.factors()[1].base);
        space_seq Ys = t.objects.at(nab->dom.factors()[0].base);
        stream_morphism Teta = t.generators.at(eta->name);
        stream_morphism Tnab = t.generators.at(nab->name);

        auto id = [](const space_seq& s) { return stream_identity(s); };
        auto pr = [](const space_seq& a, const space_seq& b) { return space_seq::product(a, b); };
        stream_morphism body = stream_tensor(id(pr(Ys, X)), stream_copy(P));
        body = stream_compose(body, stream_tensor(stream_tensor(id(Ys), Teta), id(P)));
        body = stream_compose(body, stream_tensor(stream_tensor(id(Ys), stream_copy(Y)),
                                                  id(pr(E, P))));
        body = stream_compose(
            body, stream_tensor(stream_tensor(id(pr(Ys, pr(Y, Y))), stream_copy(E)), id(P)));
        body = stream_compose(
            body,
            stream_tensor(stream_tensor(id(pr(Ys, pr(Y, pr(Y, E)))), stream_discard(E)), id(P)));
        body = stream_compose(body, stream_tensor(stream_symmetry(Ys, Y), id(pr(Y, pr(E, P)))));
        body = stream_compose(
            body, stream_tensor(stream_tensor(id(Y), stream_symmetry(pr(Ys, Y), E)), id(P)));
        body = stream_compose(body, stream_tensor(id(pr(Y, E)), Tnab));
        stream_morphism hand = stream_feedback(body, P, state_mode::plain);

        auto bad = find_mismatch(compiled, hand, opt.horizon, opt.samples, r.next_u64(), opt.tol);
        return bad ? describe(*bad) : std::string{};
    });
}

}  // namespace catstream
