#include "catstream/laws.hpp"

#include <optional>
#include <utility>

#include "catstream/errors.hpp"
#include "catstream/parallel.hpp"
#include "catstream/port_graph.hpp"

namespace catstream {

value_space random_space(rng& r, std::size_t max_factors) {
    std::size_t n = r.below(max_factors + 1);
    std::vector<value_space> parts;
    for (std::size_t i = 0; i < n; ++i) {
        if (r.coin()) {
            std::size_t card = 2 + r.below(3);
            std::vector<std::string> elems;
            for (std::size_t k = 0; k < card; ++k)
                elems.push_back("e" + std::to_string(i) + std::to_string(k));
            parts.push_back(value_space::finite_enum(std::move(elems)));
        } else {
            parts.push_back(value_space::real_vector(1 + r.below(3)));
        }
    }
    return value_space::product(parts);
}

stream_morphism random_table_kernel(std::uint64_t salt, const space_seq& dom,
                                    const space_seq& cod, std::size_t window,
                                    const std::string& name) {
    space_seq c = cod;
    kernel_fn fn = [salt, c, window, name](std::size_t n, const std::vector<value>& h) {
        std::string key = name + "#" + std::to_string(n);
        std::size_t from = h.size() > window ? h.size() - window : 0;
        for (std::size_t i = from; i < h.size(); ++i) key += "|" + h[i].str();
        value_space out = c.at(n);
        std::vector<value> parts;
        for (std::size_t i = 0; i < out.factors().size(); ++i) {
            const atom_space& f = out.factors()[i];
            std::string fkey = key + "@" + std::to_string(i);
            if (f.kind == atom_kind::finite_enum) {
                parts.push_back(
                    value::atom(f.elements[hash_key(salt, fkey) % f.elements.size()]));
            } else {
                std::vector<double> xs(f.dim);
                for (std::size_t j = 0; j < f.dim; ++j) {
                    std::uint64_t b = hash_key(salt, fkey + "." + std::to_string(j));
                    xs[j] = static_cast<double>(b >> 11) * 0x1.0p-53;
                }
                parts.push_back(value::reals(std::move(xs)));
            }
        }
        return value::tuple(parts);
    };
    return make_kernel(dom, c, std::move(fn), name);
}

presentation random_presentation(rng& r, std::size_t n_objects, std::size_t n_generators) {
    std::vector<std::string> objects;
    for (std::size_t i = 0; i < n_objects; ++i) objects.push_back("o" + std::to_string(i));
    auto random_obj = [&](std::size_t max_len) {
        std::vector<object_expr> fs;
        std::size_t len = r.below(max_len + 1);
        for (std::size_t i = 0; i < len; ++i)
            fs.push_back(object_expr::base(objects[r.below(objects.size())]));
        return object_expr::product(fs);
    };
    std::vector<generator_decl> gens;
    for (std::size_t i = 0; i < n_generators; ++i) {
        // nonempty domains keep the layer-cake term generator simple
        object_expr dom = random_obj(2);
        if (dom.is_unit()) dom = object_expr::base(objects[r.below(objects.size())]);
        gens.push_back({"g" + std::to_string(i), dom, random_obj(2)});
    }
    return make_presentation(std::move(objects), std::move(gens));
}

namespace {

// one transformation layer over the current object: a tensor of pieces, each
// consuming a short prefix of the remaining factors
term random_layer(rng& r, const presentation& p, const object_expr& cur) {
    const auto& facs = cur.factors();
    std::vector<term> pieces;
    std::size_t i = 0;
    bool too_wide = facs.size() > 5;
    while (i < facs.size()) {
        object_expr head = object_expr::from_factors({facs[i]});
        // generators applicable at this position
        std::vector<const generator_decl*> fits;
        for (const auto& g : p.generators) {
            const auto& gd = g.dom.factors();
            if (gd.empty() || i + gd.size() > facs.size()) continue;
            bool ok = true;
            for (std::size_t k = 0; k < gd.size(); ++k)
                if (!(gd[k] == facs[i + k])) ok = false;
            if (ok) fits.push_back(&g);
        }
        std::size_t roll = r.below(10);
        if (!fits.empty() && roll < 4) {
            const generator_decl* g = fits[r.below(fits.size())];
            pieces.push_back(gen(p, g->name));
            i += g->dom.size();
        } else if (roll < 5 && !too_wide) {
            pieces.push_back(copy_of(head));
            i += 1;
        } else if (roll < 6 && facs.size() > 1) {
            pieces.push_back(discard_of(head));
            i += 1;
        } else if (roll < 8 && i + 1 < facs.size()) {
            object_expr next = object_expr::from_factors({facs[i + 1]});
            pieces.push_back(symmetry(head, next));
            i += 2;
        } else {
            pieces.push_back(identity(head));
            i += 1;
        }
    }
    if (pieces.empty()) return identity(object_expr::unit());
    term acc = pieces[0];
    for (std::size_t k = 1; k < pieces.size(); ++k) acc = tensor(acc, pieces[k]);
    return acc;
}

}  // namespace

term random_term_with_dom(rng& r, const presentation& p, const object_expr& dom,
                          std::size_t layers) {
    term acc = identity(dom);
    for (std::size_t l = 0; l < layers; ++l) acc = compose(acc, random_layer(r, p, acc->cod));
    return acc;
}

term random_term(rng& r, const presentation& p, std::size_t layers) {
    std::vector<std::string> names(p.objects.begin(), p.objects.end());
    std::vector<object_expr> fs;
    std::size_t len = 1 + r.below(3);
    for (std::size_t i = 0; i < len; ++i)
        fs.push_back(object_expr::base(names[r.below(names.size())]));
    return random_term_with_dom(r, p, object_expr::product(fs), layers);
}

// -------- feedback plumbing --------

fbk_builder standard_feedback() {
    return [](const stream_morphism& body, const space_seq& state, state_mode mode) {
        return stream_feedback(body, state, mode);
    };
}

fbk_builder corrupted_feedback() {
    return [](const stream_morphism& body, const space_seq& state, state_mode mode) {
        space_seq suffix = (mode == state_mode::plain) ? state : space_seq::delay(state);
        space_seq bdom = body.dom();
        space_seq rest = space_seq::varying([bdom, suffix](std::size_t n) {
            return drop_space_suffix(bdom.at(n), suffix.at(n).size());
        });
        // one extra step of lag on the returning state wire
        stream_morphism lag = make_kernel(
            suffix, suffix,
            [](std::size_t n, const std::vector<value>& h) {
                return n == 0 ? value::star() : h[n - 1];
            },
            "lag");
        stream_morphism wrapped =
            stream_compose(stream_tensor(stream_identity(rest), lag), body);
        return stream_feedback(wrapped, state, mode);
    };
}

// -------- checking harness --------

namespace {

std::string describe_mismatch(const stream_mismatch& m) {
    std::string s = "step " + std::to_string(m.step) + "; inputs";
    for (const auto& v : m.inputs) s += " <" + v.str() + ">";
    s += "; lhs " + m.lhs.str() + "; rhs " + m.rhs.str();
    return s;
}

using instance_fn = std::function<std::pair<stream_morphism, stream_morphism>(rng&)>;

law_report run_law(const std::string& name, const law_options& opt, const instance_fn& make) {
    std::function<std::string(std::size_t)> body = [&](std::size_t i) -> std::string {
        rng r(hash_key(opt.seed, name + "#" + std::to_string(i)));
        try {
            auto [lhs, rhs] = make(r);
            auto bad = find_mismatch(lhs, rhs, opt.horizon, opt.samples, r.next_u64(), opt.tol);
            if (bad) return describe_mismatch(*bad);
        } catch (const cat_error& e) {
            return std::string("evaluation error: ") + e.what();
        }
        return {};
    };
    auto results = run_instances<std::string>(opt.instances, body, opt.parallel);
    law_report rep;
    rep.name = name;
    rep.instances = opt.instances;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].empty()) continue;
        if (rep.failures == 0)
            rep.counterexample = "instance " + std::to_string(i) + ": " + results[i];
        ++rep.failures;
    }
    return rep;
}

space_seq rand_seq(rng& r, std::size_t max_factors = 2) {
    return space_seq::constant(random_space(r, max_factors));
}

stream_morphism kernel_over(rng& r, const space_seq& dom, const space_seq& cod,
                            const law_options& opt, const std::string& name) {
    return random_table_kernel(r.next_u64(), dom, cod, opt.window, name);
}

}  // namespace

std::vector<law_report> check_feedback_axioms(const law_options& opt, const fbk_builder& fbk) {
    std::vector<law_report> out;
    auto sm = state_mode::delayed;

    out.push_back(run_law("tightening", opt, [&](rng& r) {
        space_seq x2 = rand_seq(r), x = rand_seq(r), y = rand_seq(r), y2 = rand_seq(r),
                  s = rand_seq(r);
        space_seq fs = space_seq::delay(s);
        auto u = kernel_over(r, x2, x, opt, "u");
        auto f = kernel_over(r, space_seq::product(x, fs), space_seq::product(y, s), opt, "f");
        auto v = kernel_over(r, y, y2, opt, "v");
        auto body = stream_compose(stream_compose(stream_tensor(u, stream_identity(fs)), f),
                                   stream_tensor(v, stream_identity(s)));
        auto lhs = fbk(body, s, sm);
        auto rhs = stream_compose(stream_compose(u, fbk(f, s, sm)), v);
        return std::pair(lhs, rhs);
    }));

    out.push_back(run_law("joining", opt, [&](rng& r) {
        space_seq x = rand_seq(r), y = rand_seq(r), s = rand_seq(r), t = rand_seq(r);
        space_seq st = space_seq::product(s, t);
        auto f = kernel_over(r, space_seq::product(x, space_seq::delay(st)),
                             space_seq::product(y, st), opt, "f");
        auto lhs = fbk(f, st, sm);
        auto rhs = fbk(fbk(f, t, sm), s, sm);
        return std::pair(lhs, rhs);
    }));

    out.push_back(run_law("vanishing", opt, [&](rng& r) {
        space_seq x = rand_seq(r), y = rand_seq(r);
        space_seq unit = space_seq::constant(value_space::singleton());
        auto f = kernel_over(r, x, y, opt, "f");
        auto lhs = fbk(f, unit, sm);
        return std::pair(lhs, f);
    }));

    out.push_back(run_law("strength", opt, [&](rng& r) {
        space_seq z = rand_seq(r), w = rand_seq(r), x = rand_seq(r), y = rand_seq(r),
                  s = rand_seq(r);
        auto g = kernel_over(r, z, w, opt, "g");
        auto f = kernel_over(r, space_seq::product(x, space_seq::delay(s)),
                             space_seq::product(y, s), opt, "f");
        auto lhs = stream_tensor(g, fbk(f, s, sm));
        auto rhs = fbk(stream_tensor(g, f), s, sm);
        return std::pair(lhs, rhs);
    }));

    out.push_back(run_law("sliding", opt, [&](rng& r) {
        space_seq x = rand_seq(r), y = rand_seq(r), s = rand_seq(r), t = rand_seq(r);
        auto f = kernel_over(r, space_seq::product(x, space_seq::delay(s)),
                             space_seq::product(y, t), opt, "f");
        auto g = kernel_over(r, t, s, opt, "g");
        auto lhs = fbk(stream_compose(f, stream_tensor(stream_identity(y), g)), s, sm);
        auto rhs = fbk(
            stream_compose(stream_tensor(stream_identity(x), delay_morphism(g)), f), t, sm);
        return std::pair(lhs, rhs);
    }));

    return out;
}

std::vector<law_report> check_stream_laws(const law_options& opt) {
    std::vector<law_report> out;

    out.push_back(run_law("compose-assoc", opt, [&](rng& r) {
        space_seq a = rand_seq(r), b = rand_seq(r), c = rand_seq(r), d = rand_seq(r);
        auto f = kernel_over(r, a, b, opt, "f");
        auto g = kernel_over(r, b, c, opt, "g");
        auto h = kernel_over(r, c, d, opt, "h");
        return std::pair(stream_compose(stream_compose(f, g), h),
                         stream_compose(f, stream_compose(g, h)));
    }));

    out.push_back(run_law("compose-unit", opt, [&](rng& r) {
        space_seq a = rand_seq(r), b = rand_seq(r);
        auto f = kernel_over(r, a, b, opt, "f");
        return std::pair(stream_compose(stream_identity(a), stream_compose(f, stream_identity(b))),
                         f);
    }));

    out.push_back(run_law("interchange", opt, [&](rng& r) {
        space_seq a = rand_seq(r), b = rand_seq(r), c = rand_seq(r);
        space_seq a2 = rand_seq(r), b2 = rand_seq(r), c2 = rand_seq(r);
        auto f = kernel_over(r, a, b, opt, "f");
        auto g = kernel_over(r, b, c, opt, "g");
        auto f2 = kernel_over(r, a2, b2, opt, "f2");
        auto g2 = kernel_over(r, b2, c2, opt, "g2");
        return std::pair(stream_compose(stream_tensor(f, f2), stream_tensor(g, g2)),
                         stream_tensor(stream_compose(f, g), stream_compose(f2, g2)));
    }));

    out.push_back(run_law("sym-involution", opt, [&](rng& r) {
        space_seq a = rand_seq(r), b = rand_seq(r);
        return std::pair(stream_compose(stream_symmetry(a, b), stream_symmetry(b, a)),
                         stream_identity(space_seq::product(a, b)));
    }));

    out.push_back(run_law("sym-natural", opt, [&](rng& r) {
        space_seq a = rand_seq(r), b = rand_seq(r), a2 = rand_seq(r), b2 = rand_seq(r);
        auto f = kernel_over(r, a, b, opt, "f");
        auto g = kernel_over(r, a2, b2, opt, "g");
        return std::pair(stream_compose(stream_tensor(f, g), stream_symmetry(b, b2)),
                         stream_compose(stream_symmetry(a, a2), stream_tensor(g, f)));
    }));

    out.push_back(run_law("copy-coassoc", opt, [&](rng& r) {
        space_seq a = rand_seq(r);
        auto c = stream_copy(a);
        return std::pair(stream_compose(c, stream_tensor(c, stream_identity(a))),
                         stream_compose(c, stream_tensor(stream_identity(a), c)));
    }));

    out.push_back(run_law("copy-counit", opt, [&](rng& r) {
        space_seq a = rand_seq(r);
        return std::pair(
            stream_compose(stream_copy(a), stream_tensor(stream_discard(a), stream_identity(a))),
            stream_identity(a));
    }));

    out.push_back(run_law("copy-commutative", opt, [&](rng& r) {
        space_seq a = rand_seq(r);
        return std::pair(stream_compose(stream_copy(a), stream_symmetry(a, a)), stream_copy(a));
    }));

    out.push_back(run_law("copy-natural", opt, [&](rng& r) {
        space_seq a = rand_seq(r), b = rand_seq(r);
        auto f = kernel_over(r, a, b, opt, "f");
        return std::pair(stream_compose(f, stream_copy(b)),
                         stream_compose(stream_copy(a), stream_tensor(f, f)));
    }));

    out.push_back(run_law("discard-natural", opt, [&](rng& r) {
        space_seq a = rand_seq(r), b = rand_seq(r);
        auto f = kernel_over(r, a, b, opt, "f");
        return std::pair(stream_compose(f, stream_discard(b)), stream_discard(a));
    }));

    return out;
}

namespace {

using term_instance_fn = std::function<std::pair<term, term>(rng&)>;

law_report run_term_law(const std::string& name, const law_options& opt,
                        const term_instance_fn& make) {
    std::function<std::string(std::size_t)> body = [&](std::size_t i) -> std::string {
        rng r(hash_key(opt.seed, name + "#" + std::to_string(i)));
        try {
            auto [lhs, rhs] = make(r);
            if (!diagrams_equal(normalize(lhs), normalize(rhs)))
                return "lhs " + lhs->str() + "; rhs " + rhs->str();
        } catch (const cat_error& e) {
            return std::string("error: ") + e.what();
        }
        return {};
    };
    auto results = run_instances<std::string>(opt.instances, body, opt.parallel);
    law_report rep;
    rep.name = name;
    rep.instances = opt.instances;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].empty()) continue;
        if (rep.failures == 0)
            rep.counterexample = "instance " + std::to_string(i) + ": " + results[i];
        ++rep.failures;
    }
    return rep;
}

object_expr random_obj_over(rng& r, const presentation& p, std::size_t max_len) {
    std::vector<std::string> names(p.objects.begin(), p.objects.end());
    std::vector<object_expr> fs;
    std::size_t len = r.below(max_len + 1);
    for (std::size_t i = 0; i < len; ++i)
        fs.push_back(object_expr::base(names[r.below(names.size())]));
    return object_expr::product(fs);
}

}  // namespace

std::vector<law_report> check_diagram_laws(const law_options& opt) {
    std::vector<law_report> out;
    // a fixed signature for all instances keeps the generator pool stable
    rng pr(hash_key(opt.seed, "diagram-presentation"));
    presentation p = random_presentation(pr, 3, 5);

    out.push_back(run_term_law("term-compose-assoc", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        term g = random_term_with_dom(r, p, f->cod, 2);
        term h = random_term_with_dom(r, p, g->cod, 2);
        return std::pair(compose(compose(f, g), h), compose(f, compose(g, h)));
    }));

    out.push_back(run_term_law("term-compose-unit", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        return std::pair(compose(identity(f->dom), compose(f, identity(f->cod))), f);
    }));

    out.push_back(run_term_law("term-interchange", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        term g = random_term_with_dom(r, p, f->cod, 2);
        term f2 = random_term(r, p, 2);
        term g2 = random_term_with_dom(r, p, f2->cod, 2);
        return std::pair(compose(tensor(f, f2), tensor(g, g2)),
                         tensor(compose(f, g), compose(f2, g2)));
    }));

    out.push_back(run_term_law("term-sym-involution", opt, [&](rng& r) {
        object_expr a = random_obj_over(r, p, 2), b = random_obj_over(r, p, 2);
        return std::pair(compose(symmetry(a, b), symmetry(b, a)),
                         identity(object_expr::product(a, b)));
    }));

    out.push_back(run_term_law("term-sym-natural", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        term g = random_term(r, p, 2);
        return std::pair(compose(tensor(f, g), symmetry(f->cod, g->cod)),
                         compose(symmetry(f->dom, g->dom), tensor(g, f)));
    }));

    out.push_back(run_term_law("term-copy-coassoc", opt, [&](rng& r) {
        object_expr a = random_obj_over(r, p, 2);
        return std::pair(compose(copy_of(a), tensor(copy_of(a), identity(a))),
                         compose(copy_of(a), tensor(identity(a), copy_of(a))));
    }));

    out.push_back(run_term_law("term-copy-counit", opt, [&](rng& r) {
        object_expr a = random_obj_over(r, p, 2);
        return std::pair(compose(copy_of(a), tensor(discard_of(a), identity(a))), identity(a));
    }));

    out.push_back(run_term_law("term-copy-commutative", opt, [&](rng& r) {
        object_expr a = random_obj_over(r, p, 2);
        return std::pair(compose(copy_of(a), symmetry(a, a)), copy_of(a));
    }));

    out.push_back(run_term_law("term-copy-natural", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        return std::pair(compose(f, copy_of(f->cod)),
                         compose(copy_of(f->dom), tensor(f, f)));
    }));

    out.push_back(run_term_law("term-discard-natural", opt, [&](rng& r) {
        term f = random_term(r, p, 2);
        return std::pair(compose(f, discard_of(f->cod)), discard_of(f->dom));
    }));

    return out;
}

std::string format_reports(const std::vector<law_report>& reports) {
    std::string s;
    for (const auto& rep : reports) {
        s += rep.name + ": " + (rep.passed() ? "ok" : "FAIL") + " (" +
             std::to_string(rep.instances - rep.failures) + "/" + std::to_string(rep.instances) +
             " instances)\n";
        if (!rep.passed()) s += "  counterexample: " + rep.counterexample + "\n";
    }
    return s;
}

bool all_passed(const std::vector<law_report>& reports) {
    for (const auto& rep : reports)
        if (!rep.passed()) return false;
    return true;
}

}  // namespace catstream
