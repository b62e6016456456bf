#include "catstream/institution.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <functional>
#include <sstream>

#include "catstream/errors.hpp"
#include "catstream/parallel.hpp"

namespace catstream {

signature make_propositional_signature(std::vector<std::string> props) {
    signature s;
    s.kind = institution_kind::propositional;
    s.symbols = std::move(props);
    return s;
}

signature make_relevance_signature(std::string predicate, std::vector<std::string> constants) {
    if (constants.empty())
        throw signature_mismatch_error("a relevance signature needs at least one constant");
    signature s;
    s.kind = institution_kind::unary_relevance;
    s.symbols = std::move(constants);
    s.predicate = std::move(predicate);
    return s;
}

sentence atom(const std::string& prop) {
    auto n = std::make_shared<sentence_node>();
    n->kind = sentence_kind::atom;
    n->name = prop;
    return n;
}

sentence pred_app(const std::string& pred, const std::string& constant) {
    auto n = std::make_shared<sentence_node>();
    n->kind = sentence_kind::pred_app;
    n->name = constant;
    n->pred = pred;
    return n;
}

namespace {
sentence binary(sentence_kind k, const sentence& a, const sentence& b) {
    auto n = std::make_shared<sentence_node>();
    n->kind = k;
    n->a = a;
    n->b = b;
    return n;
}
}  // namespace

sentence neg(const sentence& s) {
    auto n = std::make_shared<sentence_node>();
    n->kind = sentence_kind::neg;
    n->a = s;
    return n;
}
sentence conj(const sentence& a, const sentence& b) { return binary(sentence_kind::conj, a, b); }
sentence disj(const sentence& a, const sentence& b) { return binary(sentence_kind::disj, a, b); }
sentence impl(const sentence& a, const sentence& b) { return binary(sentence_kind::impl, a, b); }

bool sentence_equal(const sentence& a, const sentence& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind || a->name != b->name || a->pred != b->pred) return false;
    return sentence_equal(a->a, b->a) && sentence_equal(a->b, b->b);
}

namespace {

// precedence: -> 1 (right assoc), | 2, & 3, ! 4
int prec_of(sentence_kind k) {
    switch (k) {
        case sentence_kind::impl: return 1;
        case sentence_kind::disj: return 2;
        case sentence_kind::conj: return 3;
        case sentence_kind::neg: return 4;
        default: return 5;
    }
}

// `context` is the minimum precedence printable without parentheses here;
// -> is right-associative, & and | left-associative, so the tight side gets
// context p+1 and the loose side p
void print_rec(const sentence& s, int context, std::string& out) {
    int p = prec_of(s->kind);
    switch (s->kind) {
        case sentence_kind::atom: out += s->name; return;
        case sentence_kind::pred_app: out += s->pred + "(" + s->name + ")"; return;
        case sentence_kind::neg:
            out += "!";
            print_rec(s->a, p, out);
            return;
        default: break;
    }
    bool wrap = p < context;
    if (wrap) out += "(";
    const char* op = s->kind == sentence_kind::impl ? " -> "
                     : s->kind == sentence_kind::disj ? " | "
                                                      : " & ";
    bool right_assoc = s->kind == sentence_kind::impl;
    print_rec(s->a, right_assoc ? p + 1 : p, out);
    out += op;
    print_rec(s->b, right_assoc ? p : p + 1, out);
    if (wrap) out += ")";
}

}  // namespace

std::string sentence_str(const sentence& s) {
    std::string out;
    print_rec(s, 0, out);
    return out;
}

namespace {

struct sentence_parser {
    const signature& sig;
    const std::string& text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw malformed_sentence_error(msg + " at position " + std::to_string(pos));
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(const std::string& tok) {
        skip_ws();
        if (text.compare(pos, tok.size(), tok) == 0) {
            pos += tok.size();
            return true;
        }
        return false;
    }

    bool peek(char c) {
        skip_ws();
        return pos < text.size() && text[pos] == c;
    }

    std::string name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                text[pos] == '*' || text[pos] == '\''))
            ++pos;
        if (start == pos) fail("expected a name");
        return text.substr(start, pos - start);
    }

    sentence parse_impl() {
        sentence lhs = parse_disj();
        if (eat("->")) return impl(lhs, parse_impl());
        return lhs;
    }

    sentence parse_disj() {
        sentence lhs = parse_conj();
        while (true) {
            skip_ws();
            // careful not to eat the | of nothing or the - of ->
            if (pos < text.size() && text[pos] == '|') {
                ++pos;
                lhs = disj(lhs, parse_conj());
            } else {
                return lhs;
            }
        }
    }

    sentence parse_conj() {
        sentence lhs = parse_unary();
        while (eat("&")) lhs = conj(lhs, parse_unary());
        return lhs;
    }

    sentence parse_unary() {
        if (eat("!")) return neg(parse_unary());
        if (eat("(")) {
            sentence s = parse_impl();
            if (!eat(")")) fail("expected )");
            return s;
        }
        std::string n = name();
        if (peek('(')) {
            eat("(");
            std::string c = name();
            if (!eat(")")) fail("expected )");
            return pred_app(n, c);
        }
        return atom(n);
    }

    sentence run() {
        sentence s = parse_impl();
        skip_ws();
        if (pos != text.size()) fail("trailing input");
        check_sentence(sig, s);
        return s;
    }
};

}  // namespace

sentence parse_sentence(const signature& sig, const std::string& text) {
    sentence_parser p{sig, text};
    return p.run();
}

void check_sentence(const signature& sig, const sentence& s) {
    if (!s) throw malformed_sentence_error("empty sentence");
    switch (s->kind) {
        case sentence_kind::atom:
            if (sig.kind != institution_kind::propositional)
                throw malformed_sentence_error("bare atom '" + s->name +
                                               "' in a relevance signature");
            if (std::find(sig.symbols.begin(), sig.symbols.end(), s->name) == sig.symbols.end())
                throw malformed_sentence_error("unknown proposition '" + s->name + "'");
            return;
        case sentence_kind::pred_app:
            if (sig.kind != institution_kind::unary_relevance)
                throw malformed_sentence_error("predicate application '" + s->pred +
                                               "(...)' in a propositional signature");
            if (s->pred != sig.predicate)
                throw malformed_sentence_error("unknown predicate '" + s->pred + "'");
            if (std::find(sig.symbols.begin(), sig.symbols.end(), s->name) == sig.symbols.end())
                throw malformed_sentence_error("unknown constant '" + s->name + "'");
            return;
        case sentence_kind::neg: check_sentence(sig, s->a); return;
        default:
            check_sentence(sig, s->a);
            check_sentence(sig, s->b);
            return;
    }
}

semantic_model make_propositional_model(const signature& sig, std::map<std::string, bool> val) {
    for (const auto& p : sig.symbols)
        if (!val.count(p)) throw malformed_model_error("no valuation for '" + p + "'");
    semantic_model m;
    m.kind = institution_kind::propositional;
    m.valuation = std::move(val);
    return m;
}

semantic_model make_relevance_model(const signature& sig, std::map<std::string, double> degrees,
                                    double tau) {
    for (const auto& c : sig.symbols) {
        auto it = degrees.find(c);
        if (it == degrees.end()) throw malformed_model_error("no degree for '" + c + "'");
        if (it->second < 0.0 || it->second > 1.0)
            throw malformed_model_error("degree of '" + c + "' outside [0,1]");
    }
    semantic_model m;
    m.kind = institution_kind::unary_relevance;
    m.degrees = std::move(degrees);
    m.tau = tau;
    return m;
}

semantic_model parse_model(const signature& sig, const std::string& text) {
    std::map<std::string, bool> val;
    std::map<std::string, double> degrees;
    double tau = 0.5;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::size_t eq = line.find('=');
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (blank) continue;
        if (eq == std::string::npos)
            throw malformed_model_error("expected name = value on line " +
                                        std::to_string(lineno));
        auto trim = [](std::string s) {
            std::size_t a = s.find_first_not_of(" \t\r");
            std::size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string v = trim(line.substr(eq + 1));
        if (key == "tau") {
            try {
                tau = std::stod(v);
            } catch (const std::exception&) {
                throw malformed_model_error("bad tau on line " + std::to_string(lineno));
            }
            continue;
        }
        if (sig.kind == institution_kind::propositional) {
            if (v == "true" || v == "1") val[key] = true;
            else if (v == "false" || v == "0") val[key] = false;
            else
                throw malformed_model_error("bad truth value '" + v + "' on line " +
                                            std::to_string(lineno));
        } else {
            try {
                degrees[key] = std::stod(v);
            } catch (const std::exception&) {
                throw malformed_model_error("bad degree '" + v + "' on line " +
                                            std::to_string(lineno));
            }
        }
    }
    if (sig.kind == institution_kind::propositional) return make_propositional_model(sig, val);
    return make_relevance_model(sig, degrees, tau);
}

std::string model_str(const semantic_model& m) {
    std::string s;
    char buf[32];
    if (m.kind == institution_kind::propositional) {
        for (const auto& [k, v] : m.valuation) s += k + " = " + (v ? "true" : "false") + "\n";
    } else {
        for (const auto& [k, v] : m.degrees) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            s += k + " = " + buf + "\n";
        }
        std::snprintf(buf, sizeof buf, "%.17g", m.tau);
        s += std::string("tau = ") + buf + "\n";
    }
    return s;
}

bool satisfies(const signature& sig, const semantic_model& m, const sentence& s) {
    if (m.kind != sig.kind) throw malformed_model_error("model kind does not match signature");
    switch (s->kind) {
        case sentence_kind::atom: {
            check_sentence(sig, s);
            return m.valuation.at(s->name);
        }
        case sentence_kind::pred_app: {
            check_sentence(sig, s);
            return m.degrees.at(s->name) >= m.tau;
        }
        case sentence_kind::neg: return !satisfies(sig, m, s->a);
        case sentence_kind::conj: return satisfies(sig, m, s->a) && satisfies(sig, m, s->b);
        case sentence_kind::disj: return satisfies(sig, m, s->a) || satisfies(sig, m, s->b);
        case sentence_kind::impl: return !satisfies(sig, m, s->a) || satisfies(sig, m, s->b);
    }
    return false;
}

signature_morphism make_signature_morphism(const signature& from, const signature& to,
                                           std::map<std::string, std::string> symbol_map) {
    if (from.kind != to.kind)
        throw signature_mismatch_error("signature morphisms stay within one institution");
    std::map<std::string, int> hits;
    for (const auto& s : from.symbols) {
        auto it = symbol_map.find(s);
        if (it == symbol_map.end())
            throw signature_mismatch_error("symbol '" + s + "' is not mapped");
        if (std::find(to.symbols.begin(), to.symbols.end(), it->second) == to.symbols.end())
            throw signature_mismatch_error("symbol '" + s + "' maps to unknown '" + it->second +
                                           "'");
        if (++hits[it->second] > 1)
            throw non_injective_morphism_error("two symbols map to '" + it->second + "'");
    }
    if (from.kind == institution_kind::unary_relevance) {
        // the single unary predicate maps to the single unary predicate;
        // nothing else has the right arity
        auto it = symbol_map.find(from.predicate);
        if (it != symbol_map.end() && it->second != to.predicate)
            throw arity_mismatch_error("predicate '" + from.predicate +
                                       "' must map to a unary predicate");
    }
    return signature_morphism{from, to, std::move(symbol_map)};
}

signature_morphism identity_morphism(const signature& sig) {
    std::map<std::string, std::string> m;
    for (const auto& s : sig.symbols) m[s] = s;
    return make_signature_morphism(sig, sig, std::move(m));
}

signature_morphism compose_morphisms(const signature_morphism& f, const signature_morphism& g) {
    if (!(f.to == g.from))
        throw signature_mismatch_error("morphisms do not compose: middle signatures differ");
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : f.symbol_map) m[k] = g.symbol_map.at(v);
    return make_signature_morphism(f.from, g.to, std::move(m));
}

sentence translate_sentence(const signature_morphism& rho, const sentence& s) {
    check_sentence(rho.from, s);
    std::function<sentence(const sentence&)> go = [&](const sentence& t) -> sentence {
        switch (t->kind) {
            case sentence_kind::atom: return atom(rho.symbol_map.at(t->name));
            case sentence_kind::pred_app:
                return pred_app(rho.to.predicate, rho.symbol_map.at(t->name));
            case sentence_kind::neg: return neg(go(t->a));
            case sentence_kind::conj: return conj(go(t->a), go(t->b));
            case sentence_kind::disj: return disj(go(t->a), go(t->b));
            case sentence_kind::impl: return impl(go(t->a), go(t->b));
        }
        throw malformed_sentence_error("unreachable");
    };
    return go(s);
}

semantic_model reduct_model(const signature_morphism& rho, const semantic_model& m) {
    if (m.kind != rho.to.kind) throw malformed_model_error("model does not live over the target");
    semantic_model out;
    out.kind = rho.from.kind;
    out.tau = m.tau;
    for (const auto& s : rho.from.symbols) {
        const std::string& img = rho.symbol_map.at(s);
        if (out.kind == institution_kind::propositional) out.valuation[s] = m.valuation.at(img);
        else out.degrees[s] = m.degrees.at(img);
    }
    return out;
}

sentence random_sentence(rng& r, const signature& sig, std::size_t depth) {
    if (depth == 0 || r.below(4) == 0) {
        const std::string& s = sig.symbols[r.below(sig.symbols.size())];
        if (sig.kind == institution_kind::propositional) return atom(s);
        return pred_app(sig.predicate, s);
    }
    switch (r.below(4)) {
        case 0: return neg(random_sentence(r, sig, depth - 1));
        case 1:
            return conj(random_sentence(r, sig, depth - 1), random_sentence(r, sig, depth - 1));
        case 2:
            return disj(random_sentence(r, sig, depth - 1), random_sentence(r, sig, depth - 1));
        default:
            return impl(random_sentence(r, sig, depth - 1), random_sentence(r, sig, depth - 1));
    }
}

semantic_model random_model(rng& r, const signature& sig) {
    semantic_model m;
    m.kind = sig.kind;
    if (sig.kind == institution_kind::propositional) {
        for (const auto& s : sig.symbols) m.valuation[s] = r.coin();
    } else {
        for (const auto& s : sig.symbols) m.degrees[s] = r.uniform01();
        m.tau = 0.2 + 0.6 * r.uniform01();
    }
    return m;
}

law_report check_satisfaction_random(const signature_morphism& rho,
                                     const satisfaction_options& opt) {
    std::function<std::string(std::size_t)> body = [&](std::size_t i) -> std::string {
        rng r(hash_key(opt.seed, "satisfaction#" + std::to_string(i)));
        semantic_model m = random_model(r, rho.to);
        sentence e = random_sentence(r, rho.from, opt.sentence_depth);
        bool direct = satisfies(rho.to, m, translate_sentence(rho, e));
        bool reduced = satisfies(rho.from, reduct_model(rho, m), e);
        if (direct != reduced)
            return "sentence " + sentence_str(e) + "; model " + model_str(m);
        return {};
    };
    auto results = run_instances<std::string>(opt.random_instances, body, opt.parallel);
    law_report rep;
    rep.name = "satisfaction-random";
    rep.instances = opt.random_instances;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].empty()) continue;
        if (rep.failures == 0)
            rep.counterexample = "instance " + std::to_string(i) + ": " + results[i];
        ++rep.failures;
    }
    return rep;
}

std::vector<sentence> enumerate_sentences(const signature& sig) {
    std::vector<sentence> d0;
    for (const auto& s : sig.symbols)
        d0.push_back(sig.kind == institution_kind::propositional ? atom(s)
                                                                 : pred_app(sig.predicate, s));
    auto close = [](const std::vector<sentence>& base) {
        std::vector<sentence> out = base;
        for (const auto& s : base) out.push_back(neg(s));
        for (const auto& a : base)
            for (const auto& b : base) {
                out.push_back(conj(a, b));
                out.push_back(disj(a, b));
                out.push_back(impl(a, b));
            }
        return out;
    };
    return close(close(d0));
}

namespace {

// all boolean assignments to the target symbols, realized as models; a
// relevance model plants degrees on either side of its threshold, which is
// exhaustive for satisfaction because only the comparison outcome matters
std::vector<semantic_model> enumerate_models(const signature& sig) {
    std::vector<semantic_model> out;
    std::size_t k = sig.symbols.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << k); ++bits) {
        semantic_model m;
        m.kind = sig.kind;
        m.tau = 0.5;
        for (std::size_t i = 0; i < k; ++i) {
            bool on = (bits >> i) & 1;
            if (sig.kind == institution_kind::propositional) m.valuation[sig.symbols[i]] = on;
            else m.degrees[sig.symbols[i]] = on ? 0.7 : 0.3;
        }
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace

law_report check_satisfaction_exhaustive(const signature_morphism& rho) {
    law_report rep;
    rep.name = "satisfaction-exhaustive";
    std::vector<sentence> sentences = enumerate_sentences(rho.from);
    std::vector<semantic_model> models = enumerate_models(rho.to);
    for (const auto& m : models) {
        for (const auto& e : sentences) {
            ++rep.instances;
            bool direct = satisfies(rho.to, m, translate_sentence(rho, e));
            bool reduced = satisfies(rho.from, reduct_model(rho, m), e);
            if (direct != reduced) {
                if (rep.failures == 0)
                    rep.counterexample = "sentence " + sentence_str(e) + "; model " + model_str(m);
                ++rep.failures;
            }
        }
    }
    return rep;
}

std::vector<law_report> check_functoriality(const signature_morphism& f,
                                            const signature_morphism& g,
                                            const satisfaction_options& opt) {
    signature_morphism gf = compose_morphisms(f, g);
    signature_morphism idf = identity_morphism(f.from);

    auto run = [&](const std::string& name,
                   const std::function<std::string(rng&)>& one) -> law_report {
        std::function<std::string(std::size_t)> body = [&](std::size_t i) -> std::string {
            rng r(hash_key(opt.seed, name + "#" + std::to_string(i)));
            return one(r);
        };
        auto results = run_instances<std::string>(opt.random_instances, body, opt.parallel);
        law_report rep;
        rep.name = name;
        rep.instances = opt.random_instances;
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i].empty()) continue;
            if (rep.failures == 0)
                rep.counterexample = "instance " + std::to_string(i) + ": " + results[i];
            ++rep.failures;
        }
        return rep;
    };

    std::vector<law_report> out;
    out.push_back(run("sen-identity", [&](rng& r) -> std::string {
        sentence e = random_sentence(r, f.from, opt.sentence_depth);
        if (!sentence_equal(translate_sentence(idf, e), e)) return sentence_str(e);
        return {};
    }));
    out.push_back(run("sen-compose", [&](rng& r) -> std::string {
        sentence e = random_sentence(r, f.from, opt.sentence_depth);
        sentence lhs = translate_sentence(gf, e);
        sentence rhs = translate_sentence(g, translate_sentence(f, e));
        if (!sentence_equal(lhs, rhs)) return sentence_str(e);
        return {};
    }));
    out.push_back(run("mod-identity", [&](rng& r) -> std::string {
        semantic_model m = random_model(r, f.from);
        semantic_model back = reduct_model(idf, m);
        if (model_str(back) != model_str(m)) return model_str(m);
        return {};
    }));
    out.push_back(run("mod-compose", [&](rng& r) -> std::string {
        semantic_model m = random_model(r, g.to);
        semantic_model lhs = reduct_model(gf, m);
        semantic_model rhs = reduct_model(f, reduct_model(g, m));
        if (model_str(lhs) != model_str(rhs)) return model_str(m);
        return {};
    }));
    return out;
}

sentence saliency_sentence(const signature& sig, const std::vector<double>& degrees, double tau) {
    if (sig.kind != institution_kind::unary_relevance)
        throw signature_mismatch_error("saliency readout needs a relevance signature");
    if (degrees.size() != sig.symbols.size())
        throw malformed_model_error("one degree per feature expected");
    sentence acc;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        if (degrees[i] < tau) continue;
        sentence lit = pred_app(sig.predicate, sig.symbols[i]);
        acc = acc ? conj(acc, lit) : lit;
    }
    if (!acc) {
        // nothing relevant: the designated tautology over the first feature
        sentence lit = pred_app(sig.predicate, sig.symbols[0]);
        acc = impl(lit, lit);
    }
    return acc;
}

semantic_model saliency_model(const signature& sig, const std::vector<double>& degrees,
                              double tau) {
    if (degrees.size() != sig.symbols.size())
        throw malformed_model_error("one degree per feature expected");
    std::map<std::string, double> d;
    for (std::size_t i = 0; i < degrees.size(); ++i) d[sig.symbols[i]] = degrees[i];
    return make_relevance_model(sig, std::move(d), tau);
}

expressive_equivalence make_equivalence(const signature& prop_sig, const signature& rel_sig) {
    if (prop_sig.kind != institution_kind::propositional ||
        rel_sig.kind != institution_kind::unary_relevance)
        throw not_comparable_error("expected one propositional and one relevance signature");
    if (prop_sig.symbols.size() != rel_sig.symbols.size())
        throw not_comparable_error("signatures have different sizes");
    return expressive_equivalence{prop_sig, rel_sig};
}

namespace {

std::size_t index_of(const std::vector<std::string>& v, const std::string& s) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] == s) return i;
    throw malformed_sentence_error("unknown symbol '" + s + "'");
}

}  // namespace

sentence to_propositional(const expressive_equivalence& eq, const sentence& s) {
    check_sentence(eq.rel_sig, s);
    std::function<sentence(const sentence&)> go = [&](const sentence& t) -> sentence {
        switch (t->kind) {
            case sentence_kind::pred_app:
                return atom(eq.prop_sig.symbols[index_of(eq.rel_sig.symbols, t->name)]);
            case sentence_kind::neg: return neg(go(t->a));
            case sentence_kind::conj: return conj(go(t->a), go(t->b));
            case sentence_kind::disj: return disj(go(t->a), go(t->b));
            case sentence_kind::impl: return impl(go(t->a), go(t->b));
            default: throw malformed_sentence_error("unreachable");
        }
    };
    return go(s);
}

sentence to_relevance(const expressive_equivalence& eq, const sentence& s) {
    check_sentence(eq.prop_sig, s);
    std::function<sentence(const sentence&)> go = [&](const sentence& t) -> sentence {
        switch (t->kind) {
            case sentence_kind::atom:
                return pred_app(eq.rel_sig.predicate,
                                eq.rel_sig.symbols[index_of(eq.prop_sig.symbols, t->name)]);
            case sentence_kind::neg: return neg(go(t->a));
            case sentence_kind::conj: return conj(go(t->a), go(t->b));
            case sentence_kind::disj: return disj(go(t->a), go(t->b));
            case sentence_kind::impl: return impl(go(t->a), go(t->b));
            default: throw malformed_sentence_error("unreachable");
        }
    };
    return go(s);
}

semantic_model model_to_propositional(const expressive_equivalence& eq, const semantic_model& m) {
    semantic_model out;
    out.kind = institution_kind::propositional;
    for (std::size_t i = 0; i < eq.rel_sig.symbols.size(); ++i)
        out.valuation[eq.prop_sig.symbols[i]] = m.degrees.at(eq.rel_sig.symbols[i]) >= m.tau;
    return out;
}

semantic_model model_to_relevance(const expressive_equivalence& eq, const semantic_model& m) {
    semantic_model out;
    out.kind = institution_kind::unary_relevance;
    out.tau = 0.5;
    for (std::size_t i = 0; i < eq.prop_sig.symbols.size(); ++i)
        out.degrees[eq.rel_sig.symbols[i]] =
            m.valuation.at(eq.prop_sig.symbols[i]) ? 0.7 : 0.3;
    return out;
}

}  // namespace catstream
