#include "catstream/spec_file.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "catstream/errors.hpp"
#include "catstream/laws.hpp"
#include "catstream/term_parser.hpp"

namespace catstream {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

// errors from sub-parsers carry positions relative to the right-hand side;
// strip the appended " at l:c" and re-anchor at the spec line
std::string strip_pos(const std::string& w) {
    std::size_t p = w.rfind(" at ");
    if (p == std::string::npos) return w;
    for (std::size_t i = p + 4; i < w.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(w[i])) && w[i] != ':') return w;
    return w.substr(0, p);
}

[[noreturn]] void fail(const std::string& msg, std::size_t line, std::size_t col = 1) {
    throw parse_error(msg, static_cast<int>(line), static_cast<int>(col));
}

template <typename F>
auto at_line(std::size_t line, F&& f) {
    try {
        return f();
    } catch (const parse_error& e) {
        fail(strip_pos(e.what()), line, static_cast<std::size_t>(e.col));
    } catch (const cat_error& e) {
        fail(e.what(), line);
    }
}

double parse_num(const std::string& s, std::size_t line) {
    const std::string t = trim(s);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size()) fail("bad number '" + s + "'", line);
    return v;
}

std::size_t parse_uint(const std::string& s, std::size_t line) {
    double v = parse_num(s, line);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
        fail("expected a non-negative integer, got '" + s + "'", line);
    return static_cast<std::size_t>(v);
}

// splits on commas that are not nested inside [] or {}
std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[' || c == '{') ++depth;
        if (c == ']' || c == '}') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

// ----------------------------------------------------------- space syntax ---

struct space_scanner {
    const std::string& s;
    std::size_t line;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool word_at(const char* lit) {
        std::size_t n = std::string(lit).size();
        if (s.compare(i, n, lit) != 0) return false;
        char after = i + n < s.size() ? s[i + n] : ' ';
        return !(std::isalnum(static_cast<unsigned char>(after)) || after == '_');
    }
    std::size_t read_dim() {
        std::size_t j = i;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
        if (j == i) fail("expected a dimension", line, i + 1);
        std::size_t v = static_cast<std::size_t>(std::strtoull(s.substr(i, j - i).c_str(), nullptr, 10));
        i = j;
        return v;
    }

    value_space part() {
        skip_ws();
        if (i >= s.size()) fail("expected a space", line, i + 1);
        if (word_at("unit") ) {
            i += 4;
            return value_space::singleton();
        }
        if (word_at("I")) {
            i += 1;
            return value_space::singleton();
        }
        if (s.compare(i, 2, "R^") == 0) {
            i += 2;
            return value_space::real_vector(read_dim());
        }
        if (s.compare(i, 6, "[0,1]^") == 0) {
            i += 6;
            return value_space::real_vector(read_dim(), true);
        }
        if (s.compare(i, 5, "enum{") == 0) {
            i += 5;
            std::size_t close = s.find('}', i);
            if (close == std::string::npos) fail("unterminated enum", line, i + 1);
            std::vector<std::string> names;
            for (const std::string& n : split_args(s.substr(i, close - i)))
                if (!n.empty()) names.push_back(n);
            if (names.empty()) fail("enum needs at least one element", line, i + 1);
            i = close + 1;
            return value_space::finite_enum(std::move(names));
        }
        fail("unrecognized space syntax", line, i + 1);
    }

    value_space parse() {
        value_space v = part();
        while (true) {
            skip_ws();
            if (i < s.size() && s[i] == 'x' && word_at("x")) {
                i += 1;
                v = value_space::product({v, part()});
                continue;
            }
            break;
        }
        skip_ws();
        if (i < s.size()) fail("trailing input after space", line, i + 1);
        return v;
    }
};

// --------------------------------------------------------- recipe parsing ---

generator_recipe parse_recipe(const std::string& rhs, std::size_t line) {
    std::size_t open = rhs.find('(');
    std::string head = trim(open == std::string::npos ? rhs : rhs.substr(0, open));
    std::string inner;
    if (open != std::string::npos) {
        std::size_t close = rhs.rfind(')');
        if (close == std::string::npos || close < open)
            fail("unbalanced parentheses in recipe", line);
        inner = rhs.substr(open + 1, close - open - 1);
        if (!trim(rhs.substr(close + 1)).empty()) fail("trailing input after recipe", line);
    }

    generator_recipe r;
    std::map<std::string, std::string> kv;
    for (const std::string& a : split_args(inner)) {
        std::size_t eq = a.find('=');
        if (eq == std::string::npos) fail("recipe argument '" + a + "' is not key=value", line);
        kv[trim(a.substr(0, eq))] = trim(a.substr(eq + 1));
    }
    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };
    auto take_loss = [&](loss_kind& into) {
        if (auto v = take("loss")) {
            if (*v == "mse")
                into = loss_kind::mse;
            else if (*v == "bce")
                into = loss_kind::bce;
            else
                fail("unknown loss '" + *v + "'", line);
        }
    };

    auto take_layers = [&](const char* key, mlp_spec& into) -> bool {
        auto layers = take(key);
        if (!layers) return false;
        std::string l = trim(*layers);
        if (l.size() < 2 || l.front() != '[' || l.back() != ']')
            fail(std::string(key) + " must be a bracketed list", line);
        for (const std::string& n : split_args(l.substr(1, l.size() - 2)))
            into.layers.push_back(parse_uint(n, line));
        if (into.layers.size() < 2)
            fail(std::string(key) + " needs at least input and output layers", line);
        return true;
    };
    auto take_act = [&](activation& into) {
        if (auto act = take("act")) {
            if (*act == "relu")
                into = activation::relu;
            else if (*act == "sigmoid")
                into = activation::sigmoid;
            else
                fail("unknown activation '" + *act + "'", line);
        }
    };

    if (head == "mlp") {
        r.kind = generator_recipe::backend::mlp;
        if (!take_layers("layers", r.net)) fail("mlp recipe needs layers=[...]", line);
        take_act(r.net.hidden);
    } else if (head == "nas") {
        r.kind = generator_recipe::backend::nas;
        if (!take_layers("early", r.net)) fail("nas recipe needs early=[...]", line);
        if (!take_layers("late", r.net2)) fail("nas recipe needs late=[...]", line);
        if (auto v = take("switch")) r.switch_step = parse_uint(*v, line);
        take_act(r.net.hidden);
        r.net2.hidden = r.net.hidden;
        if (r.net.layers.front() != r.net2.layers.front() ||
            r.net.layers.back() != r.net2.layers.back())
            fail("nas early and late architectures must agree on input and output widths",
                 line);
    } else if (head == "sgd" || head == "adam") {
        r.kind = head == "sgd" ? generator_recipe::backend::sgd : generator_recipe::backend::adam;
        r.opt.kind = head == "sgd" ? optimizer_kind::sgd : optimizer_kind::adam;
        if (head == "adam") r.opt.lr = 0.01;
        if (auto v = take("lr")) r.opt.lr = parse_num(*v, line);
        if (auto v = take("b1")) r.opt.beta1 = parse_num(*v, line);
        if (auto v = take("b2")) r.opt.beta2 = parse_num(*v, line);
        if (auto v = take("eps")) r.opt.eps = parse_num(*v, line);
        take_loss(r.opt.loss);
    } else if (head == "table") {
        r.kind = generator_recipe::backend::table;
        if (auto v = take("window")) r.window = parse_uint(*v, line);
        if (auto v = take("salt")) r.salt = parse_uint(*v, line);
    } else {
        fail("unknown recipe '" + head + "'", line);
    }
    if (!kv.empty()) fail("unknown recipe argument '" + kv.begin()->first + "'", line);
    return r;
}

}  // namespace

const term* spec_document::find_term(const std::string& name) const {
    for (const auto& [n, t] : terms)
        if (n == name) return &t;
    return nullptr;
}

value_space parse_space(const std::string& text) {
    space_scanner sc{text, 1};
    return sc.parse();
}

spec_document parse_spec_file(const std::string& text) {
    struct raw_line {
        std::string key, value;
        std::size_t line;
        std::size_t value_col;
    };
    std::vector<raw_line> objects, generators, term_lines, recipes, expl_lines, data_lines;

    std::istringstream in(text);
    std::string line;
    std::string section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string body = trim(line);
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') fail("unterminated section header", lineno);
            section = trim(body.substr(1, body.size() - 2));
            if (section != "objects" && section != "generators" && section != "terms" &&
                section != "translator" && section != "explainer" && section != "dataset")
                fail("unknown section [" + section + "]", lineno);
            continue;
        }
        if (section.empty()) fail("content before the first section header", lineno);

        const char sep = section == "generators" ? ':' : '=';
        std::size_t at = line.find(sep);
        if (at == std::string::npos)
            fail(std::string("expected '") + sep + "' in [" + section + "] entry", lineno);
        raw_line rl{trim(line.substr(0, at)), trim(line.substr(at + 1)), lineno, 0};
        rl.value_col = line.find_first_not_of(" \t", at + 1);
        rl.value_col = rl.value_col == std::string::npos ? at + 2 : rl.value_col + 1;
        if (rl.key.empty()) fail("missing name in [" + section + "] entry", lineno);

        if (section == "objects")
            objects.push_back(std::move(rl));
        else if (section == "generators")
            generators.push_back(std::move(rl));
        else if (section == "terms")
            term_lines.push_back(std::move(rl));
        else if (section == "translator")
            recipes.push_back(std::move(rl));
        else if (section == "explainer")
            expl_lines.push_back(std::move(rl));
        else
            data_lines.push_back(std::move(rl));
    }

    spec_document d;

    std::vector<std::string> object_names;
    for (const raw_line& o : objects) {
        if (d.spaces.count(o.key)) fail("duplicate object '" + o.key + "'", o.line);
        space_scanner sc{o.value, o.line};
        d.spaces.emplace(o.key, sc.parse());
        object_names.push_back(o.key);
    }

    presentation names_only =
        at_line(objects.empty() ? 1 : objects.front().line,
                [&] { return make_presentation(object_names, {}); });

    std::vector<generator_decl> decls;
    for (const raw_line& g : generators) {
        std::size_t arrow = g.value.find("->");
        if (arrow == std::string::npos) fail("generator type needs '->'", g.line);
        object_expr dom = at_line(
            g.line, [&] { return parse_object(trim(g.value.substr(0, arrow)), names_only); });
        object_expr cod = at_line(
            g.line, [&] { return parse_object(trim(g.value.substr(arrow + 2)), names_only); });
        decls.push_back({g.key, dom, cod});
    }
    d.pres = at_line(generators.empty() ? 1 : generators.front().line,
                     [&] { return make_presentation(object_names, decls); });

    for (const raw_line& t : term_lines) {
        if (d.find_term(t.key)) fail("duplicate term '" + t.key + "'", t.line);
        // sub-parser positions are relative to the right-hand side; shift the
        // column so reported spans land in the spec file
        auto col_of = [&](int rhs_col) {
            return t.value_col + static_cast<std::size_t>(rhs_col > 0 ? rhs_col - 1 : 0);
        };
        try {
            term parsed = parse_term(t.value, d.pres);
            d.terms.emplace_back(t.key, std::move(parsed));
        } catch (const term_typecheck_error& e) {
            d.term_errors.push_back("term '" + t.key + "': " + strip_pos(e.what()) + " at " +
                                    std::to_string(t.line) + ":" +
                                    std::to_string(col_of(e.col)));
        } catch (const parse_error& e) {
            fail(strip_pos(e.what()), t.line, col_of(e.col));
        } catch (const cat_error& e) {
            fail(e.what(), t.line);
        }
    }

    for (const raw_line& r : recipes) {
        d.has_translator = true;
        if (!d.pres.find(r.key)) fail("translator binds unknown generator '" + r.key + "'", r.line);
        if (d.recipes.count(r.key)) fail("duplicate translator entry '" + r.key + "'", r.line);
        d.recipes.emplace(r.key, parse_recipe(r.value, r.line));
    }

    for (const raw_line& e : expl_lines) {
        if (!d.expl) d.expl = explainer_config{};
        if (e.key == "kind")
            d.expl->kind = at_line(e.line, [&] { return kind_from_name(e.value); });
        else if (e.key == "mode") {
            if (e.value == "none")
                d.expl->mode = explanation_mode::none;
            else if (e.value == "syntactic")
                d.expl->mode = explanation_mode::syntactic;
            else if (e.value == "semantic")
                d.expl->mode = explanation_mode::semantic;
            else
                fail("unknown mode '" + e.value + "'", e.line);
        } else if (e.key == "tau")
            d.expl->tau = parse_num(e.value, e.line);
        else if (e.key == "train_steps")
            d.expl->train_steps = parse_uint(e.value, e.line);
        else if (e.key == "signature") {
            if (e.value.empty()) fail("signature name must be nonempty", e.line);
            d.expl->signature_name = e.value;
        } else
            fail("unknown [explainer] key '" + e.key + "'", e.line);
    }

    for (const raw_line& p : data_lines) {
        if (p.key != "path") fail("unknown [dataset] key '" + p.key + "'", p.line);
        d.dataset_path = p.value;
    }

    return d;
}

spec_document load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open spec file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    spec_document d = parse_spec_file(buf.str());
    if (!d.dataset_path.empty()) {
        std::filesystem::path rel(d.dataset_path);
        if (rel.is_relative())
            d.dataset_path = (std::filesystem::path(path).parent_path() / rel).string();
    }
    return d;
}

translator build_spec_translator(const spec_document& d, std::uint64_t seed) {
    if (!d.has_translator) throw spec_error("spec file has no [translator] section");

    // optimizer recipes size themselves against the unique forward recipe
    const generator_recipe* fwd = nullptr;
    for (const auto& [name, r] : d.recipes) {
        if (r.kind != generator_recipe::backend::mlp &&
            r.kind != generator_recipe::backend::nas)
            continue;
        if (fwd)
            throw spec_error(
                "multiple forward recipes (mlp/nas); optimizer bindings would be ambiguous");
        fwd = &r;
    }

    auto flat = [&](const object_expr& o) {
        std::vector<value_space> parts;
        for (const factor& f : o.factors()) parts.push_back(d.spaces.at(f.base));
        return value_space::product(parts);
    };

    std::map<std::string, space_seq> spaces;
    for (const auto& [name, s] : d.spaces) spaces.emplace(name, space_seq::constant(s));

    std::map<std::string, stream_morphism> gens;
    for (const generator_decl& g : d.pres.generators) {
        auto it = d.recipes.find(g.name);
        if (it == d.recipes.end())
            throw spec_error("generator '" + g.name + "' has no [translator] binding");
        const generator_recipe& r = it->second;
        value_space dom = flat(g.dom);
        value_space cod = flat(g.cod);
        switch (r.kind) {
            case generator_recipe::backend::mlp: {
                const std::size_t in = r.net.layers.front();
                const std::size_t out = r.net.layers.back();
                const std::size_t pc = param_count(r.net);
                value_space want_dom = value_space::product(
                    {value_space::real_vector(in), value_space::real_vector(pc)});
                value_space want_cod = value_space::real_vector(out);
                if (!(dom == want_dom) || !(cod == want_cod))
                    throw spec_error("mlp recipe for '" + g.name + "' expects " + want_dom.str() +
                                     " -> " + want_cod.str() + ", generator is typed " +
                                     dom.str() + " -> " + cod.str());
                gens.emplace(g.name,
                             make_kernel(space_seq::constant(dom), space_seq::constant(cod),
                                         mlp_forward_kernel(r.net, seed), g.name));
                break;
            }
            case generator_recipe::backend::nas: {
                const std::size_t in = r.net.layers.front();
                const std::size_t out = r.net.layers.back();
                const std::size_t pmax = std::max(param_count(r.net), param_count(r.net2));
                value_space want_dom = value_space::product(
                    {value_space::real_vector(in), value_space::real_vector(pmax)});
                value_space want_cod = value_space::real_vector(out);
                if (!(dom == want_dom) || !(cod == want_cod))
                    throw spec_error("nas recipe for '" + g.name + "' expects " +
                                     want_dom.str() + " -> " + want_cod.str() +
                                     ", generator is typed " + dom.str() + " -> " + cod.str());
                gens.emplace(g.name,
                             make_kernel(space_seq::constant(dom), space_seq::constant(cod),
                                         nas_forward_kernel(r.net, r.net2, r.switch_step, seed),
                                         g.name));
                break;
            }
            case generator_recipe::backend::sgd:
            case generator_recipe::backend::adam: {
                if (!fwd)
                    throw spec_error("optimizer recipe for '" + g.name +
                                     "' needs a forward (mlp/nas) recipe to size against");
                const bool nas = fwd->kind == generator_recipe::backend::nas;
                const std::size_t in = fwd->net.layers.front();
                const std::size_t out = fwd->net.layers.back();
                const std::size_t pc = nas ? std::max(param_count(fwd->net),
                                                      param_count(fwd->net2))
                                           : param_count(fwd->net);
                value_space want_dom = value_space::product(
                    {value_space::real_vector(out), value_space::real_vector(out),
                     value_space::real_vector(in), value_space::real_vector(pc)});
                value_space want_cod = value_space::real_vector(pc);
                if (!(dom == want_dom) || !(cod == want_cod))
                    throw spec_error("optimizer recipe for '" + g.name + "' expects " +
                                     want_dom.str() + " -> " + want_cod.str() +
                                     ", generator is typed " + dom.str() + " -> " + cod.str());
                kernel_fn step = nas ? nas_update_kernel(fwd->net, fwd->net2,
                                                         fwd->switch_step, r.opt, seed)
                                     : mlp_update_kernel(fwd->net, r.opt, seed, {pc});
                gens.emplace(g.name,
                             make_kernel(space_seq::constant(dom), space_seq::constant(cod),
                                         std::move(step), g.name));
                break;
            }
            case generator_recipe::backend::table:
                gens.emplace(g.name,
                             random_table_kernel(r.salt, space_seq::constant(dom),
                                                 space_seq::constant(cod), r.window, g.name));
                break;
        }
    }

    explanation_mode mode = explanation_mode::none;
    std::string eobj;
    std::optional<signature> sig;
    auto eit = d.spaces.find("E");
    if (eit != d.spaces.end()) {
        eobj = "E";
        if (!eit->second.is_singleton()) {
            mode = d.expl ? d.expl->mode : explanation_mode::semantic;
            std::size_t feats = 0;
            for (const atom_space& a : eit->second.factors())
                feats += a.kind == atom_kind::real_vector ? a.dim : 1;
            std::vector<std::string> names;
            for (std::size_t i = 0; i < feats; ++i) names.push_back("x" + std::to_string(i + 1));
            sig = make_relevance_signature(d.expl ? d.expl->signature_name : "S",
                                           std::move(names));
        }
    }
    return make_translator(d.pres, std::move(spaces), std::move(gens), mode, eobj,
                           std::move(sig));
}

concrete_agent spec_agent(const spec_document& d, const std::string& term_name,
                          std::uint64_t seed) {
    if (!d.term_errors.empty()) throw spec_error(d.term_errors.front());
    const std::string wanted = term_name.empty() ? "agent" : term_name;
    const term* t = d.find_term(wanted);
    if (!t) throw spec_error("spec file has no term named '" + wanted + "'");

    concrete_agent a;
    a.name = wanted;
    a.trans = build_spec_translator(d, seed);
    a.wiring = *t;
    a.compiled = translate_term(a.trans, *t);
    const object_expr& dom = (*t)->dom;
    a.descriptor.supervised =
        dom.size() >= 2 && !d.spaces.at(dom.factors().front().base).is_singleton();
    for (const auto& [name, r] : d.recipes) {
        if (r.kind == generator_recipe::backend::mlp) a.net = r.net;
        if (r.kind == generator_recipe::backend::nas) {
            a.net = r.net2;
            a.descriptor.constant_architecture = false;
        }
        if (r.kind == generator_recipe::backend::sgd ||
            r.kind == generator_recipe::backend::adam)
            a.opt = r.opt;
    }
    a.expl_tau = d.expl ? d.expl->tau : 0.5;
    a.seed = seed;
    return a;
}

}  // namespace catstream
