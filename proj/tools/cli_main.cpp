// catstream: typecheck and render wiring terms, run the law suites, train the
// demo agents, and read explanations off them.
//
// Exit codes: 0 success, 1 verification or typecheck failure, 2 usage, IO, or
// syntax error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "catstream/agents.hpp"
#include "catstream/dot.hpp"
#include "catstream/errors.hpp"
#include "catstream/institution.hpp"
#include "catstream/laws.hpp"
#include "catstream/port_graph.hpp"
#include "catstream/presentation.hpp"
#include "catstream/spec_file.hpp"
#include "catstream/term.hpp"
#include "catstream/trace_io.hpp"
#include "catstream/translator.hpp"

using namespace catstream;

namespace {

struct global_opts {
    std::uint64_t seed = 0;
    double tol = 1e-9;
    std::size_t horizon = 5;
    std::size_t samples = 200;
    std::size_t window = 3;
    bool serial = false;
};

law_options make_law_options(const global_opts& g) {
    law_options opt;
    opt.instances = g.samples;
    opt.horizon = g.horizon;
    opt.window = g.window;
    opt.seed = g.seed;
    opt.tol = g.tol;
    opt.parallel = !g.serial;
    return opt;
}

// comma-separated decimals; throws on anything else
std::vector<double> parse_row(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string cell = s.substr(start, comma == std::string::npos ? comma : comma - start);
        std::size_t a = cell.find_first_not_of(" \t");
        if (a == std::string::npos)
            throw std::runtime_error("bad input row '" + s + "': empty cell");
        std::size_t b = cell.find_last_not_of(" \t");
        cell = cell.substr(a, b - a + 1);
        char* end = nullptr;
        out.push_back(std::strtod(cell.c_str(), &end));
        if (end != cell.c_str() + cell.size())
            throw std::runtime_error("bad input row '" + s + "': '" + cell +
                                     "' is not a number");
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::size_t real_dims(const value_space& s) {
    std::size_t n = 0;
    for (const atom_space& a : s.factors()) {
        if (a.kind != atom_kind::real_vector)
            throw dataset_format_error("dataset columns must be real-valued, object space is " +
                                       s.str());
        n += a.dim;
    }
    return n;
}

// target columns come from the leading boundary factor when supervised
std::pair<std::size_t, std::size_t> dataset_shape(const spec_document& d,
                                                  const concrete_agent& a) {
    const std::vector<factor>& fs = a.wiring->dom.factors();
    std::size_t in = 0, out = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        std::size_t dims = real_dims(d.spaces.at(fs[i].base));
        if (a.descriptor.supervised && i == 0)
            out += dims;
        else
            in += dims;
    }
    return {in, out};
}

std::string signature_str(const signature& sig) {
    std::string s = sig.kind == institution_kind::unary_relevance ? sig.predicate : "";
    s += "(";
    for (std::size_t i = 0; i < sig.symbols.size(); ++i)
        s += (i ? ", " : "") + sig.symbols[i];
    return s + ")";
}

int cmd_check(const global_opts& g, const std::string& path) {
    spec_document d = load_spec_file(path);
    for (const std::string& e : d.term_errors)
        std::printf("typecheck failure: %s\n", e.c_str());
    bool manifest_ok = true;
    if (d.has_translator) {
        try {
            build_spec_translator(d, g.seed);
        } catch (const cat_error& e) {
            manifest_ok = false;
            std::printf("translator failure: %s\n", e.what());
        }
    }
    if (!d.term_errors.empty() || !manifest_ok) return 1;
    std::printf("ok: %zu objects, %zu generators, %zu terms%s\n", d.pres.objects.size(),
                d.pres.generators.size(), d.terms.size(),
                d.has_translator ? ", translator manifest" : "");
    return 0;
}

int cmd_render(const std::string& path, const std::string& term_name,
               const std::string& out_path) {
    spec_document d = load_spec_file(path);
    if (!d.term_errors.empty()) {
        for (const std::string& e : d.term_errors)
            std::fprintf(stderr, "typecheck failure: %s\n", e.c_str());
        return 1;
    }
    const term* t = d.find_term(term_name);
    if (!t) {
        std::fprintf(stderr, "error: no term named '%s' in %s\n", term_name.c_str(),
                     path.c_str());
        return 2;
    }
    std::string dot = to_dot(normalize(*t), term_name);
    if (out_path.empty()) {
        std::fputs(dot.c_str(), stdout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw io_error("cannot write " + out_path);
        out << dot;
    }
    return 0;
}

int cmd_axioms(const global_opts& g, bool corrupt) {
    law_options opt = make_law_options(g);
    std::vector<law_report> all =
        check_feedback_axioms(opt, corrupt ? corrupted_feedback() : standard_feedback());
    auto append = [&all](std::vector<law_report> more) {
        for (law_report& r : more) all.push_back(std::move(r));
    };
    append(check_stream_laws(opt));
    append(check_diagram_laws(opt));
    rng r(g.seed);
    presentation p = random_presentation(r, 4, 6);
    append(check_functor_laws(random_translator(r, p, g.window), opt));
    all.push_back(check_agent_translation(random_translator(r, build_xlearn(), g.window), opt));
    std::fputs(format_reports(all).c_str(), stdout);
    return all_passed(all) ? 0 : 1;
}

int cmd_train(const global_opts& g, const std::string& path, const std::string& term_name,
              const std::string& data_path, std::size_t steps, const std::string& trace_path) {
    spec_document d = load_spec_file(path);
    concrete_agent a = spec_agent(d, term_name, g.seed);
    std::string csv = data_path.empty() ? d.dataset_path : data_path;
    if (csv.empty()) {
        std::fprintf(stderr,
                     "error: no dataset: pass --data or add a [dataset] section to %s\n",
                     path.c_str());
        return 2;
    }
    auto [in_dim, out_dim] = dataset_shape(d, a);
    dataset data = load_dataset_csv(csv, in_dim, out_dim);

    training_result res = run_training(a, data, steps, !trace_path.empty());
    std::printf("steps: %zu\n", steps);
    if (res.losses.empty())
        std::printf("final loss: n/a\n");
    else
        std::printf("final loss: %.17g\n", res.losses.back());
    taxonomy_label lbl = classify(a);
    std::printf("classification: %s\n", label_str(lbl).c_str());
    std::printf("constant_architecture=%s\n", lbl.constant_architecture ? "true" : "false");
    if (!trace_path.empty()) {
        write_trace_file(trace_path, res.trace, res.losses);
        std::printf("trace written: %s\n", trace_path.c_str());
    }
    return 0;
}

int cmd_explain(const global_opts& g, const std::string& path, const std::string& input_row) {
    spec_document d = load_spec_file(path);
    if (!d.term_errors.empty()) {
        for (const std::string& e : d.term_errors)
            std::fprintf(stderr, "typecheck failure: %s\n", e.c_str());
        return 1;
    }
    if (!d.expl)
        throw not_an_explainer_error("spec '" + path +
                                     "' declares a plain learning agent, not an explainer; "
                                     "add an [explainer] section");

    const generator_recipe* fwd = nullptr;
    const generator_recipe* upd = nullptr;
    for (const auto& [name, r] : d.recipes) {
        if (r.kind == generator_recipe::backend::mlp) fwd = &r;
        if (r.kind == generator_recipe::backend::sgd ||
            r.kind == generator_recipe::backend::adam)
            upd = &r;
    }
    if (!fwd) throw spec_error("explainers need an mlp recipe for the base model");
    if (d.dataset_path.empty()) {
        std::fprintf(stderr, "error: explainers need a [dataset] section in %s\n", path.c_str());
        return 2;
    }
    const optimizer_spec opt = upd ? upd->opt : optimizer_spec{};
    dataset data =
        load_dataset_csv(d.dataset_path, fwd->net.layers.front(), fwd->net.layers.back());

    std::vector<double> x = parse_row(input_row);
    if (x.size() != fwd->net.layers.front()) {
        std::fprintf(stderr, "error: --input has %zu values, the base model takes %zu\n",
                     x.size(), fwd->net.layers.front());
        return 2;
    }

    const explainer_config& cfg = *d.expl;
    concrete_agent ag = build_explainer(cfg.kind, fwd->net, opt, data, g.seed, cfg.mode,
                                        cfg.tau);
    if (ag.trans.expl_signature)
        ag.trans.expl_signature =
            make_relevance_signature(cfg.signature_name, ag.trans.expl_signature->symbols);
    explanation ex;
    if (ag.descriptor.sees_base_input) {
        std::vector<double> base_params =
            reference_training_loop(fwd->net, opt, data, cfg.train_steps, g.seed).final_params;
        ex = explain_input(ag, fwd->net, base_params, x);
    } else {
        ex = explain_after_training(ag, data, cfg.train_steps, x);
    }

    const signature& sig = *ag.trans.expl_signature;
    if (!satisfies(sig, ex.model, ex.saliency)) {
        std::fprintf(stderr, "error: explanation model does not satisfy its own sentence\n");
        return 1;
    }
    std::printf("explainer: %s\n", label_str(classify(ag)).c_str());
    std::printf("signature: %s\n", signature_str(sig).c_str());
    std::printf("model:\n%s", model_str(ex.model).c_str());
    std::printf("sentence: %s\n", sentence_str(ex.saliency).c_str());
    std::printf("verified: model satisfies sentence\n");
    return 0;
}

int cmd_classify(const global_opts& g, const std::string& path, const std::string& term_name,
                 bool table) {
    if (table) {
        std::vector<witness> ws = table_witnesses(xor_dataset(), g.seed);
        bool ok = true;
        for (const witness& w : ws) {
            taxonomy_label got = classify(w.agent);
            bool hit = got == w.expected;
            ok = ok && hit;
            std::string verdict = hit ? "ok" : "MISMATCH, expected " + label_str(w.expected);
            std::printf("%-22s %-70s %s\n", w.name.c_str(), label_str(got).c_str(),
                        verdict.c_str());
        }
        return ok ? 0 : 1;
    }
    if (path.empty()) {
        std::fprintf(stderr, "error: classify needs a spec file or --table\n");
        return 2;
    }
    spec_document d = load_spec_file(path);
    concrete_agent a;
    if (d.expl) {
        const generator_recipe* fwd = nullptr;
        const generator_recipe* upd = nullptr;
        for (const auto& [name, r] : d.recipes) {
            if (r.kind == generator_recipe::backend::mlp) fwd = &r;
            if (r.kind == generator_recipe::backend::sgd ||
                r.kind == generator_recipe::backend::adam)
                upd = &r;
        }
        if (!fwd) throw spec_error("explainers need an mlp recipe for the base model");
        dataset data = d.dataset_path.empty()
                           ? xor_dataset()
                           : load_dataset_csv(d.dataset_path, fwd->net.layers.front(),
                                              fwd->net.layers.back());
        a = build_explainer(d.expl->kind, fwd->net, upd ? upd->opt : optimizer_spec{}, data,
                            g.seed, d.expl->mode, d.expl->tau);
    } else {
        a = spec_agent(d, term_name, g.seed);
    }
    taxonomy_label lbl = classify(a);
    std::printf("classification: %s\n", label_str(lbl).c_str());
    std::printf("constant_architecture=%s\n", lbl.constant_architecture ? "true" : "false");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"categorical learning agents: wiring terms, stream semantics, law suites, "
                 "and explainers"};
    app.require_subcommand(1);
    app.fallthrough();

    global_opts g;
    app.add_option("--seed", g.seed, "seed for every random draw")->capture_default_str();
    app.add_option("--tol", g.tol, "numeric comparison tolerance")->capture_default_str();
    app.add_option("--horizon", g.horizon, "stream evaluation horizon")->capture_default_str();
    app.add_option("--samples", g.samples, "random instances per law")->capture_default_str();
    app.add_option("--window", g.window, "history window of the table kernels")
        ->capture_default_str();
    app.add_flag("--serial", g.serial, "disable parallel law checking");

    int rc = 0;

    std::string check_path;
    CLI::App* check = app.add_subcommand("check", "typecheck a spec file's terms");
    check->add_option("path", check_path, "spec file")->required();
    check->callback([&] { rc = cmd_check(g, check_path); });

    std::string render_path, render_term = "agent", render_out;
    CLI::App* render = app.add_subcommand("render", "render a term's wiring diagram as DOT");
    render->add_option("path", render_path, "spec file")->required();
    render->add_option("--term", render_term, "term name")->capture_default_str();
    render->add_option("--out", render_out, "output file (default stdout)");
    render->callback([&] { rc = cmd_render(render_path, render_term, render_out); });

    bool corrupt = false;
    CLI::App* axioms =
        app.add_subcommand("axioms", "run the feedback, category, comonoid, and functor suites");
    axioms->add_flag("--corrupt-feedback", corrupt,
                     "check against a deliberately lagged feedback (sliding must fail)");
    axioms->callback([&] { rc = cmd_axioms(g, corrupt); });

    std::string train_path, train_term = "agent", train_data, train_trace;
    std::size_t train_steps = 2000;
    CLI::App* train = app.add_subcommand("train", "train a spec's agent and classify it");
    train->add_option("path", train_path, "spec file")->required();
    train->add_option("--term", train_term, "term name")->capture_default_str();
    train->add_option("--data", train_data, "dataset csv (default: the spec's [dataset])");
    train->add_option("--steps", train_steps, "training steps")->capture_default_str();
    train->add_option("--trace", train_trace, "write the evaluation trace here");
    train->callback(
        [&] { rc = cmd_train(g, train_path, train_term, train_data, train_steps, train_trace); });

    std::string explain_path, explain_input_row;
    CLI::App* explain =
        app.add_subcommand("explain", "explain one input under a spec's [explainer]");
    explain->add_option("path", explain_path, "spec file")->required();
    explain->add_option("--input", explain_input_row, "comma-separated input row")->required();
    explain->callback([&] { rc = cmd_explain(g, explain_path, explain_input_row); });

    std::string classify_path, classify_term = "agent";
    bool classify_table = false;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "place an agent in the taxonomy");
    classify_cmd->add_option("path", classify_path, "spec file");
    classify_cmd->add_option("--term", classify_term, "term name")->capture_default_str();
    classify_cmd->add_flag("--table", classify_table,
                           "classify the built-in witness for every taxonomy cell");
    classify_cmd->callback(
        [&] { rc = cmd_classify(g, classify_path, classify_term, classify_table); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const term_typecheck_error& e) {
        std::fprintf(stderr, "typecheck failure: %s\n", e.what());
        return 1;
    } catch (const io_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return 2;
    } catch (const cat_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return rc;
}
