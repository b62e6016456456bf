#include "catstream/agents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "catstream/errors.hpp"
#include "catstream/presentation.hpp"
#include "catstream/rng.hpp"

namespace catstream {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

bool numeric_field(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

}  // namespace

dataset parse_dataset_csv(const std::string& text, std::size_t in_dim, std::size_t out_dim) {
    if (in_dim == 0 || out_dim == 0)
        throw dataset_format_error("dataset needs at least one input and one target column");
    dataset d;
    d.in_dim = in_dim;
    d.out_dim = out_dim;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ls(body);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(trim(field));
        if (first_row) {
            first_row = false;
            if (!numeric_field(fields[0])) continue;  // header line
        }
        if (fields.size() != in_dim + out_dim)
            throw dataset_format_error("line " + std::to_string(lineno) + ": expected " +
                                       std::to_string(in_dim + out_dim) + " columns, got " +
                                       std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const std::string& f : fields) {
            if (!numeric_field(f))
                throw dataset_format_error("line " + std::to_string(lineno) + ": bad number '" + f +
                                           "'");
            row.push_back(std::strtod(f.c_str(), nullptr));
        }
        d.inputs.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(in_dim));
        d.targets.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(in_dim), row.end());
    }
    if (d.inputs.empty()) throw dataset_format_error("dataset has no data rows");
    return d;
}

dataset load_dataset_csv(const std::string& path, std::size_t in_dim, std::size_t out_dim) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset_csv(buf.str(), in_dim, out_dim);
}

dataset xor_dataset() {
    dataset d;
    d.in_dim = 2;
    d.out_dim = 1;
    d.inputs = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    d.targets = {{0}, {1}, {1}, {0}};
    return d;
}

std::string kind_name(agent_kind k) {
    switch (k) {
        case agent_kind::plain_learning_agent: return "learning-agent";
        case agent_kind::post_hoc: return "post-hoc";
        case agent_kind::model_specific: return "model-specific";
        case agent_kind::model_agnostic: return "model-agnostic";
        case agent_kind::forward_based: return "forward-based";
        case agent_kind::backward_based: return "backward-based";
        case agent_kind::intrinsic: return "intrinsic";
        case agent_kind::concept_bottleneck: return "concept-bottleneck";
    }
    return "?";
}

agent_kind kind_from_name(const std::string& name) {
    std::string n = name;
    std::replace(n.begin(), n.end(), '_', '-');
    for (agent_kind k :
         {agent_kind::plain_learning_agent, agent_kind::post_hoc, agent_kind::model_specific,
          agent_kind::model_agnostic, agent_kind::forward_based, agent_kind::backward_based,
          agent_kind::intrinsic, agent_kind::concept_bottleneck})
        if (kind_name(k) == n) return k;
    throw unsupported_kind_error("unknown agent kind: " + name);
}

std::string mode_name(explanation_mode m) {
    switch (m) {
        case explanation_mode::none: return "none";
        case explanation_mode::syntactic: return "syntactic";
        case explanation_mode::semantic: return "semantic";
    }
    return "?";
}

std::string label_str(const taxonomy_label& l) {
    return kind_name(l.kind) + " | " + mode_name(l.mode) + " | " +
           (l.supervised ? "supervised" : "unsupervised") + " | " +
           (l.constant_architecture ? "constant-architecture" : "evolving-architecture");
}

namespace {

// ---------------------------------------------------------- shared pieces ---

presentation agent_presentation() {
    object_expr X = object_expr::base("X");
    object_expr Y = object_expr::base("Y");
    object_expr Ys = object_expr::base("Y*");
    object_expr P = object_expr::base("P");
    object_expr E = object_expr::base("E");
    return make_presentation(
        {"X", "Y", "Y*", "P", "E"},
        {{"eta", object_expr::product(X, P), object_expr::product(Y, E)},
         {"nabla", object_expr::product({Ys, Y, X, P}), P}});
}

space_seq cs(value_space s) { return space_seq::constant(std::move(s)); }

std::vector<double> uniform_params(std::size_t count, std::uint64_t seed) {
    rng r(seed);
    std::vector<double> p(count);
    for (double& x : p) x = r.uniform(-0.5, 0.5);
    return p;
}

std::vector<double> normalized_abs(std::vector<double> g) {
    double mx = 0.0;
    for (double& v : g) {
        v = std::fabs(v);
        mx = std::max(mx, v);
    }
    // a dead readout (all derivatives zero) stays all-zero instead of dividing
    if (mx <= 1e-300) return g;
    for (double& v : g) v /= mx;
    return g;
}

// the training row whose input matches x, else the prediction rounded to bits
std::vector<double> lookup_target(const dataset& data, const std::vector<double>& x,
                                  const std::vector<double>& y) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data.inputs[i].size() != x.size()) continue;
        bool hit = true;
        for (std::size_t j = 0; j < x.size() && hit; ++j)
            hit = std::fabs(data.inputs[i][j] - x[j]) < 1e-9;
        if (hit) return data.targets[i];
    }
    std::vector<double> t(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) t[j] = y[j] >= 0.5 ? 1.0 : 0.0;
    return t;
}

}  // namespace

kernel_fn mlp_forward_kernel(const mlp_spec& net, std::uint64_t seed) {
    return [net, seed](std::size_t, const std::vector<value>& h) -> value {
        const value& v = h.back();
        const std::vector<double>& x = v.atoms().at(0).reals;
        std::vector<double> p = v.size() >= 2 ? v.atoms()[1].reals : init_params(net, seed);
        return value::reals(mlp_forward(net, p, x));
    };
}

kernel_fn mlp_update_kernel(const mlp_spec& net, const optimizer_spec& opt, std::uint64_t seed,
                            std::vector<std::size_t> param_atoms) {
    return [net, opt, seed, sizes = std::move(param_atoms)](
               std::size_t n, const std::vector<value>& h) -> value {
        const std::size_t lead = 3;  // y*, y, x
        auto unpack = [&](const value& v, std::vector<double>& target, std::vector<double>& x,
                          std::vector<double>& p) {
            const auto& a = v.atoms();
            target = a.at(0).reals;
            x = a.at(2).reals;
            if (a.size() >= lead + sizes.size()) {
                p.clear();
                for (std::size_t i = 0; i < sizes.size(); ++i)
                    p.insert(p.end(), a[lead + i].reals.begin(), a[lead + i].reals.end());
            } else {
                p = init_params(net, seed);
            }
        };
        auto repack = [&](std::vector<double> p) -> value {
            if (sizes.size() == 1) return value::reals(std::move(p));
            std::vector<value> parts;
            std::size_t off = 0;
            for (std::size_t s : sizes) {
                parts.push_back(value::reals(std::vector<double>(
                    p.begin() + static_cast<std::ptrdiff_t>(off),
                    p.begin() + static_cast<std::ptrdiff_t>(off + s))));
                off += s;
            }
            return value::tuple(parts);
        };
        std::vector<double> target, x, p;
        if (opt.kind == optimizer_kind::sgd) {
            unpack(h[n], target, x, p);
            mlp_gradients g = mlp_grad(net, opt.loss, p, x, target);
            return repack(optimizer_step(opt, p, g.by_param, n, nullptr));
        }
        adam_state st;
        std::vector<double> next;
        for (std::size_t k = 0; k <= n; ++k) {
            unpack(h[k], target, x, p);
            mlp_gradients g = mlp_grad(net, opt.loss, p, x, target);
            next = optimizer_step(opt, p, g.by_param, k, &st);
        }
        return repack(std::move(next));
    };
}

namespace {

void check_schedule(const mlp_spec& early, const mlp_spec& late) {
    if (early.layers.front() != late.layers.front() ||
        early.layers.back() != late.layers.back())
        throw dimension_mismatch_error(
            "architecture schedule must keep input and output widths fixed");
}

}  // namespace

kernel_fn nas_forward_kernel(const mlp_spec& early, const mlp_spec& late,
                             std::size_t switch_step, std::uint64_t seed) {
    check_schedule(early, late);
    const std::size_t pmax = std::max(param_count(early), param_count(late));
    return [early, late, switch_step, pmax, seed](std::size_t n,
                                                  const std::vector<value>& h) -> value {
        const value& v = h.back();
        const std::vector<double>& x = v.atoms().at(0).reals;
        std::vector<double> p = v.size() >= 2 ? v.atoms()[1].reals : uniform_params(pmax, seed);
        const mlp_spec& spec = n < switch_step ? early : late;
        std::vector<double> active(p.begin(),
                                   p.begin() + static_cast<std::ptrdiff_t>(param_count(spec)));
        return value::reals(mlp_forward(spec, active, x));
    };
}

kernel_fn nas_update_kernel(const mlp_spec& early, const mlp_spec& late,
                            std::size_t switch_step, const optimizer_spec& opt,
                            std::uint64_t seed) {
    check_schedule(early, late);
    if (opt.kind != optimizer_kind::sgd)
        throw unsupported_kind_error(
            "the architecture-search update only supports sgd; adam's moment replay "
            "has no meaning across a width change");
    const std::size_t pmax = std::max(param_count(early), param_count(late));
    return [early, late, switch_step, pmax, seed, opt](std::size_t n,
                                                       const std::vector<value>& h) -> value {
        const value& v = h[n];
        const auto& at = v.atoms();
        std::vector<double> target = at.at(0).reals;
        std::vector<double> x = at.at(2).reals;
        std::vector<double> p = v.size() >= 4 ? at[3].reals : uniform_params(pmax, seed);
        const mlp_spec& spec = n < switch_step ? early : late;
        const std::size_t cnt = param_count(spec);
        std::vector<double> active(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(cnt));
        mlp_gradients g = mlp_grad(spec, opt.loss, active, x, target);
        std::vector<double> updated = optimizer_step(opt, active, g.by_param, n, nullptr);
        // the inactive tail rides along untouched until the big net wakes up
        std::copy(updated.begin(), updated.end(), p.begin());
        return value::reals(std::move(p));
    };
}

namespace {

struct assemble_args {
    std::string name;
    value_space X, Y, Ys, P, E;
    kernel_fn eta;
    kernel_fn nabla;
    explanation_mode mode = explanation_mode::none;
    std::optional<signature> sig;
    wiring_descriptor desc;
    mlp_spec net;
    optimizer_spec opt;
    double tau = 0.5;
    std::uint64_t seed = 0;
};

concrete_agent assemble(assemble_args a) {
    presentation pres = agent_presentation();
    std::map<std::string, space_seq> spaces{{"X", cs(a.X)},
                                            {"Y", cs(a.Y)},
                                            {"Y*", cs(a.Ys)},
                                            {"P", cs(a.P)},
                                            {"E", cs(a.E)}};
    stream_morphism eta = make_kernel(cs(value_space::product({a.X, a.P})),
                                      cs(value_space::product({a.Y, a.E})), a.eta, "eta");
    stream_morphism nabla =
        make_kernel(cs(value_space::product({a.Ys, a.Y, a.X, a.P})), cs(a.P), a.nabla, "nabla");
    std::map<std::string, stream_morphism> gens{{"eta", eta}, {"nabla", nabla}};
    concrete_agent out;
    out.name = std::move(a.name);
    out.trans = make_translator(pres, std::move(spaces), std::move(gens), a.mode, "E",
                                std::move(a.sig));
    out.wiring = training_learning_agent(out.trans.source);
    out.compiled = translate_term(out.trans, out.wiring);
    out.descriptor = a.desc;
    out.net = std::move(a.net);
    out.opt = a.opt;
    out.expl_tau = a.tau;
    out.seed = a.seed;
    return out;
}

std::vector<std::string> feature_names(const std::string& stem, std::size_t count) {
    std::vector<std::string> names;
    names.reserve(count);
    for (std::size_t i = 0; i < count; ++i) names.push_back(stem + std::to_string(i + 1));
    return names;
}

}  // namespace

// ---------------------------------------------------------------- builders ---

concrete_agent build_mlp_agent(const mlp_spec& net, const optimizer_spec& opt,
                               std::uint64_t seed) {
    const std::size_t in = net.layers.front();
    const std::size_t out = net.layers.back();
    const std::size_t pc = param_count(net);

    assemble_args a;
    a.name = "learning-agent";
    a.X = value_space::real_vector(in);
    a.Y = value_space::real_vector(out);
    a.Ys = value_space::real_vector(out);
    a.P = value_space::real_vector(pc);
    a.E = value_space::singleton();
    a.eta = mlp_forward_kernel(net, seed);
    a.nabla = mlp_update_kernel(net, opt, seed, {pc});
    a.desc.supervised = true;
    a.net = net;
    a.opt = opt;
    a.seed = seed;
    return assemble(std::move(a));
}

concrete_agent build_nas_agent(const mlp_spec& early, const mlp_spec& late,
                               std::size_t switch_step, const optimizer_spec& opt,
                               std::uint64_t seed) {
    const std::size_t in = early.layers.front();
    const std::size_t out = early.layers.back();
    const std::size_t pmax = std::max(param_count(early), param_count(late));

    assemble_args a;
    a.name = "architecture-search";
    a.X = value_space::real_vector(in);
    a.Y = value_space::real_vector(out);
    a.Ys = value_space::real_vector(out);
    a.P = value_space::real_vector(pmax);
    a.E = value_space::singleton();
    a.eta = nas_forward_kernel(early, late, switch_step, seed);
    a.nabla = nas_update_kernel(early, late, switch_step, opt, seed);
    a.desc.supervised = true;
    a.desc.constant_architecture = false;
    a.net = late;
    a.opt = opt;
    a.seed = seed;
    return assemble(std::move(a));
}

concrete_agent build_rnn_agent(std::size_t in_dim, std::size_t hidden_dim, std::size_t out_dim,
                               std::uint64_t seed) {
    if (hidden_dim < out_dim)
        throw dimension_mismatch_error("the recurrence reads its output off the hidden state, "
                                       "so hidden_dim must be at least out_dim");
    const std::size_t wsize = hidden_dim * (in_dim + hidden_dim + 1);

    // weights: Wx (hidden x in, row-major), Wh (hidden x hidden), bias
    auto elman = [in_dim, hidden_dim](const std::vector<double>& w, const std::vector<double>& x,
                                      const std::vector<double>& hstate) {
        std::vector<double> nh(hidden_dim);
        const std::size_t wh_off = hidden_dim * in_dim;
        const std::size_t b_off = wh_off + hidden_dim * hidden_dim;
        for (std::size_t i = 0; i < hidden_dim; ++i) {
            double z = w[b_off + i];
            for (std::size_t j = 0; j < in_dim; ++j) z += w[i * in_dim + j] * x[j];
            for (std::size_t j = 0; j < hidden_dim; ++j)
                z += w[wh_off + i * hidden_dim + j] * hstate[j];
            nh[i] = std::tanh(z);
        }
        return nh;
    };

    auto state_of = [hidden_dim, wsize, seed](const value& v, std::size_t lead,
                                              std::vector<double>& hstate,
                                              std::vector<double>& w) {
        if (v.size() >= lead + 2) {
            hstate = v.atoms()[lead].reals;
            w = v.atoms()[lead + 1].reals;
        } else {
            hstate.assign(hidden_dim, 0.0);
            w = uniform_params(wsize, seed);
        }
    };

    assemble_args a;
    a.name = "recurrent";
    a.X = value_space::real_vector(in_dim);
    a.Y = value_space::real_vector(out_dim);
    a.Ys = value_space::singleton();
    a.P = value_space::product(
        {value_space::real_vector(hidden_dim), value_space::real_vector(wsize)});
    a.E = value_space::singleton();
    a.eta = [elman, state_of, out_dim](std::size_t, const std::vector<value>& h) -> value {
        const value& v = h.back();
        const std::vector<double>& x = v.atoms().at(0).reals;
        std::vector<double> hstate, w;
        state_of(v, 1, hstate, w);
        std::vector<double> nh = elman(w, x, hstate);
        return value::reals(std::vector<double>(
            nh.begin(), nh.begin() + static_cast<std::ptrdiff_t>(out_dim)));
    };
    // no correction wire: the update just rolls the recurrence forward
    a.nabla = [elman, state_of](std::size_t n, const std::vector<value>& h) -> value {
        const value& v = h[n];
        const std::vector<double>& x = v.atoms().at(1).reals;  // atom 0 is the y passthrough
        std::vector<double> hstate, w;
        state_of(v, 2, hstate, w);
        std::vector<double> nh = elman(w, x, hstate);
        return value::tuple({value::reals(std::move(nh)), value::reals(std::move(w))});
    };
    a.desc.supervised = false;
    a.net = mlp_spec{};
    a.opt = optimizer_spec{};
    a.seed = seed;
    return assemble(std::move(a));
}

concrete_agent build_explainer(agent_kind kind, const mlp_spec& base,
                               const optimizer_spec& base_opt, const dataset& data,
                               std::uint64_t seed, explanation_mode mode, double tau) {
    if (kind == agent_kind::plain_learning_agent)
        throw unsupported_kind_error(
            "plain learning agents carry no explanation; use build_mlp_agent");
    if (base.layers.size() < 2)
        throw dimension_mismatch_error("base network needs at least input and output layers");
    const std::size_t in = base.layers.front();
    const std::size_t out = base.layers.back();
    const std::size_t pc = param_count(base);
    if (data.in_dim != in || data.out_dim != out)
        throw dimension_mismatch_error("dataset shape does not match the base network");

    assemble_args a;
    a.name = kind_name(kind);
    a.mode = mode;
    a.tau = tau;
    a.seed = seed;
    a.net = base;
    a.opt = base_opt;
    a.sig = make_relevance_signature("S", feature_names("x", in));

    // readout kinds share trivial correction and parameter objects
    a.Y = value_space::real_vector(out);
    a.Ys = value_space::singleton();
    a.P = value_space::singleton();
    a.E = value_space::real_vector(in, true);
    a.nabla = [](std::size_t, const std::vector<value>&) { return value::star(); };

    const loss_kind loss = base_opt.loss;

    switch (kind) {
        case agent_kind::post_hoc:
        case agent_kind::model_specific: {
            a.X = value_space::product({value_space::real_vector(out),
                                        value_space::real_vector(in),
                                        value_space::real_vector(pc)});
            a.eta = [base, loss, data](std::size_t, const std::vector<value>& h) -> value {
                const auto& at = h.back().atoms();
                const std::vector<double>& y = at.at(0).reals;
                const std::vector<double>& x = at.at(1).reals;
                const std::vector<double>& p = at.at(2).reals;
                mlp_gradients g = mlp_grad(base, loss, p, x, lookup_target(data, x, y));
                return value::tuple(
                    {value::reals(y), value::reals(normalized_abs(g.by_input))});
            };
            a.desc.sees_base_output = true;
            a.desc.sees_base_input = true;
            a.desc.sees_base_params = true;
            a.desc.base_frozen = (kind == agent_kind::post_hoc);
            break;
        }
        case agent_kind::model_agnostic: {
            // observe only the black box: train a frozen copy once, then
            // explain by zeroing one input at a time
            std::vector<double> frozen =
                reference_training_loop(base, base_opt, data, 2000, seed).final_params;
            a.X = value_space::product(
                {value_space::real_vector(out), value_space::real_vector(in)});
            a.eta = [base, frozen, in](std::size_t, const std::vector<value>& h) -> value {
                const auto& at = h.back().atoms();
                const std::vector<double>& y = at.at(0).reals;
                const std::vector<double>& x = at.at(1).reals;
                std::vector<double> d(in, 0.0);
                for (std::size_t i = 0; i < in; ++i) {
                    std::vector<double> xz = x;
                    xz[i] = 0.0;
                    std::vector<double> yz = mlp_forward(base, frozen, xz);
                    double acc = 0.0;
                    for (std::size_t j = 0; j < y.size(); ++j) acc += std::fabs(yz[j] - y[j]);
                    d[i] = acc / static_cast<double>(y.size());
                }
                return value::tuple({value::reals(y), value::reals(normalized_abs(d))});
            };
            a.desc.sees_base_output = true;
            a.desc.sees_base_input = true;
            break;
        }
        case agent_kind::forward_based: {
            a.X = value_space::product(
                {value_space::real_vector(in), value_space::real_vector(pc)});
            a.eta = [base, in](std::size_t, const std::vector<value>& h) -> value {
                const auto& at = h.back().atoms();
                const std::vector<double>& x = at.at(0).reals;
                const std::vector<double>& p = at.at(1).reals;
                std::vector<double> y = mlp_forward(base, p, x);
                std::vector<double> d(in, 0.0);
                for (std::size_t i = 0; i < in; ++i) {
                    std::vector<double> xz = x;
                    xz[i] = 0.0;
                    std::vector<double> yz = mlp_forward(base, p, xz);
                    double acc = 0.0;
                    for (std::size_t j = 0; j < y.size(); ++j) acc += std::fabs(yz[j] - y[j]);
                    d[i] = acc / static_cast<double>(y.size());
                }
                return value::tuple({value::reals(y), value::reals(normalized_abs(d))});
            };
            a.desc.sees_base_input = true;
            a.desc.sees_base_params = true;
            break;
        }
        case agent_kind::backward_based: {
            a.X = value_space::product(
                {value_space::real_vector(in), value_space::real_vector(pc)});
            a.eta = [base, loss, data](std::size_t, const std::vector<value>& h) -> value {
                const auto& at = h.back().atoms();
                const std::vector<double>& x = at.at(0).reals;
                const std::vector<double>& p = at.at(1).reals;
                std::vector<double> y = mlp_forward(base, p, x);
                mlp_gradients g = mlp_grad(base, loss, p, x, lookup_target(data, x, y));
                return value::tuple(
                    {value::reals(std::move(y)), value::reals(normalized_abs(g.by_input))});
            };
            a.desc.sees_base_input = true;
            a.desc.sees_base_params = true;
            a.desc.params_processed = true;
            break;
        }
        case agent_kind::intrinsic: {
            // a self-trained linear probe whose own weights are the explanation
            mlp_spec probe{{in, out}, activation::sigmoid};
            const std::size_t ppc = param_count(probe);
            a.X = value_space::real_vector(in);
            a.Ys = value_space::real_vector(out);
            a.P = value_space::real_vector(ppc);
            a.eta = [probe, seed, in, out](std::size_t, const std::vector<value>& h) -> value {
                const value& v = h.back();
                const std::vector<double>& x = v.atoms().at(0).reals;
                std::vector<double> p =
                    v.size() >= 2 ? v.atoms()[1].reals : init_params(probe, seed);
                std::vector<double> y = mlp_forward(probe, p, x);
                std::vector<double> d(in, 0.0);
                for (std::size_t i = 0; i < in; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < out; ++j) acc += std::fabs(p[j * in + i]);
                    d[i] = acc / static_cast<double>(out);
                }
                return value::tuple(
                    {value::reals(std::move(y)), value::reals(normalized_abs(d))});
            };
            a.nabla = mlp_update_kernel(probe, base_opt, seed, {ppc});
            a.desc.own_training_data = true;
            a.desc.supervised = true;
            a.net = probe;
            break;
        }
        case agent_kind::concept_bottleneck: {
            if (base.layers.size() != 3)
                throw dimension_mismatch_error(
                    "concept bottleneck needs exactly one hidden layer to factor through");
            const std::size_t c = base.layers[1];
            // sigmoid at the bottleneck so concept activity lands in [0,1]
            mlp_spec combined{{in, c, out}, activation::sigmoid};
            const std::size_t p1c = (in + 1) * c;
            const std::size_t p2c = (c + 1) * out;
            a.sig = make_relevance_signature("S", feature_names("c", c));
            a.X = value_space::real_vector(in);
            a.Ys = value_space::real_vector(out);
            a.P = value_space::product(
                {value_space::real_vector(p1c), value_space::real_vector(p2c)});
            a.E = value_space::real_vector(c, true);
            a.eta = [combined, seed](std::size_t, const std::vector<value>& h) -> value {
                const value& v = h.back();
                const std::vector<double>& x = v.atoms().at(0).reals;
                std::vector<double> p;
                if (v.size() >= 3) {
                    p = v.atoms()[1].reals;
                    p.insert(p.end(), v.atoms()[2].reals.begin(), v.atoms()[2].reals.end());
                } else {
                    p = init_params(combined, seed);
                }
                auto acts = mlp_activations(combined, p, x);
                return value::tuple({value::reals(acts.back()), value::reals(acts[1])});
            };
            a.nabla = mlp_update_kernel(combined, base_opt, seed, {p1c, p2c});
            a.desc.concept_factored = true;
            a.desc.supervised = true;
            a.net = combined;
            break;
        }
        default:
            throw unsupported_kind_error("unknown agent kind");
    }
    return assemble(std::move(a));
}

// -------------------------------------------------------------- taxonomy ---

taxonomy_label classify(const concrete_agent& a) {
    const wiring_descriptor& w = a.descriptor;
    taxonomy_label l;
    l.mode = a.trans.mode;
    l.supervised = w.supervised;
    l.constant_architecture = w.constant_architecture;
    if (w.concept_factored) {
        l.kind = agent_kind::concept_bottleneck;
    } else if (w.own_training_data) {
        l.kind = agent_kind::intrinsic;
    } else if (w.sees_base_output && w.sees_base_input && w.sees_base_params) {
        if (!w.base_frozen.has_value())
            throw ambiguous_wiring_error(
                "agent sees the base output, input and parameters; whether the base is frozen "
                "decides between post-hoc and model-specific, and it is unset");
        l.kind = *w.base_frozen ? agent_kind::post_hoc : agent_kind::model_specific;
    } else if (w.sees_base_output && w.sees_base_input) {
        l.kind = agent_kind::model_agnostic;
    } else if (w.sees_base_input && w.sees_base_params) {
        l.kind = w.params_processed ? agent_kind::backward_based : agent_kind::forward_based;
    } else {
        l.kind = agent_kind::plain_learning_agent;
    }
    return l;
}

// -------------------------------------------------------------- training ---

training_result run_training(const concrete_agent& a, const dataset& data, std::size_t steps,
                             bool record_trace) {
    if (data.size() == 0) throw dataset_format_error("cannot train on an empty dataset");
    evaluator ev(a.compiled, record_trace);
    training_result res;
    res.losses.reserve(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t k = n % data.size();
        value input = a.descriptor.supervised
                          ? value::tuple({value::reals(data.targets[k]),
                                          value::reals(data.inputs[k])})
                          : value::reals(data.inputs[k]);
        value out = ev.step(input);
        if (!out.atoms().empty() && out.atoms()[0].kind == atom_kind::real_vector) {
            const std::vector<double>& y = out.atoms()[0].reals;
            if (y.size() == data.targets[k].size())
                res.losses.push_back(loss_value(a.opt.loss, y, data.targets[k]));
        }
    }
    if (record_trace) {
        res.trace = ev.trace();
        if (!res.trace.feedback_states.empty() && !res.trace.feedback_states[0].empty()) {
            const value& last = res.trace.feedback_states[0].back();
            for (const atom_value& at : last.atoms())
                res.final_params.insert(res.final_params.end(), at.reals.begin(),
                                        at.reals.end());
        }
    }
    return res;
}

training_result reference_training_loop(const mlp_spec& net, const optimizer_spec& opt,
                                        const dataset& data, std::size_t steps,
                                        std::uint64_t seed) {
    if (data.size() == 0) throw dataset_format_error("cannot train on an empty dataset");
    std::vector<double> p = init_params(net, seed);
    adam_state st;
    training_result res;
    res.losses.reserve(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t k = n % data.size();
        const std::vector<double>& x = data.inputs[k];
        const std::vector<double>& t = data.targets[k];
        res.losses.push_back(loss_value(opt.loss, mlp_forward(net, p, x), t));
        mlp_gradients g = mlp_grad(net, opt.loss, p, x, t);
        p = optimizer_step(opt, p, g.by_param, n,
                           opt.kind == optimizer_kind::adam ? &st : nullptr);
    }
    res.final_params = std::move(p);
    return res;
}

// -------------------------------------------------------------- readouts ---

explanation explanation_from_output(const concrete_agent& a, const value& output) {
    if (!a.trans.expl_signature)
        throw unsupported_kind_error("agent '" + a.name + "' carries no explanation signature");
    if (output.size() < 2)
        throw dimension_mismatch_error("output value carries no explanation atom");
    explanation e;
    e.degrees = output.atoms()[1].reals;
    e.model = saliency_model(*a.trans.expl_signature, e.degrees, a.expl_tau);
    e.saliency = saliency_sentence(*a.trans.expl_signature, e.degrees, a.expl_tau);
    return e;
}

explanation explain_input(const concrete_agent& a, const mlp_spec& base,
                          const std::vector<double>& base_params,
                          const std::vector<double>& x) {
    const wiring_descriptor& w = a.descriptor;
    if (!w.sees_base_input)
        throw unsupported_kind_error("agent '" + a.name +
                                     "' does not observe a base model; read explanations off "
                                     "its training outputs instead");
    std::vector<value> parts;
    if (w.sees_base_output) parts.push_back(value::reals(mlp_forward(base, base_params, x)));
    parts.push_back(value::reals(x));
    if (w.sees_base_params) parts.push_back(value::reals(base_params));
    std::vector<value> outs = prefix_evaluate(a.compiled, {value::tuple(parts)});
    return explanation_from_output(a, outs.at(0));
}

explanation explain_after_training(const concrete_agent& a, const dataset& data,
                                   std::size_t steps, const std::vector<double>& x) {
    if (data.size() == 0) throw dataset_format_error("cannot train on an empty dataset");
    evaluator ev(a.compiled, false);
    value out = value::tuple({});
    for (std::size_t n = 0; n < steps; ++n) {
        const std::size_t k = n % data.size();
        value input = a.descriptor.supervised
                          ? value::tuple({value::reals(data.targets[k]),
                                          value::reals(data.inputs[k])})
                          : value::reals(data.inputs[k]);
        out = ev.step(input);
    }
    // one more step at the queried point; the target comes from the matching
    // training row so the query does not perturb the schedule's meaning
    std::vector<double> y = out.size() >= 1 ? out.atoms()[0].reals
                                            : std::vector<double>(data.out_dim, 0.0);
    value query = a.descriptor.supervised
                      ? value::tuple({value::reals(lookup_target(data, x, y)), value::reals(x)})
                      : value::reals(x);
    return explanation_from_output(a, ev.step(query));
}

// ------------------------------------------------------------- witnesses ---

std::vector<witness> table_witnesses(const dataset& data, std::uint64_t seed) {
    mlp_spec base{{data.in_dim, 4, data.out_dim}, activation::relu};
    mlp_spec cbm_base{{data.in_dim, 3, data.out_dim}, activation::sigmoid};
    optimizer_spec opt;  // sgd, lr 0.5, mse

    auto lbl = [](agent_kind k, explanation_mode m, bool sup, bool ca) {
        taxonomy_label l;
        l.kind = k;
        l.mode = m;
        l.supervised = sup;
        l.constant_architecture = ca;
        return l;
    };
    auto expl = [&](agent_kind k, explanation_mode m) {
        return build_explainer(k, base, opt, data, seed, m);
    };

    std::vector<witness> w;
    w.push_back({"learning-agent", build_mlp_agent(base, opt, seed),
                 lbl(agent_kind::plain_learning_agent, explanation_mode::none, true, true)});
    w.push_back({"syntactic-explainer", expl(agent_kind::post_hoc, explanation_mode::syntactic),
                 lbl(agent_kind::post_hoc, explanation_mode::syntactic, false, true)});
    w.push_back({"semantic-explainer", expl(agent_kind::post_hoc, explanation_mode::semantic),
                 lbl(agent_kind::post_hoc, explanation_mode::semantic, false, true)});
    w.push_back({"model-specific", expl(agent_kind::model_specific, explanation_mode::semantic),
                 lbl(agent_kind::model_specific, explanation_mode::semantic, false, true)});
    w.push_back({"model-agnostic", expl(agent_kind::model_agnostic, explanation_mode::semantic),
                 lbl(agent_kind::model_agnostic, explanation_mode::semantic, false, true)});
    w.push_back({"forward-based", expl(agent_kind::forward_based, explanation_mode::semantic),
                 lbl(agent_kind::forward_based, explanation_mode::semantic, false, true)});
    w.push_back({"backward-based", expl(agent_kind::backward_based, explanation_mode::semantic),
                 lbl(agent_kind::backward_based, explanation_mode::semantic, false, true)});
    w.push_back({"intrinsic", expl(agent_kind::intrinsic, explanation_mode::semantic),
                 lbl(agent_kind::intrinsic, explanation_mode::semantic, true, true)});
    w.push_back(
        {"concept-bottleneck",
         build_explainer(agent_kind::concept_bottleneck, cbm_base, opt, data, seed),
         lbl(agent_kind::concept_bottleneck, explanation_mode::semantic, true, true)});
    w.push_back({"architecture-search",
                 build_nas_agent(mlp_spec{{data.in_dim, 2, data.out_dim}, activation::relu},
                                 mlp_spec{{data.in_dim, 4, data.out_dim}, activation::relu},
                                 100, opt, seed),
                 lbl(agent_kind::plain_learning_agent, explanation_mode::none, true, false)});
    w.push_back({"recurrent", build_rnn_agent(data.in_dim, 3, data.out_dim, seed),
                 lbl(agent_kind::plain_learning_agent, explanation_mode::none, false, true)});
    return w;
}

}  // namespace catstream
