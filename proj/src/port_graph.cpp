#include "catstream/port_graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "catstream/errors.hpp"

namespace catstream {

std::string port_ref::str() const {
    switch (where) {
        case end::boundary_in: return "in." + std::to_string(index);
        case end::boundary_out: return "out." + std::to_string(index);
        case end::node_in: return "n" + std::to_string(node) + ".i" + std::to_string(index);
        case end::node_out: return "n" + std::to_string(node) + ".o" + std::to_string(index);
    }
    return "?";
}

bool port_diagram::has_feedback() const {
    for (const auto& w : wires)
        if (w.feedback) return true;
    return false;
}

std::string port_diagram::serialize() const {
    std::string out = "in:";
    for (const auto& f : inputs) out += " " + f.base + "/" + std::to_string(f.delay);
    out += "\nout:";
    for (const auto& f : outputs) out += " " + f.base + "/" + std::to_string(f.delay);
    out += "\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        const char* k = n.kind == node_kind::generator ? "gen"
                        : n.kind == node_kind::copier  ? "copy"
                                                       : "discard";
        out += "n" + std::to_string(i) + ": " + k + " " + n.label + " " +
               std::to_string(n.n_in) + "->" + std::to_string(n.n_out) + "\n";
    }
    std::vector<std::string> ws;
    for (const auto& w : wires)
        ws.push_back(w.from.str() + " -> " + w.to.str() + " [" + w.label + "]" +
                     (w.feedback ? " fbk" : ""));
    std::sort(ws.begin(), ws.end());
    for (const auto& s : ws) out += s + "\n";
    return out;
}

namespace {

// ---------------------------------------------------------------------------
// canonical path: symbolic evaluation to a hash-consed term DAG
// ---------------------------------------------------------------------------

struct dag_ref {
    bool is_input;  // else: output of an application
    int idx;        // boundary input index, or application id
    int out;        // output slot of the application
    factor fac;     // the factor this value carries

    bool same_source(const dag_ref& o) const {
        return is_input == o.is_input && idx == o.idx && out == o.out;
    }
};

struct dag_app {
    std::string gen;
    std::vector<dag_ref> args;
    std::vector<factor> out_factors;
};

struct term_dag {
    std::vector<dag_app> apps;
    std::vector<dag_ref> outputs;
    std::vector<factor> input_factors;
};

std::string ref_key(const dag_ref& r) {
    return (r.is_input ? "i" : "a") + std::to_string(r.idx) + "." + std::to_string(r.out);
}

struct dag_builder {
    term_dag dag;
    std::map<std::string, int> cons;  // (gen, arg sources) -> app id

    std::vector<dag_ref> eval(const term& t, std::vector<dag_ref> in) {
        switch (t->kind) {
            case term_kind::identity: return in;
            case term_kind::symmetry: {
                std::size_t a = t->obj_a.size();
                std::vector<dag_ref> out(in.begin() + a, in.end());
                out.insert(out.end(), in.begin(), in.begin() + a);
                return out;
            }
            case term_kind::copy: {
                std::vector<dag_ref> out = in;
                out.insert(out.end(), in.begin(), in.end());
                return out;
            }
            case term_kind::discard: return {};
            case term_kind::compose: {
                return eval(t->right, eval(t->left, std::move(in)));
            }
            case term_kind::tensor: {
                std::size_t a = t->left->dom.size();
                std::vector<dag_ref> l(in.begin(), in.begin() + a);
                std::vector<dag_ref> r(in.begin() + a, in.end());
                auto lo = eval(t->left, std::move(l));
                auto ro = eval(t->right, std::move(r));
                lo.insert(lo.end(), ro.begin(), ro.end());
                return lo;
            }
            case term_kind::gen: {
                std::string key = t->gen_name;
                for (const auto& r : in) key += "|" + ref_key(r);
                auto it = cons.find(key);
                int id;
                if (it != cons.end()) {
                    id = it->second;
                } else {
                    id = static_cast<int>(dag.apps.size());
                    dag.apps.push_back({t->gen_name, in, t->cod.factors()});
                    cons.emplace(std::move(key), id);
                }
                std::vector<dag_ref> out;
                const auto& fs = t->cod.factors();
                for (std::size_t j = 0; j < fs.size(); ++j)
                    out.push_back({false, id, static_cast<int>(j), fs[j]});
                return out;
            }
            case term_kind::feedback:
                throw unsupported_feedback_equality("canonical form is feedback-free only");
        }
        return {};
    }
};

// Deterministic relabeling: apps reachable from the boundary outputs are
// renumbered in the order a left-to-right depth-first walk first completes
// them; unreachable apps vanish (discard naturality).
term_dag canonicalize(const term_dag& in) {
    std::vector<int> new_id(in.apps.size(), -1);
    std::vector<int> order;
    std::vector<int> state(in.apps.size(), 0);  // 0 new, 1 visiting, 2 done
    std::function<void(int)> visit = [&](int a) {
        if (state[a]) return;
        state[a] = 1;
        for (const auto& r : in.apps[a].args)
            if (!r.is_input) visit(r.idx);
        state[a] = 2;
        new_id[a] = static_cast<int>(order.size());
        order.push_back(a);
    };
    for (const auto& r : in.outputs)
        if (!r.is_input) visit(r.idx);
    term_dag out;
    out.input_factors = in.input_factors;
    auto remap = [&](dag_ref r) {
        if (!r.is_input) r.idx = new_id[r.idx];
        return r;
    };
    for (int old : order) {
        dag_app a = in.apps[old];
        for (auto& r : a.args) r = remap(r);
        out.apps.push_back(std::move(a));
    }
    for (const auto& r : in.outputs) out.outputs.push_back(remap(r));
    return out;
}

// Lay the canonical DAG out as a port graph. Fan-out becomes a left-nested
// copier chain over consumers in canonical order; unused generator outputs
// get discarders; unused boundary inputs stay unwired.
port_diagram diagram_from_dag(const term_dag& dag, const std::vector<factor>& out_factors) {
    port_diagram d;
    d.canonical = true;
    d.inputs = dag.input_factors;
    d.outputs = out_factors;
    for (const auto& a : dag.apps)
        d.nodes.push_back({node_kind::generator, a.gen, static_cast<int>(a.args.size()),
                           static_cast<int>(a.out_factors.size())});

    struct use {
        port_ref sink;
    };
    std::map<std::string, std::vector<use>> uses;
    for (std::size_t ai = 0; ai < dag.apps.size(); ++ai)
        for (std::size_t k = 0; k < dag.apps[ai].args.size(); ++k)
            uses[ref_key(dag.apps[ai].args[k])].push_back(
                {{port_ref::end::node_in, static_cast<int>(ai), static_cast<int>(k)}});
    for (std::size_t o = 0; o < dag.outputs.size(); ++o)
        uses[ref_key(dag.outputs[o])].push_back(
            {{port_ref::end::boundary_out, -1, static_cast<int>(o)}});

    auto emit = [&](port_ref src, const factor& fac, const std::vector<use>& us, bool from_app) {
        const std::string label = fac.base;
        if (us.empty()) {
            if (from_app) {
                int n = static_cast<int>(d.nodes.size());
                d.nodes.push_back({node_kind::discarder, label, 1, 0});
                d.wires.push_back({src, {port_ref::end::node_in, n, 0}, false, label});
            }
            return;
        }
        if (us.size() == 1) {
            d.wires.push_back({src, us[0].sink, false, label});
            return;
        }
        port_ref cur = src;
        for (std::size_t i = 0; i + 1 < us.size(); ++i) {
            int n = static_cast<int>(d.nodes.size());
            d.nodes.push_back({node_kind::copier, label, 1, 2});
            d.wires.push_back({cur, {port_ref::end::node_in, n, 0}, false, label});
            d.wires.push_back({{port_ref::end::node_out, n, 0}, us[i].sink, false, label});
            cur = {port_ref::end::node_out, n, 1};
        }
        d.wires.push_back({cur, us.back().sink, false, label});
    };

    for (std::size_t i = 0; i < dag.input_factors.size(); ++i) {
        dag_ref r{true, static_cast<int>(i), 0, dag.input_factors[i]};
        auto it = uses.find(ref_key(r));
        emit({port_ref::end::boundary_in, -1, static_cast<int>(i)}, r.fac,
             it == uses.end() ? std::vector<use>{} : it->second, false);
    }
    for (std::size_t a = 0; a < dag.apps.size(); ++a)
        for (std::size_t j = 0; j < dag.apps[a].out_factors.size(); ++j) {
            dag_ref r{false, static_cast<int>(a), static_cast<int>(j), dag.apps[a].out_factors[j]};
            auto it = uses.find(ref_key(r));
            emit({port_ref::end::node_out, static_cast<int>(a), static_cast<int>(j)}, r.fac,
                 it == uses.end() ? std::vector<use>{} : it->second, true);
        }
    return d;
}

port_diagram canonical_diagram(const term& t) {
    dag_builder b;
    b.dag.input_factors = t->dom.factors();
    std::vector<dag_ref> in;
    const auto& fs = t->dom.factors();
    for (std::size_t i = 0; i < fs.size(); ++i) in.push_back({true, static_cast<int>(i), 0, fs[i]});
    b.dag.outputs = b.eval(t, std::move(in));
    term_dag canon = canonicalize(b.dag);
    return diagram_from_dag(canon, t->cod.factors());
}

// ---------------------------------------------------------------------------
// structural path (needed as soon as feedback is involved)
// ---------------------------------------------------------------------------

struct open_wire {
    // a value waiting for a consumer: where it comes from, what it carries
    std::optional<port_ref> src;  // nullopt: pending feedback state input
    int placeholder = -1;         // id when src is empty
    factor fac;
};

struct struct_builder {
    port_diagram d;
    int next_placeholder = 0;
    // wires recorded with placeholder sources get patched when the loop closes
    std::vector<std::pair<int, std::size_t>> pending;  // placeholder id -> wire index

    void connect(const open_wire& from, port_ref to) {
        if (from.src) {
            d.wires.push_back({*from.src, to, false, from.fac.base});
        } else {
            d.wires.push_back({{}, to, false, from.fac.base});
            pending.emplace_back(from.placeholder, d.wires.size() - 1);
        }
    }

    std::vector<open_wire> eval(const term& t, std::vector<open_wire> in) {
        switch (t->kind) {
            case term_kind::identity: return in;
            case term_kind::symmetry: {
                std::size_t a = t->obj_a.size();
                std::vector<open_wire> out(in.begin() + a, in.end());
                out.insert(out.end(), in.begin(), in.begin() + a);
                return out;
            }
            case term_kind::copy: {
                std::vector<open_wire> firsts, seconds;
                for (auto& w : in) {
                    int n = static_cast<int>(d.nodes.size());
                    d.nodes.push_back({node_kind::copier, w.fac.base, 1, 2});
                    connect(w, {port_ref::end::node_in, n, 0});
                    firsts.push_back({port_ref{port_ref::end::node_out, n, 0}, -1, w.fac});
                    seconds.push_back({port_ref{port_ref::end::node_out, n, 1}, -1, w.fac});
                }
                firsts.insert(firsts.end(), seconds.begin(), seconds.end());
                return firsts;
            }
            case term_kind::discard: {
                for (auto& w : in) {
                    int n = static_cast<int>(d.nodes.size());
                    d.nodes.push_back({node_kind::discarder, w.fac.base, 1, 0});
                    connect(w, {port_ref::end::node_in, n, 0});
                }
                return {};
            }
            case term_kind::compose: return eval(t->right, eval(t->left, std::move(in)));
            case term_kind::tensor: {
                std::size_t a = t->left->dom.size();
                std::vector<open_wire> l(in.begin(), in.begin() + a);
                std::vector<open_wire> r(in.begin() + a, in.end());
                auto lo = eval(t->left, std::move(l));
                auto ro = eval(t->right, std::move(r));
                lo.insert(lo.end(), ro.begin(), ro.end());
                return lo;
            }
            case term_kind::gen: {
                int n = static_cast<int>(d.nodes.size());
                d.nodes.push_back({node_kind::generator, t->gen_name,
                                   static_cast<int>(t->dom.size()),
                                   static_cast<int>(t->cod.size())});
                for (std::size_t i = 0; i < in.size(); ++i)
                    connect(in[i], {port_ref::end::node_in, n, static_cast<int>(i)});
                std::vector<open_wire> out;
                const auto& fs = t->cod.factors();
                for (std::size_t j = 0; j < fs.size(); ++j)
                    out.push_back({port_ref{port_ref::end::node_out, n, static_cast<int>(j)}, -1,
                                   fs[j]});
                return out;
            }
            case term_kind::feedback: {
                std::size_t k = t->obj_a.size();
                const auto& sf = t->obj_a.factors();
                std::vector<open_wire> body_in = std::move(in);
                std::vector<int> ids;
                for (std::size_t i = 0; i < k; ++i) {
                    ids.push_back(next_placeholder);
                    body_in.push_back({std::nullopt, next_placeholder++, sf[i]});
                }
                auto body_out = eval(t->body, std::move(body_in));
                // close the loop: trailing k outputs feed the placeholders
                for (std::size_t i = 0; i < k; ++i) {
                    const open_wire& state = body_out[body_out.size() - k + i];
                    for (auto& [pid, widx] : pending) {
                        if (pid != ids[i]) continue;
                        if (state.src) {
                            d.wires[widx].from = *state.src;
                            d.wires[widx].feedback = true;
                            pid = -1;
                        }
                        // state passed straight through: degenerate loop, drop it
                        else if (state.placeholder == ids[i]) {
                            d.wires.erase(d.wires.begin() + static_cast<long>(widx));
                            for (auto& [q, wi] : pending)
                                if (wi > widx) --wi;
                            pid = -1;
                        }
                    }
                }
                body_out.resize(body_out.size() - k);
                return body_out;
            }
        }
        return {};
    }
};

port_diagram structural_diagram(const term& t) {
    struct_builder b;
    b.d.canonical = false;
    b.d.inputs = t->dom.factors();
    b.d.outputs = t->cod.factors();
    std::vector<open_wire> in;
    const auto& fs = t->dom.factors();
    for (std::size_t i = 0; i < fs.size(); ++i)
        in.push_back({port_ref{port_ref::end::boundary_in, -1, static_cast<int>(i)}, -1, fs[i]});
    auto out = b.eval(t, std::move(in));
    for (std::size_t i = 0; i < out.size(); ++i)
        b.connect(out[i], {port_ref::end::boundary_out, -1, static_cast<int>(i)});
    return std::move(b.d);
}

}  // namespace

port_diagram normalize(const term& t) {
    if (contains_feedback(t)) return structural_diagram(t);
    return canonical_diagram(t);
}

port_diagram renormalize(const port_diagram& d) {
    if (d.has_feedback())
        throw unsupported_feedback_equality("cannot renormalize a diagram with feedback wires");
    // index wires by sink
    std::map<std::string, const wire*> by_sink;
    for (const auto& w : d.wires) by_sink[w.to.str()] = &w;

    term_dag dag;
    dag.input_factors = d.inputs;
    std::map<int, int> app_of_node;
    std::map<std::string, int> cons;  // re-shares identical applications
    std::function<dag_ref(port_ref, const factor&)> resolve = [&](port_ref src,
                                                                  const factor& fac) -> dag_ref {
        if (src.where == port_ref::end::boundary_in) return {true, src.index, 0, fac};
        const auto& n = d.nodes[static_cast<std::size_t>(src.node)];
        if (n.kind == node_kind::copier) {
            const wire* w = by_sink.at(port_ref{port_ref::end::node_in, src.node, 0}.str());
            return resolve(w->from, fac);
        }
        auto it = app_of_node.find(src.node);
        int id;
        if (it != app_of_node.end()) {
            id = it->second;
        } else {
            dag_app app;
            app.gen = n.label;
            std::string key = n.label;
            for (int i = 0; i < n.n_in; ++i) {
                const wire* w = by_sink.at(port_ref{port_ref::end::node_in, src.node, i}.str());
                app.args.push_back(resolve(w->from, factor{w->label, 0}));
                key += "|" + ref_key(app.args.back());
            }
            auto ct = cons.find(key);
            if (ct != cons.end()) {
                id = ct->second;
            } else {
                // output factors come off the node's outgoing wires
                app.out_factors.resize(static_cast<std::size_t>(n.n_out));
                for (const auto& w : d.wires)
                    if (w.from.where == port_ref::end::node_out && w.from.node == src.node)
                        app.out_factors[static_cast<std::size_t>(w.from.index)] =
                            factor{w.label, 0};
                id = static_cast<int>(dag.apps.size());
                dag.apps.push_back(std::move(app));
                cons.emplace(std::move(key), id);
            }
            app_of_node[src.node] = id;
        }
        return {false, id, src.index, fac};
    };
    for (std::size_t o = 0; o < d.outputs.size(); ++o) {
        auto it = by_sink.find(port_ref{port_ref::end::boundary_out, -1, static_cast<int>(o)}.str());
        if (it == by_sink.end())
            throw cat_error("diagram boundary output " + std::to_string(o) + " is unwired");
        dag.outputs.push_back(resolve(it->second->from, d.outputs[o]));
    }
    return diagram_from_dag(canonicalize(dag), d.outputs);
}

bool diagrams_equal(const port_diagram& a, const port_diagram& b) {
    if (a.has_feedback() || b.has_feedback())
        throw unsupported_feedback_equality(
            "diagram equality is decided on the feedback-free fragment only; "
            "use extensional stream equality for feedback");
    const std::string sa = (a.canonical ? a : renormalize(a)).serialize();
    const std::string sb = (b.canonical ? b : renormalize(b)).serialize();
    return sa == sb;
}

}  // namespace catstream
