#include "catstream/value.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace catstream {

std::string atom_space::str() const {
    if (kind == atom_kind::finite_enum) {
        std::string s = "enum{";
        for (std::size_t i = 0; i < elements.size(); ++i)
            s += (i ? "," : "") + elements[i];
        return s + "}";
    }
    return (unit_box ? "[0,1]^" : "R^") + std::to_string(dim);
}

value_space value_space::finite_enum(std::vector<std::string> elements) {
    value_space s;
    atom_space a;
    a.kind = atom_kind::finite_enum;
    a.elements = std::move(elements);
    s.factors_.push_back(std::move(a));
    return s;
}

value_space value_space::real_vector(std::size_t dim, bool unit_box) {
    value_space s;
    if (dim == 0) return s;  // R^0 carries no information; treat as singleton
    atom_space a;
    a.kind = atom_kind::real_vector;
    a.dim = dim;
    a.unit_box = unit_box;
    s.factors_.push_back(a);
    return s;
}

value_space value_space::product(const std::vector<value_space>& parts) {
    value_space s;
    for (const auto& p : parts)
        s.factors_.insert(s.factors_.end(), p.factors_.begin(), p.factors_.end());
    return s;
}

std::string value_space::str() const {
    if (factors_.empty()) return "unit";
    std::string s;
    for (std::size_t i = 0; i < factors_.size(); ++i) s += (i ? " x " : "") + factors_[i].str();
    return s;
}

value value::atom(std::string sym) {
    value v;
    v.atoms_.push_back({atom_kind::finite_enum, std::move(sym), {}});
    return v;
}

value value::reals(std::vector<double> r) {
    value v;
    if (r.empty()) return v;
    v.atoms_.push_back({atom_kind::real_vector, {}, std::move(r)});
    return v;
}

value value::tuple(const std::vector<value>& parts) {
    value v;
    for (const auto& p : parts)
        v.atoms_.insert(v.atoms_.end(), p.atoms_.begin(), p.atoms_.end());
    return v;
}

value value::slice(std::size_t from, std::size_t count) const {
    // clamps instead of throwing: a feedback loop's step-0 input is star, so
    // values flowing through a loop body may be short their trailing state
    // atoms, and slicing past the end must yield the empty tuple
    value v;
    std::size_t lo = std::min(from, atoms_.size());
    std::size_t hi = std::min(from + count, atoms_.size());
    v.atoms_.assign(atoms_.begin() + static_cast<long>(lo),
                    atoms_.begin() + static_cast<long>(hi));
    return v;
}

value value::concat(const value& a, const value& b) {
    value v = a;
    v.atoms_.insert(v.atoms_.end(), b.atoms_.begin(), b.atoms_.end());
    return v;
}

std::string value::str() const {
    if (atoms_.empty()) return "*";
    std::string s;
    char buf[32];
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i) s += " ";
        const auto& a = atoms_[i];
        if (a.kind == atom_kind::finite_enum) {
            s += a.sym;
        } else {
            s += "[";
            for (std::size_t j = 0; j < a.reals.size(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", a.reals[j]);
                s += (j ? " " : "") + std::string(buf);
            }
            s += "]";
        }
    }
    return s;
}

value_space drop_space_suffix(const value_space& whole, std::size_t count) {
    const auto& w = whole.factors();
    std::size_t keep = count >= w.size() ? 0 : w.size() - count;
    std::vector<value_space> parts;
    for (std::size_t i = 0; i < keep; ++i) {
        const atom_space& a = w[i];
        if (a.kind == atom_kind::finite_enum) {
            parts.push_back(value_space::finite_enum(a.elements));
        } else {
            parts.push_back(value_space::real_vector(a.dim, a.unit_box));
        }
    }
    return value_space::product(parts);
}

bool member(const value& v, const value_space& s) {
    if (v.atoms().size() != s.factors().size()) return false;
    for (std::size_t i = 0; i < v.atoms().size(); ++i) {
        const auto& a = v.atoms()[i];
        const auto& f = s.factors()[i];
        if (a.kind != f.kind) return false;
        if (f.kind == atom_kind::finite_enum) {
            bool found = false;
            for (const auto& e : f.elements)
                if (e == a.sym) found = true;
            if (!found) return false;
        } else {
            if (a.reals.size() != f.dim) return false;
        }
    }
    return true;
}

bool values_equal(const value& a, const value& b, double tol) {
    if (a.atoms().size() != b.atoms().size()) return false;
    for (std::size_t i = 0; i < a.atoms().size(); ++i) {
        const auto& x = a.atoms()[i];
        const auto& y = b.atoms()[i];
        if (x.kind != y.kind) return false;
        if (x.kind == atom_kind::finite_enum) {
            if (x.sym != y.sym) return false;
        } else {
            if (x.reals.size() != y.reals.size()) return false;
            for (std::size_t j = 0; j < x.reals.size(); ++j)
                if (std::abs(x.reals[j] - y.reals[j]) > tol) return false;
        }
    }
    return true;
}

value sample_value(rng& r, const value_space& s) {
    std::vector<value> parts;
    for (const auto& f : s.factors()) {
        if (f.kind == atom_kind::finite_enum) {
            parts.push_back(value::atom(f.elements[r.below(f.elements.size())]));
        } else {
            std::vector<double> v(f.dim);
            for (auto& x : v) x = r.uniform01();
            parts.push_back(value::reals(std::move(v)));
        }
    }
    return value::tuple(parts);
}

space_seq space_seq::constant(value_space s) {
    space_seq q;
    q.constant_ = true;
    q.const_space_ = std::move(s);
    return q;
}

space_seq space_seq::varying(std::function<value_space(std::size_t)> f) {
    space_seq q;
    q.constant_ = false;
    q.fn_ = std::move(f);
    return q;
}

space_seq space_seq::product(const space_seq& a, const space_seq& b) {
    if (a.constant_ && b.constant_)
        return constant(value_space::product({a.const_space_, b.const_space_}));
    return varying([a, b](std::size_t n) { return value_space::product({a.at(n), b.at(n)}); });
}

space_seq space_seq::delay(const space_seq& s) {
    return varying([s](std::size_t n) {
        return n == 0 ? value_space::singleton() : s.at(n - 1);
    });
}

value_space space_seq::at(std::size_t n) const { return constant_ ? const_space_ : fn_(n); }

bool spaces_agree(const space_seq& a, const space_seq& b, std::size_t horizon) {
    if (a.is_constant() && b.is_constant()) return a.at(0) == b.at(0);
    for (std::size_t n = 0; n <= horizon; ++n)
        if (!(a.at(n) == b.at(n))) return false;
    return true;
}

}  // namespace catstream
