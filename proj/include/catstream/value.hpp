#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "catstream/rng.hpp"

namespace catstream {

enum class atom_kind { finite_enum, real_vector };

// One flattened factor of a value space. real_vector carries an optional
// unit-box annotation ([0,1]^n vs R^n); it affects sampling and printing,
// not membership or equality, so agent output spaces compose freely with
// kernels declared over plain reals.
struct atom_space {
    atom_kind kind;
    std::vector<std::string> elements;  // finite_enum
    std::size_t dim = 0;                // real_vector
    bool unit_box = false;

    bool operator==(const atom_space& o) const {
        if (kind != o.kind) return false;
        if (kind == atom_kind::finite_enum) return elements == o.elements;
        return dim == o.dim;
    }
    std::string str() const;
};

// A space of per-step values, kept flattened: the product is concatenation
// and the singleton is the empty factor list (so star is the empty tuple and
// tuple(star, x) == x without special cases).
class value_space {
public:
    value_space() = default;

    static value_space finite_enum(std::vector<std::string> elements);
    static value_space real_vector(std::size_t dim, bool unit_box = false);
    static value_space singleton() { return value_space{}; }
    static value_space product(const std::vector<value_space>& parts);

    const std::vector<atom_space>& factors() const { return factors_; }
    bool is_singleton() const { return factors_.empty(); }
    std::size_t size() const { return factors_.size(); }

    bool operator==(const value_space& o) const { return factors_ == o.factors_; }
    std::string str() const;

private:
    std::vector<atom_space> factors_;
};

struct atom_value {
    atom_kind kind;
    std::string sym;            // finite_enum
    std::vector<double> reals;  // real_vector

    bool operator==(const atom_value&) const = default;
};

// A flattened tuple of atoms; star is the empty tuple.
class value {
public:
    value() = default;

    static value star() { return value{}; }
    static value atom(std::string sym);
    static value reals(std::vector<double> v);
    static value tuple(const std::vector<value>& parts);

    const std::vector<atom_value>& atoms() const { return atoms_; }
    bool is_star() const { return atoms_.empty(); }
    std::size_t size() const { return atoms_.size(); }

    value slice(std::size_t from, std::size_t count) const;
    static value concat(const value& a, const value& b);

    bool operator==(const value&) const = default;
    // deterministic rendering (reals via %.17g); used by traces and the
    // hash-table kernels, so changing it changes frozen test values
    std::string str() const;

private:
    std::vector<atom_value> atoms_;
};

// the same space with `count` trailing factors removed (count may exceed the
// factor count; the result is then the singleton)
value_space drop_space_suffix(const value_space& whole, std::size_t count);

bool member(const value& v, const value_space& s);

// exact on enum atoms, within tol on real coordinates
bool values_equal(const value& a, const value& b, double tol);

// enums uniform, reals from the unit cube
value sample_value(rng& r, const value_space& s);

// A time-indexed family of value spaces. Constant for ordinary streams;
// function-backed for delayed state wires and other step-varying shapes.
class space_seq {
public:
    space_seq() : constant_(true) {}
    static space_seq constant(value_space s);
    static space_seq varying(std::function<value_space(std::size_t)> f);
    static space_seq product(const space_seq& a, const space_seq& b);
    // the delay endofunctor on spaces: at(0) = singleton, at(n+1) = s.at(n)
    static space_seq delay(const space_seq& s);

    value_space at(std::size_t n) const;
    bool is_constant() const { return constant_; }

private:
    bool constant_;
    value_space const_space_;
    std::function<value_space(std::size_t)> fn_;
};

// pointwise equality over steps 0..horizon
bool spaces_agree(const space_seq& a, const space_seq& b, std::size_t horizon);

}  // namespace catstream
