#pragma once

#include <string>
#include <vector>

namespace catstream {

// One factor of a flattened object: a named base object under `delay`
// applications of the state-delay endofunctor. delay > 0 only ever shows up
// on feedback state wires.
struct factor {
    std::string base;
    int delay = 0;

    bool operator==(const factor&) const = default;
};

// Objects of the free cartesian category, kept in flattened form: the monoidal
// product is strictly associative and unital, so an object IS its list of
// factors. unit() is the empty list; delayed() bumps every factor's delay
// (the delay functor distributes over products and kills the unit).
class object_expr {
public:
    object_expr() = default;

    static object_expr base(const std::string& name) {
        object_expr o;
        o.factors_.push_back({name, 0});
        return o;
    }
    static object_expr unit() { return object_expr{}; }
    static object_expr product(const object_expr& a, const object_expr& b) {
        object_expr o = a;
        o.factors_.insert(o.factors_.end(), b.factors_.begin(), b.factors_.end());
        return o;
    }
    static object_expr product(const std::vector<object_expr>& parts) {
        object_expr o;
        for (const auto& p : parts)
            o.factors_.insert(o.factors_.end(), p.factors_.begin(), p.factors_.end());
        return o;
    }
    static object_expr delayed(const object_expr& inner) {
        object_expr o = inner;
        for (auto& f : o.factors_) ++f.delay;
        return o;
    }
    static object_expr from_factors(std::vector<factor> fs) {
        object_expr o;
        o.factors_ = std::move(fs);
        return o;
    }

    const std::vector<factor>& factors() const { return factors_; }
    bool is_unit() const { return factors_.empty(); }
    std::size_t size() const { return factors_.size(); }

    // the same factor list with all delay marks cleared
    object_expr undelayed() const {
        object_expr o = *this;
        for (auto& f : o.factors_) f.delay = 0;
        return o;
    }

    bool operator==(const object_expr&) const = default;

    // e.g. "X x Y' x P" ; unit prints as "I"; delayed factors as "F(P)"
    std::string str() const;

private:
    std::vector<factor> factors_;
};

// true when `whole` ends with `suffix` (exact factor equality)
bool ends_with(const object_expr& whole, const object_expr& suffix);

// drops `n` trailing factors
object_expr drop_suffix(const object_expr& whole, std::size_t n);

}  // namespace catstream
