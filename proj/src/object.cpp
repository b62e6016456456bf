#include "catstream/object.hpp"

namespace catstream {

std::string object_expr::str() const {
    if (factors_.empty()) return "I";
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        if (i) out += " x ";
        std::string piece = factors_[i].base;
        for (int d = 0; d < factors_[i].delay; ++d) piece = "F(" + piece + ")";
        out += piece;
    }
    return out;
}

bool ends_with(const object_expr& whole, const object_expr& suffix) {
    const auto& w = whole.factors();
    const auto& s = suffix.factors();
    if (s.size() > w.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (!(w[w.size() - s.size() + i] == s[i])) return false;
    return true;
}

object_expr drop_suffix(const object_expr& whole, std::size_t n) {
    auto fs = whole.factors();
    fs.resize(n >= fs.size() ? 0 : fs.size() - n);
    return object_expr::from_factors(std::move(fs));
}

}  // namespace catstream
