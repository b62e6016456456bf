#include "catstream/presentation.hpp"

#include "catstream/errors.hpp"

namespace catstream {

const generator_decl* presentation::find(const std::string& name) const {
    for (const auto& g : generators)
        if (g.name == name) return &g;
    return nullptr;
}

presentation make_presentation(std::vector<std::string> objects,
                               std::vector<generator_decl> generators) {
    presentation p;
    for (auto& o : objects) p.objects.insert(std::move(o));
    auto check_type = [&p](const generator_decl& g, const object_expr& t) {
        for (const auto& f : t.factors()) {
            if (f.delay != 0)
                throw unknown_object_error("generator '" + g.name +
                                           "' uses a delayed object in its type");
            if (!p.objects.count(f.base))
                throw unknown_object_error("generator '" + g.name + "' mentions unknown object '" +
                                           f.base + "'");
        }
    };
    for (auto& g : generators) {
        if (p.find(g.name))
            throw duplicate_generator_error("duplicate generator '" + g.name + "'");
        check_type(g, g.dom);
        check_type(g, g.cod);
        p.generators.push_back(std::move(g));
    }
    return p;
}

presentation build_xlearn() {
    auto X = object_expr::base("X");
    auto Y = object_expr::base("Y");
    auto Ys = object_expr::base("Y*");
    auto P = object_expr::base("P");
    auto E = object_expr::base("E");
    return make_presentation(
        {"X", "Y", "Y*", "P", "E"},
        {{"eta", object_expr::product(X, P), object_expr::product(Y, E)},
         {"nabla", object_expr::product({Ys, Y, P}), P}});
}

}  // namespace catstream
