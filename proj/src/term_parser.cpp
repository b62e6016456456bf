#include "catstream/term_parser.hpp"

#include <cctype>
#include <utility>

#include "catstream/errors.hpp"

namespace catstream {

namespace {

enum class tok_kind { name, semi, star, lparen, rparen, lbrack, rbrack, comma, end };

struct token {
    tok_kind kind;
    std::string text;
    std::size_t offset = 0;
};

struct parser {
    const std::string& src;
    const presentation& pres;
    std::size_t pos = 0;

    static bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool name_char(char c, bool object_mode) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
               (object_mode && c == '*');
    }

    std::pair<int, int> locate(std::size_t at) const {
        int line = 1, col = 1;
        for (std::size_t i = 0; i < at && i < src.size(); ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        return {line, col};
    }

    [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
        auto [line, col] = locate(at);
        throw parse_error(msg, line, col);
    }

    [[noreturn]] void fail_type(const std::string& msg, std::size_t at) const {
        auto [line, col] = locate(at);
        throw term_typecheck_error(msg, line, col);
    }

    // object_mode folds '*' into names (Y*); in term mode '*' is the tensor
    // operator, so generator names cannot carry stars
    token scan(std::size_t from, bool object_mode) const {
        std::size_t i = from;
        while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
        if (i >= src.size()) return {tok_kind::end, "", i};
        char c = src[i];
        if (name_start(c)) {
            std::size_t j = i + 1;
            while (j < src.size() && name_char(src[j], object_mode)) ++j;
            return {tok_kind::name, src.substr(i, j - i), i};
        }
        switch (c) {
            case ';': return {tok_kind::semi, ";", i};
            case '*': return {tok_kind::star, "*", i};
            case '(': return {tok_kind::lparen, "(", i};
            case ')': return {tok_kind::rparen, ")", i};
            case '[': return {tok_kind::lbrack, "[", i};
            case ']': return {tok_kind::rbrack, "]", i};
            case ',': return {tok_kind::comma, ",", i};
            default: break;
        }
        fail(std::string("unexpected character '") + c + "'", i);
    }

    token peek(bool object_mode) const { return scan(pos, object_mode); }

    token next(bool object_mode) {
        token t = scan(pos, object_mode);
        pos = t.offset + t.text.size();
        if (t.kind == tok_kind::end) pos = src.size();
        return t;
    }

    void expect(tok_kind k, const char* what, bool object_mode) {
        token t = next(object_mode);
        if (t.kind != k) fail(std::string("expected ") + what, t.offset);
    }

    // ---- objects ----

    object_expr parse_obj_atom() {
        token t = next(true);
        if (t.kind == tok_kind::lparen) {
            object_expr o = parse_obj();
            expect(tok_kind::rparen, "')'", true);
            return o;
        }
        if (t.kind != tok_kind::name) fail("expected an object", t.offset);
        if (t.text == "I") return object_expr::unit();
        if (t.text == "x") fail("'x' is the product token, not an object", t.offset);
        if (pres.objects.find(t.text) == pres.objects.end())
            fail("unknown object '" + t.text + "'", t.offset);
        return object_expr::base(t.text);
    }

    object_expr parse_obj() {
        object_expr o = parse_obj_atom();
        while (true) {
            token t = peek(true);
            if (t.kind != tok_kind::name || t.text != "x") break;
            next(true);
            o = object_expr::product(o, parse_obj_atom());
        }
        return o;
    }

    // ---- terms ----

    term parse_factor() {
        token t = next(false);
        if (t.kind == tok_kind::lparen) {
            term inner = parse_term_expr();
            expect(tok_kind::rparen, "')'", false);
            return inner;
        }
        if (t.kind != tok_kind::name) fail("expected a term", t.offset);
        const std::string& w = t.text;
        try {
            if (w == "id") {
                expect(tok_kind::lparen, "'('", true);
                object_expr o = parse_obj();
                expect(tok_kind::rparen, "')'", true);
                return identity(o);
            }
            if (w == "sym") {
                expect(tok_kind::lparen, "'('", true);
                object_expr a = parse_obj();
                expect(tok_kind::comma, "','", true);
                object_expr b = parse_obj();
                expect(tok_kind::rparen, "')'", true);
                return symmetry(a, b);
            }
            if (w == "copy") {
                expect(tok_kind::lparen, "'('", true);
                object_expr o = parse_obj();
                expect(tok_kind::rparen, "')'", true);
                return copy_of(o);
            }
            if (w == "discard") {
                expect(tok_kind::lparen, "'('", true);
                object_expr o = parse_obj();
                expect(tok_kind::rparen, "')'", true);
                return discard_of(o);
            }
            if (w == "fbk") {
                expect(tok_kind::lbrack, "'['", true);
                object_expr s = parse_obj();
                expect(tok_kind::rbrack, "']'", true);
                expect(tok_kind::lparen, "'('", false);
                term body = parse_term_expr();
                expect(tok_kind::rparen, "')'", false);
                return feedback(s, body);
            }
            return gen(pres, w);
        } catch (const parse_error&) {
            throw;
        } catch (const cat_error& e) {
            fail_type(e.what(), t.offset);
        }
    }

    term parse_tensor() {
        term f = parse_factor();
        while (peek(false).kind == tok_kind::star) {
            token op = next(false);
            term g = parse_factor();
            try {
                f = tensor(f, g);
            } catch (const cat_error& e) {
                fail_type(e.what(), op.offset);
            }
        }
        return f;
    }

    term parse_term_expr() {
        term f = parse_tensor();
        while (peek(false).kind == tok_kind::semi) {
            token op = next(false);
            term g = parse_tensor();
            try {
                f = compose(f, g);
            } catch (const cat_error& e) {
                fail_type(e.what(), op.offset);
            }
        }
        return f;
    }
};

}  // namespace

object_expr parse_object(const std::string& text, const presentation& p) {
    parser ps{text, p};
    object_expr o = ps.parse_obj();
    token t = ps.next(true);
    if (t.kind != tok_kind::end) ps.fail("trailing input after object", t.offset);
    return o;
}

term parse_term(const std::string& text, const presentation& p) {
    parser ps{text, p};
    term t = ps.parse_term_expr();
    token rest = ps.next(false);
    if (rest.kind != tok_kind::end) ps.fail("trailing input after term", rest.offset);
    return t;
}

}  // namespace catstream
