#include "jform/expr.hpp"

#include <algorithm>
#include <cctype>

#include "jform/forms.hpp"

namespace jform {

namespace expr_detail {

enum class Kind { Name, Literal, Add, Sub, Mul, Div, Neg, Pow, Scale };

struct Node {
    Kind kind;
    std::string name;                      // Name
    Rational value;                        // Literal
    long arg = 0;                          // Pow exponent / Scale factor
    std::shared_ptr<const Node> lhs, rhs;  // children
};

using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf_name(std::string n) {
    auto p = std::make_shared<Node>();
    p->kind = Kind::Name;
    p->name = std::move(n);
    return p;
}

NodePtr leaf_literal(Rational v) {
    auto p = std::make_shared<Node>();
    p->kind = Kind::Literal;
    p->value = std::move(v);
    return p;
}

NodePtr unary(Kind k, NodePtr x, long arg = 0) {
    auto p = std::make_shared<Node>();
    p->kind = k;
    p->lhs = std::move(x);
    p->arg = arg;
    return p;
}

NodePtr binary(Kind k, NodePtr x, NodePtr y) {
    auto p = std::make_shared<Node>();
    p->kind = k;
    p->lhs = std::move(x);
    p->rhs = std::move(y);
    return p;
}

}  // namespace expr_detail

using expr_detail::Kind;
using expr_detail::NodePtr;

const std::vector<std::string>& expr_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v = generator_names();
        for (const char* s : {"E2", "E4", "E6", "Delta", "theta", "j", "eta"}) v.push_back(s);
        std::sort(v.begin(), v.end(), [](const std::string& a, const std::string& b) {
            return a.size() != b.size() ? a.size() > b.size() : a < b;
        });
        return v;
    }();
    return names;
}

namespace {

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

struct Parser {
    const std::string& text;
    size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {

        if (!consume(c)) throw ExprError(std::string("expected ") + what, pos);
    }

    // Known identifiers take precedence over operator splitting, longest
    // match first, so a name like "phi_0_3/2" survives intact.
    std::optional<std::string> match_name() {
        skip_ws();
        for (const auto& n : expr_names()) {
            if (text.compare(pos, n.size(), n) != 0) continue;
            const size_t after = pos + n.size();
            if (after < text.size() && ident_char(text[after])) continue;
            pos = after;
            return n;
        }
        return std::nullopt;
    }

    long parse_integer(const char* what) {
        skip_ws();
        const size_t start = pos;
        bool neg = false;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
            neg = text[pos] == '-';
            ++pos;
        }
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            throw ExprError(std::string("expected ") + what, start);
        long v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            if (v > 100000000L) throw ExprError("integer argument out of range", start);
            v = v * 10 + (text[pos] - '0');
            ++pos;
        }
        return neg ? -v : v;
    }

    NodePtr parse_expr() {
        NodePtr x = parse_term();
        while (true) {
            if (consume('+'))
                x = expr_detail::binary(Kind::Add, x, parse_term());
            else if (consume('-'))
                x = expr_detail::binary(Kind::Sub, x, parse_term());
            else
                return x;
        }
    }

    NodePtr parse_term() {
        NodePtr x = parse_factor();
        while (true) {
            if (consume('*'))
                x = expr_detail::binary(Kind::Mul, x, parse_factor());
            else if (consume('/'))
                x = expr_detail::binary(Kind::Div, x, parse_factor());
            else
                return x;
        }
    }

    NodePtr parse_factor() {
        if (consume('-')) return expr_detail::unary(Kind::Neg, parse_factor());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr x = parse_atom();
        if (consume('^')) {
            const long n = parse_integer("an integer exponent");
            return expr_detail::unary(Kind::Pow, x, n);
        }
        return x;
    }

    NodePtr parse_atom() {
        skip_ws();
        const size_t start = pos;
        if (pos >= text.size()) throw ExprError("unexpected end of expression", pos);
        if (consume('(')) {
            NodePtr x = parse_expr();
            expect(')', "')'");
            return x;
        }
        const char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t end = pos;
            while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end])))
                ++end;
            const Rational v = Rational::parse(text.substr(pos, end - pos));
            pos = end;
            return expr_detail::leaf_literal(v);
        }
        if (text.compare(pos, 5, "scale") == 0 &&
            (pos + 5 >= text.size() || !ident_char(text[pos + 5]))) {
            pos += 5;
            expect('(', "'(' after scale");
            NodePtr x = parse_expr();
            expect(',', "',' between the scale arguments");
            const long a = parse_integer("an integer scale factor");
            expect(')', "')'");
            if (a <= 0) throw ExprError("scale factor must be positive", start);
            return expr_detail::unary(Kind::Scale, x, a);
        }
        if (auto n = match_name()) return expr_detail::leaf_name(*n);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t end = pos;
            while (end < text.size() && ident_char(text[end])) ++end;
            // an index written with a slash belongs to the identifier
            if (end + 1 < text.size() && text[end] == '/' &&
                std::isdigit(static_cast<unsigned char>(text[end - 1])) &&
                std::isdigit(static_cast<unsigned char>(text[end + 1]))) {
                ++end;
                while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end])))
                    ++end;
            }
            throw ExprError("unknown identifier '" + text.substr(pos, end - pos) + "'", pos);
        }
        throw ExprError(std::string("unexpected character '") + c + "'", pos);
    }
};

FourierSeries constant_series(const Rational& v, long qtrunc) {
    FourierSeries s = FourierSeries::constant(v, qtrunc);
    s.weight2 = 0;
    s.index2 = 0;
    return s;
}

FourierSeries pow_series(const FourierSeries& x, long n, long qtrunc) {
    if (n == 0) return constant_series(Rational(1), qtrunc);
    const bool inv = n < 0;
    if (inv) n = -n;
    FourierSeries r = x;
    for (long i = 1; i < n; ++i) r = r * x;
    return inv ? div_exact(constant_series(Rational(1), qtrunc), r) : r;
}

FourierSeries eval_node(const expr_detail::Node& nd, long qtrunc) {
    switch (nd.kind) {
        case Kind::Name:
            if (nd.name == "eta") return eta_pow(1, qtrunc);
            for (const char* s : {"E2", "E4", "E6", "Delta", "theta", "j"})
                if (nd.name == s) return standard_series(nd.name, qtrunc);
            return generator(nd.name, qtrunc);
        case Kind::Literal:
            return constant_series(nd.value, qtrunc);
        case Kind::Add:
            return eval_node(*nd.lhs, qtrunc) + eval_node(*nd.rhs, qtrunc);
        case Kind::Sub:
            return eval_node(*nd.lhs, qtrunc) - eval_node(*nd.rhs, qtrunc);
        case Kind::Mul:
            return eval_node(*nd.lhs, qtrunc) * eval_node(*nd.rhs, qtrunc);
        case Kind::Div:
            return div_exact(eval_node(*nd.lhs, qtrunc), eval_node(*nd.rhs, qtrunc));
        case Kind::Neg:
            return -eval_node(*nd.lhs, qtrunc);
        case Kind::Pow:
            return pow_series(eval_node(*nd.lhs, qtrunc), nd.arg, qtrunc);
        case Kind::Scale:
            return eval_node(*nd.lhs, qtrunc).scale_z(nd.arg);
    }
    throw std::logic_error("eval_node: unreachable");
}

}  // namespace

FormExpr FormExpr::parse(const std::string& text) {
    Parser p(text);
    NodePtr root = p.parse_expr();
    if (!p.at_end()) throw ExprError("trailing input after the expression", p.pos);
    return FormExpr(std::move(root));
}

FourierSeries FormExpr::evaluate(long qtrunc) const {
    if (qtrunc <= 0) throw std::invalid_argument("FormExpr::evaluate: qtrunc must be positive");
    return eval_node(*root_, qtrunc);
}

FourierSeries evaluate_expr(const std::string& text, long qtrunc) {
    return FormExpr::parse(text).evaluate(qtrunc);
}

}  // namespace jform
