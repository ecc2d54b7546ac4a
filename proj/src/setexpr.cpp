#include "detper/setexpr.hpp"

#include <cctype>

namespace detper {

namespace {

std::shared_ptr<SetExpr> node(SetExpr::Kind k, ExprPtr lhs = nullptr, ExprPtr rhs = nullptr) {
    auto e = std::make_shared<SetExpr>();
    e->kind = k;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        auto e = expr();
        skip_ws();
        if (pos_ != src_.size())
            throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    ExprPtr expr() {
        auto lhs = term();
        for (;;) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                auto rhs = term();
                lhs = node(c == '+' ? SetExpr::Kind::Add : SetExpr::Kind::Sub, lhs, rhs);
            } else {
                return lhs;
            }
        }
    }

    ExprPtr term() {
        auto lhs = factor();
        while (peek() == '*') {
            ++pos_;
            lhs = node(SetExpr::Kind::Mul, lhs, factor());
        }
        return lhs;
    }

    ExprPtr factor() {
        auto base = atom();
        if (peek() == '^') {
            ++pos_;
            auto e = node(SetExpr::Kind::IterProd, base);
            e->repeat = integer();
            return e;
        }
        return base;
    }

    ExprPtr atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (peek() != ')') throw SyntaxError("expected ')'", pos_);
            ++pos_;
            return e;
        }
        if (c == '-') {
            ++pos_;
            return node(SetExpr::Kind::Neg, atom());
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::uint32_t k = integer();
            if (peek() != '#') throw SyntaxError("expected '#' after repeat count", pos_);
            ++pos_;
            auto e = node(SetExpr::Kind::IterSum, atom());
            e->repeat = k;
            return e;
        }
        if (c >= 'A' && c <= 'Z') {
            std::size_t start = pos_;
            ++pos_;
            while (pos_ < src_.size()) {
                char d = src_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_')
                    ++pos_;
                else
                    break;
            }
            auto e = node(SetExpr::Kind::Var);
            e->name = std::string(src_.substr(start, pos_ - start));
            return e;
        }
        throw SyntaxError(c == '\0' ? std::string("unexpected end of input")
                                    : "unexpected character '" + std::string(1, c) + "'",
                          pos_);
    }

    std::uint32_t integer() {
        skip_ws();
        if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
            throw SyntaxError("expected integer", pos_);
        std::uint64_t v = 0;
        std::size_t at = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
            v = v * 10 + static_cast<std::uint64_t>(src_[pos_] - '0');
            if (v > 1'000'000) throw SyntaxError("repeat count too large", at);
            ++pos_;
        }
        if (v == 0) throw BadRepeatError("repeat count must be >= 1");
        return static_cast<std::uint32_t>(v);
    }
};

} // namespace

ExprPtr parse_expr(std::string_view src) { return Parser(src).parse(); }

std::string to_source(const SetExpr& e) {
    switch (e.kind) {
        case SetExpr::Kind::Var:
            return e.name;
        case SetExpr::Kind::Add:
            return "(" + to_source(*e.lhs) + " + " + to_source(*e.rhs) + ")";
        case SetExpr::Kind::Sub:
            return "(" + to_source(*e.lhs) + " - " + to_source(*e.rhs) + ")";
        case SetExpr::Kind::Mul:
            return "(" + to_source(*e.lhs) + "*" + to_source(*e.rhs) + ")";
        case SetExpr::Kind::Neg:
            return "-(" + to_source(*e.lhs) + ")";
        case SetExpr::Kind::IterSum:
            return std::to_string(e.repeat) + "#(" + to_source(*e.lhs) + ")";
        case SetExpr::Kind::IterProd:
            return "(" + to_source(*e.lhs) + ")^" + std::to_string(e.repeat);
    }
    return {};
}

bool expr_equal(const SetExpr& a, const SetExpr& b) {
    if (a.kind != b.kind || a.name != b.name || a.repeat != b.repeat) return false;
    if (!!a.lhs != !!b.lhs || !!a.rhs != !!b.rhs) return false;
    if (a.lhs && !expr_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !expr_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

FpSet eval_expr(const SetExpr& e, const std::map<std::string, FpSet>& env, const FieldCtx& ctx) {
    switch (e.kind) {
        case SetExpr::Kind::Var: {
            auto it = env.find(e.name);
            if (it == env.end()) throw UnboundVarError("unbound variable '" + e.name + "'");
            const FpSet& s = it->second;
            if (!(s.ctx() == ctx)) throw CtxMismatchError("binding '" + e.name + "' has a different modulus");
            if (s.empty()) throw EmptySetError("variable '" + e.name + "' is bound to the empty set");
            return s;
        }
        case SetExpr::Kind::Add:
            return sumset(eval_expr(*e.lhs, env, ctx), eval_expr(*e.rhs, env, ctx));
        case SetExpr::Kind::Sub:
            return diffset(eval_expr(*e.lhs, env, ctx), eval_expr(*e.rhs, env, ctx));
        case SetExpr::Kind::Mul:
            return productset(eval_expr(*e.lhs, env, ctx), eval_expr(*e.rhs, env, ctx));
        case SetExpr::Kind::Neg:
            return negset(eval_expr(*e.lhs, env, ctx));
        case SetExpr::Kind::IterSum:
            return iter_sumset(e.repeat, eval_expr(*e.lhs, env, ctx));
        case SetExpr::Kind::IterProd:
            return iter_productset(e.repeat, eval_expr(*e.lhs, env, ctx));
    }
    throw Error("corrupt expression node");
}

} // namespace detper
