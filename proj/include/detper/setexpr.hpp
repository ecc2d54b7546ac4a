#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "detper/fset.hpp"

namespace detper {

/// AST for composite set expressions over F_p subsets.
///
/// Grammar (recursive descent, left-associative):
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := atom ['^' INT]
///   atom   := IDENT | INT '#' atom | '(' expr ')' | '-' atom
/// `k#E` is the k-fold iterated sumset, `E^k` the k-fold iterated product set,
/// `*` the pairwise product set. Identifiers match [A-Z][A-Za-z0-9_]*.
struct SetExpr {
    enum class Kind { Var, Add, Sub, Mul, Neg, IterSum, IterProd };

    Kind kind = Kind::Var;
    std::string name;         // Var
    std::uint32_t repeat = 0; // IterSum / IterProd
    std::shared_ptr<const SetExpr> lhs, rhs;
};

using ExprPtr = std::shared_ptr<const SetExpr>;

/// Parses without evaluating. Throws SyntaxError (with byte offset) or
/// BadRepeatError (k = 0 in `k#E` or `E^k`).
ExprPtr parse_expr(std::string_view src);

/// Renders an AST back to source; parse(to_source(e)) is structurally equal to e.
std::string to_source(const SetExpr& e);

bool expr_equal(const SetExpr& a, const SetExpr& b);

/// Pairwise set semantics. Throws UnboundVarError, EmptySetError (an operand
/// evaluates empty), or CtxMismatchError.
FpSet eval_expr(const SetExpr& e, const std::map<std::string, FpSet>& env, const FieldCtx& ctx);

} // namespace detper
