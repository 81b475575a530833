#pragma once

#include "mocp/event.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace mocp {

/// Side-effect-free boolean condition over an event and, for monitors, variables.
///
/// Grammar:
///
///     expr    := or
///     or      := and ('||' and)*
///     and     := unary ('&&' unary)*
///     unary   := '!' unary | compare
///     compare := sum (('==' | '!=' | '<' | '<=' | '>' | '>=') sum)?
///     sum     := atom (('+' | '-') atom)*
///     atom    := INT | "string" | true | false | ref | '(' expr ')'
///     ref     := payload.KEY | subject.KEY | event.KEY | phase | IDENT
///
/// `event.KEY` looks in the payload then the subject. A bare IDENT is a
/// monitor variable or parameter. A reference that resolves to nothing makes
/// every comparison containing it false.
class Guard {
public:
    /// Resolves bare identifiers (monitor vars and params).
    using VarLookup = std::function<std::optional<Scalar>(const std::string&)>;

    Guard() = default;  // always true

    /// Throws SpecError on syntax errors.
    static Guard parse(std::string_view text);

    bool always_true() const noexcept { return root_ == nullptr; }
    const std::string& text() const noexcept { return text_; }

    /// Bare identifiers referenced by the expression.
    const std::set<std::string>& variables() const noexcept { return vars_; }

    bool evaluate(const Event* event, const VarLookup& vars = {}) const;

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
    std::set<std::string> vars_;
};

}  // namespace mocp
