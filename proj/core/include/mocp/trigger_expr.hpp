#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mocp {

/// Composition of strategy names sent on the multiplexed compensate line.
///
/// Text form: `B1`, `seq(B2, B4)`, `par(B1, C2)`, nested freely. Par is a
/// set, so its children are kept in canonical (printed) order and duplicates
/// collapse.
class TriggerExpr {
public:
    enum class Kind { Strategy, Seq, Par };

    static TriggerExpr strategy(std::string name);
    static TriggerExpr seq(std::vector<TriggerExpr> children);
    static TriggerExpr par(std::vector<TriggerExpr> children);

    /// Throws SpecError on malformed text.
    static TriggerExpr parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    const std::string& name() const noexcept { return name_; }
    const std::vector<TriggerExpr>& children() const noexcept { return children_; }

    /// Every strategy named anywhere in the expression.
    std::set<std::string> strategy_names() const;
    bool contains_seq() const noexcept;

    std::string to_string() const;

    friend bool operator==(const TriggerExpr&, const TriggerExpr&) = default;

private:
    TriggerExpr() = default;

    Kind kind_ = Kind::Strategy;
    std::string name_;
    std::vector<TriggerExpr> children_;
};

}  // namespace mocp
