#include "mocp/trigger_expr.hpp"

#include "mocp/errors.hpp"

#include <algorithm>
#include <cctype>

namespace mocp {

TriggerExpr TriggerExpr::strategy(std::string name) {
    if (name.empty()) throw SpecError("empty strategy name in trigger");
    TriggerExpr e;
    e.kind_ = Kind::Strategy;
    e.name_ = std::move(name);
    return e;
}

TriggerExpr TriggerExpr::seq(std::vector<TriggerExpr> children) {
    if (children.empty()) throw SpecError("seq() needs at least one child");
    TriggerExpr e;
    e.kind_ = Kind::Seq;
    e.children_ = std::move(children);
    return e;
}

TriggerExpr TriggerExpr::par(std::vector<TriggerExpr> children) {
    if (children.empty()) throw SpecError("par() needs at least one child");
    std::sort(children.begin(), children.end(),
              [](const TriggerExpr& a, const TriggerExpr& b) { return a.to_string() < b.to_string(); });
    children.erase(std::unique(children.begin(), children.end()), children.end());
    TriggerExpr e;
    e.kind_ = Kind::Par;
    e.children_ = std::move(children);
    return e;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    TriggerExpr parse() {
        auto e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SpecError("trigger '" + std::string(src_) + "': " + what + " at offset " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    std::string ident() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '-')) {
            ++pos_;
        }
        if (start == pos_) fail("expected a strategy name");
        return std::string(src_.substr(start, pos_ - start));
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    TriggerExpr expr() {
        const std::string word = ident();
        if (!accept('(')) return TriggerExpr::strategy(word);
        if (word != "seq" && word != "par") fail("unknown combinator '" + word + "'");
        std::vector<TriggerExpr> children;
        do {
            children.push_back(expr());
        } while (accept(','));
        if (!accept(')')) fail("expected ')'");
        return word == "seq" ? TriggerExpr::seq(std::move(children)) : TriggerExpr::par(std::move(children));
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

TriggerExpr TriggerExpr::parse(std::string_view text) { return Parser(text).parse(); }

std::set<std::string> TriggerExpr::strategy_names() const {
    if (kind_ == Kind::Strategy) return {name_};
    std::set<std::string> out;
    for (const auto& c : children_) out.merge(c.strategy_names());
    return out;
}

bool TriggerExpr::contains_seq() const noexcept {
    if (kind_ == Kind::Seq) return true;
    return std::any_of(children_.begin(), children_.end(), [](const TriggerExpr& c) { return c.contains_seq(); });
}

std::string TriggerExpr::to_string() const {
    if (kind_ == Kind::Strategy) return name_;
    std::string out = kind_ == Kind::Seq ? "seq(" : "par(";
    for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) out += ", ";
        out += children_[i].to_string();
    }
    return out + ")";
}

}  // namespace mocp
