#include "mocp/guard.hpp"

#include "mocp/errors.hpp"

#include <cctype>
#include <variant>
#include <vector>

namespace mocp {

namespace {

enum class Op { Or, And, Not, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub };

enum class RefKind { Payload, Subject, Either, Phase, Var };

}  // namespace

struct Guard::Node {
    struct Literal {
        Scalar value;
    };
    struct Ref {
        RefKind kind;
        std::string key;
    };
    struct Apply {
        Op op;
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;  // null for Not
    };
    std::variant<Literal, Ref, Apply> body;
};

namespace {

using NodePtr = std::shared_ptr<const Guard::Node>;
using Value = std::optional<Scalar>;

enum class Tok { Int, Str, Ident, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto fail = [&](const std::string& what) {
        throw SpecError("guard '" + std::string(src) + "': " + what + " at offset " +
                        std::to_string(i));
    };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Int, std::string(src.substr(i, j - i)), i});
            i = j;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) ||
                                      src[j] == '_' || src[j] == '.')) {
                ++j;
            }
            out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), i});
            i = j;
        } else if (c == '"') {
            std::size_t j = i + 1;
            std::string text;
            while (j < src.size() && src[j] != '"') text += src[j++];
            if (j >= src.size()) fail("unterminated string");
            out.push_back({Tok::Str, text, i});
            i = j + 1;
        } else {
            static constexpr std::string_view two[] = {"||", "&&", "==", "!=", "<=", ">="};
            bool matched = false;
            for (auto sym : two) {
                if (src.substr(i, 2) == sym) {
                    out.push_back({Tok::Sym, std::string(sym), i});
                    i += 2;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (std::string_view("!<>+-()").find(c) == std::string_view::npos) {
                fail(std::string("unexpected character '") + c + "'");
            }
            out.push_back({Tok::Sym, std::string(1, c), i});
            ++i;
        }
    }
    out.push_back({Tok::End, "", src.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, std::set<std::string>& vars)
        : src_(src), toks_(tokenize(src)), vars_(vars) {}

    NodePtr parse() {
        auto node = parse_or();
        if (peek().kind != Tok::End) fail("trailing input '" + peek().text + "'");
        return node;
    }

private:
    const Token& peek() const { return toks_[pos_]; }

    bool accept(std::string_view sym) {
        if (peek().kind == Tok::Sym && peek().text == sym) {
            ++pos_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw SpecError("guard '" + std::string(src_) + "': " + what);
    }

    static NodePtr apply(Op op, NodePtr lhs, NodePtr rhs) {
        return std::make_shared<Guard::Node>(
            Guard::Node{Guard::Node::Apply{op, std::move(lhs), std::move(rhs)}});
    }

    NodePtr parse_or() {
        auto lhs = parse_and();
        while (accept("||")) lhs = apply(Op::Or, lhs, parse_and());
        return lhs;
    }

    NodePtr parse_and() {
        auto lhs = parse_unary();
        while (accept("&&")) lhs = apply(Op::And, lhs, parse_unary());
        return lhs;
    }

    NodePtr parse_unary() {
        if (accept("!")) return apply(Op::Not, parse_unary(), nullptr);
        return parse_compare();
    }

    NodePtr parse_compare() {
        auto lhs = parse_sum();
        static constexpr std::pair<std::string_view, Op> ops[] = {
            {"==", Op::Eq}, {"!=", Op::Ne}, {"<=", Op::Le},
            {">=", Op::Ge}, {"<", Op::Lt},  {">", Op::Gt},
        };
        for (const auto& [sym, op] : ops) {
            if (accept(sym)) return apply(op, lhs, parse_sum());
        }
        return lhs;
    }

    NodePtr parse_sum() {
        auto lhs = parse_atom();
        for (;;) {
            if (accept("+")) {
                lhs = apply(Op::Add, lhs, parse_atom());
            } else if (accept("-")) {
                lhs = apply(Op::Sub, lhs, parse_atom());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_atom() {
        const Token tok = peek();
        switch (tok.kind) {
            case Tok::Int:
                ++pos_;
                try {
                    return literal(static_cast<std::int64_t>(std::stoll(tok.text)));
                } catch (const std::out_of_range&) {
                    fail("integer out of range: " + tok.text);
                }
            case Tok::Str:
                ++pos_;
                return literal(tok.text);
            case Tok::Ident:
                ++pos_;
                return ident(tok.text);
            case Tok::Sym:
                if (accept("(")) {
                    auto inner = parse_or();
                    if (!accept(")")) fail("expected ')'");
                    return inner;
                }
                if (accept("-")) {
                    // negative literal
                    if (peek().kind != Tok::Int) fail("expected integer after '-'");
                    const auto text = peek().text;
                    ++pos_;
                    return literal(-static_cast<std::int64_t>(std::stoll(text)));
                }
                fail("unexpected '" + tok.text + "'");
            case Tok::End:
                fail("unexpected end of expression");
        }
        fail("unreachable");
    }

    static NodePtr literal(Scalar v) {
        return std::make_shared<Guard::Node>(Guard::Node{Guard::Node::Literal{std::move(v)}});
    }

    NodePtr ident(const std::string& text) {
        if (text == "true") return literal(true);
        if (text == "false") return literal(false);
        if (text == "phase") return ref(RefKind::Phase, "");
        const auto dot = text.find('.');
        if (dot == std::string::npos) {
            vars_.insert(text);
            return ref(RefKind::Var, text);
        }
        const auto scope = text.substr(0, dot);
        const auto key = text.substr(dot + 1);
        if (key.empty() || key.find('.') != std::string::npos) fail("bad reference '" + text + "'");
        if (scope == "payload") return ref(RefKind::Payload, key);
        if (scope == "subject") return ref(RefKind::Subject, key);
        if (scope == "event") return ref(RefKind::Either, key);
        fail("unknown scope '" + scope + "'");
    }

    static NodePtr ref(RefKind kind, std::string key) {
        return std::make_shared<Guard::Node>(Guard::Node{Guard::Node::Ref{kind, std::move(key)}});
    }

    std::string_view src_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::set<std::string>& vars_;
};

bool truthy(const Value& v) {
    if (!v) return false;
    const bool* b = std::get_if<bool>(&*v);
    return b != nullptr && *b;
}

Value eval(const Guard::Node& node, const Event* event, const Guard::VarLookup& vars) {
    return std::visit(
        [&](const auto& n) -> Value {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Guard::Node::Literal>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, Guard::Node::Ref>) {
                switch (n.kind) {
                    case RefKind::Var:
                        return vars ? vars(n.key) : std::nullopt;
                    case RefKind::Phase:
                        if (!event) return std::nullopt;
                        return Scalar{std::string(to_string(event->phase))};
                    case RefKind::Payload: {
                        if (!event) return std::nullopt;
                        auto it = event->payload.find(n.key);
                        if (it == event->payload.end()) return std::nullopt;
                        return it->second;
                    }
                    case RefKind::Subject: {
                        if (!event) return std::nullopt;
                        auto it = event->subject.find(n.key);
                        if (it == event->subject.end()) return std::nullopt;
                        return Scalar{it->second};
                    }
                    case RefKind::Either:
                        return event ? event->lookup(n.key) : std::nullopt;
                }
                return std::nullopt;
            } else {
                const Value lhs = eval(*n.lhs, event, vars);
                switch (n.op) {
                    case Op::Not:
                        return Scalar{!truthy(lhs)};
                    case Op::And:
                        return Scalar{truthy(lhs) && truthy(eval(*n.rhs, event, vars))};
                    case Op::Or:
                        return Scalar{truthy(lhs) || truthy(eval(*n.rhs, event, vars))};
                    default:
                        break;
                }
                const Value rhs = eval(*n.rhs, event, vars);
                if (!lhs || !rhs) {
                    if (n.op == Op::Add || n.op == Op::Sub) return std::nullopt;
                    return Scalar{false};
                }
                if (n.op == Op::Eq) return Scalar{*lhs == *rhs};
                if (n.op == Op::Ne) return Scalar{lhs->index() == rhs->index() && *lhs != *rhs};
                const auto* a = std::get_if<std::int64_t>(&*lhs);
                const auto* b = std::get_if<std::int64_t>(&*rhs);
                if (!a || !b) {
                    if (n.op == Op::Add || n.op == Op::Sub) return std::nullopt;
                    return Scalar{false};
                }
                switch (n.op) {
                    case Op::Lt: return Scalar{*a < *b};
                    case Op::Le: return Scalar{*a <= *b};
                    case Op::Gt: return Scalar{*a > *b};
                    case Op::Ge: return Scalar{*a >= *b};
                    case Op::Add: return Scalar{*a + *b};
                    case Op::Sub: return Scalar{*a - *b};
                    default: return std::nullopt;
                }
            }
        },
        node.body);
}

}  // namespace

Guard Guard::parse(std::string_view text) {
    Guard g;
    g.text_ = std::string(text);
    bool blank = true;
    for (char c : text) blank = blank && std::isspace(static_cast<unsigned char>(c));
    if (blank) return g;
    g.root_ = Parser(text, g.vars_).parse();
    return g;
}

bool Guard::evaluate(const Event* event, const VarLookup& vars) const {
    if (!root_) return true;
    return truthy(eval(*root_, event, vars));
}

}  // namespace mocp
