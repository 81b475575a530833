#include "mocp/actions.hpp"

#include "mocp/errors.hpp"

namespace mocp {

namespace {

/// Missing or mistyped argument; re-thrown as the caller's error kind.
class BadArgument : public Error {
public:
    using Error::Error;
};

const std::string& arg_str(const PayloadMap& args, const std::string& key) {
    auto it = args.find(key);
    if (it == args.end()) throw BadArgument("missing argument '" + key + "'");
    const auto* s = std::get_if<std::string>(&it->second);
    if (!s) throw BadArgument("argument '" + key + "' must be a string");
    return *s;
}

std::int64_t arg_int(const PayloadMap& args, const std::string& key) {
    auto it = args.find(key);
    if (it == args.end()) throw BadArgument("missing argument '" + key + "'");
    const auto* v = std::get_if<std::int64_t>(&it->second);
    if (!v) throw BadArgument("argument '" + key + "' must be an integer");
    return *v;
}

std::int64_t positive(std::int64_t v, const char* what) {
    if (v <= 0) throw BadArgument(std::string(what) + " must be positive");
    return v;
}

void require_user(const WorldState& w, const std::string& user) {
    if (!w.users.contains(user)) throw BadArgument("unknown user '" + user + "'");
}

void require_card(const WorldState& w, const std::string& card) {
    if (!w.cards.contains(card)) throw BadArgument("unknown card '" + card + "'");
}

const Order& require_order(const WorldState& w, const std::string& txn) {
    auto it = w.orders.find(txn);
    if (it == w.orders.end()) throw BadArgument("unknown transaction '" + txn + "'");
    return it->second;
}

// -- forward actions ---------------------------------------------------------

ActionEffect create_user(WorldState& w, const PayloadMap& a) {
    const auto& user = arg_str(a, "user");
    const auto balance = arg_int(a, "balance");
    if (balance < 0) throw BadArgument("balance must be non-negative");
    if (!w.users.insert(user).second) throw BadArgument("user '" + user + "' already exists");
    w.bank_accounts[user] = balance;
    w.deposits += balance;
    return {"createUser", {{"user", user}}, {{"balance", balance}}};
}

ActionEffect create_card(WorldState& w, const PayloadMap& a) {
    const auto& user = arg_str(a, "user");
    const auto& card = arg_str(a, "card");
    require_user(w, user);
    if (w.cards.contains(card)) throw BadArgument("card '" + card + "' already exists");
    w.cards[card] = 0;
    w.card_owner[card] = user;
    return {"createCard", {{"user", user}, {"card", card}}, {}};
}

ActionEffect load(WorldState& w, const PayloadMap& a) {
    const auto& user = arg_str(a, "user");
    const auto& card = arg_str(a, "card");
    const auto amount = positive(arg_int(a, "amount"), "amount");
    require_user(w, user);
    require_card(w, card);
    if (w.bank_accounts[user] < amount) throw InsufficientFunds("bank account of '" + user + "' cannot cover load");
    w.bank_accounts[user] -= amount;
    w.cards[card] += amount;
    return {"load", {{"user", user}, {"card", card}}, {{"amount", amount}}};
}

ActionEffect transfer(WorldState& w, const PayloadMap& a) {
    const auto& user = arg_str(a, "user");
    const auto& from = arg_str(a, "from");
    const auto& to = arg_str(a, "to");
    const auto amount = positive(arg_int(a, "amount"), "amount");
    require_card(w, from);
    require_card(w, to);
    if (w.blocked_cards.contains(from) || w.blocked_cards.contains(to)) {
        throw ActionRefused("transfer involves a blocked card");
    }
    if (w.cards[from] < amount) throw InsufficientFunds("card '" + from + "' cannot cover transfer");
    w.cards[from] -= amount;
    w.cards[to] += amount;
    return {"transfer", {{"user", user}, {"card", from}}, {{"to", to}, {"amount", amount}}};
}

ActionEffect place_order(WorldState& w, const PayloadMap& a) {
    const auto& user = arg_str(a, "user");
    const auto& card = arg_str(a, "card");
    const auto& txn = arg_str(a, "txn");
    const auto amount = positive(arg_int(a, "amount"), "amount");
    require_user(w, user);
    require_card(w, card);
    if (w.orders.contains(txn)) throw BadArgument("transaction '" + txn + "' already exists");
    w.orders[txn] = Order{user, card, amount, false};
    return {"order", {{"user", user}, {"card", card}, {"txn", txn}}, {{"amount", amount}}};
}

ActionEffect pay(WorldState& w, const PayloadMap& a) {
    const auto& txn = arg_str(a, "txn");
    const Order& order = require_order(w, txn);
    if (order.paid) throw BadArgument("transaction '" + txn + "' already paid");
    if (w.blocked_cards.contains(order.card)) throw ActionRefused("card '" + order.card + "' is blocked");
    const std::int64_t before = w.cards[order.card];
    if (before < order.amount) throw InsufficientFunds("card '" + order.card + "' cannot cover payment");
    w.cards[order.card] -= order.amount;
    w.third_party_paid[txn] += order.amount;
    w.orders[txn].paid = true;
    return {"payment",
            {{"user", order.user}, {"card", order.card}, {"txn", txn}},
            {{"amount", order.amount}, {"balance", before}}};
}

ActionEffect book_courier(WorldState& w, const PayloadMap& a) {
    const auto& txn = arg_str(a, "txn");
    const Order& order = require_order(w, txn);
    if (w.bookings.contains(txn)) throw BadArgument("transaction '" + txn + "' already has a courier");
    for (const auto& [courier, up] : w.courier_available) {
        if (!up) continue;
        w.bookings[txn] = courier;
        return {"bookCourier" + courier,
                {{"user", order.user}, {"card", order.card}, {"txn", txn}},
                {{"courier", courier}}};
    }
    throw NoCourierAvailable("no courier available for '" + txn + "'");
}

ActionEffect ship(WorldState& w, const PayloadMap& a) {
    const auto& txn = arg_str(a, "txn");
    const Order& order = require_order(w, txn);
    if (!order.paid || !w.bookings.contains(txn)) throw ActionRefused("transaction '" + txn + "' is not ready to ship");
    w.shipments.insert(txn);
    return {"ship", {{"user", order.user}, {"txn", txn}}, {{"courier", w.bookings[txn]}}};
}

ActionEffect cancel(WorldState& w, const PayloadMap& a) {
    const auto& user = arg_str(a, "user");
    const auto& txn = arg_str(a, "txn");
    require_user(w, user);
    return {"cancel", {{"user", user}, {"txn", txn}}, {}};
}

ActionRegistry::Handler flag(std::string name) {
    return [name](WorldState& w, const PayloadMap& a) -> ActionEffect {
        const auto& user = arg_str(a, "user");
        require_user(w, user);
        return {name, {{"user", user}}, {}};
    };
}

ActionEffect add_stock(WorldState& w, const PayloadMap& a) {
    const auto& item = arg_str(a, "item");
    const auto qty = positive(arg_int(a, "qty"), "qty");
    w.stock[item] += qty;
    return {"addStock", {}, {{"item", item}, {"qty", qty}}};
}

ActionEffect decrement_stock(WorldState& w, const PayloadMap& a) {
    const auto& item = arg_str(a, "item");
    const auto qty = positive(arg_int(a, "qty"), "qty");
    if (w.stock[item] < qty) throw ActionRefused("not enough '" + item + "' in stock");
    w.stock[item] -= qty;
    return {"decrementStock", {}, {{"item", item}, {"qty", qty}}};
}

// -- compensation code -------------------------------------------------------

ActionRegistry::Handler refund(std::string payer) {
    return [payer](WorldState& w, const PayloadMap& a) -> ActionEffect {
        const auto& user = arg_str(a, "user");
        const auto& txn = arg_str(a, "txn");
        const auto amount = arg_int(a, "amount");
        require_user(w, user);
        auto held = w.third_party_paid.find(txn);
        if (held == w.third_party_paid.end() || held->second < amount) {
            throw CompensationFault("no payment of " + std::to_string(amount) + " held for '" + txn + "'");
        }
        // The user's fee comes out of the refund; other payers make the refund full.
        const std::int64_t net = payer == "user" ? amount - kCancellationFee : amount;
        if (net < 0) throw CompensationFault("refund smaller than the cancellation fee");
        held->second -= amount;
        w.bank_accounts[user] += net;
        w.charges.push_back({payer, kCancellationFee, "refund:" + txn});
        return {"refunded",
                {{"user", user}, {"txn", txn}},
                {{"amount", net}, {"fee", kCancellationFee}, {"payer", payer}}};
    };
}

ActionEffect charge_user_fee(WorldState& w, const PayloadMap& a) {
    const auto& user = arg_str(a, "user");
    const auto& txn = arg_str(a, "txn");
    const auto amount = arg_int(a, "amount");
    auto held = w.third_party_paid.find(txn);
    if (held == w.third_party_paid.end() || held->second < amount || amount < kCancellationFee) {
        throw CompensationFault("cannot charge the reversal fee for '" + txn + "'");
    }
    held->second -= amount;
    w.withheld[txn] += amount - kCancellationFee;
    w.charges.push_back({"user", kCancellationFee, "refund:" + txn});
    return {"feeCharged",
            {{"user", user}, {"txn", txn}},
            {{"fee", kCancellationFee}, {"payer", std::string("user")}, {"withheld", amount - kCancellationFee}}};
}

ActionRegistry::Handler cancel_courier(std::string payer) {
    return [payer](WorldState& w, const PayloadMap& a) -> ActionEffect {
        const auto& user = arg_str(a, "user");
        const auto& txn = arg_str(a, "txn");
        const auto& courier = arg_str(a, "courier");
        auto booking = w.bookings.find(txn);
        if (booking == w.bookings.end() || booking->second != courier) {
            throw CompensationFault("no booking with courier " + courier + " for '" + txn + "'");
        }
        if (w.shipments.contains(txn)) throw CompensationFault("'" + txn + "' already shipped");
        if (payer == "user") {
            auto account = w.bank_accounts.find(user);
            if (account == w.bank_accounts.end() || account->second < kCancellationFee) {
                throw CompensationFault("user '" + user + "' cannot pay the courier cancellation fee");
            }
            account->second -= kCancellationFee;
        }
        w.bookings.erase(booking);
        w.charges.push_back({payer, kCancellationFee, "courier:" + txn});
        return {"courierCancelled",
                {{"user", user}, {"txn", txn}},
                {{"courier", courier}, {"fee", kCancellationFee}, {"payer", payer}}};
    };
}

ActionEffect block_card(WorldState& w, const PayloadMap& a) {
    const auto& card = arg_str(a, "card");
    if (!w.cards.contains(card)) throw CompensationFault("cannot block unknown card '" + card + "'");
    w.blocked_cards.insert(card);
    return {"cardBlocked", {{"card", card}}, {}};
}

ActionEffect increment_stock(WorldState& w, const PayloadMap& a) {
    const auto& item = arg_str(a, "item");
    const auto qty = arg_int(a, "qty");
    w.stock[item] += qty;
    return {"stockIncremented", {}, {{"item", item}, {"qty", qty}}};
}

}  // namespace

void ActionRegistry::add_forward(std::string name, Handler h) { forward_[std::move(name)] = std::move(h); }

void ActionRegistry::add_compensating(std::string name, Handler h) { compensating_[std::move(name)] = std::move(h); }

std::set<std::string> ActionRegistry::compensating_names() const {
    std::set<std::string> out;
    for (const auto& [name, _] : compensating_) out.insert(name);
    return out;
}

const ActionRegistry::Handler& ActionRegistry::forward(const std::string& name) const {
    auto it = forward_.find(name);
    if (it == forward_.end()) throw SpecError("unknown action '" + name + "'");
    return it->second;
}

const ActionRegistry::Handler& ActionRegistry::compensating(const std::string& name) const {
    auto it = compensating_.find(name);
    if (it == compensating_.end()) throw CompensationFault("unregistered compensation '" + name + "'");
    return it->second;
}

ActionRegistry ActionRegistry::eprocurement() {
    ActionRegistry r;
    r.add_forward("createUser", create_user);
    r.add_forward("createCard", create_card);
    r.add_forward("load", load);
    r.add_forward("transfer", transfer);
    r.add_forward("order", place_order);
    r.add_forward("pay", pay);
    r.add_forward("bookCourier", book_courier);
    r.add_forward("ship", ship);
    r.add_forward("cancel", cancel);
    r.add_forward("fraudFlag", flag("fraudFlag"));
    r.add_forward("trustedFlag", flag("trustedFlag"));
    r.add_forward("addStock", add_stock);
    r.add_forward("decrementStock", decrement_stock);

    r.add_compensating("refundBankFee", refund("bank"));
    r.add_compensating("refundUserFee", refund("user"));
    r.add_compensating("refundEprocFee", refund("eproc"));
    r.add_compensating("chargeUserFee", charge_user_fee);
    r.add_compensating("cancelCourierCourierFee", cancel_courier("courier"));
    r.add_compensating("cancelCourierUserFee", cancel_courier("user"));
    r.add_compensating("cancelCourierEprocFee", cancel_courier("eproc"));
    r.add_compensating("blockCard", block_card);
    r.add_compensating("incrementStock", increment_stock);
    return r;
}

ActionEffect exec_action(WorldState& w, const ActionRegistry& registry, const std::string& action,
                         const PayloadMap& args) {
    const auto& handler = registry.forward(action);
    WorldState next = w;
    try {
        ActionEffect effect = handler(next, args);
        w = std::move(next);
        return effect;
    } catch (const BadArgument& e) {
        throw SpecError(action + ": " + e.what());
    }
}

ActionEffect exec_compensation(WorldState& w, const ActionRegistry& registry, const CompensationInstruction& instr) {
    const auto& handler = registry.compensating(instr.comp_action);
    WorldState next = w;
    try {
        ActionEffect effect = handler(next, instr.bound_args);
        w = std::move(next);
        return effect;
    } catch (const BadArgument& e) {
        throw CompensationFault(instr.comp_action + ": " + e.what());
    }
}

}  // namespace mocp
