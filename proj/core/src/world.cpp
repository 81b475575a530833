#include "mocp/world.hpp"

#include "mocp/errors.hpp"

namespace mocp {

std::int64_t WorldState::user_funds() const {
    std::int64_t total = 0;
    for (const auto& [_, v] : bank_accounts) total += v;
    for (const auto& [_, v] : cards) total += v;
    for (const auto& [_, v] : third_party_paid) total += v;
    for (const auto& [_, v] : withheld) total += v;
    return total + charges_by("user");
}

std::int64_t WorldState::charges_by(const std::string& payer) const {
    std::int64_t total = 0;
    for (const auto& c : charges) {
        if (c.payer == payer) total += c.amount;
    }
    return total;
}

void WorldState::check_invariants() const {
    auto non_negative = [](const auto& balances, const char* what) {
        for (const auto& [k, v] : balances) {
            if (v < 0) throw Error(std::string("negative ") + what + " balance for '" + k + "'");
        }
    };
    non_negative(bank_accounts, "bank");
    non_negative(cards, "card");
    non_negative(third_party_paid, "third-party");
    non_negative(withheld, "withheld");
    non_negative(stock, "stock");
    for (const auto& c : blocked_cards) {
        if (!cards.contains(c)) throw Error("blocked card '" + c + "' does not exist");
    }
}

std::vector<std::string> WorldState::summary() const {
    std::vector<std::string> out;
    for (const auto& [u, v] : bank_accounts) out.push_back("WORLD|bank|" + u + "|" + std::to_string(v));
    for (const auto& [c, v] : cards) {
        out.push_back("WORLD|card|" + c + "|" + std::to_string(v) + (blocked_cards.contains(c) ? "|blocked" : "|open"));
    }
    for (const auto& [name, up] : courier_available) {
        out.push_back("WORLD|courier|" + name + "|" + (up ? "available" : "unavailable"));
    }
    for (const auto& [txn, courier] : bookings) out.push_back("WORLD|booking|" + txn + "|" + courier);
    for (const auto& txn : shipments) out.push_back("WORLD|shipment|" + txn);
    for (const auto& [txn, v] : third_party_paid) out.push_back("WORLD|third_party|" + txn + "|" + std::to_string(v));
    for (const auto& [txn, v] : withheld) out.push_back("WORLD|withheld|" + txn + "|" + std::to_string(v));
    for (const auto& [item, v] : stock) out.push_back("WORLD|stock|" + item + "|" + std::to_string(v));
    for (const auto& c : charges) {
        out.push_back("WORLD|charge|" + c.payer + "|" + std::to_string(c.amount) + "|" + c.reason);
    }
    out.push_back("WORLD|funds|" + std::to_string(user_funds()) + "|" + std::to_string(deposits));
    return out;
}

}  // namespace mocp
