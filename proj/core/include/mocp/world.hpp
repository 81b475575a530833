#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mocp {

/// Flat cancellation fee charged per compensated operation, in cents.
inline constexpr std::int64_t kCancellationFee = 200;

struct Charge {
    std::string payer;  ///< user, bank, courier or eproc
    std::int64_t amount = 0;
    std::string reason;

    friend bool operator==(const Charge&, const Charge&) = default;
};

struct Order {
    std::string user;
    std::string card;
    std::int64_t amount = 0;
    bool paid = false;
};

/// Simulated e-procurement world. All money in integer cents.
struct WorldState {
    std::set<std::string> users;
    std::map<std::string, std::int64_t> bank_accounts;  ///< user -> balance
    std::map<std::string, std::int64_t> cards;          ///< card -> balance
    std::map<std::string, std::string> card_owner;
    std::map<std::string, bool> courier_available{{"A", true}, {"B", true}};
    std::map<std::string, std::string> bookings;  ///< txn -> courier
    std::set<std::string> shipments;
    std::set<std::string> blocked_cards;
    std::vector<Charge> charges;
    std::map<std::string, std::int64_t> third_party_paid;  ///< txn -> amount
    /// Payments held back from blacklisted users pending investigation.
    std::map<std::string, std::int64_t> withheld;
    std::map<std::string, Order> orders;
    std::map<std::string, std::int64_t> stock;
    /// Money that entered the world through createUser.
    std::int64_t deposits = 0;

    /// Bank accounts, cards, third-party holdings, withheld funds and every
    /// fee the users paid. Equals `deposits` whenever money is conserved.
    std::int64_t user_funds() const;

    std::int64_t charges_by(const std::string& payer) const;

    /// Non-negative balances and blocked cards that exist. Throws Error.
    void check_invariants() const;

    /// `WORLD|...` lines, stably ordered.
    std::vector<std::string> summary() const;
};

}  // namespace mocp
