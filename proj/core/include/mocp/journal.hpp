#pragma once

#include "mocp/comp_automaton.hpp"
#include "mocp/event.hpp"
#include "mocp/trigger_expr.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mocp {

/// A compensation instruction as sent to the system.
struct EmissionRecord {
    std::uint64_t batch = 0;
    CompensationInstruction instruction;
};

struct HandshakeRecord {
    ContinueToken token;
};

struct DiscardRecord {
    std::uint64_t seq = 0;  ///< event whose processing caused the discard
    std::set<std::string> names;
};

struct TriggerRecord {
    std::uint64_t seq = 0;  ///< event that raised the trigger
    TriggerExpr expr;
};

/// A channel event routed between monitors while handling event `seq`.
struct ChannelRecord {
    std::uint64_t seq = 0;
    std::string name;
};

struct FaultRecord {
    std::uint64_t batch = 0;
    CompensationInstruction instruction;
    std::string reason;
};

/// `COMP|batch|strategy|comp_action|args`
std::string serialize(const EmissionRecord& r);
/// `HSK|seq|token_source`
std::string serialize(const HandshakeRecord& r);
/// `DISCARD|seq|names`
std::string serialize(const DiscardRecord& r);
/// `TRIG|seq|expr`
std::string serialize(const TriggerRecord& r);
/// `FAULT|batch|strategy|comp_action|args|reason`
std::string serialize(const FaultRecord& r);
/// `CHAN|seq|name`
std::string serialize(const ChannelRecord& r);

/// Parsed `COMP` line; origin seq is not part of the record.
struct CompLine {
    std::uint64_t batch = 0;
    std::string strategy;
    std::string comp_action;
    PayloadMap args;

    friend bool operator==(const CompLine&, const CompLine&) = default;
};

struct HskLine {
    std::uint64_t seq = 0;
    std::string source;

    friend bool operator==(const HskLine&, const HskLine&) = default;
};

/// Throw SpecError if the line is not of the expected kind.
CompLine parse_comp_line(std::string_view line);
HskLine parse_hsk_line(std::string_view line);

/// Every protocol record of a run in the order it happened.
///
/// Typed logs are kept alongside the interleaved text lines; event lines are
/// written as `EVT|` followed by the event record.
class Journal {
public:
    void event(const Event& e);
    void emission(EmissionRecord r);
    void handshake(HandshakeRecord r);
    void discard(DiscardRecord r);
    void trigger(TriggerRecord r);
    void fault(FaultRecord r);
    void channel(std::uint64_t seq, const std::string& name);
    void note(std::string text);

    const std::vector<std::string>& lines() const noexcept { return lines_; }
    const std::vector<EmissionRecord>& emissions() const noexcept { return emissions_; }
    const std::vector<HandshakeRecord>& handshakes() const noexcept { return handshakes_; }
    const std::vector<DiscardRecord>& discards() const noexcept { return discards_; }
    const std::vector<TriggerRecord>& triggers() const noexcept { return triggers_; }
    const std::vector<FaultRecord>& faults() const noexcept { return faults_; }
    const std::vector<ChannelRecord>& channels() const noexcept { return channels_; }

private:
    std::vector<std::string> lines_;
    std::vector<EmissionRecord> emissions_;
    std::vector<HandshakeRecord> handshakes_;
    std::vector<DiscardRecord> discards_;
    std::vector<TriggerRecord> triggers_;
    std::vector<FaultRecord> faults_;
    std::vector<ChannelRecord> channels_;
};

}  // namespace mocp
