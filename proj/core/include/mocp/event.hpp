#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mocp {

/// Payload value. Money is always integer cents.
using Scalar = std::variant<std::int64_t, bool, std::string>;

using SubjectMap = std::map<std::string, std::string>;
using PayloadMap = std::map<std::string, Scalar>;

std::string to_string(const Scalar& value);

enum class Phase { Normal, DuringCompensation };

std::string_view to_string(Phase phase) noexcept;
std::optional<Phase> parse_phase(std::string_view text) noexcept;

struct Event {
    std::uint64_t seq = 0;
    std::string name;
    SubjectMap subject;
    PayloadMap payload;
    Phase phase = Phase::Normal;

    /// Looks a key up in the payload first, then in the subject.
    std::optional<Scalar> lookup(const std::string& key) const;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Ordered sequence of events; seq strictly increasing.
class Trace {
public:
    const std::vector<Event>& events() const noexcept { return events_; }
    std::optional<std::uint64_t> last_seq() const noexcept;
    bool empty() const noexcept { return events_.empty(); }
    std::size_t size() const noexcept { return events_.size(); }
    const Event* find(std::uint64_t seq) const noexcept;

    /// Appends after validate_event; throws ProtocolError otherwise.
    void append(Event e);

private:
    std::vector<Event> events_;
};

/// True iff `e` may extend `t`: a non-empty name and a seq past the trace's last one.
bool validate_event(const Event& e, const Trace& t) noexcept;

/// Line record `seq|name|subject-pairs|payload-pairs|phase`.
///
/// Pairs are `key=value` joined by `,` in key order. Strings are written raw;
/// reserved characters (`|`, `,`, `=`, `\`) in keys and values are backslash-escaped.
std::string serialize(const Event& e);

/// Inverse of serialize(). Integers and `true`/`false` are read back as such,
/// everything else as strings. Throws SpecError on malformed records.
Event parse_event_record(std::string_view line);

// Signals on the continue / compensate lines.

enum class SignalSource { MonitorSide, ManagerSide };

struct ContinueToken {
    std::uint64_t for_seq = 0;
    SignalSource source = SignalSource::ManagerSide;
    /// Issued by the manager on behalf of a monitor path that answered with compensate.
    bool proxy = false;

    friend bool operator==(const ContinueToken&, const ContinueToken&) = default;
};

/// `monitor`, `manager` or `manager-proxy`.
std::string_view token_source_label(const ContinueToken& token) noexcept;

}  // namespace mocp
