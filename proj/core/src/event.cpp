#include "mocp/event.hpp"

#include "mocp/errors.hpp"
#include "text.hpp"

#include <algorithm>
#include <charconv>

namespace mocp {

std::string to_string(const Scalar& value) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, bool>) {
                return v ? "true" : "false";
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else {
                return v;
            }
        },
        value);
}

std::string_view to_string(Phase phase) noexcept {
    return phase == Phase::Normal ? "Normal" : "DuringCompensation";
}

std::optional<Phase> parse_phase(std::string_view text) noexcept {
    if (text == "Normal") return Phase::Normal;
    if (text == "DuringCompensation") return Phase::DuringCompensation;
    return std::nullopt;
}

std::optional<Scalar> Event::lookup(const std::string& key) const {
    if (auto it = payload.find(key); it != payload.end()) return it->second;
    if (auto it = subject.find(key); it != subject.end()) return Scalar{it->second};
    return std::nullopt;
}

std::optional<std::uint64_t> Trace::last_seq() const noexcept {
    if (events_.empty()) return std::nullopt;
    return events_.back().seq;
}

const Event* Trace::find(std::uint64_t seq) const noexcept {
    // seqs are sorted
    auto it = std::lower_bound(events_.begin(), events_.end(), seq,
                               [](const Event& e, std::uint64_t s) { return e.seq < s; });
    if (it == events_.end() || it->seq != seq) return nullptr;
    return &*it;
}

void Trace::append(Event e) {
    if (!validate_event(e, *this)) {
        throw ProtocolError("event '" + e.name + "' with seq " + std::to_string(e.seq) +
                            " cannot extend trace");
    }
    events_.push_back(std::move(e));
}

bool validate_event(const Event& e, const Trace& t) noexcept {
    if (e.name.empty() || e.seq == 0) return false;
    const auto last = t.last_seq();
    return !last || e.seq > *last;
}

std::string serialize(const Event& e) {
    std::string out = std::to_string(e.seq);
    out += '|';
    out += detail::escape_field(e.name);
    out += '|';
    bool first = true;
    for (const auto& [k, v] : e.subject) {
        if (!first) out += ',';
        first = false;
        out += detail::escape_field(k);
        out += '=';
        out += detail::escape_field(v);
    }
    out += '|';
    out += detail::format_pairs(e.payload);
    out += '|';
    out += to_string(e.phase);
    return out;
}

Event parse_event_record(std::string_view line) {
    const auto fields = detail::split_escaped(line, '|');
    if (fields.size() != 5) {
        throw SpecError("event record needs 5 fields: " + std::string(line));
    }
    Event e;
    std::uint64_t seq = 0;
    const auto& seq_text = fields[0];
    auto [ptr, ec] = std::from_chars(seq_text.data(), seq_text.data() + seq_text.size(), seq);
    if (ec != std::errc{} || ptr != seq_text.data() + seq_text.size()) {
        throw SpecError("bad event seq: " + seq_text);
    }
    e.seq = seq;
    e.name = detail::unescape(fields[1]);
    for (auto& [k, v] : detail::parse_pairs(fields[2])) {
        e.subject[k] = to_string(v);
    }
    e.payload = detail::parse_pairs(fields[3]);
    auto phase = parse_phase(fields[4]);
    if (!phase) throw SpecError("bad event phase: " + fields[4]);
    e.phase = *phase;
    return e;
}

std::string_view token_source_label(const ContinueToken& token) noexcept {
    if (token.source == SignalSource::MonitorSide) return "monitor";
    return token.proxy ? "manager-proxy" : "manager";
}

}  // namespace mocp
