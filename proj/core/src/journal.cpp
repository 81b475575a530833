#include "mocp/journal.hpp"

#include "mocp/errors.hpp"
#include "text.hpp"

namespace mocp {

namespace {

std::string instruction_fields(std::uint64_t batch, const CompensationInstruction& i) {
    return std::to_string(batch) + "|" + detail::escape_field(i.strategy) + "|" + detail::escape_field(i.comp_action) +
           "|" + detail::format_pairs(i.bound_args);
}

std::uint64_t parse_u64(const std::string& text, std::string_view line) {
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw SpecError("bad number in record: " + std::string(line));
}

}  // namespace

std::string serialize(const EmissionRecord& r) { return "COMP|" + instruction_fields(r.batch, r.instruction); }

std::string serialize(const HandshakeRecord& r) {
    return "HSK|" + std::to_string(r.token.for_seq) + "|" + std::string(token_source_label(r.token));
}

std::string serialize(const DiscardRecord& r) {
    std::string names;
    for (const auto& n : r.names) {
        if (!names.empty()) names += ',';
        names += detail::escape_field(n);
    }
    return "DISCARD|" + std::to_string(r.seq) + "|" + names;
}

std::string serialize(const TriggerRecord& r) { return "TRIG|" + std::to_string(r.seq) + "|" + r.expr.to_string(); }

std::string serialize(const FaultRecord& r) {
    return "FAULT|" + instruction_fields(r.batch, r.instruction) + "|" + detail::escape_field(r.reason);
}

CompLine parse_comp_line(std::string_view line) {
    const auto f = detail::split_escaped(line, '|');
    if (f.size() != 5 || f[0] != "COMP") throw SpecError("not a COMP record: " + std::string(line));
    return CompLine{parse_u64(f[1], line), detail::unescape(f[2]), detail::unescape(f[3]), detail::parse_pairs(f[4])};
}

HskLine parse_hsk_line(std::string_view line) {
    const auto f = detail::split_escaped(line, '|');
    if (f.size() != 3 || f[0] != "HSK") throw SpecError("not a HSK record: " + std::string(line));
    return HskLine{parse_u64(f[1], line), f[2]};
}

std::string serialize(const ChannelRecord& r) {
    return "CHAN|" + std::to_string(r.seq) + "|" + detail::escape_field(r.name);
}

void Journal::event(const Event& e) { lines_.push_back("EVT|" + serialize(e)); }

void Journal::emission(EmissionRecord r) {
    lines_.push_back(serialize(r));
    emissions_.push_back(std::move(r));
}

void Journal::handshake(HandshakeRecord r) {
    lines_.push_back(serialize(r));
    handshakes_.push_back(std::move(r));
}

void Journal::discard(DiscardRecord r) {
    lines_.push_back(serialize(r));
    discards_.push_back(std::move(r));
}

void Journal::trigger(TriggerRecord r) {
    lines_.push_back(serialize(r));
    triggers_.push_back(std::move(r));
}

void Journal::fault(FaultRecord r) {
    lines_.push_back(serialize(r));
    faults_.push_back(std::move(r));
}

void Journal::channel(std::uint64_t seq, const std::string& name) {
    channels_.push_back({seq, name});
    lines_.push_back(serialize(channels_.back()));
}

void Journal::note(std::string text) { lines_.push_back("NOTE|" + detail::escape_field(text)); }

}  // namespace mocp
