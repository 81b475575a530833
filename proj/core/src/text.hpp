#pragma once

// Helpers for the pipe-delimited log records.

#include "mocp/errors.hpp"
#include "mocp/event.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace mocp::detail {

inline bool is_reserved(char c) noexcept {
    return c == '|' || c == ',' || c == '=' || c == '\\';
}

inline std::string escape_field(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (is_reserved(c)) out += '\\';
        out += c;
    }
    return out;
}

inline std::string unescape(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        out += text[i];
    }
    return out;
}

/// Splits on unescaped `sep`; escapes are preserved in the pieces.
inline std::vector<std::string> split_escaped(std::string_view text, char sep) {
    std::vector<std::string> out(1);
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\\' && i + 1 < text.size()) {
            out.back() += c;
            out.back() += text[++i];
        } else if (c == sep) {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

inline Scalar parse_scalar(std::string_view raw) {
    if (raw == "true") return true;
    if (raw == "false") return false;
    if (!raw.empty()) {
        std::size_t start = (raw[0] == '-') ? 1 : 0;
        bool digits = start < raw.size();
        for (std::size_t i = start; i < raw.size() && digits; ++i) {
            digits = raw[i] >= '0' && raw[i] <= '9';
        }
        if (digits) {
            try {
                return static_cast<std::int64_t>(std::stoll(std::string(raw)));
            } catch (const std::out_of_range&) {
                // falls through to string
            }
        }
    }
    return std::string(raw);
}

inline std::string format_pairs(const PayloadMap& pairs) {
    std::string out;
    bool first = true;
    for (const auto& [k, v] : pairs) {
        if (!first) out += ',';
        first = false;
        out += escape_field(k);
        out += '=';
        out += escape_field(to_string(v));
    }
    return out;
}

inline PayloadMap parse_pairs(std::string_view text) {
    PayloadMap out;
    if (text.empty()) return out;
    for (const auto& pair : split_escaped(text, ',')) {
        const auto kv = split_escaped(pair, '=');
        if (kv.size() != 2) {
            throw SpecError("malformed key=value pair: " + pair);
        }
        const std::string value = unescape(kv[1]);
        // A string that spells an integer or boolean is indistinguishable here.
        out[unescape(kv[0])] = parse_scalar(value);
    }
    return out;
}

}  // namespace mocp::detail
