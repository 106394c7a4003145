#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace langvar {

// Small UTF-8 aware helpers shared across modules. Whitespace here always
// means ASCII space/tab/CR/LF; normalization is Unicode NFC.

std::string nfc(std::string_view s);

std::string trim(std::string_view s);

// Collapse runs of ASCII whitespace to a single space (no trimming).
std::string collapse_ws(std::string_view s);

// Canonical text form used for deduplication: NFC, trimmed, collapsed.
std::string canonical_form(std::string_view s);

std::vector<std::string> split_ws(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Split into UTF-8 encoded code points. Invalid bytes pass through as
// single-byte units rather than throwing; corpus text is already NFC by
// the time anything calls this.
std::vector<std::string> utf8_chars(std::string_view s);

std::size_t utf8_length(std::string_view s);

// Fraction of non-whitespace code points that are ASCII letters.
// Returns 0 for strings with no non-whitespace content.
double ascii_letter_ratio(std::string_view s);

// FNV-1a 64-bit, used for input digests in run manifests.
std::uint64_t fnv1a64(std::string_view s);

std::string to_hex(std::uint64_t v);

}  // namespace langvar
