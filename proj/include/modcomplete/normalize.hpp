#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>

namespace modcomplete {

bool is_article(std::string_view word);

// Lowercase ASCII, drop every non-alphanumeric byte. Bytes >= 0x80 are kept
// so UTF-8 names survive. Used for model element names.
std::string normalize_name(std::string_view name);

// Phrase normal form: lowercase, articles removed, punctuation and "()"
// stripped, words concatenated. "the Braking Supervision" -> "brakingsupervision".
std::string normalize_phrase(std::span<const std::string> words);

// Signal phrase variants: the phrase normal form, the form with trailing
// stopwords (message, signal, command, event) removed, and every form whose
// last word had one verb suffix (ies->y, es, s, ing, ed) stripped.
std::set<std::string> normalize_signal_phrase(std::span<const std::string> words);

// Suffix-stripped variants of one word, one per applicable rule, never empty.
std::set<std::string> stem_variants(std::string_view lower_word);

}  // namespace modcomplete
