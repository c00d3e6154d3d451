#include "modcomplete/normalize.hpp"

#include <algorithm>
#include <array>
#include <vector>

namespace modcomplete {
namespace {

constexpr std::array<std::string_view, 4> kSignalStopwords = {"message", "signal", "command",
                                                              "event"};

struct SuffixRule {
  std::string_view suffix;
  std::string_view replacement;
};

constexpr std::array<SuffixRule, 5> kSuffixRules = {{
    {"ies", "y"},
    {"es", ""},
    {"s", ""},
    {"ing", ""},
    {"ed", ""},
}};

char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

bool is_name_char(char c) {
  auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || u >= 0x80;
}

// Lowercased, punctuation-free, article-free word list.
std::vector<std::string> content_words(std::span<const std::string> words) {
  std::vector<std::string> out;
  for (const auto& w : words) {
    std::string cleaned = normalize_name(w);
    if (cleaned.empty() || is_article(cleaned)) continue;
    out.push_back(std::move(cleaned));
  }
  return out;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += w;
  return out;
}

}  // namespace

bool is_article(std::string_view word) {
  std::string lw;
  lw.reserve(word.size());
  for (char c : word) lw.push_back(lower_ascii(c));
  return lw == "a" || lw == "an" || lw == "the";
}

std::string normalize_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (is_name_char(c)) out.push_back(lower_ascii(c));
  }
  return out;
}

std::string normalize_phrase(std::span<const std::string> words) {
  return join(content_words(words));
}

std::set<std::string> stem_variants(std::string_view lower_word) {
  std::set<std::string> out;
  for (const auto& rule : kSuffixRules) {
    if (lower_word.size() > rule.suffix.size() && lower_word.ends_with(rule.suffix)) {
      std::string stem(lower_word.substr(0, lower_word.size() - rule.suffix.size()));
      stem += rule.replacement;
      out.insert(std::move(stem));
    }
  }
  return out;
}

std::set<std::string> normalize_signal_phrase(std::span<const std::string> words) {
  std::vector<std::string> base = content_words(words);
  std::set<std::string> out;
  out.insert(join(base));
  if (base.empty()) return out;

  std::vector<std::vector<std::string>> forms{base};
  std::vector<std::string> stripped = base;
  while (!stripped.empty() &&
         std::find(kSignalStopwords.begin(), kSignalStopwords.end(), stripped.back()) !=
             kSignalStopwords.end()) {
    stripped.pop_back();
  }
  if (!stripped.empty() && stripped != base) forms.push_back(stripped);

  for (const auto& form : forms) {
    out.insert(join(form));
    for (const auto& stem : stem_variants(form.back())) {
      auto variant = form;
      variant.back() = stem;
      out.insert(join(variant));
    }
  }
  return out;
}

}  // namespace modcomplete
