#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modcomplete/common.hpp"

namespace modcomplete {

enum class Keyword { Given, When, Then, And, Or };
std::string_view to_string(Keyword k);

struct Token {
  enum class Kind { Keyword, Word, Punct };

  Kind kind;
  std::string text;   // original spelling
  std::string lower;  // ASCII-lowercased spelling
  std::optional<Keyword> keyword;

  bool operator==(const Token&) const = default;
};

// Whitespace split; trailing ',', '.', ';' become separate Punct tokens;
// given/when/then/and/or (any case) become Keyword tokens.
std::vector<Token> tokenize(std::string_view text);

struct Word {
  std::string text;
  std::string lower;

  bool operator==(const Word&) const = default;
};

struct Clause {
  ClauseKind kind;
  Keyword introducer;           // given/when/then, or the and/or that split it off
  std::vector<Token> tokens;    // introducer, words and punctuation, in order
  std::vector<Word> words;

  std::vector<std::string> texts() const;
  std::string text() const;  // words joined by single spaces
};

enum class WhenMode { Conjunctive, Disjunctive };

struct RequirementDoc {
  std::string id;
  std::optional<std::string> feature;
  std::optional<std::string> scenario;
  std::string text;
  std::size_t line = 0;  // 1-based line of the scenario header, 0 if unknown
};

struct RequirementAST {
  std::string id;
  std::string text;
  std::vector<Clause> given;
  std::vector<Clause> when;
  std::vector<Clause> then;
  WhenMode when_mode = WhenMode::Conjunctive;

  const std::vector<Clause>& section(ClauseKind k) const;
};

class GherkinError : public Error {
 public:
  enum class Kind {
    MissingGiven,
    MissingThen,
    OutOfOrderKeyword,
    MixedAndOr,
    DisjunctionOutsideWhen,
    EmptyClause,
    DuplicateId,
    EmptyScenario,
  };

  // `position` is a token index for requirement errors, a line for corpus errors.
  GherkinError(Kind kind, std::size_t position, const std::string& message);
  Kind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return position_; }

 private:
  Kind kind_;
  std::size_t position_;
};

RequirementAST parse_requirement(const RequirementDoc& doc);

// All clause tokens concatenated in textual order. Equals tokenize(text) for
// every accepted requirement.
std::vector<Token> clause_tokens(const RequirementAST& ast);

std::vector<RequirementDoc> parse_corpus(std::string_view text);

}  // namespace modcomplete
