#include "modcomplete/gherkin.hpp"

#include <cstdio>
#include <set>

namespace modcomplete {
namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_clause_punct(char c) { return c == ',' || c == '.' || c == ';'; }

std::optional<Keyword> keyword_of(std::string_view lower) {
  if (lower == "given") return Keyword::Given;
  if (lower == "when") return Keyword::When;
  if (lower == "then") return Keyword::Then;
  if (lower == "and") return Keyword::And;
  if (lower == "or") return Keyword::Or;
  return std::nullopt;
}

Token make_token(std::string_view text) {
  Token t{Token::Kind::Word, std::string(text), ascii_lower(text), std::nullopt};
  if (text.size() == 1 && is_clause_punct(text[0])) {
    t.kind = Token::Kind::Punct;
  } else if (auto kw = keyword_of(t.lower)) {
    t.kind = Token::Kind::Keyword;
    t.keyword = kw;
  }
  return t;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view to_string(Keyword k) {
  switch (k) {
    case Keyword::Given: return "given";
    case Keyword::When: return "when";
    case Keyword::Then: return "then";
    case Keyword::And: return "and";
    case Keyword::Or: return "or";
  }
  return "?";
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (start == i) break;
    std::string_view chunk = text.substr(start, i - start);

    std::size_t body_end = chunk.size();
    while (body_end > 0 && is_clause_punct(chunk[body_end - 1])) --body_end;
    if (body_end > 0) out.push_back(make_token(chunk.substr(0, body_end)));
    for (std::size_t p = body_end; p < chunk.size(); ++p) out.push_back(make_token(chunk.substr(p, 1)));
  }
  return out;
}

std::vector<std::string> Clause::texts() const {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(w.text);
  return out;
}

std::string Clause::text() const {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w.text;
  }
  return out;
}

const std::vector<Clause>& RequirementAST::section(ClauseKind k) const {
  switch (k) {
    case ClauseKind::Given: return given;
    case ClauseKind::When: return when;
    case ClauseKind::Then: return then;
  }
  return given;
}

GherkinError::GherkinError(Kind kind, std::size_t position, const std::string& message)
    : Error(
          [kind] {
            switch (kind) {
              case Kind::MissingGiven: return "MissingGiven";
              case Kind::MissingThen: return "MissingThen";
              case Kind::OutOfOrderKeyword: return "OutOfOrderKeyword";
              case Kind::MixedAndOr: return "MixedAndOr";
              case Kind::DisjunctionOutsideWhen: return "DisjunctionOutsideWhen";
              case Kind::EmptyClause: return "EmptyClause";
              case Kind::DuplicateId: return "DuplicateId";
              case Kind::EmptyScenario: return "EmptyScenario";
            }
            return "GherkinError";
          }(),
          message),
      kind_(kind),
      position_(position) {}

RequirementAST parse_requirement(const RequirementDoc& doc) {
  using K = GherkinError::Kind;
  const std::vector<Token> tokens = tokenize(doc.text);

  RequirementAST ast;
  ast.id = doc.id;
  ast.text = doc.text;

  std::optional<ClauseKind> section;
  std::vector<Clause>* current_section = nullptr;
  std::size_t clause_start = 0;
  bool when_and = false;
  bool when_or = false;

  auto close_clause = [&] {
    if (current_section && current_section->back().words.empty()) {
      throw GherkinError(K::EmptyClause, clause_start,
                         "empty " + std::string(to_string(current_section->back().introducer)) +
                             " clause at token " + std::to_string(clause_start));
    }
  };
  auto open_clause = [&](ClauseKind kind, const Token& kw, std::size_t pos) {
    switch (kind) {
      case ClauseKind::Given: current_section = &ast.given; break;
      case ClauseKind::When: current_section = &ast.when; break;
      case ClauseKind::Then: current_section = &ast.then; break;
    }
    section = kind;
    clause_start = pos;
    current_section->push_back(Clause{kind, *kw.keyword, {kw}, {}});
  };
  auto out_of_order = [&](const Token& t, std::size_t pos) {
    return GherkinError(K::OutOfOrderKeyword, pos,
                        "keyword '" + t.text + "' out of order at token " + std::to_string(pos));
  };

  for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
    const Token& t = tokens[pos];
    if (t.kind != Token::Kind::Keyword) {
      if (!section) {
        throw GherkinError(K::MissingGiven, pos, "requirement must start with 'Given' (token " +
                                                     std::to_string(pos) + ")");
      }
      current_section->back().tokens.push_back(t);
      if (t.kind == Token::Kind::Word) current_section->back().words.push_back({t.text, t.lower});
      continue;
    }

    const Keyword kw = *t.keyword;
    if (!section) {
      if (kw != Keyword::Given) {
        throw GherkinError(K::MissingGiven, pos,
                           "requirement must start with 'Given', found '" + t.text + "'");
      }
      open_clause(ClauseKind::Given, t, pos);
      continue;
    }

    close_clause();
    switch (kw) {
      case Keyword::Given:
        throw out_of_order(t, pos);
      case Keyword::When:
        if (*section != ClauseKind::Given) throw out_of_order(t, pos);
        open_clause(ClauseKind::When, t, pos);
        break;
      case Keyword::Then:
        if (*section == ClauseKind::Then) throw out_of_order(t, pos);
        open_clause(ClauseKind::Then, t, pos);
        break;
      case Keyword::And:
      case Keyword::Or:
        if (kw == Keyword::Or && *section != ClauseKind::When) {
          throw GherkinError(K::DisjunctionOutsideWhen, pos,
                             "'or' is only allowed between when clauses (token " + std::to_string(pos) + ")");
        }
        if (*section == ClauseKind::When) {
          (kw == Keyword::And ? when_and : when_or) = true;
          if (when_and && when_or) {
            throw GherkinError(K::MixedAndOr, pos,
                               "when clauses mix 'and' and 'or' (token " + std::to_string(pos) + ")");
          }
        }
        open_clause(*section, t, pos);
        break;
    }
  }

  if (!section) throw GherkinError(K::MissingGiven, 0, "requirement is empty");
  close_clause();
  if (ast.then.empty()) {
    throw GherkinError(K::MissingThen, tokens.size(), "requirement has no 'Then' clause");
  }
  ast.when_mode = when_or ? WhenMode::Disjunctive : WhenMode::Conjunctive;
  return ast;
}

std::vector<Token> clause_tokens(const RequirementAST& ast) {
  std::vector<Token> out;
  for (const auto* sec : {&ast.given, &ast.when, &ast.then}) {
    for (const auto& c : *sec) out.insert(out.end(), c.tokens.begin(), c.tokens.end());
  }
  return out;
}

std::vector<RequirementDoc> parse_corpus(std::string_view text) {
  using K = GherkinError::Kind;
  std::vector<RequirementDoc> docs;
  std::set<std::string> ids;
  std::optional<std::string> feature;
  std::optional<std::string> pending_id;
  std::optional<RequirementDoc> current;
  std::size_t ordinal = 0;

  auto finish = [&] {
    if (!current) return;
    if (current->text.empty()) {
      throw GherkinError(K::EmptyScenario, current->line,
                         "scenario at line " + std::to_string(current->line) + " has no requirement text");
    }
    if (!ids.insert(current->id).second) {
      throw GherkinError(K::DuplicateId, current->line,
                         "duplicate requirement id '" + current->id + "' at line " + std::to_string(current->line));
    }
    docs.push_back(std::move(*current));
    current.reset();
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;

    if (line.empty() || line.front() == '#') continue;
    if (line.starts_with("Feature:")) {
      finish();
      feature = std::string(trim(line.substr(8)));
      continue;
    }
    if (line.starts_with("Scenario:")) {
      finish();
      ++ordinal;
      RequirementDoc doc;
      if (pending_id) {
        doc.id = *pending_id;
        pending_id.reset();
      } else {
        char buf[32];
        std::snprintf(buf, sizeof buf, "REQ-%03zu", ordinal);
        doc.id = buf;
      }
      doc.feature = feature;
      doc.scenario = std::string(trim(line.substr(9)));
      doc.line = line_no;
      current = std::move(doc);
      continue;
    }
    if (line.front() == '@') {
      if (auto at = line.find("@id:"); at != std::string_view::npos) {
        std::string_view rest = trim(line.substr(at + 4));
        std::size_t stop = 0;
        while (stop < rest.size() && !is_space(rest[stop])) ++stop;
        if (stop > 0) pending_id = std::string(rest.substr(0, stop));
      }
      continue;
    }
    if (!current) continue;  // feature description
    if (!current->text.empty()) current->text += ' ';
    current->text += line;
  }
  finish();
  return docs;
}

}  // namespace modcomplete
