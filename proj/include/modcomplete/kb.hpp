#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "modcomplete/common.hpp"

namespace modcomplete {

struct SlotPattern {
  Metaclass metaclass;
  std::string role;

  bool operator==(const SlotPattern&) const = default;
};

struct Literal {
  std::string word;  // lowercase

  bool operator==(const Literal&) const = default;
};

struct OptionalLiteral {
  std::set<std::string> words;  // lowercase
  bool implicit = false;        // auto-inserted article before a slot

  bool operator==(const OptionalLiteral&) const = default;
};

using TemplateItem = std::variant<Literal, OptionalLiteral, SlotPattern>;

struct ClauseTemplate {
  ClauseKind kind;
  std::vector<TemplateItem> items;

  std::vector<const SlotPattern*> slots() const;
  // Template text as written in a KB file (implicit articles omitted).
  std::string source() const;

  bool operator==(const ClauseTemplate&) const = default;
};

struct EffectSpec {
  std::string signal_role;
  std::string target_block_role;

  bool operator==(const EffectSpec&) const = default;
};

struct MetaFragment {
  std::string id;
  std::string owner_role;
  std::string source_role;
  std::string target_role;
  std::optional<std::string> trigger_role;
  std::vector<EffectSpec> effects;

  // Every role the fragment reads, with the metaclass it requires.
  std::vector<std::pair<std::string, Metaclass>> typed_roles() const;

  bool operator==(const MetaFragment&) const = default;
};

struct MetaReq {
  std::string id;
  std::vector<ClauseTemplate> given;
  std::vector<ClauseTemplate> when;
  std::vector<ClauseTemplate> then;
  std::string fragment;
  int priority = 0;  // file order, lower wins

  const std::vector<ClauseTemplate>& section(ClauseKind k) const;
  std::optional<Metaclass> role_metaclass(std::string_view role) const;
  std::size_t slot_count() const;

  bool operator==(const MetaReq&) const = default;
};

struct KnowledgeBase {
  std::vector<MetaReq> metareqs;
  std::vector<MetaFragment> fragments;

  const MetaFragment* find_fragment(std::string_view id) const;

  bool operator==(const KnowledgeBase&) const = default;
};

class KbError : public Error {
 public:
  enum class Kind {
    SyntaxError,
    UnknownFragment,
    UntypedRole,
    RoleTypeMismatch,
    DuplicateRole,
    DuplicateId,
    InvalidTemplate,
  };

  KbError(Kind kind, std::size_t line, std::size_t column, const std::string& message);
  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Kind kind_;
  std::size_t line_;
  std::size_t column_;
};

// Parses one quoted clause template body, inserting optional articles before slots.
ClauseTemplate parse_clause_template(ClauseKind kind, std::string_view text, std::size_t line = 0,
                                     std::size_t column = 0);

KnowledgeBase parse_kb(std::string_view text);
std::string serialize_kb(const KnowledgeBase& kb);

// Source text of the built-in knowledge base.
std::string_view default_kb_text();
const KnowledgeBase& default_kb();

// A strictly-earlier MetaReq whose templates accept everything a later one accepts.
struct ShadowedMetaReq {
  std::string shadowing;
  std::string shadowed;
};
std::vector<ShadowedMetaReq> find_shadowed(const KnowledgeBase& kb);

}  // namespace modcomplete
