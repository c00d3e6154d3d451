#include "modcomplete/kb.hpp"

#include <algorithm>
#include <map>

namespace modcomplete {
namespace {

using K = KbError::Kind;

const std::set<std::string> kArticles = {"a", "an", "the"};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

bool is_identifier(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
           c == '-';
  });
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

struct LineToken {
  std::string text;
  std::size_t column;  // 1-based
};

// Whitespace split with "->" always a token of its own.
std::vector<LineToken> split_line(std::string_view line) {
  std::vector<LineToken> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (is_space(line[i])) {
      ++i;
      continue;
    }
    if (line.substr(i).starts_with("->")) {
      out.push_back({"->", i + 1});
      i += 2;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !is_space(line[i]) && !line.substr(i).starts_with("->")) ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

struct Cursor {
  const std::vector<LineToken>& toks;
  std::size_t line;
  std::size_t i = 0;

  bool done() const { return i >= toks.size(); }
  std::size_t column() const { return done() ? (toks.empty() ? 1 : toks.back().column + toks.back().text.size()) : toks[i].column; }

  [[noreturn]] void fail(const std::string& msg) const { throw KbError(K::SyntaxError, line, column(), msg); }

  std::string identifier(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    if (!is_identifier(toks[i].text)) fail(std::string("expected ") + what + ", found '" + toks[i].text + "'");
    return toks[i++].text;
  }

  void expect(std::string_view text) {
    if (done() || toks[i].text != text) {
      fail("expected '" + std::string(text) + "'" + (done() ? "" : ", found '" + toks[i].text + "'"));
    }
    ++i;
  }

  // Identifier optionally glued to a trailing ':' ("F1:" or "F1 :").
  std::string identifier_colon(const char* what) {
    if (done()) fail(std::string("expected ") + what);
    std::string t = toks[i].text;
    if (t.size() > 1 && t.back() == ':') {
      t.pop_back();
      if (!is_identifier(t)) fail(std::string("expected ") + what + ", found '" + t + "'");
      ++i;
      return t;
    }
    std::string id = identifier(what);
    expect(":");
    return id;
  }
};

struct PendingMetaReq {
  MetaReq mr;
  std::size_t line;
  std::vector<std::pair<std::string, std::size_t>> role_lines;  // role -> line
};

struct PendingFragment {
  MetaFragment fragment;
  std::size_t line;
  std::set<std::string> keys;
};

void apply_fragment_tokens(PendingFragment& pf, Cursor& cur) {
  while (!cur.done()) {
    std::string key = cur.toks[cur.i].text;
    if (key.size() < 2 || key.back() != ':') cur.fail("expected 'key:' in fragment body, found '" + key + "'");
    key.pop_back();
    ++cur.i;
    if (key != "effect" && !pf.keys.insert(key).second) cur.fail("repeated key '" + key + "'");
    auto& f = pf.fragment;
    if (key == "owner") {
      f.owner_role = cur.identifier("role");
    } else if (key == "source") {
      f.source_role = cur.identifier("role");
    } else if (key == "target") {
      f.target_role = cur.identifier("role");
    } else if (key == "trigger") {
      f.trigger_role = cur.identifier("role");
    } else if (key == "effect") {
      EffectSpec e;
      e.signal_role = cur.identifier("signal role");
      cur.expect("->");
      e.target_block_role = cur.identifier("block role");
      f.effects.push_back(std::move(e));
    } else {
      --cur.i;
      cur.fail("unknown fragment key '" + key + "'");
    }
  }
}

void validate_metareq(const PendingMetaReq& pm, const std::map<std::string, const PendingFragment*>& fragments) {
  const MetaReq& mr = pm.mr;
  if (mr.given.empty() || mr.then.empty()) {
    throw KbError(K::SyntaxError, pm.line, 1,
                  "metareq '" + mr.id + "' needs at least one given and one then template");
  }
  std::map<std::string, Metaclass> roles;
  for (const auto* sec : {&mr.given, &mr.when, &mr.then}) {
    for (const auto& t : *sec) {
      for (const auto* slot : t.slots()) {
        if (!roles.emplace(slot->role, slot->metaclass).second) {
          std::size_t line = pm.line;
          for (const auto& [r, l] : pm.role_lines)
            if (r == slot->role) line = l;
          throw KbError(K::DuplicateRole, line, 1, "role '" + slot->role + "' declared twice in '" + mr.id + "'");
        }
      }
    }
  }
  auto it = fragments.find(mr.fragment);
  if (it == fragments.end()) {
    throw KbError(K::UnknownFragment, pm.line, 1,
                  "metareq '" + mr.id + "' refers to unknown fragment '" + mr.fragment + "'");
  }
  const PendingFragment& pf = *it->second;
  for (const auto& [role, needed] : pf.fragment.typed_roles()) {
    auto r = roles.find(role);
    if (r == roles.end()) {
      throw KbError(K::UntypedRole, pf.line, 1,
                    "fragment '" + pf.fragment.id + "' uses role '" + role + "' not declared by '" + mr.id + "'");
    }
    if (r->second != needed) {
      throw KbError(K::RoleTypeMismatch, pf.line, 1,
                    "fragment '" + pf.fragment.id + "' needs role '" + role + "' to be a " +
                        std::string(to_string(needed)) + ", but '" + mr.id + "' declares a " +
                        std::string(to_string(r->second)));
    }
  }
}

bool item_generalizes(const TemplateItem& a, const TemplateItem& b) {
  if (const auto* la = std::get_if<Literal>(&a)) {
    const auto* lb = std::get_if<Literal>(&b);
    return lb && lb->word == la->word;
  }
  if (const auto* oa = std::get_if<OptionalLiteral>(&a)) {
    if (const auto* lb = std::get_if<Literal>(&b)) return oa->words.count(lb->word) > 0;
    if (const auto* ob = std::get_if<OptionalLiteral>(&b)) {
      return std::includes(oa->words.begin(), oa->words.end(), ob->words.begin(), ob->words.end());
    }
    return false;
  }
  const auto& sa = std::get<SlotPattern>(a);
  const auto* sb = std::get_if<SlotPattern>(&b);
  return sb && sb->metaclass == sa.metaclass;
}

bool template_generalizes(const ClauseTemplate& a, const ClauseTemplate& b) {
  if (a.items.size() != b.items.size()) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (!item_generalizes(a.items[i], b.items[i])) return false;
  }
  return true;
}

constexpr std::string_view kDefaultKb = R"(# Built-in translation rules.
#
# MR1: the railway pattern, a triggered transition that also sends a signal.
metareq MR1 -> F1:
  given: "<<Block as context1>> in <<State as starting>>"
  when:  "<<Block as context2>> receives <<Signal as event>>"
  then:  "<<Block as context3>> <<Signal as operation>> (to)? <<Block as context4>>"
  then:  "goes in <<State as final>>"

# MR2: triggered transition without an effect.
metareq MR2 -> F2:
  given: "<<Block as context1>> in <<State as starting>>"
  when:  "<<Block as context2>> receives <<Signal as event>>"
  then:  "<<Block as context3>> goes in <<State as final>>"

# MR3: completion transition, no trigger.
metareq MR3 -> F3:
  given: "<<Block as context1>> in <<State as starting>>"
  then:  "<<Block as context2>> goes in <<State as final>>"

fragment F1:
  owner: context1   source: starting   target: final
  trigger: event    effect: operation -> context4

fragment F2:
  owner: context1   source: starting   target: final
  trigger: event

fragment F3:
  owner: context1   source: starting   target: final
)";

}  // namespace

KbError::KbError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
    : Error(
          [kind] {
            switch (kind) {
              case Kind::SyntaxError: return "SyntaxError";
              case Kind::UnknownFragment: return "UnknownFragment";
              case Kind::UntypedRole: return "UntypedRole";
              case Kind::RoleTypeMismatch: return "RoleTypeMismatch";
              case Kind::DuplicateRole: return "DuplicateRole";
              case Kind::DuplicateId: return "DuplicateId";
              case Kind::InvalidTemplate: return "InvalidTemplate";
            }
            return "KbError";
          }(),
          "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      kind_(kind),
      line_(line),
      column_(column) {}

std::vector<const SlotPattern*> ClauseTemplate::slots() const {
  std::vector<const SlotPattern*> out;
  for (const auto& item : items)
    if (const auto* s = std::get_if<SlotPattern>(&item)) out.push_back(s);
  return out;
}

std::string ClauseTemplate::source() const {
  std::string out;
  auto append = [&](const std::string& piece) {
    if (!out.empty()) out += ' ';
    out += piece;
  };
  for (const auto& item : items) {
    if (const auto* l = std::get_if<Literal>(&item)) {
      append(l->word);
    } else if (const auto* o = std::get_if<OptionalLiteral>(&item)) {
      if (o->implicit) continue;
      std::string alt;
      for (const auto& w : o->words) alt += (alt.empty() ? "" : "|") + w;
      append("(" + alt + ")?");
    } else {
      const auto& s = std::get<SlotPattern>(item);
      append("<<" + std::string(to_string(s.metaclass)) + " as " + s.role + ">>");
    }
  }
  return out;
}

std::vector<std::pair<std::string, Metaclass>> MetaFragment::typed_roles() const {
  std::vector<std::pair<std::string, Metaclass>> out{
      {owner_role, Metaclass::Block}, {source_role, Metaclass::State}, {target_role, Metaclass::State}};
  if (trigger_role) out.emplace_back(*trigger_role, Metaclass::Signal);
  for (const auto& e : effects) {
    out.emplace_back(e.signal_role, Metaclass::Signal);
    out.emplace_back(e.target_block_role, Metaclass::Block);
  }
  return out;
}

const std::vector<ClauseTemplate>& MetaReq::section(ClauseKind k) const {
  switch (k) {
    case ClauseKind::Given: return given;
    case ClauseKind::When: return when;
    case ClauseKind::Then: return then;
  }
  return given;
}

std::optional<Metaclass> MetaReq::role_metaclass(std::string_view role) const {
  for (const auto* sec : {&given, &when, &then})
    for (const auto& t : *sec)
      for (const auto* s : t.slots())
        if (s->role == role) return s->metaclass;
  return std::nullopt;
}

std::size_t MetaReq::slot_count() const {
  std::size_t n = 0;
  for (const auto* sec : {&given, &when, &then})
    for (const auto& t : *sec) n += t.slots().size();
  return n;
}

const MetaFragment* KnowledgeBase::find_fragment(std::string_view id) const {
  for (const auto& f : fragments)
    if (f.id == id) return &f;
  return nullptr;
}

ClauseTemplate parse_clause_template(ClauseKind kind, std::string_view text, std::size_t line,
                                     std::size_t column) {
  ClauseTemplate tmpl{kind, {}};
  auto fail = [&](std::size_t offset, const std::string& msg) -> KbError {
    return KbError(K::SyntaxError, line, column + offset, msg);
  };

  std::size_t i = 0;
  while (i < text.size()) {
    if (is_space(text[i])) {
      ++i;
      continue;
    }
    if (text.substr(i).starts_with("<<")) {
      std::size_t close = text.find(">>", i + 2);
      if (close == std::string_view::npos) throw fail(i, "unterminated slot '<<'");
      std::vector<std::string> parts;
      for (const auto& tok : split_line(text.substr(i + 2, close - i - 2))) parts.push_back(tok.text);
      if (parts.size() != 3 || parts[1] != "as") throw fail(i, "slot must read '<<Metaclass as role>>'");
      SlotPattern slot;
      try {
        slot.metaclass = parse_metaclass(parts[0]);
      } catch (const std::invalid_argument&) {
        throw fail(i, "unknown metaclass '" + parts[0] + "' (expected Block, State or Signal)");
      }
      if (!is_identifier(parts[2])) throw fail(i, "invalid role name '" + parts[2] + "'");
      slot.role = parts[2];
      tmpl.items.push_back(OptionalLiteral{kArticles, true});
      tmpl.items.push_back(std::move(slot));
      i = close + 2;
      continue;
    }
    if (text[i] == '(') {
      std::size_t close = text.find(")?", i);
      if (close == std::string_view::npos) throw fail(i, "optional literal must read '(w1|w2)?'");
      OptionalLiteral opt;
      std::string_view body = text.substr(i + 1, close - i - 1);
      std::size_t start = 0;
      while (true) {
        std::size_t bar = body.find('|', start);
        std::string_view w = body.substr(start, bar == std::string_view::npos ? body.size() - start : bar - start);
        if (w.empty() || std::any_of(w.begin(), w.end(), [](char c) { return is_space(c); })) {
          throw fail(i, "empty or spaced alternative in optional literal");
        }
        opt.words.insert(lower(w));
        if (bar == std::string_view::npos) break;
        start = bar + 1;
      }
      tmpl.items.push_back(std::move(opt));
      i = close + 2;
      continue;
    }
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i]) && !text.substr(i).starts_with("<<")) ++i;
    std::string_view word = text.substr(start, i - start);
    if (word.find_first_of("()<>\"") != std::string_view::npos) {
      throw fail(start, "unexpected character in literal '" + std::string(word) + "'");
    }
    tmpl.items.push_back(Literal{lower(word)});
  }

  if (tmpl.slots().empty()) {
    throw KbError(K::InvalidTemplate, line, column, "template '" + std::string(text) + "' has no slot");
  }
  return tmpl;
}

KnowledgeBase parse_kb(std::string_view text) {
  std::vector<PendingMetaReq> metareqs;
  std::vector<PendingFragment> fragments;
  enum class Section { None, MetaReq, Fragment } section = Section::None;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    auto toks = split_line(line);
    if (toks.empty() || toks.front().text.starts_with("#")) continue;
    Cursor cur{toks, line_no};

    const std::string& head = toks.front().text;
    if (head == "metareq") {
      ++cur.i;
      PendingMetaReq pm;
      pm.line = line_no;
      pm.mr.id = cur.identifier("metareq id");
      cur.expect("->");
      pm.mr.fragment = cur.identifier_colon("fragment id");
      if (!cur.done()) cur.fail("unexpected '" + toks[cur.i].text + "' after metareq header");
      pm.mr.priority = static_cast<int>(metareqs.size());
      metareqs.push_back(std::move(pm));
      section = Section::MetaReq;
      continue;
    }
    if (head == "fragment") {
      ++cur.i;
      PendingFragment pf;
      pf.line = line_no;
      pf.fragment.id = cur.identifier_colon("fragment id");
      apply_fragment_tokens(pf, cur);
      fragments.push_back(std::move(pf));
      section = Section::Fragment;
      continue;
    }

    if (section == Section::Fragment) {
      apply_fragment_tokens(fragments.back(), cur);
      continue;
    }
    if (section != Section::MetaReq) cur.fail("expected 'metareq' or 'fragment', found '" + head + "'");

    std::optional<ClauseKind> kind;
    if (head == "given:") kind = ClauseKind::Given;
    if (head == "when:") kind = ClauseKind::When;
    if (head == "then:") kind = ClauseKind::Then;
    if (!kind) cur.fail("expected 'given:', 'when:' or 'then:', found '" + head + "'");

    std::size_t body_start = toks.front().column - 1 + head.size();
    while (body_start < line.size() && is_space(line[body_start])) ++body_start;
    if (body_start >= line.size() || line[body_start] != '"') {
      throw KbError(K::SyntaxError, line_no, body_start + 1, "expected a quoted template");
    }
    std::size_t close = line.find('"', body_start + 1);
    if (close == std::string_view::npos) {
      throw KbError(K::SyntaxError, line_no, body_start + 1, "unterminated template string");
    }
    for (std::size_t k = close + 1; k < line.size(); ++k) {
      if (!is_space(line[k])) throw KbError(K::SyntaxError, line_no, k + 1, "unexpected text after template");
    }
    ClauseTemplate tmpl =
        parse_clause_template(*kind, line.substr(body_start + 1, close - body_start - 1), line_no, body_start + 2);

    PendingMetaReq& pm = metareqs.back();
    for (const auto* s : tmpl.slots()) pm.role_lines.emplace_back(s->role, line_no);
    switch (*kind) {
      case ClauseKind::Given: pm.mr.given.push_back(std::move(tmpl)); break;
      case ClauseKind::When: pm.mr.when.push_back(std::move(tmpl)); break;
      case ClauseKind::Then: pm.mr.then.push_back(std::move(tmpl)); break;
    }
  }

  std::map<std::string, const PendingFragment*> by_id;
  for (const auto& pf : fragments) {
    const auto& f = pf.fragment;
    if (f.owner_role.empty() || f.source_role.empty() || f.target_role.empty()) {
      throw KbError(K::SyntaxError, pf.line, 1, "fragment '" + f.id + "' needs owner, source and target");
    }
    if (!by_id.emplace(f.id, &pf).second) {
      throw KbError(K::DuplicateId, pf.line, 1, "duplicate fragment id '" + f.id + "'");
    }
  }
  std::set<std::string> mr_ids;
  for (const auto& pm : metareqs) {
    if (!mr_ids.insert(pm.mr.id).second) {
      throw KbError(K::DuplicateId, pm.line, 1, "duplicate metareq id '" + pm.mr.id + "'");
    }
    validate_metareq(pm, by_id);
  }

  KnowledgeBase kb;
  for (auto& pm : metareqs) kb.metareqs.push_back(std::move(pm.mr));
  for (auto& pf : fragments) kb.fragments.push_back(std::move(pf.fragment));
  return kb;
}

std::string serialize_kb(const KnowledgeBase& kb) {
  std::string out;
  for (const auto& mr : kb.metareqs) {
    out += "metareq " + mr.id + " -> " + mr.fragment + ":\n";
    for (const auto* sec : {&mr.given, &mr.when, &mr.then}) {
      for (const auto& t : *sec) {
        out += "  " + std::string(to_string(t.kind)) + ": \"" + t.source() + "\"\n";
      }
    }
    out += "\n";
  }
  for (const auto& f : kb.fragments) {
    out += "fragment " + f.id + ":\n";
    out += "  owner: " + f.owner_role + "   source: " + f.source_role + "   target: " + f.target_role + "\n";
    if (f.trigger_role) out += "  trigger: " + *f.trigger_role + "\n";
    for (const auto& e : f.effects) out += "  effect: " + e.signal_role + " -> " + e.target_block_role + "\n";
    out += "\n";
  }
  return out;
}

std::string_view default_kb_text() { return kDefaultKb; }

const KnowledgeBase& default_kb() {
  static const KnowledgeBase kb = parse_kb(kDefaultKb);
  return kb;
}

std::vector<ShadowedMetaReq> find_shadowed(const KnowledgeBase& kb) {
  std::vector<ShadowedMetaReq> out;
  for (std::size_t j = 0; j < kb.metareqs.size(); ++j) {
    const MetaReq& later = kb.metareqs[j];
    for (std::size_t i = 0; i < j; ++i) {
      const MetaReq& earlier = kb.metareqs[i];
      bool covers = true;
      for (ClauseKind k : {ClauseKind::Given, ClauseKind::When, ClauseKind::Then}) {
        const auto& a = earlier.section(k);
        const auto& b = later.section(k);
        if (a.size() != b.size()) {
          covers = false;
          break;
        }
        for (std::size_t t = 0; t < a.size() && covers; ++t) covers = template_generalizes(a[t], b[t]);
        if (!covers) break;
      }
      if (covers) {
        out.push_back({earlier.id, later.id});
        break;
      }
    }
  }
  return out;
}

}  // namespace modcomplete
