#include "doctest.h"

#include "modcomplete/kb.hpp"

using namespace modcomplete;

namespace {

KbError kb_error(const std::string& text) {
  try {
    parse_kb(text);
  } catch (const KbError& e) {
    return e;
  }
  FAIL("accepted:\n" << text);
  throw std::logic_error("unreachable");
}

const char* kSmall = R"(metareq A -> FA:
  given: "<<Block as b>> in <<State as s>>"
  then: "goes in <<State as t>>"
fragment FA:
  owner: b  source: s  target: t
)";

}  // namespace

TEST_CASE("default knowledge base") {
  const KnowledgeBase& kb = default_kb();
  CHECK(kb.metareqs.size() == 3);
  CHECK(kb.fragments.size() == 3);
  CHECK(kb.metareqs[0].id == "MR1");
  CHECK(kb.metareqs[1].id == "MR2");
  CHECK(kb.metareqs[2].id == "MR3");
  CHECK(kb.metareqs[0].priority < kb.metareqs[1].priority);
  CHECK(kb.metareqs[0].slot_count() == 8);

  const MetaFragment* f1 = kb.find_fragment("F1");
  REQUIRE(f1);
  CHECK(f1->owner_role == "context1");
  CHECK(f1->source_role == "starting");
  CHECK(f1->target_role == "final");
  CHECK(f1->trigger_role == "event");
  CHECK(f1->effects == std::vector<EffectSpec>{{"operation", "context4"}});
  CHECK_FALSE(kb.find_fragment("F3")->trigger_role.has_value());
  CHECK(find_shadowed(kb).empty());
}

TEST_CASE("every fragment role is a slot role of the right metaclass") {
  const KnowledgeBase& kb = default_kb();
  for (const auto& mr : kb.metareqs) {
    const MetaFragment* f = kb.find_fragment(mr.fragment);
    REQUIRE(f);
    for (const auto& [role, mc] : f->typed_roles()) {
      CAPTURE(role);
      CHECK(mr.role_metaclass(role) == mc);
    }
  }
}

TEST_CASE("kb round trip") {
  CHECK(parse_kb(serialize_kb(default_kb())) == default_kb());
  CHECK(serialize_kb(parse_kb(serialize_kb(default_kb()))) == serialize_kb(default_kb()));
}

TEST_CASE("empty kb is valid") {
  CHECK(parse_kb("").metareqs.empty());
  CHECK(parse_kb("# nothing here\n\n").fragments.empty());
}

TEST_CASE("template parsing") {
  ClauseTemplate t = parse_clause_template(ClauseKind::Then, "<<Block as x>> <<Signal as y>> (to)? <<Block as z>>");
  REQUIRE(t.items.size() == 7);  // three implicit articles
  CHECK(std::get<OptionalLiteral>(t.items[0]).implicit);
  CHECK(std::get<SlotPattern>(t.items[1]) == SlotPattern{Metaclass::Block, "x"});
  CHECK(std::get<OptionalLiteral>(t.items[4]).words == std::set<std::string>{"to"});
  CHECK_FALSE(std::get<OptionalLiteral>(t.items[4]).implicit);
  CHECK(t.slots().size() == 3);
  CHECK(t.source() == "<<Block as x>> <<Signal as y>> (to)? <<Block as z>>");

  ClauseTemplate u = parse_clause_template(ClauseKind::Given, "Goes IN <<State as s>>");
  CHECK(std::get<Literal>(u.items[0]).word == "goes");
  CHECK(std::get<Literal>(u.items[1]).word == "in");
}

TEST_CASE("kb errors") {
  using K = KbError::Kind;
  auto e = kb_error(R"(metareq A -> FA:
  given: "<<Block as b>> in <<State as s>>"
  then: "goes in <<State as t>>"
fragment FA:
  owner: b  source: s  target: context9
)");
  CHECK(e.kind() == K::UntypedRole);
  CHECK(e.line() == 4);

  CHECK(kb_error(std::string(kSmall) + "metareq A -> FA:\n  given: \"<<Block as b>> in <<State as s>>\"\n"
                                        "  then: \"goes in <<State as t>>\"\n")
            .kind() == K::DuplicateId);
  CHECK(kb_error(std::string(kSmall) + "fragment FA:\n  owner: b source: s target: t\n").kind() == K::DuplicateId);
  CHECK(kb_error(R"(metareq A -> Nope:
  given: "<<Block as b>> in <<State as s>>"
  then: "goes in <<State as t>>"
)").kind() == K::UnknownFragment);
  CHECK(kb_error(R"(metareq A -> FA:
  given: "<<Block as b>> in <<State as b>>"
  then: "goes in <<State as t>>"
fragment FA:
  owner: b  source: t  target: t
)").kind() == K::DuplicateRole);
  CHECK(kb_error(R"(metareq A -> FA:
  given: "<<Block as b>> in <<Signal as s>>"
  then: "goes in <<State as t>>"
fragment FA:
  owner: b  source: s  target: t
)").kind() == K::RoleTypeMismatch);
  CHECK(kb_error(R"(metareq A -> FA:
  given: "no slots here"
)").kind() == K::InvalidTemplate);

  auto syntax = kb_error(R"(metareq A -> FA:
  given: "<<Block as b> in"
)");
  CHECK(syntax.kind() == K::SyntaxError);
  CHECK(syntax.line() == 2);
  CHECK(syntax.column() == 11);

  CHECK(kb_error("given: \"<<Block as b>>\"\n").kind() == K::SyntaxError);
  CHECK(kb_error("metareq A FA:\n").kind() == K::SyntaxError);
  CHECK(kb_error("metareq A -> FA:\n  given: \"<<Thing as b>>\"\n").kind() == K::SyntaxError);
  CHECK(kb_error("metareq A -> FA:\n  when: \"<<Block as b>> (a||b)? x\"\n").kind() == K::SyntaxError);
  CHECK(kb_error(std::string(kSmall) + "  colour: b\n").kind() == K::SyntaxError);
}

TEST_CASE("shadowed metareqs") {
  KnowledgeBase kb = parse_kb(R"(metareq Wide -> F:
  given: "<<Block as b>> (in|at)? <<State as s>>"
  then: "goes in <<State as t>>"
metareq Narrow -> F:
  given: "<<Block as b>> in <<State as s>>"
  then: "goes in <<State as t>>"
metareq Other -> F:
  given: "<<Block as b>> at <<State as s>>"
  when: "<<Block as c>> receives <<Signal as e>>"
  then: "goes in <<State as t>>"
fragment F:
  owner: b  source: s  target: t
)");
  auto shadowed = find_shadowed(kb);
  REQUIRE(shadowed.size() == 1);
  CHECK(shadowed[0].shadowing == "Wide");
  CHECK(shadowed[0].shadowed == "Narrow");
}
