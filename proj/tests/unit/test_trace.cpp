#include "doctest.h"
#include "fixtures.hpp"

#include <algorithm>
#include <regex>

#include "modcomplete/generator.hpp"
#include "modcomplete/trace.hpp"

using namespace modcomplete;
using namespace modcomplete::testing;

namespace {

Completion railway() {
  return complete_model(railway_model(), parse_corpus(read_fixture("railway.feature")), default_kb());
}

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  std::regex re(pattern);
  return std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator());
}

}  // namespace

TEST_CASE("railway trace record") {
  Completion done = railway();
  REQUIRE(done.traces.size() == 1);
  const TraceRecord& r = done.traces[0];
  CHECK(r.requirement_id == "REQ-001");
  CHECK(r.metareq_id == "MR1");
  CHECK(r.outcome == "Added");
  CHECK(r.owner == "Train");
  CHECK(r.bindings.size() == 8);
  CHECK(r.generated == std::vector<std::string>{done.report.added[0].transition_id});
  CHECK(r.satisfies.size() == 7);

  auto link = std::find_if(r.satisfies.begin(), r.satisfies.end(),
                           [](const SatisfyLink& l) { return l.element == "BrakingSupervision"; });
  REQUIRE(link != r.satisfies.end());
  CHECK(link->roles == std::vector<std::string>{"context2", "context3"});
  CHECK(link->stereotype == "satisfy");

  for (const auto& l : r.satisfies) {
    CAPTURE(l.element);
    CHECK(l.scope.has_value() == (l.metaclass == Metaclass::State));
    if (l.scope) CHECK(*l.scope == "Train");
  }
  // every binding is covered by exactly one link
  std::size_t roles = 0;
  for (const auto& l : r.satisfies) roles += l.roles.size();
  CHECK(roles == r.bindings.size());
}

TEST_CASE("trace json") {
  CHECK(emit_trace_json({}) == "[]\n");
  TraceRecord a, b;
  a.requirement_id = "B";
  b.requirement_id = "A";
  std::string json = emit_trace_json({a, b});
  CHECK(json.find("\"A\"") < json.find("\"B\""));
  CHECK(emit_trace_json({a, b}) == emit_trace_json({b, a}));
  CHECK(json.back() == '\n');
}

TEST_CASE("requirement diagram") {
  Completion done = railway();
  auto diagram = emit_requirement_diagram(done.traces[0], done.model);
  REQUIRE(diagram);
  CHECK(diagram->rfind("@startuml", 0) == 0);
  CHECK(diagram->find("@enduml") != std::string::npos);
  CHECK(count_matches(*diagram, R"(as REQ <<requirement>>)") == 1);
  CHECK(count_matches(*diagram, R"(as E\d+ <<(block|state|signal)>>)") == 7);
  CHECK(count_matches(*diagram, R"(E\d+ \.\.> REQ : <<satisfy>>)") == 7);
  CHECK(count_matches(*diagram, R"(<<state>>)") == 2);
  CHECK(diagram_file_name("REQ-001") == "RD-REQ-001.puml");

  TraceRecord nothing = done.traces[0];
  nothing.generated.clear();
  CHECK_FALSE(emit_requirement_diagram(nothing, done.model).has_value());
}

TEST_CASE("duplicate record points at the existing transition") {
  Completion done = complete_model(railway_model(), parse_corpus(read_fixture("duplicate.feature")), default_kb());
  REQUIRE(done.traces.size() == 2);
  CHECK(done.traces[0].outcome == "Added");
  CHECK(done.traces[1].outcome == "Duplicate");
  CHECK(done.traces[1].generated == done.traces[0].generated);
  CHECK(done.traces[1].generated[0] == done.report.duplicates[0].transition_id);
}

TEST_CASE("no trace for unmatched requirements") {
  SystemModel m = load_model(read_fixture("railway_halt_model.json"));
  Completion done = complete_model(m, parse_corpus(read_fixture("mixed.feature")), default_kb());
  CHECK(done.traces.size() == 3);
  for (const auto& t : done.traces) {
    CHECK(t.requirement_id != "REQ-004");
    CHECK(t.requirement_id != "REQ-005");
  }
}
