#include "doctest.h"
#include "fixtures.hpp"
#include "oracle.hpp"

#include "modcomplete/model.hpp"

using namespace modcomplete;
using namespace modcomplete::testing;

namespace {

Transition railway_transition(std::string req = "REQ-001") {
  Transition t;
  t.source = "Running";
  t.target = "Braking";
  t.trigger = "EmergencyStop";
  t.effects = {{"Activate", "Brake"}};
  t.provenance = {std::move(req)};
  return t;
}

template <typename E>
E expect_throw(const std::string& doc) {
  try {
    load_model(doc);
  } catch (const E& e) {
    return e;
  }
  FAIL("expected an exception for: " << doc);
  throw std::logic_error("unreachable");
}

std::vector<std::string> words(std::initializer_list<const char*> ws) { return {ws.begin(), ws.end()}; }

}  // namespace

TEST_CASE("railway model loads") {
  SystemModel m = railway_model();
  CHECK(m.blocks.size() == 3);
  CHECK(m.signals.size() == 2);
  std::size_t machines = 0;
  for (const auto& b : m.blocks) machines += b.state_machine ? 1 : 0;
  CHECK(machines == 1);
  CHECK(m.transition_count() == 0);
  REQUIRE(m.find_block("Train"));
  CHECK(m.find_block("Train")->parts == std::vector<std::string>{"Brake", "BrakingSupervision"});
  CHECK(m.find_block("Train")->state_machine->initial == "Running");
}

TEST_CASE("empty model") {
  SystemModel m = load_model(R"({"version": "1", "name": "Empty", "blocks": [], "signals": []})");
  CHECK(m.blocks.empty());
  CHECK(m.signals.empty());
  CHECK(save_model(m) == "{\n  \"blocks\": [],\n  \"name\": \"Empty\",\n  \"signals\": [],\n  \"version\": \"1\"\n}\n");
}

TEST_CASE("transition naming a missing state is rejected at that transition") {
  auto e = expect_throw<ValidationError>(R"({"version": "1", "name": "X", "signals": [],
    "blocks": [{"name": "A", "state_machine": {"states": ["Running"],
      "transitions": [{"source": "Running", "target": "Stopped"}]}}]})");
  CHECK(e.path().find("transitions[") != std::string::npos);
  CHECK(e.path().find(".target") != std::string::npos);
  CHECK(std::string(e.what()).find("Stopped") != std::string::npos);
}

TEST_CASE("schema errors") {
  expect_throw<SchemaError>("not json");
  expect_throw<SchemaError>(R"({"version": "1", "name": "X", "blocks": [], "signals": [], "extra": 1})");
  expect_throw<SchemaError>(R"({"version": "1", "name": "X", "blocks": [{"parts": []}], "signals": []})");
  expect_throw<SchemaError>(R"([])");
  CHECK(load_model(R"({"version": "1", "blocks": [], "signals": []})").name.empty());
  expect_throw<SchemaError>(R"({"version": "1", "name": "X", "blocks": {}, "signals": []})");
  auto e = expect_throw<SchemaError>(R"({"version": "1", "name": "X", "signals": [], "blocks": [{"name": 3}]})");
  CHECK(e.path().find("blocks[0]") != std::string::npos);
}

TEST_CASE("validation errors") {
  auto doc = [](const std::string& signals, const std::string& blocks) {
    return R"({"version": "1", "name": "X", "signals": [)" + signals + R"(], "blocks": [)" + blocks + "]}";
  };
  expect_throw<ValidationError>(R"({"version": "2", "name": "X", "blocks": [], "signals": []})");
  expect_throw<ValidationError>(doc(R"({"name": "Stop"}, {"name": "STOP"})", ""));
  expect_throw<ValidationError>(doc("", R"({"name": "Brake"}, {"name": "brake"})"));
  expect_throw<ValidationError>(doc("", R"({"name": "Has Space"})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "parts": ["Ghost"]})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "receivable_signals": ["Ghost"]})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "parts": ["B"]}, {"name": "B", "parts": ["A"]})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "state_machine": {"states": ["S", "S"]}})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "state_machine": {"states": ["S"], "initial": "T"}})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "state_machine": {"states": ["S"],
      "transitions": [{"source": "S", "target": "S", "trigger": "Ghost"}]}})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "state_machine": {"states": ["S"],
      "transitions": [{"source": "S", "target": "S"}, {"source": "S", "target": "S"}]}})"));
  expect_throw<ValidationError>(doc("", R"({"name": "A", "state_machine": {"states": ["S"],
      "transitions": [{"id": "0000000000000000", "source": "S", "target": "S"}]}})"));
}

TEST_CASE("save is canonical and byte-stable") {
  SystemModel m = railway_model();
  std::string a = save_model(m);
  CHECK(a == save_model(load_model(a)));
  CHECK(load_model(a) == m);
  CHECK(a.find("\"Brake\"") < a.find("\"BrakingSupervision\""));
}

TEST_CASE("transition ids are stable content hashes") {
  Transition t = railway_transition();
  std::string id = transition_id("Train", t);
  CHECK(id.size() == 16);
  CHECK(id == transition_id("Train", t));
  Transition u = t;
  u.provenance = {"OTHER"};
  u.guard = "x > 1";
  CHECK(transition_id("Train", u) == id);
  u.target = "Running";
  CHECK(transition_id("Train", u) != id);
  CHECK(transition_id("Brake", t) != id);
}

TEST_CASE("add_transition: added, duplicate, conflict") {
  SystemModel m = railway_model();
  auto r1 = add_transition(m, "Train", railway_transition());
  CHECK(r1.outcome == MergeOutcome::Added);
  CHECK(m.transition_count() == 0);  // value semantics
  CHECK(r1.model.transition_count() == 1);
  const auto& added = r1.model.find_block("Train")->state_machine->transitions.front();
  CHECK(added.id == r1.transition_id);
  validate_model(r1.model);

  auto r2 = add_transition(r1.model, "Train", railway_transition("REQ-002"));
  CHECK(r2.outcome == MergeOutcome::Duplicate);
  CHECK(r2.transition_id == r1.transition_id);
  CHECK(r2.model.transition_count() == 1);
  CHECK(r2.model.find_block("Train")->state_machine->transitions.front().provenance ==
        std::vector<std::string>{"REQ-001", "REQ-002"});

  Transition loop;
  loop.source = "Running";
  loop.target = "Running";
  loop.trigger = "EmergencyStop";
  loop.provenance = {"REQ-003"};
  auto r3 = add_transition(r2.model, "Train", loop);
  CHECK(r3.outcome == MergeOutcome::Conflict);
  CHECK(r3.transition_id == r1.transition_id);
  CHECK(r3.model == r2.model);

  // the brute-force pair scan agrees
  auto keys = oracle::conflicting_keys(r2.model, {{"Train", loop}});
  CHECK(keys.size() == 1);
  CHECK(keys.count({"Train", "Running", std::optional<std::string>("EmergencyStop")}));
  CHECK(oracle::conflicting_keys(r2.model, {}).empty());
}

TEST_CASE("add_transition is idempotent up to provenance union") {
  SystemModel m = railway_model();
  auto once = add_transition(m, "Train", railway_transition()).model;
  auto twice = add_transition(once, "Train", railway_transition()).model;
  CHECK(once == twice);
}

TEST_CASE("add_transition errors") {
  SystemModel m = railway_model();
  auto kind_of = [&](const std::string& owner, Transition t) {
    try {
      add_transition(m, owner, t);
    } catch (const MergeError& e) {
      return e.kind();
    }
    FAIL("expected MergeError");
    return MergeError::Kind::UnknownOwner;
  };
  CHECK(kind_of("Brake", railway_transition()) == MergeError::Kind::UnknownOwner);
  CHECK(kind_of("Nowhere", railway_transition()) == MergeError::Kind::UnknownOwner);
  Transition t = railway_transition();
  t.target = "Stopped";
  CHECK(kind_of("Train", t) == MergeError::Kind::UnknownState);
  t = railway_transition();
  t.trigger = "Halt";
  CHECK(kind_of("Train", t) == MergeError::Kind::UnknownSignal);
  t = railway_transition();
  t.effects = {{"Activate", "Wheel"}};
  CHECK(kind_of("Train", t) == MergeError::Kind::UnknownBlock);
}

TEST_CASE("lookup_elements") {
  SystemModel m = railway_model();
  CHECK(lookup_elements(m, words({"Emergency", "Stop", "Message"}), Metaclass::Signal) ==
        std::vector<std::string>{"EmergencyStop"});
  CHECK(lookup_elements(m, words({"running"}), Metaclass::State, "Train") == std::vector<std::string>{"Running"});
  CHECK(lookup_elements(m, words({"running"}), Metaclass::State) == std::vector<std::string>{"Running"});
  CHECK(lookup_elements(m, words({"running"}), Metaclass::State, "Brake").empty());
  CHECK(lookup_elements(m, words({"Spaceship"}), Metaclass::Block).empty());
  CHECK(lookup_elements(m, words({"the", "Braking", "Supervision"}), Metaclass::Block) ==
        std::vector<std::string>{"BrakingSupervision"});
  CHECK(lookup_elements(m, words({"Emergency", "Brake"}), Metaclass::Block) == std::vector<std::string>{"Brake"});
  CHECK(lookup_elements(m, words({"activates"}), Metaclass::Signal) == std::vector<std::string>{"Activate"});
  CHECK(lookup_elements(m, words({"Braking"}), Metaclass::Signal).empty());
}

TEST_CASE("lookup_elements is sorted and unscoped state search spans machines") {
  SystemModel m = load_model(R"({"version": "1", "name": "X", "signals": [{"name": "Go"}, {"name": "Goes"}],
    "blocks": [{"name": "B", "state_machine": {"states": ["Idle"]}},
               {"name": "A", "state_machine": {"states": ["Idle"]}}]})");
  CHECK(lookup_elements(m, words({"idle"}), Metaclass::State) == std::vector<std::string>{"Idle"});
  CHECK(lookup_elements(m, words({"goes"}), Metaclass::Signal) == std::vector<std::string>{"Go", "Goes"});
}

TEST_CASE("a span of articles only is looked up literally") {
  SystemModel m = load_model(R"({"version": "1", "name": "X", "signals": [],
    "blocks": [{"name": "A", "state_machine": {"states": ["The"]}}, {"name": "Train"}]})");
  CHECK(lookup_elements(m, words({"A"}), Metaclass::Block) == std::vector<std::string>{"A"});
  CHECK(lookup_elements(m, words({"the"}), Metaclass::State, "A") == std::vector<std::string>{"The"});
  CHECK(lookup_elements(m, words({"a", "Train"}), Metaclass::Block) == std::vector<std::string>{"Train"});
  CHECK(lookup_elements(m, words({"an"}), Metaclass::Block).empty());
}
