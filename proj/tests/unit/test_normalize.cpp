#include "doctest.h"
#include "modcomplete/normalize.hpp"

#include <string>
#include <vector>

using namespace modcomplete;

namespace {
std::string np(std::vector<std::string> words) { return normalize_phrase(words); }
std::set<std::string> sp(std::vector<std::string> words) { return normalize_signal_phrase(words); }
}  // namespace

TEST_CASE("phrase normal form") {
  CHECK(np({"Braking", "Supervision"}) == "brakingsupervision");
  CHECK(np({"Braking", "Supervision"}) == normalize_name("BrakingSupervision"));
  CHECK(np({"EmergencyStop()"}) == "emergencystop");
  CHECK(np({"the", "Train"}) == "train");
  CHECK(np({"The", "A", "train"}) == "train");
  CHECK(np({}) == "");
  CHECK(normalize_name("Brake-Monitor_2") == "brakemonitor2");
}

TEST_CASE("utf-8 bytes survive") {
  CHECK(normalize_name("\xC3\x9C" "berwachung") == "\xC3\x9C" "berwachung");
  CHECK(np({"\xC3\x9C" "ber", "Wachung"}) == "\xC3\x9C" "berwachung");
}

TEST_CASE("articles") {
  CHECK(is_article("a"));
  CHECK(is_article("an"));
  CHECK(is_article("the"));
  CHECK_FALSE(is_article("then"));
}

TEST_CASE("signal variants") {
  CHECK(sp({"Emergency", "Stop", "Message"}).count("emergencystop"));
  CHECK(sp({"Emergency", "Stop", "Message"}).count("emergencystopmessage"));
  CHECK(sp({"activates"}).count("activate"));
  CHECK(sp({"Activate"}).count("activate"));
  CHECK(sp({"stopping"}).count("stopp"));
  CHECK(sp({"carries"}).count("carry"));
  CHECK(sp({"the", "Halt", "command"}).count("halt"));
}

TEST_CASE("stemming never empties a word") {
  CHECK(stem_variants("s").empty());
  CHECK(stem_variants("es") == std::set<std::string>{"e"});
  CHECK(stem_variants("ing").empty());
  auto v = stem_variants("passes");
  CHECK(v.count("pass"));
  CHECK(v.count("passe"));
}
