#include <doctest.h>

#include "kgaudit/config.hpp"

using namespace kgaudit;

namespace {

const char* kSample =
    "# run settings\n"
    "[train]\n"
    "epochs = 100\n"
    "learning_rate = 0.02\n"
    "model = transe\n"
    "\n"
    "[split]\n"
    "train = 0.8  # inline comments stay out of the value\n"
    "shuffle = true\n";

}  // namespace

TEST_CASE("parse_string reads sections, keys and comments") {
    ConfigMap c = ConfigMap::parse_string(kSample);
    CHECK(c.get_int("train.epochs") == 100);
    CHECK(c.get_double("train.learning_rate") == doctest::Approx(0.02));
    CHECK(c.get_string("train.model") == "transe");
    CHECK(c.get_double("split.train") == doctest::Approx(0.8));
    CHECK(c.get_bool("split.shuffle", false));
    CHECK_FALSE(c.has("split.nope"));
}

TEST_CASE("set() overrides parsed values") {
    ConfigMap c = ConfigMap::parse_string(kSample);
    c.set("train.epochs", "7");
    CHECK(c.get_int("train.epochs") == 7);
    c.set("train.extra", "x");
    CHECK(c.get_string("train.extra") == "x");
}

TEST_CASE("missing keys and malformed numbers are errors") {
    ConfigMap c = ConfigMap::parse_string(kSample);
    CHECK_THROWS_AS(c.get_string("train.missing"), ConfigError);
    CHECK(c.get_string("train.missing", "dflt") == "dflt");
    CHECK(c.get_int("train.missing", 3) == 3);
    c.set("train.bad", "12abc");
    CHECK_THROWS_AS(c.get_int("train.bad"), ConfigError);
    CHECK_THROWS_AS(c.get_double("train.bad"), ConfigError);
}

TEST_CASE("validate_keys names the first unknown key") {
    ConfigMap c = ConfigMap::parse_string("[a]\nx = 1\ny = 2\n");
    c.validate_keys({"a.x", "a.y"});
    ConfigMap d = ConfigMap::parse_string("[a]\nx = 1\ntypo = 2\n");
    CHECK_THROWS_WITH_AS(d.validate_keys({"a.x"}), "unknown config key: a.typo", ConfigError);
}

TEST_CASE("malformed lines are rejected, bare keys before a section are kept as-is") {
    CHECK_THROWS_AS(ConfigMap::parse_string("keyless line\n"), ConfigError);
    CHECK_THROWS_AS(ConfigMap::parse_string("[s]\n = 1\n"), ConfigError);
    CHECK_THROWS_AS(ConfigMap::parse_string("[broken\nx = 1\n"), ConfigError);
    CHECK(ConfigMap::parse_string("x = 1\n").get_int("x") == 1);
    CHECK_THROWS_AS(ConfigMap::parse_file("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("hash changes with any value and is order independent") {
    ConfigMap a = ConfigMap::parse_string("[s]\nx = 1\ny = 2\n");
    ConfigMap b = ConfigMap::parse_string("[s]\ny = 2\nx = 1\n");
    CHECK(a.hash() == b.hash());
    b.set("s.x", "3");
    CHECK(a.hash() != b.hash());
}
