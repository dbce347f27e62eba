#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>

#include "ctmdp/bench.hpp"
#include "ctmdp/error.hpp"
#include "ctmdp/instance_io.hpp"
#include "random_models.hpp"

using namespace ctmdp;

namespace {

CtmdpModel round_trip(const CtmdpModel& m) {
  std::stringstream buf;
  write_instance(buf, m);
  return read_instance(buf);
}

std::string machine_repair_text() {
  std::ostringstream out;
  write_instance(out, machine_repair_instance());
  return out.str();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

void check_rejects(const std::string& text, const std::string& message) {
  std::istringstream in(text);
  CHECK_THROWS_WITH_AS(read_instance(in), doctest::Contains(message.c_str()), InvalidInput);
}

}  // namespace

TEST_CASE("bundled instances round-trip exactly") {
  CHECK(round_trip(machine_repair_instance()) == machine_repair_instance());
  CHECK(round_trip(single_absorbing_instance()) == single_absorbing_instance());
  const auto hard = hard_instance(make_hard_params(9, 2, 36, 7.0, 1.0, 5));
  CHECK(round_trip(hard) == hard);
}

TEST_CASE("random instances round-trip exactly") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testing::random_model(gen);
    CHECK(round_trip(m) == m);
  }
}

TEST_CASE("machine repair text layout") {
  CHECK(machine_repair_text() ==
        "[meta]\nS 2\nA 2\nH 1\nx0 0\nlambda_min 2\nlambda_max 7\n"
        "[reward]\n0.85 1\n0.4 0\n[rate]\n3 5\n2 7\n[transition]\n0 1\n0 1\n1 0\n1 0\n");
}

TEST_CASE("comments and blank lines are ignored") {
  const std::string text = "# machine repair\n\n" + replace(machine_repair_text(), "[rate]\n", "[rate]   # per unit time\n\n");
  std::istringstream in(text);
  CHECK(read_instance(in) == machine_repair_instance());
}

TEST_CASE("malformed files name the offending field") {
  const auto text = machine_repair_text();
  check_rejects(replace(text, "S 2\n", ""), "missing meta field 'S'");
  check_rejects(replace(text, "H 1\n", "H one\n"), "bad number 'one' in meta.H");
  check_rejects(replace(text, "0.4 0\n", "0.4\n"), "[reward] has 3 values, expected 4");
  check_rejects(replace(text, "[rate]\n3 5\n2 7\n", ""), "missing section [rate]");
  check_rejects(replace(text, "[transition]\n0 1\n", "[transition]\n0 0.9\n"), "transition row (0,0) sums to 0.9");
  check_rejects(replace(text, "x0 0\n", "x0 0\ncolour red\n"), "unknown meta field 'colour'");
  check_rejects(replace(text, "[reward]", "[rewards]"), "unknown section [rewards]");
  check_rejects("S 2\n" + text, "data before the first section");
  check_rejects(replace(text, "3 5\n", "3 -5\n"), "rate (0,1)");
}

TEST_CASE("instance names resolve to the built-ins") {
  CHECK(resolve_instance("machine-repair") == machine_repair_instance());
  CHECK(resolve_instance("single-absorbing") == single_absorbing_instance());
  const auto hard = resolve_instance("hard:9:2:3:0.1");
  CHECK(hard == hard_instance(make_hard_params(9, 2, 0, 7.0, 1.0, 3, 0.1)));
  CHECK(resolve_instance("hard:9:2:3:0.1:5:2").horizon == 2.0);
  CHECK_THROWS_AS(resolve_instance("hard:9:2"), InvalidInput);
  CHECK_THROWS_AS(resolve_instance("hard:6:2:0:0.1"), InvalidInput);
  CHECK_THROWS_WITH_AS(resolve_instance("/nonexistent/instance.txt"), doctest::Contains("cannot open"), InvalidInput);
}

TEST_CASE("instance files round-trip through the filesystem") {
  const auto path = std::filesystem::temp_directory_path() / "ctmdp_instance_io_test.txt";
  save_instance_file(path.string(), machine_repair_instance());
  CHECK(resolve_instance(path.string()) == machine_repair_instance());
  std::filesystem::remove(path);
}
