#include <cstdio>
#include <fstream>

#include "doctest.h"
#include "koehler/io.hpp"
#include "koehler/report.hpp"

using namespace koehler;

TEST_CASE("check block status follows thresholds") {
  CheckBlock block;
  block.name = "demo";
  block.record("small", 1e-9, 1e-8);
  CHECK(block.status == "pass");
  block.record("large", 2e-8, 1e-8);
  CHECK(block.status == "fail");
}

TEST_CASE("report serialization is canonical") {
  Report r;
  r.analysis = "demo";
  r.input_digest = "00";
  CheckBlock b;
  b.name = "zeta";
  r.blocks.push_back(b);
  b.name = "alpha";
  r.blocks.push_back(b);
  const auto j = r.to_json();
  CHECK(j["schema"] == 1);
  CHECK(j["blocks"][0]["name"] == "alpha");
  CHECK(j["blocks"][1]["name"] == "zeta");
  CHECK(r.all_pass());
  r.blocks[0].record("x", 1.0, 0.5);
  CHECK_FALSE(r.all_pass());
  REQUIRE(r.first_failure() != nullptr);
  CHECK(r.first_failure()->name == "zeta");
}

TEST_CASE("fnv digest is stable") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("koehler") != fnv1a_hex("kohler"));
  CHECK(fnv1a_hex("abc").size() == 16);
}

TEST_CASE("matrix json round trip") {
  CMatrix m(2, 2);
  m << Complex(1.0, -2.0), Complex(0.0, 0.5), Complex(3.0, 0.0),
      Complex(-1.0, 1.0);
  const auto j = matrix_to_json(m);
  const CMatrix back = matrix_from_json(j);
  CHECK((m - back).norm() == 0.0);
}

TEST_CASE("matrix json accepts plain reals") {
  const auto j = nlohmann::json::parse(
      R"({"dim": 2, "entries": [[1.0, 0.0], [0.5, {"re": 0.0, "im": 1.0}]]})");
  const CMatrix m = matrix_from_json(j);
  CHECK(m(0, 0) == Complex(1.0, 0.0));
  CHECK(m(1, 1) == Complex(0.0, 1.0));
}

TEST_CASE("matrix json validation") {
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[]")), InvalidInput);
  CHECK_THROWS_AS(
      matrix_from_json(nlohmann::json::parse(
          R"({"dim": 2, "entries": [[1, 0]]})")),
      InvalidInput);
  CHECK_THROWS_AS(
      matrix_from_json(nlohmann::json::parse(
          R"({"dim": 1, "entries": [["x"]]})")),
      InvalidInput);
}

TEST_CASE("csv parsing") {
  const CMatrix m = matrix_from_csv("1.0, 0.5\n-0.25, 2\n");
  CHECK(m(0, 1) == Complex(0.5, 0.0));
  CHECK(m(1, 0) == Complex(-0.25, 0.0));
  CHECK_THROWS_AS(matrix_from_csv("1, 2\n3\n"), InvalidInput);
  CHECK_THROWS_AS(matrix_from_csv("a, b\nc, d\n"), InvalidInput);
  CHECK_THROWS_AS(matrix_from_csv(""), InvalidInput);
}

TEST_CASE("file loading dispatches on extension") {
  {
    std::ofstream out("/tmp/koehler_io_test.csv");
    out << "0.0, 1.0\n1.0, 0.0\n";
  }
  const CMatrix m = load_matrix_file("/tmp/koehler_io_test.csv");
  CHECK(m(0, 1) == Complex(1.0, 0.0));
  {
    std::ofstream out("/tmp/koehler_io_test.json");
    out << R"({"dim": 1, "entries": [[2.5]]})";
  }
  const CMatrix m2 = load_matrix_file("/tmp/koehler_io_test.json");
  CHECK(m2(0, 0) == Complex(2.5, 0.0));
  CHECK_THROWS_AS(load_matrix_file("/tmp/no_such_koehler_file.json"),
                  InvalidInput);
  std::remove("/tmp/koehler_io_test.csv");
  std::remove("/tmp/koehler_io_test.json");
}

TEST_CASE("semigroup json inputs") {
  const auto transformations = nlohmann::json::parse(
      R"({"transformations": [[1, 0], [0, 0]]})");
  auto s = semigroup_from_json(transformations);
  CHECK(s.size == 4);

  const auto cayley = nlohmann::json::parse(
      R"({"size": 2, "cayley": [[0, 0], [1, 1]]})");
  auto lz = semigroup_from_json(cayley);
  CHECK(lz.size == 2);
  const auto back = cayley_to_json(lz);
  CHECK(back["cayley"] == cayley["cayley"]);

  const auto boolmat = nlohmann::json::parse(
      R"({"boolean_matrices": [[[0, 1], [1, 0]]]})");
  auto bm = semigroup_from_json(boolmat);
  CHECK(bm.size == 2);  // swap and identity

  const auto bad = nlohmann::json::parse(R"({"foo": 1})");
  CHECK_THROWS_AS(semigroup_from_json(bad), InvalidInput);
}

TEST_CASE("integer set parsing") {
  const auto j = nlohmann::json::parse("[3, 1, 2, 3]");
  const auto s = int_set_from_json(j);
  CHECK(s == std::set<long long>{1, 2, 3});
  CHECK_THROWS_AS(int_set_from_json(nlohmann::json::parse("[1.5]")),
                  InvalidInput);
  CHECK_THROWS_AS(int_set_from_json(nlohmann::json::parse("{}")),
                  InvalidInput);
}
