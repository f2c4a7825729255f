#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>

#include <doctest.h>

#include "qcs/problem_gen.hpp"
#include "qcs/serialize.hpp"

using namespace qcs;

namespace {
std::uint64_t bits(double v) {
  std::uint64_t u;
  std::memcpy(&u, &v, sizeof u);
  return u;
}

GenSpec spec(QuantizerKind kind, int B) {
  GenSpec g;
  g.N = 50;
  g.K = 4;
  g.M = 20;
  g.quantizer_kind = kind;
  g.bit_depth = B;
  g.rng_seed = 3;
  return g;
}
}  // namespace

TEST_CASE("decimal strings round-trip doubles exactly") {
  for (double v : {0.1, -1.0 / 3.0, 5e-324, std::numeric_limits<double>::max(), -0.0, kInf, -kInf}) {
    CHECK(bits(parse_double(format_double(v))) == bits(v));
  }
  CHECK(std::isnan(parse_double(format_double(std::nan("")))));
  CHECK_THROWS_AS(parse_double("1.5x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
}

TEST_CASE("quantizer specs round-trip through JSON") {
  for (const QuantizerSpec& q : {make_uniform(4, 0.7312), make_saturated_equiprobable(3, 0.013), make_onebit()}) {
    const auto j = quantizer_to_json(q);
    const QuantizerSpec back = quantizer_from_json(nlohmann::json::parse(j.dump()));
    REQUIRE(back.thresholds.size() == q.thresholds.size());
    for (std::size_t i = 0; i < q.thresholds.size(); ++i) CHECK(bits(back.thresholds[i]) == bits(q.thresholds[i]));
    for (std::size_t i = 0; i < q.codes.size(); ++i) CHECK(bits(back.codes[i]) == bits(q.codes[i]));
    CHECK(back.kind == q.kind);
  }
  auto bad = quantizer_to_json(make_uniform(2, 1.0));
  bad["codes"][0] = "7";
  CHECK_THROWS_AS(quantizer_from_json(bad), std::invalid_argument);
}

TEST_CASE("problem container round-trips") {
  for (auto [kind, B] : {std::pair{QuantizerKind::uniform_unsaturated, 4}, std::pair{QuantizerKind::saturated, 3},
                         std::pair{QuantizerKind::one_bit, 1}}) {
    const Problem p = gen_problem(spec(kind, B));
    const auto bytes = serialize_problem(p);
    CHECK(std::memcmp(bytes.data(), "QCSPROB1", 8) == 0);
    const Problem q = deserialize_problem(bytes);
    CHECK(q.A == p.A);
    CHECK(q.z == p.z);
    CHECK(q.bins == p.bins);
    CHECK(q.signs == p.signs);
    CHECK(q.sigma2 == p.sigma2);
    CHECK(q.quantizer == p.quantizer);
    CHECK(*q.truth == *p.truth);
    CHECK(*q.measurements == *p.measurements);
    CHECK(serialize_problem(q) == bytes);
    CHECK(problem_hash(q) == problem_hash(p));
  }
}

TEST_CASE("the row-major payload follows the header") {
  const Problem p = gen_problem(spec(QuantizerKind::uniform_unsaturated, 2));
  const auto bytes = serialize_problem(p);
  // magic + 2 u32 + 3 u64 + thresholds(5) + codes(4) + sigma2
  const std::size_t offset = 8 + 8 + 24 + (5 + 4 + 1) * 8;
  double a01;
  std::memcpy(&a01, bytes.data() + offset + sizeof(double), sizeof a01);
  CHECK(a01 == p.A(0, 1));
}

TEST_CASE("corrupt containers are rejected") {
  const Problem p = gen_problem(spec(QuantizerKind::uniform_unsaturated, 2));
  auto bytes = serialize_problem(p);
  auto truncated = bytes;
  truncated.resize(bytes.size() - 3);
  CHECK_THROWS_AS(deserialize_problem(truncated), std::runtime_error);
  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize_problem(bad_magic), std::runtime_error);
  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize_problem(trailing), std::runtime_error);
  CHECK_THROWS(deserialize_problem({}));
}

TEST_CASE("save and load through a file") {
  const Problem p = gen_problem(spec(QuantizerKind::saturated, 3));
  const auto path = std::filesystem::temp_directory_path() / "qcs_serialize_test.qcsp";
  save_problem(p, path);
  const Problem q = load_problem(path);
  CHECK(serialize_problem(q) == serialize_problem(p));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_problem(path), std::runtime_error);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64({}) == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64({'a'}) == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64({'f', 'o', 'o', 'b', 'a', 'r'}) == 0x85944171f73967e8ULL);
}
