#include <doctest.h>

#include "relthue/errors.hpp"
#include "relthue/pipeline.hpp"

#include <cstdio>
#include <filesystem>

using namespace relthue;

namespace {

const char* kMinimal = R"(
version: 1
base:
  polynomial: [1, -8, 15, -7]
  units: [[1, -1, 0], [2, -1, 0]]
quartic:
  convention: a3-a0
  coefficients:
    a0: [0, 1, 0]
    a3: [1, 0, 0]
  d: 1
  i0: 1
absolute:
  polynomial: [1, 0, 0, 0, 8, 0, 0, 0, 15, 0, 0, 0, 7]
  base_image: [0, 0, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0]
  generator_image: [0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
  discriminant: 2^24 * 7^3 * 19^8
)";

}  // namespace

TEST_CASE("field spec parsing") {
  const FieldSpec s = parse_field_spec(kMinimal);
  CHECK(s.base_polynomial == IntPoly{-7, 15, -8, 1});
  CHECK(s.base_units.size() == 2);
  // a3 of x^4 + a3 x^3 + ... + a0 is a1 in the other naming.
  CHECK(s.quartic[0] == Coordinates{1, 0, 0});
  CHECK(s.quartic[3] == Coordinates{0, 1, 0});
  CHECK(s.quartic[1] == Coordinates{0, 0, 0});
  CHECK(s.flags.size() == 1);
  REQUIRE(s.absolute);
  CHECK(s.absolute->discriminant == Integer("97733358616846532608"));
  CHECK(s.absolute->threshold == Integer("1000000000000000"));
}

TEST_CASE("field spec errors") {
  auto kind = [](const std::string& text) {
    try {
      parse_field_spec(text);
    } catch (const Error& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  CHECK(kind("base: [") == static_cast<int>(ErrorKind::kParse));
  CHECK(kind("version: 1\n") == static_cast<int>(ErrorKind::kParse));
  CHECK(kind("base:\n  polynomial: [1, x]\nquartic: {coefficients: {}}\n") == static_cast<int>(ErrorKind::kParse));
  CHECK(kind("base:\n  polynomial: [1, 0, -2]\nquartic: {coefficients: {a1: [1]}}\n") ==
        static_cast<int>(ErrorKind::kInput));
}

TEST_CASE("example spec loads and verifies") {
  const FieldSpec s = load_field_spec(std::string(RELTHUE_DATA_DIR) + "/example-shanks.spec");
  std::vector<VerifyCheck> checks;
  auto p = build_problem(s, 120, &checks);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CHECK(c.passed);
  }
  CHECK(p->units);
  CHECK(absolute_theta(*p, {p->m->one(), p->m->zero(), p->m->zero()}) == p->k->generator());
}

TEST_CASE("broken unit data fails verification") {
  const FieldSpec s = load_field_spec(std::string(RELTHUE_TEST_DATA_DIR) + "/broken-units.spec");
  Pipeline p(s, {}, "verify");
  try {
    p.verify();
    FAIL("verification passed");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kVerification);
  }
}

TEST_CASE("checkpoint round trip") {
  Checkpoint ck;
  ck.put("a", {{1, -2, 3}, {}, {std::numeric_limits<std::int64_t>::min()}});
  ck.put("b/c", {{double_bits(0.1)}});
  const std::string bytes = ck.serialize();
  CHECK(bytes.substr(0, 4) == "RTCK");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version, little endian
  const Checkpoint back = Checkpoint::deserialize(bytes);
  CHECK(back.records() == ck.records());
  CHECK(bits_double(back.get("b/c")[0][0]) == 0.1);
  CHECK_THROWS_AS(Checkpoint::deserialize(bytes.substr(0, bytes.size() - 3)), Error);
  try {
    back.get("missing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMissingCheckpoint);
  }
  const auto path = (std::filesystem::temp_directory_path() / "relthue-test.ck").string();
  ck.save(path);
  CHECK(Checkpoint::load(path).records() == ck.records());
  std::remove(path.c_str());
  try {
    Checkpoint::load(path);
    FAIL("missing file loaded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kMissingCheckpoint);
  }
}

TEST_CASE("schedule records survive the checkpoint") {
  ScheduleResult s;
  s.e_r = 12;
  s.log10_initial = 97.123456789;
  s.residual_triples = 4;
  StepCounts st;
  st.log10_big = 20;
  st.log10_small = 3.5;
  st.case1 = {1, 2, 3};
  st.case2 = {4};
  st.case1_total = 6;
  st.case2_total = 4;
  st.nodes = 99;
  s.steps = {st};
  ExpVec v(3);
  v << 1, -2, 3;
  s.candidate_set = {v};
  s.residual_set = {v, v};
  Checkpoint ck;
  store_schedule(ck, "schedule/0/", s);
  const ScheduleResult back = load_schedule(Checkpoint::deserialize(ck.serialize()), "schedule/0/");
  CHECK(back.e_r == 12);
  CHECK(back.log10_initial == s.log10_initial);
  CHECK(back.steps[0].case1 == st.case1);
  CHECK(back.steps[0].case2 == st.case2);
  CHECK(back.steps[0].log10_small == 3.5);
  CHECK(back.candidate_set[0] == v);
  CHECK(back.residual_set.size() == 2);
  CHECK(schedule_json(back)["steps"] == schedule_json(s)["steps"]);
}

TEST_CASE("report layout") {
  Report r("test");
  r.add_section("b", {{"x", 1}});
  r.add_section("a", {{"v", Json::array({1, 2, 3})}});
  r.add_flag("f");
  r.add_flag("f");
  const Json doc = r.document();
  CHECK(doc["schema"] == kReportSchema);
  CHECK(doc["sections"].begin().key() == "b");
  CHECK(doc["flags"].size() == 1);
  CHECK(r.dump().find("[1, 2, 3]") != std::string::npos);
  CHECK(Json::parse(r.dump()) == doc);
  CHECK(to_json(Integer("123456789012345678901234567890")) == "123456789012345678901234567890");
  CHECK(to_json(Integer(-5)) == -5);
}
