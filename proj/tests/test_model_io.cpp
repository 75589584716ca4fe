// Apache License, Version 2.0, refer to LICENSE
#include "bellaudit/model_io.hpp"

#include <doctest.h>

#include <cmath>
#include <string>
#include <variant>

#include "bellaudit/errors.hpp"
#include "bellaudit/random_models.hpp"
#include "test_util.hpp"

using namespace bellaudit;
using test_util::kPi;
using test_util::near;

namespace {

ParseError capture(const std::string& text) {
  try {
    parse_model(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  return ParseError(ParseError::Category::schema, "", "unreachable");
}

/// Minimal well-formed bell-model document used as a mutation base.
const char* kTinyModel = R"({
  "kind": "bell-model",
  "version": 1,
  "settings_a": ["a0"],
  "settings_b": ["b0"],
  "outcomes_a": ["0", "1"],
  "outcomes_b": ["0", "1"],
  "lambda": ["l0"],
  "prior": [[[1.0]]],
  "kernels": [[[[[0.5, 0.0], [0.0, 0.5]]]]]
})";

}  // namespace

TEST_SUITE_BEGIN("model_io");

TEST_CASE("documents round-trip bit-exactly") {
  std::mt19937_64 rng(kDefaultSeed);
  for (int trial = 0; trial < 5; ++trial) {
    const BellModel m = random_model_any(rng);
    const ParsedModel back = parse_model(serialize(m));
    REQUIRE(std::holds_alternative<BellModel>(back));
    CHECK(std::get<BellModel>(back) == m);

    const Phenomenology ph = predict(m);
    const ParsedModel back_ph = parse_model(serialize(ph));
    REQUIRE(std::holds_alternative<Phenomenology>(back_ph));
    CHECK(std::get<Phenomenology>(back_ph) == ph);

    const StatFamily f = random_family(rng);
    const ParsedModel back_f = parse_model(serialize(f));
    REQUIRE(std::holds_alternative<StatFamily>(back_f));
    CHECK(std::get<StatFamily>(back_f) == f);

    const Statistic t = random_statistic(f, rng);
    const ParsedModel back_t = parse_model(serialize(t));
    REQUIRE(std::holds_alternative<Statistic>(back_t));
    CHECK(std::get<Statistic>(back_t) == t);
  }
}

TEST_CASE("tiny document parses to the expected model") {
  const ParsedModel parsed = parse_model(kTinyModel);
  REQUIRE(std::holds_alternative<BellModel>(parsed));
  const BellModel& m = std::get<BellModel>(parsed);
  CHECK(m.settings_a() == std::vector<std::string>{"a0"});
  CHECK(m.kernel(0, 0, 0).at({0, 0}) == 0.5);
  CHECK(m.prior(0, 0)[0] == 1.0);
}

TEST_CASE("angles shorthand builds the singlet model") {
  const std::string doc = R"({
    "kind": "bell-model",
    "version": 1,
    "angles": {"a": [0, "90deg"], "b": ["45deg", 2.356194490192345]}
  })";
  const ParsedModel parsed = parse_model(doc);
  REQUIRE(std::holds_alternative<BellModel>(parsed));
  const BellModel& m = std::get<BellModel>(parsed);
  const BellModel direct =
      build_singlet({0.0, kPi / 2}, {kPi / 4, 3 * kPi / 4});
  REQUIRE(m.settings_a() == direct.settings_a());
  for (Eigen::Index ia = 0; ia < 2; ++ia) {
    for (Eigen::Index ib = 0; ib < 2; ++ib) {
      for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(near(m.kernel(ia, ib, 0)[i], direct.kernel(ia, ib, 0)[i],
                   1e-12));
      }
    }
  }
}

TEST_CASE("angle text accepts radians and a deg suffix") {
  CHECK(parse_angle_text("0.5") == 0.5);
  CHECK(near(parse_angle_text("45deg"), kPi / 4, 1e-12));
  CHECK(near(parse_angle_text(" 90 deg "), kPi / 2, 1e-12));
  CHECK(near(parse_angle_text("-1.5"), -1.5, 0.0));
  CHECK_THROWS_AS(parse_angle_text("north"), ParseError);
  CHECK_THROWS_AS(parse_angle_text("1.5rad"), ParseError);
  CHECK_THROWS_AS(parse_angle_text(""), ParseError);
}

TEST_CASE("syntax failures name the document") {
  const ParseError e = capture("{not json");
  CHECK(e.category() == ParseError::Category::syntax);
  CHECK(e.path() == "document");
  CHECK(std::string(e.what()).find("document") != std::string::npos);
}

TEST_CASE("schema failures are path-qualified") {
  // Unknown top-level kind.
  CHECK(capture(R"({"kind": "sonnet", "version": 1})").category() ==
        ParseError::Category::schema);

  // Wrong version.
  const ParseError v =
      capture(R"({"kind": "bell-model", "version": 2, "angles": {"a": [0], "b": [0]}})");
  CHECK(v.category() == ParseError::Category::schema);
  CHECK(v.path() == "version");

  // Unknown key.
  std::string doc = kTinyModel;
  doc.insert(doc.rfind('}'), R"(, "extra": 1)");
  const ParseError unknown = capture(doc);
  CHECK(unknown.category() == ParseError::Category::schema);
  CHECK(std::string(unknown.what()).find("extra") != std::string::npos);

  // Repeated symbol inside an alphabet.
  std::string dup = kTinyModel;
  dup.replace(dup.find(R"(["0", "1"])"), 10, R"(["0", "0"])");
  const ParseError repeated = capture(dup);
  CHECK(repeated.category() == ParseError::Category::schema);
  CHECK(repeated.path() == "outcomes_a[1]");
}

TEST_CASE("normalization failures point at the offending table") {
  std::string doc = kTinyModel;
  doc.replace(doc.find("[0.5, 0.0]"), 10, "[0.4, 0.0]");
  const ParseError e = capture(doc);
  CHECK(e.category() == ParseError::Category::normalization);
  CHECK(e.path() == "kernels[0][0][0]");
  CHECK(std::string(e.what()).find("kernels[0][0][0]") != std::string::npos);

  std::string neg = kTinyModel;
  neg.replace(neg.find("[[[1.0]]]"), 9, "[[[-1.0]]]");
  const ParseError n = capture(neg);
  CHECK(n.category() == ParseError::Category::normalization);
  CHECK(n.path() == "prior[0][0]");
}

TEST_CASE("family and statistic documents validate their shapes") {
  const std::string fam = R"({
    "kind": "stat-family",
    "version": 1,
    "theta": ["t0", "t1"],
    "outcomes": ["x", "y"],
    "tables": [[0.5, 0.5], [0.9, 0.1]]
  })";
  REQUIRE(std::holds_alternative<StatFamily>(parse_model(fam)));

  std::string bad_row = fam;
  bad_row.replace(bad_row.find("[0.9, 0.1]"), 10, "[0.9, 0.3]");
  const ParseError e = capture(bad_row);
  CHECK(e.category() == ParseError::Category::normalization);
  CHECK(e.path() == "tables[1]");

  const std::string stat = R"({
    "kind": "statistic",
    "version": 1,
    "domain": ["x", "y", "z"],
    "map": ["t", "u", "t"]
  })";
  const ParsedModel parsed = parse_model(stat);
  REQUIRE(std::holds_alternative<Statistic>(parsed));
  CHECK(std::get<Statistic>(parsed).codomain() ==
        std::vector<std::string>{"t", "u"});

  // A declared codomain must equal the compacted image.
  std::string wrong = stat;
  wrong.insert(wrong.rfind('}'), R"(, "codomain": ["u", "t"])");
  CHECK(capture(wrong).category() == ParseError::Category::schema);
}

TEST_CASE("serialized text is stable") {
  // Serialization is deterministic, so equal models give equal text.
  std::mt19937_64 rng(5);
  const BellModel m = random_model_any(rng);
  CHECK(serialize(m) == serialize(m));
}

TEST_SUITE_END();
