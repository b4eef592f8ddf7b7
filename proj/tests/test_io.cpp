#include "doctest.h"

#include "diracgeom/frames.hpp"
#include "diracgeom/io.hpp"
#include "diracgeom/scenarios.hpp"

using namespace diracgeom;
using nlohmann::json;

TEST_CASE("operator JSON round trip is exact") {
  const Scenario s = make_scenario("random-band-limited:7", 4, 0);
  const json j = io::to_json(*s.op);
  CHECK(j["chart"]["n"] == 4);
  const FirstOrderOperator back = io::operator_from_json(json::parse(j.dump()));
  for (std::size_t i = 0; i < back.a0().size(); ++i) {
    CHECK(back.a0()[i] == s.op->a0()[i]);
    for (int a = 0; a < 3; ++a) CHECK(back.sigma().sigma()[i][a] == s.op->sigma().sigma()[i][a]);
  }
}

TEST_CASE("frame and symbol documents dispatch on their schema") {
  const FrameField f = frames::twisted(PeriodicChart(4), 1);
  const io::Document d = io::parse_document(io::to_json(f));
  REQUIRE(std::holds_alternative<FrameField>(d));
  CHECK((std::get<FrameField>(d).e[5] - f.e[5]).norm() == 0.0);
  const io::Document s = io::parse_document(io::to_json(symbol_from_frame(f)));
  CHECK(std::holds_alternative<PrincipalSymbolField>(s));
}

TEST_CASE("malformed documents are input errors") {
  json j = io::to_json(frames::constant(PeriodicChart(4)));
  json wrong_count = j;
  wrong_count["values"].erase(0);
  CHECK_THROWS_AS(io::frame_from_json(wrong_count), InputError);
  json wrong_type = j;
  wrong_type["values"][0][0] = "x";
  CHECK_THROWS_AS(io::frame_from_json(wrong_type), InputError);
  CHECK_THROWS_AS(io::parse_document(json{{"schema", "other"}}), InputError);
  CHECK_THROWS_AS(io::symbol_from_json(j), InputError);

  // non-Hermitian symbol values are rejected by the field constructor
  json sym = io::to_json(symbol_from_frame(frames::constant(PeriodicChart(4))));
  sym["values"][0][0][1] = {1.0, 1.0};
  CHECK_THROWS_AS(io::symbol_from_json(sym), InputError);
}

TEST_CASE("scenario parsing") {
  CHECK(make_scenario("twisted-torus:3", 4, 0).spin->shift()[2] == 0.5);
  CHECK(make_scenario("twisted-torus:2", 4, 0).spin->shift()[2] == 0.0);
  CHECK_THROWS_AS(make_scenario("twisted-torus:1.5", 4, 0), InputError);
  CHECK_THROWS_AS(make_scenario("dirac-plus-scalar:abc", 4, 0), InputError);
  CHECK_FALSE(make_scenario("random-band-limited", 4, 3).exact_spectrum(5.0).has_value());
  const auto shifted = make_scenario("dirac-plus-scalar:0.3", 4, 0).exact_spectrum(2.0);
  CHECK(shifted->multiplicity_of(0.3) == 2);
  CHECK(shifted->multiplicity_of(1.3) == 6);
  CHECK(shifted->multiplicity_of(-0.7) == 6);

  const std::string csv = io::spectrum_csv(*make_scenario("sphere", 4, 0).exact_spectrum(3.0));
  CHECK(csv.rfind("value,multiplicity,provenance\n", 0) == 0);
  CHECK(csv.find("1.5,2,exact-sphere") != std::string::npos);
}
