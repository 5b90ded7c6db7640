#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "framekit/io.hpp"

using namespace framekit;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("frame JSON round-trips bit-exactly", "[io]") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Index dim = 2 + static_cast<Index>(seed % 4);
    const Frame f = random_frame(dim, dim + static_cast<Index>(seed % 3), seed);
    const Frame back = frame_from_json(Json::parse(frame_to_json(f).dump()));
    REQUIRE(back.dim() == f.dim());
    REQUIRE(back.size() == f.size());
    for (Index i = 0; i < f.dim(); ++i) {
      for (Index j = 0; j < f.size(); ++j) {
        REQUIRE(f.synthesis()(i, j).real() == back.synthesis()(i, j).real());
        REQUIRE(f.synthesis()(i, j).imag() == back.synthesis()(i, j).imag());
      }
    }
    REQUIRE(back.tol().rank_tol == f.tol().rank_tol);
    REQUIRE(back.tol().eq_tol == f.tol().eq_tol);
  }
}

TEST_CASE("real frames serialize with bare floats", "[io]") {
  const Json j = frame_to_json(fixtures::E2());
  REQUIRE(j["field"] == "real");
  REQUIRE(j["vectors"][0][0].is_number());
  const Frame back = frame_from_json(j);
  REQUIRE(back.field() == ScalarField::Real);
  REQUIRE(max_abs(back.synthesis() - fixtures::E2().synthesis()) == 0.0);

  // complex frames use [re, im] pairs
  const Json jc = frame_to_json(random_frame(2, 3, 1));
  REQUIRE(jc["field"] == "complex");
  REQUIRE(jc["vectors"][0][0].is_array());
}

TEST_CASE("frame parsing reports structural problems by vector index", "[io]") {
  Json j = frame_to_json(fixtures::U3());
  j["vectors"][1] = Json::array({1.0});  // wrong length
  try {
    frame_from_json(j);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::ParseError);
    REQUIRE(std::string(e.what()).find("vector 2") != std::string::npos);
  }
}

TEST_CASE("frame parsing rejects non-finite entries", "[io]") {
  Json j = frame_to_json(fixtures::E2());
  j["vectors"][1][1] = std::numeric_limits<double>::infinity();
  try {
    frame_from_json(j);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::ParseError);
  }

  // non-finite doubles dump as null, which the parser must also reject
  j["vectors"][1][1] = Json();
  REQUIRE_THROWS_AS(frame_from_json(j), Error);
}

TEST_CASE("frame parsing propagates NotAFrame", "[io]") {
  const std::string text = R"({"dim": 2, "vectors": [[1.0, 0.0], [2.0, 0.0]]})";
  REQUIRE_THROWS_AS(frame_from_json(Json::parse(text)), NotAFrameError);
}

TEST_CASE("frame parsing enforces the declared field", "[io]") {
  const std::string text = R"({"dim": 1, "field": "real", "vectors": [[[1.0, 2.0]]]})";
  try {
    frame_from_json(Json::parse(text));
    FAIL("expected ParseError");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::ParseError);
  }
}

TEST_CASE("dual pair JSON round-trips and re-certifies", "[io]") {
  const DualPair pair = canonical_dual(fixtures::U3());
  const DualPair back = dual_pair_from_json(dual_pair_to_json(pair));
  REQUIRE(max_abs(back.dual().synthesis() - pair.dual().synthesis()) == 0.0);

  Json broken = dual_pair_to_json(pair);
  broken["dual"] = frame_to_json(fixtures::U3());  // not a dual of itself
  REQUIRE_THROWS_AS(dual_pair_from_json(broken), Error);
}

TEST_CASE("reports serialize canonically", "[io]") {
  Report report;
  report.command = "mrc";
  report.inputs_digest = fnv1a_hex("abc");
  report.verdicts = Json{{"satisfied", false}, {"certificate", 0.25}};
  const std::string path = temp_path("framekit_report_test.json");
  write_report(report, path);
  const Json a = parse_json_file(path);
  write_report(report, path);
  const Json b = parse_json_file(path);
  REQUIRE(a.dump() == b.dump());
  REQUIRE(a["command"] == "mrc");
  REQUIRE(a["verdicts"]["satisfied"] == false);
  std::remove(path.c_str());
}

TEST_CASE("complex report values are [re, im] pairs", "[io]") {
  Matrix m(1, 1);
  m(0, 0) = Complex(0.5, -2.0);
  const Json j = matrix_to_json(m);
  REQUIRE(j[0][0][0] == 0.5);
  REQUIRE(j[0][0][1] == -2.0);
}

TEST_CASE("digesting is content-sensitive and stable", "[io]") {
  const std::string a = temp_path("framekit_digest_a.json");
  const std::string b = temp_path("framekit_digest_b.json");
  write_text_file(a, "payload-1");
  write_text_file(b, "payload-2");
  REQUIRE(digest_files({a}) == digest_files({a}));
  REQUIRE(digest_files({a}) != digest_files({b}));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("coefficient CSV parsing", "[io]") {
  const std::string path = temp_path("framekit_stream.csv");
  write_text_file(path,
                  "signal_id,index,re,im\n"
                  "0,1,1.5,0.0\n"
                  "0,2,-2.0,1.0\n"
                  "1,1,0.25\n");
  const CoefficientStream stream = parse_coefficient_csv(path);
  REQUIRE(stream.entries.size() == 2);
  REQUIRE(stream.entries.at(0).at(0) == Complex(1.5, 0));
  REQUIRE(stream.entries.at(0).at(1) == Complex(-2.0, 1.0));
  REQUIRE(stream.entries.at(1).at(0) == Complex(0.25, 0));

  const auto singles = signals_from_stream(stream, 1);
  REQUIRE(singles.size() == 2);
  REQUIRE_THROWS_AS(signals_from_stream(stream, 2), Error);  // signal 1 lacks entry 2

  const auto received = received_from_stream(stream, 3);
  REQUIRE(received.size() == 2);
  REQUIRE(received[0].second.values[0].has_value());
  REQUIRE_FALSE(received[0].second.values[2].has_value());
  std::remove(path.c_str());
}

TEST_CASE("missing files raise IoError", "[io]") {
  try {
    parse_frame_file(temp_path("framekit_does_not_exist.json"));
    FAIL("expected IoError");
  } catch (const Error& e) {
    REQUIRE(e.code() == Errc::IoError);
  }
}
