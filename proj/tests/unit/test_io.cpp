#include "corpus.hpp"

#include <doctest.h>

using namespace tlg;
using tlg::io::Json;

namespace {

io::Outcome run(const std::string &command, const std::string &fan, int order = 3) {
  io::Options o;
  o.command = command;
  o.fan_text = corpus::read_file(fan + ".json");
  o.order = order;
  return io::run(o);
}

std::string error_message(const std::string &text) {
  try {
    io::parse_fan_text(text);
  } catch (const Error &e) {
    return e.what();
  }
  return "";
}

} // namespace

TEST_CASE("FNV-1a reference values") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(io::fnv1a64("foobar") == 0x85944171f73967e8ull);
  CHECK(io::digest_string("a") == "fnv1a64:af63dc4c8601ec8c");
}

TEST_CASE("schema errors carry JSON pointers") {
  CHECK(error_message(corpus::read_file("bad_length.json")).find("/rays/1") != std::string::npos);
  CHECK(error_message(R"({"rank": 2, "rays": [[1,0]], "max_cones": [[1, 3]]})").find("/max_cones/0/1") !=
        std::string::npos);
  CHECK(error_message(R"({"rank": 2, "rays": [[1,0]]})").find("/max_cones") != std::string::npos);
  CHECK(error_message(R"({"rank": 2, "rays": [[1,"x"]], "max_cones": []})").find("/rays/0/1") != std::string::npos);
  CHECK(error_message(R"({"rank": 1, "rays": [[1],[-1]], "max_cones": [[1],[2]], "colour": 3})").find("/colour") !=
        std::string::npos);
  CHECK(error_message("{not json").find("malformed JSON") != std::string::npos);
}

TEST_CASE("parse → serialize → parse is the identity on the corpus") {
  for (const char *name : {"P1", "P2", "P112", "P113", "P1113", "P1112", "F2", "F3", "F2_resolving_P112"}) {
    CAPTURE(name);
    io::FanDocument a = io::parse_fan_text(corpus::read_file(std::string(name) + ".json"));
    Json j = io::to_json(a);
    io::FanDocument b = io::parse_fan(j);
    CHECK(b.fan.rays() == a.fan.rays());
    CHECK(b.fan.max_cones() == a.fan.max_cones());
    CHECK(io::to_json(b) == j);
  }
  io::FanDocument with_extra = io::parse_fan_text(
      R"({"rank": 2, "rays": [[1,0],[-1,-2],[0,1]], "max_cones": [[1,2],[2,3],[1,3]], "extra_generators": [[0,-1]]})");
  CHECK(io::to_json(io::parse_fan(io::to_json(with_extra))) == io::to_json(with_extra));
  CHECK(io::extended_fan(with_extra)->e() == 1);
}

TEST_CASE("semantic errors from extended generators") {
  io::FanDocument doc = io::parse_fan_text(corpus::read_file("bad_extra.json"));
  CHECK_THROWS_AS(io::extended_fan(doc), Error);
  io::Outcome out = run("box", "bad_extra");
  CHECK(out.exit_code == 1);
}

TEST_CASE("commands and exit codes") {
  io::Outcome coh = run("cohomology", "P112");
  REQUIRE(coh.exit_code == 0);
  CHECK(coh.report["results"]["dim"] == 4);
  CHECK(coh.report["results"]["normalized_volume"] == 4);
  Json dims = coh.report["results"]["graded_dims"];
  REQUIRE(dims.size() == 3);
  CHECK(dims[0]["dim"] == 1);
  CHECK(dims[1]["dim"] == 2);
  CHECK(dims[2]["dim"] == 1);

  io::Outcome broken = run("validate", "broken");
  CHECK(broken.exit_code == 1);
  CHECK(broken.report["results"]["complete"] == false);
  REQUIRE(broken.error);

  io::Outcome schema = run("validate", "bad_length");
  CHECK(schema.exit_code == 1);
  CHECK(schema.report.is_null());

  io::Outcome unknown = run("frobnicate", "P2");
  CHECK(unknown.exit_code == 1);

  io::Options crep;
  crep.command = "crepant";
  crep.fan_text = corpus::read_file("P112.json");
  CHECK(io::run(crep).exit_code == 1); // missing --resolution
  crep.resolution_text = corpus::read_file("F2_resolving_P112.json");
  io::Outcome ok = io::run(crep);
  REQUIRE(ok.exit_code == 0);
  CHECK(ok.report["results"]["crepant"] == true);
  CHECK(ok.report["results"]["global_moduli"]["q_basis"][1] == Json::array({2, 0}));
  crep.resolution_text = corpus::read_file("P112_noncrepant.json");
  io::Outcome bad = io::run(crep);
  CHECK(bad.exit_code == 2);
  CHECK(bad.report["results"]["witnesses"][1]["discrepancy"] == "1/1");
}

TEST_CASE("every command runs on P(1,1,2)") {
  for (const std::string &c : io::commands()) {
    if (c == "crepant" || c == "global-moduli")
      continue;
    CAPTURE(c);
    io::Outcome out = run(c, "P112", 2);
    CHECK(out.exit_code == 0);
    CHECK(out.report["command"] == c);
    CHECK(out.report["status"] == "ok");
  }
}

TEST_CASE("rationals are serialized as num/den strings") {
  io::Outcome out = run("ifunction", "P2", 2);
  REQUIRE(out.exit_code == 0);
  for (const Json &t : out.report["results"]["series"]["terms"]) {
    CHECK(t["z"].get<std::string>().find('/') != std::string::npos);
    for (const Json &c : t["coords"])
      CHECK(c.get<std::string>().find('/') != std::string::npos);
  }
}

TEST_CASE("reports are deterministic and omit timing by default") {
  for (const std::string &name : corpus::nef_corpus()) {
    CAPTURE(name);
    std::string first = io::dump(run("all", name).report);
    CHECK(first.find("timing") == std::string::npos);
    for (int i = 0; i < 2; ++i)
      CHECK(io::dump(run("all", name).report) == first);
  }
}
