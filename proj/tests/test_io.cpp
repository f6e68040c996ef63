#include <carpetq/io.hpp>
#include <carpetq/render.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <sys/wait.h>

using namespace carpetq;

namespace {

Pt pt(int xn, int xd, int yn, int yd) { return Pt{Rat(xn, xd), Rat(yn, yd)}; }

std::string run_cli(const std::string& args, int* exit_code = nullptr) {
  const char* bin = std::getenv("CARPETQ_BIN");
  if (!bin) SKIP("CARPETQ_BIN not set; run via ctest");
  std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  int status = pclose(pipe);
  if (exit_code) *exit_code = WEXITSTATUS(status);
  return out;
}

}  // namespace

TEST_CASE("rational strings round-trip") {
  CHECK(format_rational(Rat(5, 36)) == "5/36");
  CHECK(format_rational(Rat(3)) == "3");
  CHECK(parse_rational("5/36") == Rat(5, 36));
  CHECK(parse_rational("7") == Rat(7));
  CHECK(parse_rational("-2/9") == Rat(-2, 9));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
}

TEST_CASE("codebook documents round-trip losslessly") {
  Decomposition d = decompose(5);
  d.t = {Word("1")};
  auto cb = optimal_set(5, d.t);
  auto doc = make_document(cb, "constructed", d);
  Json j = document_to_json(doc);
  auto back = document_from_json(j);
  CHECK(back.n == 5);
  CHECK(back.provenance == "constructed");
  REQUIRE(back.decomposition.has_value());
  CHECK(back.decomposition->level == 1);
  CHECK(back.decomposition->m == 1);
  CHECK(back.decomposition->k == 1);
  REQUIRE(back.decomposition->t.size() == 1);
  CHECK(back.decomposition->t[0] == Word("1"));
  Codebook restored = codebook_from_document(back);
  CHECK(restored == cb);
  // identical certified distortion after the round trip
  CHECK(distortion_bounds(restored, 3).lo == distortion_bounds(cb, 3).lo);
}

TEST_CASE("document validation rejects malformed input") {
  Json j;
  j["n"] = "2";
  j["provenance"] = "file";
  j["points"] = Json::array({Json::array({"1/2", "1/2"})});
  CHECK_THROWS_AS(document_from_json(j), std::invalid_argument);  // count mismatch

  Json dup;
  dup["n"] = "2";
  dup["provenance"] = "file";
  dup["points"] =
      Json::array({Json::array({"1/2", "1/2"}), Json::array({"1/2", "1/2"})});
  CHECK_THROWS_AS(codebook_from_document(document_from_json(dup)), std::invalid_argument);
}

TEST_CASE("error csv") {
  std::ostringstream os;
  write_error_csv(os, {Int(2), Int(3), Int(5)});
  std::string s = os.str();
  CHECK(s.find("n,v_n,decimal\n") == 0);
  CHECK(s.find("2,5/36,0.138888889") != std::string::npos);
  CHECK(s.find("3,1/12,") != std::string::npos);
  CHECK(s.find("5,2/81,") != std::string::npos);
}

TEST_CASE("profile csv includes both curves") {
  auto report = scaled_profile(3, 3, 8);
  std::ostringstream os;
  write_profile_csv(os, report);
  std::string s = os.str();
  CHECK(s.find("ell,n,x,v_n_num,v_n_den,scaled,g_or_h,f_paper\n") == 0);
  CHECK(s.find("3,64,1.000000000,1,2916,0.250000000") != std::string::npos);
}

TEST_CASE("svg output is deterministic and well formed") {
  std::ostringstream a, b;
  render_svg(a, base_set(3, 0), 2);
  render_svg(b, base_set(3, 0), 2);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("<svg") == 0);
  CHECK(a.str().find("viewBox=\"0 0 900 900\"") != std::string::npos);
  // three sites drawn
  std::size_t count = 0, pos = 0;
  while ((pos = a.str().find("<circle", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 3);
  CHECK_THROWS_AS(render_svg(a, base_set(1, 0), 8), std::invalid_argument);
}

TEST_CASE("cli: optimal enumerates and validates", "[cli]") {
  int code = 0;
  std::string out = run_cli("optimal --n 3 --limit 10", &code);
  CHECK(code == 0);
  Json j = Json::parse(out);
  CHECK(j.size() == 4);

  out = run_cli("optimal --n 4", &code);
  CHECK(code == 0);
  j = Json::parse(out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["points"][0][0] == "1/6");

  // fixed t enumerates its two-variant family; explicit variants give one doc
  out = run_cli("optimal --n 5 --t 1", &code);
  CHECK(code == 0);
  j = Json::parse(out);
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
  CHECK(j[0]["decomposition"]["t"][0] == "1");

  out = run_cli("optimal --n 5 --t 1 --variants 1:1", &code);
  CHECK(code == 0);
  j = Json::parse(out);
  CHECK(j.is_object());
  CHECK(j["decomposition"]["t"][0] == "1");

  run_cli("optimal --n 5 --t 12", &code);
  CHECK(code == 2);
  run_cli("optimal --n 5 --t 1,2", &code);
  CHECK(code == 2);
}

TEST_CASE("cli: single documents feed back into render", "[cli]") {
  int code = 0;
  std::string out = run_cli("optimal --n 5 --t 1 --variants 1:0", &code);
  REQUIRE(code == 0);
  {
    std::ofstream f("/tmp/carpetq_n5.json");
    f << out;
  }
  // the re-ingested document must describe the same exact codebook
  auto doc = document_from_json(Json::parse(out));
  Codebook cb = codebook_from_document(doc);
  CHECK(cb == optimal_set(5, {Word("1")}));
  CHECK(distortion_bounds(cb, 3).lo == quantization_error(5));

  run_cli("render --in /tmp/carpetq_n5.json --carpet-depth 2 --out /tmp/carpetq_n5.svg", &code);
  CHECK(code == 0);
  std::ifstream svg("/tmp/carpetq_n5.svg");
  CHECK(svg.good());
}

TEST_CASE("cli: error table", "[cli]") {
  int code = 0;
  std::string out = run_cli("error --n 2,3,5", &code);
  CHECK(code == 0);
  CHECK(out.find("2,5/36,0.138888889") != std::string::npos);
}

TEST_CASE("cli: lloyd oracle json", "[cli]") {
  int code = 0;
  std::string out = run_cli("lloyd --n 2 --depth 4 --restarts 8 --seed 42", &code);
  CHECK(code == 0);
  Json j = Json::parse(out);
  CHECK(j["corrected_distortion"] == "5/36");
  CHECK(!j["matched_optimal"].is_null());
}

TEST_CASE("cli: coefficient and dimension reports", "[cli]") {
  int code = 0;
  std::string out = run_cli("coefficient --levels 3 --grid 8 --format json", &code);
  CHECK(code == 0);
  Json j = Json::parse(out);
  CHECK(j["inf_observed"].get<double>() == Catch::Approx(0.25).margin(1e-6));
  CHECK(j["samples"].size() == 8);

  out = run_cli("dimension --levels 4", &code);
  CHECK(code == 0);
  CHECK(out.find("ell,estimate,beta,abs_gap") == 0);
}

TEST_CASE("cli: render writes svg and reports unwritable paths", "[cli]") {
  int code = 0;
  run_cli("render --n 16 --carpet-depth 3 --out /tmp/carpetq_n16.svg", &code);
  CHECK(code == 0);
  std::ifstream svg("/tmp/carpetq_n16.svg");
  REQUIRE(svg.good());
  std::string content((std::istreambuf_iterator<char>(svg)), std::istreambuf_iterator<char>());
  std::size_t count = 0, pos = 0;
  while ((pos = content.find("<circle", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 16);

  run_cli("render --n 1 --out /nonexistent-dir/x.svg", &code);
  CHECK(code == 3);
}
