#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "h8/cli.hpp"
#include "h8/report.hpp"
#include "h8/zeros.hpp"
#include "json.hpp"

using namespace h8;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "h8_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("usage errors") {
  auto r = call({"frobnicate"});
  CHECK(r.code == 2);
  CHECK(r.err.find("Usage") != std::string::npos);
  CHECK(call({}).code == 2);
  CHECK(call({"goldbach", "--bogus"}).code == 2);
  CHECK(call({"goldbach", "--format", "xml"}).code == 2);
  CHECK(call({"goldbach", "--from", "7", "--to", "100"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("zeros command") {
  const auto path = tmp("zeros.csv");
  auto r = call({"zeros", "--max-height", "100", "--out", path.string()});
  REQUIRE(r.code == 0);
  auto z = load_zeros_csv(path);
  CHECK(z.ordinates.size() == 29);
  CHECK(z.label == "zeta");
  CHECK(z.height_bound == 100.0);
  CHECK(std::abs(z.ordinates[0] - 14.134725) < 1e-5);

  auto j = call({"zeros", "--max-height", "30", "--format", "json"});
  REQUIRE(j.code == 0);
  auto doc = nlohmann::ordered_json::parse(j.out);
  CHECK(doc.begin().key() == "schema_version");
  CHECK(doc["schema_version"] == "h8.1");
  CHECK(doc["rows"].size() == 3);
  CHECK(doc["summary"]["certified"] == true);
}

TEST_CASE("goldbach command") {
  const auto path = tmp("g.csv");
  auto r = call({"goldbach", "--from", "6", "--to", "10000", "--out", path.string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(path);
  CHECK(csv.rfind("N,weighted_sum,pairs_ordered,pairs_unordered,C_N,bound,ratio,s_lower,middle_term\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + (10'000 - 6) / 2 + 1);
  CHECK(r.err.find("\"violations\":[]") != std::string::npos);
  CHECK(r.err.find("failed") == std::string::npos);

  auto j = call({"goldbach", "--from", "6", "--to", "10000", "--format", "json", "--strict"});
  REQUIRE(j.code == 0);
  auto doc = nlohmann::ordered_json::parse(j.out);
  CHECK(doc["summary"]["violations"].empty());
  // json and csv of the same run carry the same row hash
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(csv)));
  CHECK(doc["determinism_hash"] == std::string(buf));
  CHECK(doc["rows"][0]["N"] == 6);
  CHECK(doc["rows"][0]["pairs_ordered"] == 1);
}

TEST_CASE("twins rerun is byte identical") {
  const auto a = tmp("t1.csv"), b = tmp("t2.csv"), c = tmp("t3.csv");
  REQUIRE(call({"twins", "--to", "100000", "--out", a.string()}).code == 0);
  REQUIRE(call({"twins", "--to", "100000", "--out", b.string()}).code == 0);
  REQUIRE(call({"twins", "--to", "100000", "--out", c.string(), "--workers", "8"}).code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a) == slurp(c));
  CHECK(slurp(a).rfind("N,weighted_sum,pairs,C_N,bound,ratio,hl_ratio\n6,", 0) == 0);
}

TEST_CASE("identities and strict mode") {
  auto r = call({"identities", "--which", "FE_ZETA,AFORM_CLOSED_VS_ORACLE", "--re-points", "3", "--im-points", "4",
                 "--max-modulus", "5"});
  CHECK(r.code == 0);
  auto s = call({"identities", "--which", "FE_ZETA,AFORM_CLOSED_VS_ORACLE", "--re-points", "3", "--im-points", "4",
                 "--max-modulus", "5", "--strict"});
  CHECK(s.code == 1);
  CHECK(r.out == s.out);
  auto ok = call({"identities", "--which", "FE_ZETA", "--re-points", "3", "--im-points", "4", "--strict"});
  CHECK(ok.code == 0);
  CHECK(ok.out.rfind("identity,context,point,residual,delta_re,delta_im,status\n", 0) == 0);
  // loosening the printed-form tolerance flips its verdict
  auto loose = call({"identities", "--which", "AFORM_CLOSED_VS_ORACLE", "--re-points", "3", "--im-points", "4",
                     "--max-modulus", "3", "--strict", "--tolerance", "AFORM_CLOSED_VS_ORACLE=1e6"});
  CHECK(loose.code == 0);
  CHECK(call({"identities", "--which", "NOPE"}).code == 2);
  CHECK(call({"identities", "--which", "FE_ZETA", "--tolerance", "FE_ZETA"}).code == 2);
}

TEST_CASE("ap-errors, sieve-bounds, explicit-formula") {
  auto a = call({"ap-errors", "--x", "10000", "--d-cap", "20", "--policy", "fixed_l"});
  REQUIRE(a.code == 0);
  CHECK(a.out.rfind("x,q,l,b,psi,theta,main_term,e_psi,e_theta,theta_psi_gap,max_abs_psi_chi\n", 0) == 0);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 20);
  auto sc = call({"ap-errors", "--x", "10000", "--d-cap", "5", "--mode", "scaled", "--b-cap", "3"});
  REQUIRE(sc.code == 0);
  CHECK(std::count(sc.out.begin(), sc.out.end(), '\n') == 1 + 4 * 3 - 3);  // (2,2), (3,3), (4,2) skipped
  CHECK(call({"ap-errors", "--x", "100", "--d-cap", "1"}).code == 2);

  auto s = call({"sieve-bounds", "--n", "10000,100000", "--format", "json"});
  REQUIRE(s.code == 0);
  auto doc = nlohmann::ordered_json::parse(s.out);
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["u"] == doctest::Approx(3.0));
  CHECK(doc["config"]["sifting_primes"] == "p < z");
  CHECK(call({"sieve-bounds", "--n", "10000", "--u", "1.5"}).code == 2);

  auto e = call({"explicit-formula", "--x", "1000", "--heights", "50,100"});
  REQUIRE(e.code == 0);
  CHECK(std::count(e.out.begin(), e.out.end(), '\n') == 3);
  const auto zf = tmp("z30.csv");
  REQUIRE(call({"zeros", "--max-height", "30", "--out", zf.string()}).code == 0);
  CHECK(call({"explicit-formula", "--x", "1000", "--heights", "100", "--zeros-file", zf.string()}).code == 2);
  CHECK(call({"explicit-formula", "--x", "1000", "--heights", "20", "--zeros-file", zf.string()}).code == 0);
  CHECK(call({"explicit-formula", "--x", "1000", "--heights", "20", "--zeros-file", "/nonexistent.csv"}).code == 3);
  auto ch = call({"explicit-formula", "--x", "1000", "--heights", "20", "--zeros-file", zf.string(), "--kind",
                  "character", "--character", "4.2"});
  CHECK(ch.code == 0);
  CHECK(call({"explicit-formula", "--kind", "character"}).code == 2);
}

TEST_CASE("resources, limits and environment") {
  CHECK(call({"twins", "--to", "100000", "--memory-budget", "100"}).code == 3);
  CHECK(call({"twins", "--to", "100000", "--table-limit", "1000"}).code == 2);
  CHECK(call({"twins", "--to", "1000", "--out", "/nonexistent/dir/x.csv"}).code == 3);
  setenv("H8_TABLE_LIMIT", "500", 1);
  CHECK(call({"twins", "--to", "1000"}).code == 2);
  auto r = call({"twins", "--to", "400", "--format", "json"});
  CHECK(r.code == 0);
  CHECK(nlohmann::ordered_json::parse(r.out)["config"]["table_limit"] == 500);
  setenv("H8_TABLE_LIMIT", "abc", 1);
  CHECK(call({"twins", "--to", "400"}).code == 2);
  unsetenv("H8_TABLE_LIMIT");
}

TEST_CASE("report helpers") {
  RowTable t;
  t.columns = {"a", "b"};
  CHECK(to_csv(t) == "a,b\n");
  t.add({"1", "x"});
  CHECK(to_csv(t) == "a,b\n1,x\n");
  CHECK_THROWS(t.add({"1"}));
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
  CHECK(format_real(-0.0) == "0");
  CHECK(format_real(1e20) == "1e+20");
  CHECK(format_real(std::nan("")) == "nan");
  ReportDocument d;
  d.command = "x";
  d.rows = t;
  auto j = to_json(d);
  CHECK(j.begin().key() == "schema_version");
  CHECK(j["determinism_hash"] == determinism_hash(t));
}
