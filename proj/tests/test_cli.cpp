#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include "mms/serialize.hpp"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded; env is prepended verbatim.
Run cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " '" MMS_CLI "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string status_of(const mms::Json& report, const std::string& id) {
  for (auto& item : report["items"])
    if (item["id"] == id) return item["status"];
  return "missing";
}

}  // namespace

TEST_CASE("rank suite at level 1") {
  Run r = cli("verify --suite rank --family gamma0 --levels 1");
  CHECK(r.code == 0);
  mms::Json doc = mms::Json::parse(r.out);
  CHECK(doc["suite"] == "rank");
  CHECK(doc["items"][0]["detail"] == "rank 0, 2g+2(c-1) = 0");
  CHECK(doc.contains("version"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli("verify --suite bogus").code == 2);
  CHECK(cli("verify").code == 2);
  CHECK(cli("").code == 2);
  CHECK(cli("verify --suite rank --family gamma9").code == 2);
  CHECK(cli("verify --suite rank --tol -1").code == 2);
  CHECK(cli("verify --suite rank --levels 0").code == 2);
  CHECK(cli("verify --suite eis --pn 15").code == 2);
  CHECK(cli("verify --suite hecke --primes 4 --levels 11").code == 2);
  CHECK(cli("verify --suite rank --format xml").code == 2);
  CHECK(cli("--help").code == 0);
}

TEST_CASE("i/o errors exit with 3") {
  CHECK(cli("verify --suite rank --levels 1 --out /nonexistent-dir/r.json").code == 3);
  CHECK(cli("export --family gamma0 --level 11 --out /nonexistent-dir/s.json").code == 3);
  CHECK(cli("import --in /nonexistent-dir/s.json").code == 3);
}

TEST_CASE("export and import") {
  auto dir = std::filesystem::temp_directory_path() / "mms_cli_test";
  std::filesystem::create_directories(dir);
  std::string path = (dir / "g011.json").string();
  CHECK(cli("export --family gamma0 --level 11 --out " + path).code == 0);
  CHECK(cli("import --in " + path).code == 0);
  mms::Json doc = mms::Json::parse(mms::read_text(path));
  CHECK(doc["basis_rank"] == 4);
  doc["lift"][0][0] = "5";
  mms::write_text(path, doc.dump());
  CHECK(cli("import --in " + path).code == 1);
  mms::write_text(path, "{not json");
  CHECK(cli("import --in " + path).code == 1);

  mms::Json full = mms::Json::parse(cli("export --family full --level 1").out);
  CHECK(full["basis_rank"] == 0);
  mms::Json g15 = mms::Json::parse(cli("export --family gamma1 --level 5").out);
  CHECK(g15["cusps"].size() == 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("reports are deterministic") {
  for (std::string args : {"verify --suite pairing --levels 11,13", "verify --suite eis --pn 5,9 --format markdown"}) {
    Run a = cli(args), b = cli(args);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
}

TEST_CASE("conjectural determinant check is fatal only under --strict") {
  Run r = cli("verify --suite pairing --levels 5,7,11,13");
  CHECK(r.code == 0);
  mms::Json doc = mms::Json::parse(r.out);
  CHECK(status_of(doc, "pairing/gamma0(11)/det") == "report");
  CHECK(status_of(doc, "pairing/gamma0(11)/perfect") == "pass");
  CHECK(status_of(doc, "pairing/gamma0(11)/adjoint(T3)") == "pass");
  CHECK(status_of(doc, "pairing/gamma0(11)/G_identity") == "pass");
  Run s = cli("verify --suite pairing --levels 11 --strict");
  CHECK(s.code == 1);
  CHECK(status_of(mms::Json::parse(s.out), "pairing/gamma0(11)/det") == "fail");
}

TEST_CASE("tolerance from flag and environment") {
  mms::Json tight = mms::Json::parse(cli("verify --suite eis --pn 7", "MMS_TOL=1e-30").out);
  CHECK(status_of(tight, "eis/7/detM''") == "fail");
  mms::Json flag = mms::Json::parse(cli("verify --suite eis --pn 7 --tol 1e-6", "MMS_TOL=1e-30").out);
  CHECK(status_of(flag, "eis/7/detM''") == "pass");
  mms::Json loose = mms::Json::parse(cli("verify --suite eis --pn 7").out);
  CHECK(status_of(loose, "eis/7/detM''") == "pass");
  CHECK(status_of(loose, "eis/7/detM'_log") == "report");
  CHECK(status_of(loose, "eis/gamma0(7)/constants") == "pass");
}

TEST_CASE("hecke and rank suites pass on the default level sets") {
  CHECK(cli("verify --suite rank").code == 0);
  CHECK(cli("verify --suite rank --family gamma1").code == 0);
  CHECK(cli("verify --suite hecke").code == 0);
  CHECK(cli("verify --suite hecke --family gamma1 --format markdown").code == 0);
}
