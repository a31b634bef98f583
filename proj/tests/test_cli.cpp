#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(QAUP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
    out.append(buf.data(), n);
  const int status = pclose(pipe);
  CliResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.out = std::move(out);
  return res;
}

}  // namespace

TEST_CASE("help exits cleanly and lists the subcommands") {
  const auto res = run_cli("--help");
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("verify") != std::string::npos);
  CHECK(res.out.find("factor") != std::string::npos);
  CHECK(res.out.find("dlog") != std::string::npos);
  CHECK(run_cli("verify --help").exit_code == 0);
  CHECK(run_cli("bound --help").exit_code == 0);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("verify --mode nonsense").exit_code == 2);
  CHECK(run_cli("factor 16").exit_code == 2);   // even
  CHECK(run_cli("factor 17").exit_code == 2);   // prime
  CHECK(run_cli("dlog 11 4 3").exit_code == 2); // 4 does not generate mod 11
  CHECK(run_cli("bound factor --r 4 --t 32 --s 2").exit_code == 2);
}

TEST_CASE("verify emits sorted rows that all hold") {
  const auto res = run_cli("verify --mode up1 --q 8 --trials 5 --seed 7");
  REQUIRE(res.exit_code == 0);
  const auto rows = nlohmann::json::parse(res.out);
  REQUIRE(rows.is_array());
  REQUIRE(!rows.empty());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i]["holds"] == true);
    if (i > 0)
      CHECK(rows[i - 1]["case"].get<std::string>() <=
            rows[i]["case"].get<std::string>());
  }
}

TEST_CASE("bound factor reproduces the frozen certificate numbers") {
  const auto res = run_cli("bound factor --r 4 --t 32 --s 8");
  REQUIRE(res.exit_code == 0);
  const auto rows = nlohmann::json::parse(res.out);
  bool saw_per_point = false, saw_aggregate = false;
  for (const auto& row : rows) {
    CHECK(row["holds"] == true);
    if (row["kind"] == "per_point") {
      saw_per_point = true;
      CHECK(row["lower_bound"].get<double>() ==
            doctest::Approx(0.011525450167799154).epsilon(1e-12));
    }
    if (row["kind"] == "aggregate") {
      saw_aggregate = true;
      CHECK(row["lower_bound"].get<double>() ==
            doctest::Approx(0.02305090033559831).epsilon(1e-12));
    }
  }
  CHECK(saw_per_point);
  CHECK(saw_aggregate);

  const auto ext = run_cli("bound factor --r 4 --t 32 --s 8 --extended");
  REQUIRE(ext.exit_code == 0);
  const auto ext_rows = nlohmann::json::parse(ext.out);
  bool saw_ext = false;
  for (const auto& row : ext_rows)
    if (row["kind"] == "per_point") {
      saw_ext = true;
      CHECK(row["lower_bound"].get<double>() ==
            doctest::Approx(0.0013260620920365835).epsilon(1e-12));
    }
  CHECK(saw_ext);
}

TEST_CASE("bound dlog reproduces the frozen per-pair bound") {
  const auto res = run_cli("bound dlog --p 11 --q 128");
  REQUIRE(res.exit_code == 0);
  const auto rows = nlohmann::json::parse(res.out);
  bool saw_pair = false;
  for (const auto& row : rows) {
    CHECK(row["holds"] == true);
    if (row["kind"] == "per_pair") {
      saw_pair = true;
      CHECK(row["lower_bound"].get<double>() ==
            doctest::Approx(4.243896832357388e-05).epsilon(1e-12));
    }
  }
  CHECK(saw_pair);
}

TEST_CASE("csv output is RFC-4180 shaped") {
  const auto res = run_cli("bound factor --r 4 --t 32 --s 8 --format csv");
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.rfind("case,", 0) == 0);
  CHECK(res.out.find("\r\n") != std::string::npos);
  // Every line ends in CRLF, so stripping \r leaves no stragglers.
  std::istringstream stream(res.out);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty()) continue;
    CHECK(line.back() == '\r');
  }
}

TEST_CASE("factor pipeline is reproducible end to end") {
  const auto a = run_cli("factor 15 --seed 1");
  REQUIRE(a.exit_code == 0);
  const auto b = run_cli("factor 15 --seed 1");
  CHECK(a.out == b.out);
  const auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["success"] == true);
  const std::int64_t factor = doc["factor"].get<std::int64_t>();
  CHECK((factor == 3 || factor == 5));
}

TEST_CASE("dlog pipeline recovers the exponent") {
  const auto res = run_cli("dlog 23 5 11 --seed 1");
  REQUIRE(res.exit_code == 0);
  const auto doc = nlohmann::json::parse(res.out);
  CHECK(doc["success"] == true);
  CHECK(doc["r"] == 9);
}

TEST_CASE("--out writes the report to a file") {
  const std::string path = "/tmp/qaup_cli_test_out.json";
  std::remove(path.c_str());
  const auto res =
      run_cli("bound factor --r 4 --t 32 --s 8 --out " + path);
  REQUIRE(res.exit_code == 0);
  CHECK(res.out.empty());
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream content;
  content << in.rdbuf();
  const auto rows = nlohmann::json::parse(content.str());
  CHECK(rows.is_array());
  CHECK(!rows.empty());
  std::remove(path.c_str());
}
