#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qbm/cli.hpp"

using json = nlohmann::json;

// Drives the full command surface in process and captures streams.
struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

static CliRun run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("qbm");
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = qbm::run_command(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

static std::vector<json> parse_lines(const std::string& text) {
  std::vector<json> records;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) records.push_back(json::parse(line));
  return records;
}

static json without_elapsed(json j) {
  j.erase("elapsed_seconds");
  return j;
}

TEST_CASE("obstruction decision records carry the invariant profile") {
  CliRun r = run_cli({"obstruct", "--q", "17", "--a", "2", "--c", "1", "--d", "1", "--e", "1"});
  REQUIRE(r.code == 0);
  auto recs = parse_lines(r.out);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0]["locally_solvable"] == true);
  CHECK(recs[0]["obstructed"] == true);
  CHECK(recs[0]["invariant_profile"]["17"] == "1/2");
  CHECK(recs[0]["a_class"] == "square_not_fourth");

  r = run_cli({"obstruct", "--q", "17", "--a", "1", "--c", "1", "--d", "1", "--e", "1"});
  REQUIRE(r.code == 0);
  recs = parse_lines(r.out);
  CHECK(recs[0]["obstructed"] == false);
  CHECK(recs[0]["invariant_profile"]["17"] == "0");
  CHECK(recs[0]["a_class"] == "fourth_power");

  r = run_cli({"obstruct", "--q", "17", "--a", "3", "--c", "1", "--d", "1", "--e", "1"});
  REQUIRE(r.code == 0);
  recs = parse_lines(r.out);
  CHECK(recs[0]["locally_solvable"] == false);
  CHECK(recs[0]["obstructed"] == false);
  CHECK(recs[0]["invariant_profile"].empty());
  CHECK(recs[0]["a_class"] == "non_residue");
}

TEST_CASE("local records for the everywhere and single-prime questions") {
  CliRun r = run_cli({"local", "--a", "1", "--b", "1", "--c", "1", "--n", "14"});
  REQUIRE(r.code == 0);
  auto recs = parse_lines(r.out);
  CHECK(recs[0]["locally_solvable"] == true);
  CHECK(recs[0]["failing_places"].empty());

  r = run_cli({"local", "--a", "1", "--b", "1", "--c", "1", "--n", "7"});
  recs = parse_lines(r.out);
  CHECK(recs[0]["locally_solvable"] == false);
  CHECK(recs[0]["failing_places"] == json::array({"2"}));

  r = run_cli({"local", "--a", "1", "--b", "1", "--c", "1", "--n", "7", "--p", "2"});
  recs = parse_lines(r.out);
  CHECK(recs[0]["place"] == "2");
  CHECK(recs[0]["solvable"] == false);
  CHECK(recs[0]["witness"].is_null());

  r = run_cli({"local", "--a", "1", "--b", "1", "--c", "1", "--n", "7", "--p", "3"});
  recs = parse_lines(r.out);
  CHECK(recs[0]["solvable"] == true);
  CHECK(recs[0]["witness"].is_array());
  CHECK(recs[0]["witness_exponent"].get<int>() >= 1);
}

TEST_CASE("brauer decomposition records echo the base point") {
  CliRun r = run_cli({"brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "14"});
  REQUIRE(r.code == 0);
  auto recs = parse_lines(r.out);
  REQUIRE(recs.size() == 1);
  CHECK(recs[0]["base_point"].size() == 4);
  CHECK(recs[0]["d"].get<long long>() != 0);
  CHECK(recs[0]["l1"].size() == 4);
  CHECK(recs[0]["l4"].size() == 4);

  r = run_cli({"brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "14", "--point", "1,2,3,1"});
  REQUIRE(r.code == 0);
  recs = parse_lines(r.out);
  CHECK(recs[0]["base_point"] == json::array({1, 2, 3, 1}));

  // A point off the quadric is invalid input.
  r = run_cli({"brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "14", "--point", "1,1,1,1"});
  CHECK(r.code == 2);
  // An anisotropic form admits no decomposition.
  r = run_cli({"brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "-1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("anisotropic") != std::string::npos);
}

TEST_CASE("count records carry route metadata and the main-term prediction") {
  CliRun r = run_cli({"count", "--mode", "nbr-direct", "--B", "289", "--q", "17"});
  REQUIRE(r.code == 0);
  auto recs = parse_lines(r.out);
  CHECK(recs[0]["count"] == 0);
  CHECK(recs[0]["q"] == 17);
  CHECK(recs[0]["route"] == "direct");
  CHECK(recs[0]["predicted"].get<double>() > 0.0);

  r = run_cli({"count", "--mode", "nbr-direct", "--B", "578", "--q", "17"});
  recs = parse_lines(r.out);
  CHECK(recs[0]["count"] == 80);

  r = run_cli({"count", "--mode", "nbr-characters", "--B", "578", "--q", "17"});
  recs = parse_lines(r.out);
  CHECK(recs[0]["count"] == 80);
  CHECK(recs[0]["route"].get<std::string>().find("character") != std::string::npos);

  r = run_cli({"count", "--mode", "nloc", "--B", "2"});
  recs = parse_lines(r.out);
  CHECK(recs[0]["count"] == 42);
  CHECK(recs[0]["n"] == 1);
  CHECK(!recs[0].contains("q"));
}

TEST_CASE("count output is identical across thread counts") {
  std::vector<json> stripped;
  for (const char* t : {"1", "4", "8"}) {
    CliRun r = run_cli({"count", "--mode", "nbr-direct", "--B", "20000", "--q", "17",
                        "--threads", t});
    REQUIRE(r.code == 0);
    auto recs = parse_lines(r.out);
    REQUIRE(recs.size() == 1);
    stripped.push_back(without_elapsed(recs[0]));
  }
  CHECK(stripped[0] == stripped[1]);
  CHECK(stripped[0] == stripped[2]);

  // Identical request, byte-identical records apart from timing.
  CliRun r1 = run_cli({"count", "--mode", "nbr-characters", "--B", "5000", "--q", "17"});
  CliRun r2 = run_cli({"count", "--mode", "nbr-characters", "--B", "5000", "--q", "17"});
  CHECK(without_elapsed(parse_lines(r1.out)[0]).dump() ==
        without_elapsed(parse_lines(r2.out)[0]).dump());
}

TEST_CASE("constants subcommand prints the report fields") {
  CliRun r = run_cli({"constants", "--name", "Cf", "--q", "17", "--P", "100000", "--f", "6"});
  REQUIRE(r.code == 0);
  auto recs = parse_lines(r.out);
  CHECK(recs[0]["name"] == "Cf");
  CHECK(recs[0]["truncation_prime"] == 100000);
  CHECK(recs[0]["value"].get<double>() == doctest::Approx(0.0815).epsilon(1e-2));
  CHECK(recs[0]["inputs"] == "f=6,q=17");

  r = run_cli({"constants", "--name", "C", "--a", "2", "--b", "3", "--c", "5", "--P", "10000"});
  recs = parse_lines(r.out);
  CHECK(recs[0]["name"] == "C");
  CHECK(recs[0]["value"].get<double>() == doctest::Approx(0.1475).epsilon(1e-2));
}

TEST_CASE("verify subcommand streams one record per check plus a summary") {
  CliRun r = run_cli({"verify", "--suite", "identities", "--seed", "7"});
  REQUIRE(r.code == 0);
  auto recs = parse_lines(r.out);
  REQUIRE(recs.size() >= 2);
  const json& summary = recs.back();
  CHECK(summary["suite"] == "identities");
  CHECK(summary["checks"] == recs.size() - 1);
  CHECK(summary["passed"] == recs.size() - 1);
  CHECK(summary["ok"] == true);
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    CHECK(recs[i]["passed"] == true);
    CHECK(recs[i]["detail"].is_string());
  }
}

TEST_CASE("tsv format emits a header row then value rows") {
  CliRun r = run_cli({"--format", "tsv", "count", "--mode", "nloc", "--B", "2"});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK(header == "b\tn\tcount\troute\telapsed_seconds");
  CHECK(row.rfind("2\t1\t42\tnloc_ordered_nonzero_indefinite\t", 0) == 0);

  // Format flag also accepted after the subcommand.
  CliRun r2 = run_cli({"count", "--mode", "nloc", "--B", "2", "--format", "tsv"});
  REQUIRE(r2.code == 0);
  CHECK(r2.out.substr(0, header.size()) == header);
}

TEST_CASE("out flag redirects records to a file") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "qbm_cli_out_test.jsonl").string();
  CliRun r = run_cli({"count", "--mode", "nloc", "--B", "1", "--out", path});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::string line;
  REQUIRE(std::getline(f, line));
  CHECK(json::parse(line)["count"] == 6);
  std::filesystem::remove(path);
}

TEST_CASE("invalid requests exit with code 2") {
  CHECK(run_cli({"count", "--mode", "nbr-direct", "--q", "17"}).code == 2);          // missing --B
  CHECK(run_cli({"count", "--mode", "sideways", "--B", "10", "--q", "17"}).code == 2);
  CHECK(run_cli({"count", "--mode", "nbr-direct", "--B", "10"}).code == 2);          // missing --q
  CHECK(run_cli({"count", "--mode", "nbr-direct", "--B", "10", "--q", "17", "--n", "2"}).code == 2);
  CHECK(run_cli({"count", "--mode", "nloc", "--B", "10", "--q", "17"}).code == 2);
  CHECK(run_cli({"count", "--mode", "nloc", "--B", "10", "--threads", "0"}).code == 2);
  CHECK(run_cli({"obstruct", "--q", "15", "--a", "1", "--c", "1", "--d", "1", "--e", "1"}).code == 2);
  CHECK(run_cli({"local", "--a", "0", "--b", "1", "--c", "1", "--n", "5"}).code == 2);
  CHECK(run_cli({"constants", "--name", "D", "--f", "6"}).code == 2);
  CHECK(run_cli({"constants", "--name", "E", "--a", "2"}).code == 2);
  CHECK(run_cli({"brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "14", "--point", "1,2,3"}).code == 2);
  CHECK(run_cli({"brauer", "--a", "1", "--b", "1", "--c", "1", "--n", "14", "--point", "1,2,3,x"}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"count", "--mode", "nbr-direct", "--B", "10", "--q", "17", "--bogus", "1"}).code == 2);
  CHECK(run_cli({}).code == 2);  // a subcommand is required
}

TEST_CASE("help is success and names every subcommand") {
  CliRun r = run_cli({"--help"});
  CHECK(r.code == 0);
  for (const char* name : {"local", "obstruct", "brauer", "count", "constants", "verify"})
    CHECK(r.out.find(name) != std::string::npos);
}
