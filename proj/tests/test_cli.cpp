#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <unistd.h>

#include "hyperlab/cli.hpp"
#include "hyperlab/error.hpp"

using namespace hyperlab;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("hyperlab_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// CSV text without the comment lines.
std::string body_of(const std::string& csv) {
  std::istringstream is(csv);
  std::string line, body;
  while (std::getline(is, line))
    if (line.empty() || line[0] != '#') body += line + "\n";
  return body;
}

void check_csv_meta(const std::string& csv) {
  for (const char* key : {"# seed=", "# delta_hat=", "# theta_hat=", "# truncation l_cutoff=", "# git_rev="})
    CHECK_MESSAGE(csv.find(key) != std::string::npos, key);
}

}  // namespace

TEST_CASE("grids") {
  CHECK(parse_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(parse_grid("0.5,1,2") == std::vector<double>{0.5, 1.0, 2.0});
  CHECK(parse_grid("2:9:1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_grid("0:1"), DomainError);
  CHECK_THROWS_AS(parse_grid("0:1:2.5"), DomainError);
  CHECK_THROWS_AS(parse_grid("a,b"), DomainError);
}

TEST_CASE("curve comparison interpolates and respects the range") {
  std::istringstream a("# c\nabscissa,value,stderr\n0,1,0\n0.5,0.5,0\n1,0,0\n3,0,0\n");
  std::istringstream b("abscissa,value\n1,0.2\n0,1\n");
  const Comparison c = compare_curves(read_curve_csv(a), read_curve_csv(b));
  REQUIRE(c.abscissae.size() == 3);  // 3 lies outside b
  CHECK(c.b[1] == doctest::Approx(0.6));
  CHECK(c.sup_norm == doctest::Approx(0.2));
  std::istringstream a2("abscissa,value\n0,1\n1,0\n"), b2("abscissa,value\n0,1\n1,0.2\n");
  CHECK(compare_curves(read_curve_csv(a2), read_curve_csv(b2), 0, 0.5).sup_norm == 0.0);
  std::istringstream bad("x,y\n1,2\n");
  CHECK_THROWS_AS(read_curve_csv(bad), DomainError);
}

TEST_CASE("help on every subcommand, unknown flags rejected") {
  for (const auto& cmd : std::vector<std::vector<std::string>>{{},
                                                               {"orbit"},
                                                               {"project"},
                                                               {"stats", "gaps"},
                                                               {"stats", "nn"},
                                                               {"stats", "pair"},
                                                               {"stats", "count"},
                                                               {"stats", "moments"},
                                                               {"fit", "delta"},
                                                               {"fit", "theta"},
                                                               {"nu"},
                                                               {"limit", "gaps"},
                                                               {"limit", "gapdensity"},
                                                               {"limit", "nn"},
                                                               {"limit", "pair"},
                                                               {"packing", "gen"},
                                                               {"packing", "stats"},
                                                               {"compare"}}) {
    auto args = cmd;
    args.push_back("--help");
    const Result r = run(args);
    CHECK(r.code == 0);
    CHECK(r.out.find("Usage:") != std::string::npos);
    auto bad = cmd;
    bad.push_back("--no-such-flag");
    const Result e = run(bad);
    CHECK(e.code == 2);
    CHECK(json::parse(e.err).at("error") == "usage");
  }
  CHECK(run({}).code == 2);
  CHECK(run({"stats"}).code == 2);
  CHECK(run({"--t", "-1", "orbit"}).code == 2);
}

TEST_CASE("domain errors exit 1 with a JSON message") {
  Result r = run({"--group", "nosuch", "orbit"});
  CHECK(r.code == 1);
  const json j = json::parse(r.err);
  CHECK(j.at("error") == "domain");
  CHECK(j.at("exit_code") == 1);
  CHECK(run({"--w", "0,-1", "orbit"}).code == 1);
  CHECK(run({"--group", "apollonian", "--w", "0,0,1", "stats", "gaps"}).code == 1);
  CHECK(run({"limit", "gaps", "--l-cutoff", "8", "--y-max", "7"}).code == 1);
}

TEST_CASE("fit delta on the modular group") {
  const Result r = run({"fit", "delta", "--t-min", "4", "--t-max", "10"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("delta_hat").get<double>() >= 0.95);
  CHECK(j.at("delta_hat").get<double>() <= 1.05);
  CHECK(j.at("meta").contains("git_rev"));
  CHECK(j.at("meta").at("truncation").contains("l_cutoff"));
}

TEST_CASE("gap pipeline: empirical, limit, compare") {
  const fs::path dir = scratch_dir() / "pipeline";
  REQUIRE(run({"stats", "gaps", "--t", "8", "--grid", "0.25:3:56", "--out-dir", (dir / "emp").string()}).code == 0);
  REQUIRE(run({"limit", "gaps", "--grid", "0.25:3:56", "--out-dir", (dir / "lim").string()}).code == 0);
  const std::string emp = (dir / "emp" / "stats_gaps.csv").string(), lim = (dir / "lim" / "limit_gaps.csv").string();
  check_csv_meta(slurp(emp));
  check_csv_meta(slurp(lim));
  const Result c = run({"compare", emp, lim, "--range", "0.25,3"});
  REQUIRE(c.code == 0);
  const json j = json::parse(c.out);
  MESSAGE("sup-norm " << j.at("sup_norm"));
  CHECK(j.at("sup_norm").get<double>() <= 0.05);
  CHECK(j.at("points").size() == 56);
  const Result same = run({"compare", emp, emp});
  CHECK(json::parse(same.out).at("sup_norm").get<double>() == 0.0);
}

TEST_CASE("identical config and seed give identical CSV bodies") {
  const std::vector<std::string> args{"stats", "count", "--observer", "boundary", "--samples", "3000", "--t", "6"};
  auto with_seed = [&](const std::string& seed) {
    auto a = args;
    a.insert(a.end(), {"--seed", seed});
    const Result r = run(a);
    REQUIRE(r.code == 0);
    return body_of(r.out);
  };
  CHECK(with_seed("5") == with_seed("5"));
  CHECK(with_seed("5") != with_seed("6"));
  const Result o1 = run({"orbit", "--t", "5"}), o2 = run({"orbit", "--t", "5"});
  CHECK(o1.out == o2.out);
  check_csv_meta(o1.out);
}

TEST_CASE("config files round-trip") {
  const fs::path dir = scratch_dir() / "config";
  fs::create_directories(dir);
  const std::string first = (dir / "first.toml").string(), second = (dir / "second.toml").string();
  const Result a = run({"--t", "6.5", "--seed", "9", "stats", "moments", "--observer", "boundary", "--samples", "2000",
                        "--beta", "1,2", "--box-lo", "0.25", "--save-config", first});
  REQUIRE(a.code == 0);
  const Result b = run({"--config", first, "--save-config", second});
  REQUIRE(b.code == 0);
  CHECK(slurp(first) == slurp(second));
  CHECK(a.out == b.out);
  // unknown keys in a config file are rejected
  std::ofstream(dir / "bad.toml") << "no_such_key=1\n[orbit]\n";
  CHECK(run({"--config", (dir / "bad.toml").string()}).code == 2);
}

TEST_CASE("remaining subcommands produce artifacts") {
  const fs::path dir = scratch_dir() / "misc";
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"project", "--t", "4"},
           {"project", "--mode", "horoball", "--t", "4"},
           {"orbit", "--mode", "horoball", "--t", "4", "--format", "bin"},
           {"stats", "nn", "--grid", "0.5,1", "--t", "6"},
           {"stats", "pair", "--grid", "0.5,1", "--t", "6", "--observer", "boundary"},
           {"fit", "theta", "--t-max", "8", "--t-truncate", "5"},
           {"nu", "--t-truncate", "5"},
           {"limit", "gapdensity", "--grid", "0.5,1"},
           {"limit", "nn", "--grid", "0.5,1", "--nu", "shell"},
           {"limit", "pair", "--grid", "0.5,1", "--calibrate-xi", "1", "--calibrate-value", "6"},
           {"packing", "gen", "--bound", "50"},
           {"packing", "stats", "--bound", "2000"}}) {
    const Result r = run(args);
    CHECK_MESSAGE(r.code == 0, args[0], " ", r.err);
    CHECK(!r.out.empty());
  }
  const Result p = run({"packing", "stats", "--bound", "2000"});
  const json j = json::parse(p.out);
  CHECK(j.at("duplicates") == 0);
  CHECK(j.at("worst_descartes").get<double>() < 1e-9);
  const Result out = run({"packing", "gen", "--bound", "50", "--out-dir", dir.string()});
  CHECK(json::parse(out.out).at("artifact") == (dir / "packing.csv").string());
  check_csv_meta(slurp(dir / "packing.csv"));
}
