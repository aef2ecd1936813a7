#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "app.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace sld::cli;

namespace {

struct Captured {
  int rc;
  std::string out;
  std::string err;
};

// In-process invocation of the command-line entry point.
Captured invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "sld");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int rc = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {rc, out.str(), err.str()};
}

fs::path workdir() {
  const fs::path dir = SLD_TEST_WORKDIR;
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Exit status of the real executable, with stdout and stderr discarded.
int exec_status(const std::string& args) {
  const std::string cmd = std::string("\"") + SLD_EXECUTABLE + "\" " + args + " >/dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  REQUIRE(raw != -1);
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

struct Csv {
  std::string comment;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Csv parse_csv(const std::string& text) {
  Csv c;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, c.comment);
  std::getline(ss, line);
  c.header = split(line);
  while (std::getline(ss, line)) {
    if (!line.empty()) c.rows.push_back(split(line));
  }
  return c;
}

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

}  // namespace

TEST_CASE("config text parsing") {
  const auto kv = parse_config_text("# comment\n  N = 4   # trailing\n\npower_db=20\nsigma=0.05\n", "t.cfg");
  CHECK(kv.at("n") == "4");
  CHECK(kv.at("power-db") == "20");
  CHECK(kv.at("sigma") == "0.05");
  CHECK(kv.size() == 3);

  auto message = [](const std::string& text) {
    try {
      (void)parse_config_text(text, "t.cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("n = 4\nwat = 1\n").find("t.cfg:2") != std::string::npos);
  CHECK(message("n = 4\nwat = 1\n").find("unknown key 'wat'") != std::string::npos);
  CHECK(message("n = 4\nn = 5\n").find("set twice") != std::string::npos);
  CHECK(message("just text\n").find("expected 'key = value'") != std::string::npos);
  CHECK_THROWS_AS(read_config_file((workdir() / "missing.cfg").string()), IoError);
}

TEST_CASE("config layering and conversion") {
  SUBCASE("defaults, then file, then flags") {
    const auto cfg = build_config("fig2", {{"power", "50"}, {"epsilon", "0.02"}}, {{"power", "70"}});
    CHECK(cfg.params.power == 70.0);
    CHECK(cfg.params.secrecy_outage == 0.02);
    CHECK(cfg.params.antennas == 4);  // experiment default
    CHECK(cfg.sigma_list == std::vector<double>{0.05, 0.1, 0.2});
  }
  SUBCASE("power in dB is converted once") {
    CHECK(build_config("design", {}, {{"power-db", "20"}}).params.power == doctest::Approx(100.0).epsilon(1e-15));
    // A flag in dB replaces a linear value from the file and vice versa.
    CHECK(build_config("design", {{"power", "3"}}, {{"power-db", "10"}}).params.power == doctest::Approx(10.0));
    CHECK(build_config("design", {{"power-db", "10"}}, {{"power", "3"}}).params.power == 3.0);
    CHECK_THROWS_AS(build_config("design", {{"power", "3"}, {"power-db", "10"}}, {}), ConfigError);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(build_config("nope", {}, {}), ConfigError);
    CHECK_THROWS_AS(build_config("design", {{"n", "four"}}, {}), ConfigError);
    CHECK_THROWS_AS(build_config("design", {{"n", "1"}}, {}), sld::ParameterError);
    CHECK_THROWS_AS(build_config("design", {{"source", "magic"}}, {}), ConfigError);
    CHECK_THROWS_AS(build_config("fig2", {{"sweep-var", "power"}}, {}), ConfigError);
    CHECK_THROWS_AS(build_config("throughput", {{"sweep-var", "phi"}}, {}), ConfigError);
    CHECK_THROWS_AS(build_config("throughput", {{"sweep-start", "0"}}, {}), ConfigError);  // log axis
    CHECK_THROWS_AS(build_config("design", {{"json", "true"}, {"csv-row", "true"}}, {}), ConfigError);
  }
  SUBCASE("sweep axes") {
    const auto cfg = build_config("throughput", {}, {{"sweep-start", "1"}, {"sweep-stop", "100"}, {"sweep-points", "3"}});
    const auto v = cfg.axis.values();
    REQUIRE(v.size() == 3);
    CHECK(v[1] == doctest::Approx(10.0).epsilon(1e-14));
    CHECK_THROWS_AS(with_axis_value(cfg, "b1", 2.5), ConfigError);
    CHECK(with_axis_value(cfg, "b1", 12.0).params.cdi_bits == 12);
  }
}

TEST_CASE("config hash") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  const auto a = build_config("fig4", {}, {{"out", "x.csv"}, {"workers", "3"}});
  const auto b = build_config("fig4", {}, {});
  const auto c = build_config("fig4", {}, {{"seed", "7"}});
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.5e17, -7.25, 100.0}) {
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(INFINITY) == "inf");
}

TEST_CASE("table1 reproduces the required-bits grid") {
  const auto r = invoke({"table1"});
  REQUIRE(r.rc == 0);
  const auto csv = parse_csv(r.out);
  CHECK(csv.comment == "# sld-csv v1 experiment=table1");
  CHECK(csv.header == std::vector<std::string>{"sigma", "epsilon", "b1_min"});
  const int expected[12] = {1, 1, 1, 1, 1, 4, 7, 10, 1, 4, 7, 10};
  REQUIRE(csv.rows.size() == 12);
  for (int i = 0; i < 12; ++i) CHECK(std::stoi(csv.rows[static_cast<std::size_t>(i)][2]) == expected[i]);
}

TEST_CASE("design query") {
  SUBCASE("feasible input prints the design") {
    const auto r = invoke({"design", "--b1", "10", "--gain2", "4"});
    CHECK(r.rc == 0);
    for (const char* field : {"phi*", "Rb*", "Re*", "Rs*", "phi_max", "residual connection", "residual secrecy"}) {
      CHECK(r.out.find(field) != std::string::npos);
    }
  }
  SUBCASE("too few bits reports b1_min and exits 3") {
    const auto r = invoke({"design", "--b1", "5"});
    CHECK(r.rc == 3);
    CHECK(r.out.find("b1_min  = 6") != std::string::npos);
    CHECK(r.out.find("infeasible") != std::string::npos);
  }
  SUBCASE("json output") {
    const auto r = invoke({"design", "--json", "--n", "2", "--b1", "2", "--power", "1", "--sigma", "0.75",
                           "--epsilon", "0.25", "--gain2", "8"});
    REQUIRE(r.rc == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["feasible"] == true);
    CHECK(j["feasibility"]["mu_min"].get<double>() == doctest::Approx(4.0).epsilon(1e-12));
    const auto& d = j["design"];
    CHECK(d["rs_star"].get<double>() == doctest::Approx(d["rb_star"].get<double>() - d["re_star"].get<double>()));
    CHECK(std::abs(j["residuals"]["secrecy"].get<double>()) < 1e-9);
  }
  SUBCASE("json output when infeasible") {
    const auto r = invoke({"design", "--json", "--b1", "3"});
    CHECK(r.rc == 3);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["feasible"] == false);
    CHECK(j["feasibility"]["b1_min"] == 6);
  }
  SUBCASE("csv row agrees with dB input") {
    const auto lin = invoke({"design", "--csv-row", "--power", "100"});
    const auto db = invoke({"design", "--csv-row", "--power-db", "20"});
    REQUIRE(lin.rc == 0);
    const auto a = parse_csv(lin.out), b = parse_csv(db.out);
    REQUIRE(a.rows.size() == 1);
    CHECK(a.header.front() == "phi_star");
    CHECK(num(a.rows[0][3]) == doctest::Approx(num(b.rows[0][3])).epsilon(1e-12));
  }
}

TEST_CASE("config file with flag overrides") {
  const auto cfgfile = workdir() / "design.cfg";
  std::ofstream(cfgfile) << "# design settings\nn = 2\npower = 1000\nb1 = 8\nepsilon = 0.05\n";
  const auto from_file = invoke({"design", "--csv-row", "--config", cfgfile.string()});
  const auto overridden = invoke({"design", "--csv-row", "--config", cfgfile.string(), "--power", "10"});
  const auto direct = invoke({"design", "--csv-row", "--n", "2", "--power", "10", "--b1", "8", "--epsilon", "0.05"});
  REQUIRE(from_file.rc == 0);
  CHECK(overridden.out == direct.out);
  CHECK(from_file.out != direct.out);
}

TEST_CASE("exit codes of the executable") {
  CHECK(exec_status("table1") == 0);
  CHECK(exec_status("--version") == 0);
  CHECK(exec_status("design --no-such-flag 1") == 2);
  CHECK(exec_status("design --sigma abc") == 2);
  CHECK(exec_status("design --epsilon 1.5") == 2);
  CHECK(exec_status("design --epsilon 0") == 3);  // no finite bit budget suffices
  CHECK(exec_status("not-an-experiment") == 2);
  CHECK(exec_status("design --b1 3") == 3);
  CHECK(exec_status("bits-for-fraction --n 2 --epsilon 0.001") == 3);
  CHECK(exec_status("table1 --out /nonexistent-dir/x.csv") == 4);
  CHECK(exec_status("design --config /nonexistent-dir/x.cfg") == 4);
}

TEST_CASE("figure outputs") {
  SUBCASE("fig1 carries analytic and simulated columns") {
    const auto r = invoke({"fig1", "--draws", "20000", "--sweep-points", "4", "--phi-points", "49"});
    REQUIRE(r.rc == 0);
    const auto csv = parse_csv(r.out);
    CHECK(csv.header == std::vector<std::string>{"P", "sigma", "rs_closed_form", "rs_empirical", "std_err"});
    REQUIRE(csv.rows.size() == 8);
    for (std::size_t i = 1; i < csv.rows.size(); ++i) CHECK(num(csv.rows[i][0]) >= num(csv.rows[i - 1][0]));
    const auto& last = csv.rows.back();  // P = 100, sigma = 0.1
    CHECK(std::abs(num(last[2]) - num(last[3])) < 0.1);
  }
  SUBCASE("sweep-tau marks one argmax inside the expected band") {
    const auto r = invoke({"sweep-tau"});
    REQUIRE(r.rc == 0);
    const auto csv = parse_csv(r.out);
    CHECK(csv.header == std::vector<std::string>{"tau", "eta", "is_argmax"});
    int marks = 0;
    double tau = -1.0;
    for (const auto& row : csv.rows) {
      if (row[2] == "1") {
        ++marks;
        tau = num(row[0]);
      }
    }
    CHECK(marks == 1);
    CHECK(tau >= 0.10);
    CHECK(tau <= 0.35);
  }
  SUBCASE("surface has an interior maximizer at eps 0.009") {
    const auto r = invoke({"surface", "--epsilon-list", "0.009,0.033"});
    REQUIRE(r.rc == 0);
    const auto csv = parse_csv(r.out);
    std::vector<double> argmax;
    for (const auto& row : csv.rows) {
      if (row[3] == "1") argmax.push_back(num(row[1]));
    }
    REQUIRE(argmax.size() == 2);
    CHECK(argmax[0] > 0.05);
    CHECK(argmax[1] == 0.0);
  }
}

TEST_CASE("deterministic output and metadata sidecar") {
  const auto dir = workdir();
  const auto a = dir / "fig4_a.csv", b = dir / "fig4_b.csv";
  const std::vector<std::string> common = {"fig4", "--draws", "20000", "--sweep-points", "3", "--seed", "11"};
  auto args_a = common, args_b = common;
  args_a.insert(args_a.end(), {"--out", a.string()});
  args_b.insert(args_b.end(), {"--out", b.string(), "--workers", "2"});
  REQUIRE(invoke(args_a).rc == 0);
  REQUIRE(invoke(args_b).rc == 0);
  CHECK(slurp(a) == slurp(b));

  const auto meta_a = nlohmann::json::parse(slurp(a.string() + ".meta.json"));
  const auto meta_b = nlohmann::json::parse(slurp(b.string() + ".meta.json"));
  CHECK(meta_a["config_hash"] == meta_b["config_hash"]);
  CHECK(meta_a["seed"] == 11);
  CHECK(meta_a["experiment"] == "fig4");
  CHECK(meta_a.contains("version"));
  CHECK(meta_a.contains("generated_at"));
  CHECK(meta_a["conventions"].contains("perfect_feedback_baseline"));

  const auto c = dir / "fig4_c.csv";
  auto args_c = common;
  args_c[6] = "12";
  args_c.insert(args_c.end(), {"--out", c.string()});
  REQUIRE(invoke(args_c).rc == 0);
  CHECK(nlohmann::json::parse(slurp(c.string() + ".meta.json"))["config_hash"] != meta_a["config_hash"]);
}
