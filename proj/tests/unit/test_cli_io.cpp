#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "etsmc/cli.hpp"
#include "etsmc/config.hpp"
#include "etsmc/errors.hpp"
#include "etsmc/format.hpp"
#include "etsmc/plots.hpp"
#include "etsmc/report.hpp"
#include "etsmc/trace_io.hpp"

using namespace etsmc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("etsmc_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream o;
  o << in.rdbuf();
  return o.str();
}

int call(std::vector<std::string> args) {
  args.insert(args.begin(), "etsmc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

bool well_formed_svg(const fs::path& p) {
  boost::property_tree::ptree tree;
  std::ifstream in(p);
  boost::property_tree::read_xml(in, tree);
  return tree.count("svg") == 1;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("number formatting") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 10000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    REQUIRE(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(parse_double("+2.5") == 2.5);
  CHECK_THROWS(parse_double("2.5x"));
  CHECK_THROWS(parse_double(""));
}

TEST_CASE("configuration") {
  SUBCASE("empty document yields the reference defaults") {
    const Config c = parse_config("");
    CHECK(c.model.limb.m1 == 1.07);
    CHECK(c.model.limb.m2 == 0.89);
    CHECK(c.model.limb.I1 == 0.028);
    CHECK(c.model.limb.I2 == 0.002);
    CHECK(c.model.limb.k1 == 20000.0);
    CHECK(c.model.limb.k2 == 20000.0);
    CHECK(c.model.limb.B1 == 0.3);
    CHECK(c.model.limb.B2 == 0.3);
    CHECK(c.model.gains.c == 30.0);
    CHECK(c.model.gains.rho == 20.0);
    CHECK(c.model.gains.kp1 == 3.0);
    CHECK(c.model.gains.kp2 == 5.0);
    CHECK(c.model.trigger.eta == 0.3);
    CHECK(c.model.trigger.L_const == 0.85);
    CHECK(c.model.trigger.error_radius == 0.2);
    CHECK(c.sim.duration == 10.0);
    CHECK(c.sim.sampling_period == 0.01);
    CHECK(c.model.trajectory.gait().period == 10.0);
  }

  SUBCASE("errors name the key") {
    try {
      parse_config("[gains]\nc = -1\n");
      FAIL("accepted a negative sliding gain");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "gains.c");
    }
    try {
      parse_config("[limb]\nmass3 = 2\n");
      FAIL("accepted an unknown key");
    } catch (const ConfigError& e) {
      CHECK(e.key() == "limb.mass3");
    }
    CHECK_THROWS_AS(parse_config("[nope]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[gains]\nc = 1\nc = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[gains]\nc = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sim]\ncontroller = \"pid\"\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sim]\nintegration_step = 0.003\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[sea]\nreference_length1 = 0.2\n"), ConfigError);
  }

  SUBCASE("comments and overrides") {
    const Config c = parse_config("# top\n[gains] # trailing\nkp1 = 4.5  # note\n[sim]\ncontroller = \"tt-smc\"\n");
    CHECK(c.model.gains.kp1 == 4.5);
    CHECK(c.sim.controller_kind == ControllerKind::TimeTriggered);
  }

  SUBCASE("effective-config echo round-trip") {
    const Config c = parse_config("[trajectory]\nhip_amplitude = 0.2\n[sim]\nseed = 99\nhold_mode = \"full_uv\"\n");
    const std::string echo = dump_config(c);
    const Config back = parse_config(echo);
    CHECK(dump_config(back) == echo);
    CHECK(back.sim.seed == 99);
    CHECK(back.sim.hold_mode == HoldMode::FullUv);
    CHECK(back.model.trajectory.gait().hip_amplitude == 0.2);
    CHECK(dump_config(parse_config(dump_config(default_config()))) == dump_config(default_config()));
  }

  SUBCASE("shipped default file matches built-in defaults") {
    CHECK(dump_config(load_config(ETSMC_SOURCE_DIR "/config/default.toml")) == dump_config(default_config()));
  }

  SUBCASE("relative trajectory file resolves against the config directory") {
    const fs::path dir = scratch("trajfile");
    std::ofstream(dir / "gait.csv") << "t_s,theta_d1_rad,theta_d2_rad\n0,0,0.3\n5,0.1,0.4\n10,0,0.3\n";
    std::ofstream(dir / "cfg.toml") << "[trajectory]\nfile = \"gait.csv\"\n";
    const Config c = load_config((dir / "cfg.toml").string());
    CHECK(c.model.trajectory.tabulated());
    CHECK(c.model.trajectory.at(5.0).x_d[1] == doctest::Approx(0.4));
  }

  SUBCASE("missing file") { CHECK_THROWS_AS(load_config("/nonexistent/etsmc.toml"), ConfigError); }
}

TEST_CASE("trace CSV") {
  SimConfig cfg;
  const Model m;
  const RunResult r = run(cfg, m);
  const std::string text = format_trace(r.trace);

  CHECK(count_lines(text) == 1001);
  CHECK(text.substr(0, text.find('\n')) == kTraceHeader);
  CHECK(text.find('\r') == std::string::npos);

  const Trace back = parse_trace(text);
  CHECK(back == r.trace);
  CHECK(format_trace(back) == text);

  std::size_t ones = 0;
  for (const auto& rec : back) ones += rec.triggered;
  CHECK(ones == r.stats.trigger_count);

  const fs::path dir = scratch("csv");
  write_trace(r.trace, (dir / "a.csv").string());
  CHECK(slurp(dir / "a.csv") == text);
  write_trace(read_trace((dir / "a.csv").string()), (dir / "b.csv").string());
  CHECK(slurp(dir / "b.csv") == text);

  CHECK_THROWS(parse_trace("bad header\n"));
  CHECK_THROWS(parse_trace(std::string(kTraceHeader) + "\n0,1,2\n"));
  CHECK_THROWS(read_trace((dir / "missing.csv").string()));
}

TEST_CASE("plots") {
  SimConfig cfg;
  cfg.duration = 2.0;
  const Model m;
  const ComparisonReport rep = compare(cfg, m);

  const fs::path one = scratch("plots1");
  const auto single = emit_plots(rep.et_run.trace, one.string(), "et");
  CHECK(single.size() == 2);
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(one)) n += e.path().extension() == ".svg";
  CHECK(n == 2);

  const fs::path two = scratch("plots2");
  const auto all = emit_comparison_plots(rep.tt_run.trace, rep.et_run.trace, two.string());
  CHECK(all.size() == 5);
  for (const auto& p : all) CHECK(well_formed_svg(p));

  CHECK_THROWS(emit_plots(Trace{}, one.string(), "x"));

  const std::string tricky = svg_line_chart("a < b & \"c\"", "x", "y", {Series{"s&t", "#000", {0, 1}, {1, 2}}});
  std::istringstream in(tricky);
  boost::property_tree::ptree tree;
  CHECK_NOTHROW(boost::property_tree::read_xml(in, tree));
}

TEST_CASE("report from a stored trace") {
  SimConfig cfg;
  const Model m;
  const ComparisonReport rep = compare(cfg, m);
  const fs::path dir = scratch("report");
  write_trace(rep.et_run.trace, (dir / "et.csv").string());
  write_trace(rep.tt_run.trace, (dir / "tt.csv").string());
  CHECK(summary_kv(summarize(read_trace((dir / "et.csv").string())), "et") == summary_kv(rep.et, "et"));
  CHECK(summary_kv(summarize(read_trace((dir / "tt.csv").string())), "tt") == summary_kv(rep.tt, "tt"));

  const std::string kv = report_kv(rep);
  CHECK(kv.find("reduction_factor=" + format_double(static_cast<double>(rep.tt.trigger_count) /
                                                    static_cast<double>(rep.et.trigger_count))) != std::string::npos);
  CHECK(report_text(rep).find("reduction factor") != std::string::npos);
}

TEST_CASE("command line") {
  SUBCASE("compare writes the full output set") {
    const fs::path dir = scratch("compare");
    CHECK(call({"compare", "--config", ETSMC_SOURCE_DIR "/config/default.toml", "--out-dir", dir.string()}) == kExitOk);
    for (const char* f : {"tt_trace.csv", "et_trace.csv", "report.txt", "report.kv", "effective_config.toml",
                          "angles_tt.svg", "angles_et.svg", "errors_tt.svg", "errors_et.svg", "inter_event.svg"}) {
      CHECK_MESSAGE(fs::exists(dir / f), f);
    }
    CHECK(count_lines(slurp(dir / "et_trace.csv")) == 1001);
  }

  SUBCASE("simulate with overrides") {
    const fs::path dir = scratch("simulate");
    const fs::path out = dir / "run.csv";
    CHECK(call({"simulate", "--controller", "tt-smc", "--duration", "1", "--seed", "3", "--out", out.string(),
                "--plot-dir", dir.string()}) == kExitOk);
    CHECK(count_lines(slurp(out)) == 101);
    CHECK(fs::exists(dir / "run.effective.toml"));
    CHECK(fs::exists(dir / "angles_tt.svg"));
    const Config echo = load_config((dir / "run.effective.toml").string());
    CHECK(echo.sim.seed == 3);
    CHECK(echo.sim.controller_kind == ControllerKind::TimeTriggered);

    CHECK(call({"report", "--trace", out.string()}) == kExitOk);
  }

  SUBCASE("usage and config errors exit 1") {
    CHECK(call({"simulate"}) == kExitUsage);
    CHECK(call({"simulate", "--out", "/tmp/x.csv", "--bogus"}) == kExitUsage);
    CHECK(call({"report", "--trace", "/nonexistent/missing.csv"}) == kExitUsage);
    CHECK(call({"frobnicate"}) == kExitUsage);
    CHECK(call({}) == kExitUsage);
    const fs::path dir = scratch("badcfg");
    std::ofstream(dir / "bad.toml") << "[gains]\nc = -1\n";
    CHECK(call({"compare", "--config", (dir / "bad.toml").string(), "--out-dir", dir.string()}) == kExitUsage);
    CHECK(call({"simulate", "--dt", "0.003", "--out", (dir / "x.csv").string()}) == kExitUsage);
  }

  SUBCASE("divergence exits 2") {
    const fs::path dir = scratch("diverge");
    std::ofstream(dir / "div.toml") << "[sim]\ndivergence_norm = 0.001\n";
    CHECK(call({"simulate", "--config", (dir / "div.toml").string(), "--out", (dir / "x.csv").string()}) ==
          kExitDivergence);
  }

  SUBCASE("config from the environment") {
    const fs::path dir = scratch("env");
    std::ofstream(dir / "env.toml") << "[sim]\nduration = 0.5\n";
    ::setenv("ETSMC_CONFIG", (dir / "env.toml").string().c_str(), 1);
    const int rc = call({"simulate", "--out", (dir / "e.csv").string()});
    ::unsetenv("ETSMC_CONFIG");
    CHECK(rc == kExitOk);
    CHECK(count_lines(slurp(dir / "e.csv")) == 51);
  }

  SUBCASE("installed binary exit codes") {
    const fs::path dir = scratch("bin");
    const std::string bin = ETSMC_BIN;
    CHECK(std::system((bin + " report --trace /nonexistent.csv >/dev/null 2>&1").c_str()) != 0);
    const int rc = std::system((bin + " simulate --duration 0.2 --out " + (dir / "b.csv").string() + " >/dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    const int bad = std::system((bin + " simulate >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(bad) == 1);
  }
}
