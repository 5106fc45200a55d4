#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "sincmbe/commands.hpp"
#include "sincmbe/energy_csv.hpp"
#include "sincmbe/snapshot.hpp"

using namespace sincmbe;
namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out.good());
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load_json(const std::string& path) {
  return nlohmann::json::parse(slurp(path));
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) {
    if (c == '\n') ++n;
  }
  return n;
}

std::string basic_config(const std::string& output_dir,
                         const std::string& extra_scheme = "",
                         const std::string& ic = "kind = trig") {
  return "[model]\nkind = sinc\neta_sq = 0.01\n"
         "[grid]\nn = 16\n"
         "[scheme]\nkind = imex\ntau = 0.05\nt_final = 0.5\n" +
         extra_scheme +
         "\n[ic]\n" + ic + "\n[output]\ndir = " + output_dir + "\n";
}

}  // namespace

TEST_CASE("simulate writes energy records, snapshots, and metadata") {
  testutil::TempDir td("cmd_sim");
  const std::string out_dir = td.str("out");
  write_text(td.str("run.ini"),
             basic_config(out_dir, "record_every = 2\nsnapshot_every = 5\n"));

  CHECK(cmd_simulate(td.str("run.ini"), {}) == kExitOk);

  const auto records = read_energy_csv(out_dir + "/energy.csv");
  REQUIRE(records.size() == 6);
  const std::vector<std::int64_t> expected_steps = {0, 2, 4, 6, 8, 10};
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].step == expected_steps[i]);
    CHECK(records[i].time ==
          doctest::Approx(0.05 * expected_steps[i]).epsilon(1e-15));
  }
  for (size_t i = 1; i < records.size(); ++i) {
    CHECK(records[i].energy <= records[i - 1].energy);
  }

  for (const char* name :
       {"snapshot_00000000.bin", "snapshot_00000005.bin",
        "snapshot_00000010.bin"}) {
    CHECK(fs::exists(fs::path(out_dir) / name));
  }
  const Snapshot last = read_snapshot(out_dir + "/snapshot_00000010.bin");
  CHECK(last.step == 10);
  CHECK(last.time == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(last.field.grid().nx == 16);
  CHECK(last.field.all_finite());

  const nlohmann::json meta = load_json(out_dir + "/metadata.json");
  CHECK(meta.at("command") == "simulate");
  CHECK(meta.at("config").at("model").at("kind") == "sinc");
  CHECK(meta.at("config").at("grid").at("nx") == 16);
  CHECK(meta.at("config").at("scheme").at("tau") == doctest::Approx(0.05));
  const auto& run = meta.at("run");
  CHECK(run.at("n_steps") == 10);
  CHECK(run.at("steps_completed") == 10);
  CHECK(run.at("t_final_actual") == doctest::Approx(0.5));
  CHECK(run.at("blowup") == false);
  CHECK(!run.contains("blowup_step"));
  CHECK(run.at("records_written") == 6);
  CHECK(run.at("snapshots_written") == 3);
}

TEST_CASE("simulate honors command line overrides") {
  testutil::TempDir td("cmd_ovr");
  write_text(td.str("run.ini"), basic_config(td.str("ignored")));

  CliOverrides overrides;
  overrides.output_dir = td.str("actual");
  overrides.record_every = 5;
  CHECK(cmd_simulate(td.str("run.ini"), overrides) == kExitOk);
  CHECK(!fs::exists(td.str("ignored")));

  const auto records = read_energy_csv(td.str("actual") + "/energy.csv");
  REQUIRE(records.size() == 3);
  CHECK(records[0].step == 0);
  CHECK(records[1].step == 5);
  CHECK(records[2].step == 10);

  SUBCASE("invalid override values are usage errors") {
    CliOverrides bad;
    bad.record_every = 0;
    CHECK(cmd_simulate(td.str("run.ini"), bad) == kExitUsage);
    bad = {};
    bad.snapshot_every = -1;
    CHECK(cmd_simulate(td.str("run.ini"), bad) == kExitUsage);
  }
}

TEST_CASE("simulate maps bad input to the usage exit code") {
  testutil::TempDir td("cmd_bad");
  CHECK(cmd_simulate(td.str("missing.ini"), {}) == kExitUsage);

  write_text(td.str("bad_eta.ini"),
             "[model]\nkind = sinc\neta_sq = 0\n[grid]\nn = 16\n"
             "[scheme]\nkind = imex\ntau = 0.05\nt_final = 0.5\n"
             "[ic]\nkind = trig\n");
  CHECK(cmd_simulate(td.str("bad_eta.ini"), {}) == kExitUsage);

  write_text(td.str("bad_ic.ini"),
             "[model]\nkind = sinc\neta_sq = 0.01\n[grid]\nn = 16\n"
             "[scheme]\nkind = imex\ntau = 0.05\nt_final = 0.5\n"
             "[ic]\nkind = file\npath = " +
                 td.str("no_such_snapshot.bin") + "\n");
  CHECK(cmd_simulate(td.str("bad_ic.ini"), {}) == kExitUsage);
}

TEST_CASE("simulate reports blowup through the exit code only on request") {
  // An aggressive step size on the classical model loses finiteness quickly.
  testutil::TempDir td("cmd_blow");
  const std::string body =
      "[model]\nkind = classical\neta_sq = 0.01\n[grid]\nn = 32\n"
      "[scheme]\nkind = imex\ntau = 0.5\nt_final = 50\nrecord_every = 50\n";
  write_text(td.str("soft.ini"),
             body + "[ic]\nkind = trig\n[output]\ndir = " + td.str("soft") +
                 "\n");
  write_text(td.str("hard.ini"),
             body + "fail_on_blowup = true\n[ic]\nkind = trig\n[output]\ndir = " +
                 td.str("hard") + "\n");

  CHECK(cmd_simulate(td.str("soft.ini"), {}) == kExitOk);
  const nlohmann::json meta = load_json(td.str("soft") + "/metadata.json");
  CHECK(meta.at("run").at("blowup") == true);
  REQUIRE(meta.at("run").contains("blowup_step"));
  const std::int64_t blowup_step = meta.at("run").at("blowup_step");
  CHECK(blowup_step > 0);
  CHECK(meta.at("run").at("steps_completed") == blowup_step - 1);

  CHECK(cmd_simulate(td.str("hard.ini"), {}) == kExitBlowup);
}

TEST_CASE("simulate artifacts are deterministic for a fixed seed") {
  testutil::TempDir td("cmd_det");
  const std::string scheme = "record_every = 1\nsnapshot_every = 5\n";
  const std::string ic = "kind = random\namplitude = 0.1\nseed = 11";
  write_text(td.str("r1.ini"),
             basic_config(td.str("r1"), scheme, ic));
  write_text(td.str("r2.ini"),
             basic_config(td.str("r2"), scheme, ic));

  CHECK(cmd_simulate(td.str("r1.ini"), {}) == kExitOk);
  CHECK(cmd_simulate(td.str("r2.ini"), {}) == kExitOk);
  CHECK(slurp(td.str("r1") + "/energy.csv") ==
        slurp(td.str("r2") + "/energy.csv"));
  CHECK(slurp(td.str("r1") + "/snapshot_00000005.bin") ==
        slurp(td.str("r2") + "/snapshot_00000005.bin"));

  CliOverrides reseed;
  reseed.output_dir = td.str("r3");
  reseed.seed = 12;
  CHECK(cmd_simulate(td.str("r1.ini"), reseed) == kExitOk);
  CHECK(slurp(td.str("r1") + "/energy.csv") !=
        slurp(td.str("r3") + "/energy.csv"));
}

TEST_CASE("compare runs both configs from the first config's datum") {
  testutil::TempDir td("cmd_cmp");
  const std::string ic_a = "kind = random\namplitude = 0.1\nseed = 3";
  write_text(td.str("a.ini"),
             basic_config(td.str("cmp"), "record_every = 1\n", ic_a));
  // B picks a different scheme and a different ic; the ic must be ignored.
  write_text(td.str("b.ini"),
             "[model]\nkind = sinc\neta_sq = 0.01\n[grid]\nn = 16\n"
             "[scheme]\nkind = bdf2\ntau = 0.025\nt_final = 0.5\n"
             "[ic]\nkind = trig\n");

  CHECK(cmd_compare(td.str("a.ini"), td.str("b.ini"), {}) == kExitOk);

  const auto rec_a = read_energy_csv(td.str("cmp") + "/a_energy.csv");
  const auto rec_b = read_energy_csv(td.str("cmp") + "/b_energy.csv");
  REQUIRE(rec_a.size() == 11);
  REQUIRE(rec_b.size() == 21);
  // Shared initial datum: the step-0 rows agree exactly.
  CHECK(rec_a[0].energy == rec_b[0].energy);
  CHECK(rec_a[0].l2_norm == rec_b[0].l2_norm);
  CHECK(rec_a[0].mass == rec_b[0].mass);

  const std::string joined = slurp(td.str("cmp") + "/compare.csv");
  CHECK(count_lines(joined) == 12);
  CHECK(joined.rfind("row,step_a,time_a,energy_a,step_b,time_b,energy_b\n",
                     0) == 0);

  const nlohmann::json meta = load_json(td.str("cmp") + "/metadata.json");
  CHECK(meta.at("command") == "compare");
  CHECK(meta.at("config_a").at("scheme").at("kind") == "imex");
  CHECK(meta.at("config_b").at("scheme").at("kind") == "bdf2");
  CHECK(meta.at("run_a").at("records_written") == 11);
  CHECK(meta.at("run_b").at("records_written") == 21);

  SUBCASE("output dir override relocates every artifact") {
    CliOverrides overrides;
    overrides.output_dir = td.str("cmp2");
    CHECK(cmd_compare(td.str("a.ini"), td.str("b.ini"), overrides) == kExitOk);
    CHECK(fs::exists(td.str("cmp2") + "/compare.csv"));
    CHECK(fs::exists(td.str("cmp2") + "/metadata.json"));
  }

  SUBCASE("mismatched grids are rejected") {
    write_text(td.str("b32.ini"),
               "[model]\nkind = sinc\neta_sq = 0.01\n[grid]\nn = 32\n"
               "[scheme]\nkind = bdf2\ntau = 0.025\nt_final = 0.5\n"
               "[ic]\nkind = trig\n");
    CHECK(cmd_compare(td.str("a.ini"), td.str("b32.ini"), {}) == kExitUsage);
  }
}

TEST_CASE("sweep writes the probe table and bracket metadata") {
  testutil::TempDir td("cmd_sweep");
  write_text(td.str("sw.ini"),
             "[model]\nkind = classical\neta_sq = 0.01\n[grid]\nn = 32\n"
             "[scheme]\nkind = imex\ntau = 0.01\nt_final = 2\n"
             "[ic]\nkind = trig\n[output]\ndir = " +
                 td.str("sw") +
                 "\n[sweep]\ntaus = 0.005, 0.5\nrefine_iters = 0\n");

  CHECK(cmd_sweep(td.str("sw.ini"), {}) == kExitOk);

  const std::string table = slurp(td.str("sw") + "/sweep.csv");
  CHECK(count_lines(table) == 3);
  CHECK(table.rfind("tau,holds,first_violation_step,max_increase,tol\n", 0) ==
        0);
  CHECK(table.find("\n0.005", 0) != std::string::npos);
  CHECK(table.find(",1,") != std::string::npos);   // small tau holds
  CHECK(table.find(",0,") != std::string::npos);   // large tau fails

  const nlohmann::json meta = load_json(td.str("sw") + "/metadata.json");
  CHECK(meta.at("command") == "sweep");
  CHECK(meta.at("sweep").at("refine_iters") == 0);
  CHECK(meta.at("sweep").at("probes") == 2);
  CHECK(meta.at("sweep").at("taus").size() == 2);
  CHECK(meta.at("sweep").at("tau_lo") == doctest::Approx(0.005));
  CHECK(meta.at("sweep").at("tau_hi") == doctest::Approx(0.5));

  SUBCASE("a config without sweep taus is a usage error") {
    write_text(td.str("no_sweep.ini"), basic_config(td.str("ns")));
    CHECK(cmd_sweep(td.str("no_sweep.ini"), {}) == kExitUsage);
  }
}

TEST_CASE("verify passes on a reduced budget and validates its options") {
  std::ostringstream captured;
  std::streambuf* prev = std::cout.rdbuf(captured.rdbuf());
  VerifyOptions small;
  small.samples = 2000;
  small.seed = 7041;
  small.grid_n = 32;
  const int rc = cmd_verify(small);
  std::cout.rdbuf(prev);

  CHECK(rc == kExitOk);
  CHECK(captured.str().find("[ok]") != std::string::npos);
  CHECK(captured.str().find("[FAIL]") == std::string::npos);

  VerifyOptions bad = small;
  bad.samples = 0;
  CHECK(cmd_verify(bad) == kExitUsage);
  bad = small;
  bad.grid_n = 33;
  CHECK(cmd_verify(bad) == kExitUsage);
}
