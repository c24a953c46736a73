#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "quotapower/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace quotapower;

namespace {

struct CliRun {
    int rc = -1;
    std::string out;
    std::string err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun result;
    result.rc = run_cli(args, out, err);
    result.out = out.str();
    result.err = err.str();
    return result;
}

std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "quotapower_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string write_temp(const std::string& name, const std::string& content) {
    auto path = temp_dir() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* const kGameJson = R"({"weights":[4,2,1],"quota":{"num":3,"den":1}})";

const char* const kPowerAtQ3 =
    "agent_index,value_num,value_den,value_float\n"
    "1,2,3,0.66666666666666663\n"
    "2,1,6,0.16666666666666666\n"
    "3,1,6,0.16666666666666666\n";

}  // namespace

TEST_CASE("compute: game file to power CSV") {
    const std::string game = write_temp("g.json", kGameJson);
    CliRun r = run({"compute", "--game", game});
    CHECK(r.rc == 0);
    CHECK(r.out == kPowerAtQ3);
    CHECK(r.err.find("# config: compute") != std::string::npos);
    CHECK(r.err.find("quota=3/1") != std::string::npos);

    // Quota override moves the pivotal set to {1,2}.
    CliRun o = run({"compute", "--game", game, "--quota", "6"});
    CHECK(o.rc == 0);
    CHECK(o.out ==
          "agent_index,value_num,value_den,value_float\n"
          "1,1,2,0.5\n"
          "2,1,2,0.5\n"
          "3,0,1,0\n");

    // Decimal quotas parse exactly.
    CliRun d = run({"compute", "--game", game, "--quota", "5.5"});
    CHECK(d.rc == 0);
    CHECK(d.out == o.out);  // same integer threshold ceil(q) = 6
}

TEST_CASE("compute: output file instead of stdout") {
    const std::string game = write_temp("g.json", kGameJson);
    const std::string out_path = (temp_dir() / "power.csv").string();
    CliRun r = run({"compute", "--game", game, "--output", out_path});
    CHECK(r.rc == 0);
    CHECK(r.out.empty());
    CHECK(read_file(out_path) == kPowerAtQ3);
}

TEST_CASE("compute: domain errors exit 1") {
    CliRun missing = run({"compute", "--game", (temp_dir() / "nope.json").string()});
    CHECK(missing.rc == 1);
    CHECK(missing.err.find("cannot open game file") != std::string::npos);

    const std::string broken = write_temp("broken.json", "{\"weights\": [4, 2");
    CliRun malformed = run({"compute", "--game", broken});
    CHECK(malformed.rc == 1);
    CHECK(malformed.err.find("malformed JSON") != std::string::npos);

    const std::string no_quota = write_temp("noq.json", R"({"weights":[4,2,1]})");
    CliRun quota_less = run({"compute", "--game", no_quota});
    CHECK(quota_less.rc == 1);
    CHECK(quota_less.err.find("no quota") != std::string::npos);

    const std::string zero_q = write_temp("zeroq.json",
                                          R"({"weights":[4,2,1],"quota":{"num":0,"den":1}})");
    CHECK(run({"compute", "--game", zero_q}).rc == 1);
}

TEST_CASE("usage errors exit 2, help exits 0") {
    const std::string game = write_temp("g.json", kGameJson);
    CHECK(run({"compute", "--bogus"}).rc == 2);
    CHECK(run({"diff", "--game", game}).rc == 2);        // missing -i/-j
    CHECK(run({"compute", "--quota", "x/y"}).rc == 2);   // rational syntax
    CHECK(run({}).rc == 2);                              // subcommand required
    CHECK(run({"nonsense"}).rc == 2);

    CliRun help = run({"--help"});
    CHECK(help.rc == 0);
    CHECK(help.out.find("Usage: quotapower") != std::string::npos);
    CliRun sub_help = run({"si", "--help"});
    CHECK(sub_help.rc == 0);
    CHECK(sub_help.out.find("super-increasing") != std::string::npos);
}

TEST_CASE("diff: absolute pairwise difference") {
    const std::string game = write_temp("g.json", kGameJson);
    CliRun r = run({"diff", "--game", game, "-i", "2", "-j", "1"});
    CHECK(r.rc == 0);
    CHECK(r.out ==
          "i,j,diff_num,diff_den,diff_float\n"
          "2,1,1,2,0.5\n");
    CliRun sym = run({"diff", "--game", game, "-i", "1", "-j", "2"});
    CHECK(sym.out == "i,j,diff_num,diff_den,diff_float\n1,2,1,2,0.5\n");
    CHECK(run({"diff", "--game", game, "-i", "2", "-j", "2"}).rc == 1);
}

TEST_CASE("si pset: spec text output") {
    CliRun r = run({"si", "pset", "--weights", "4,2,1", "--quota", "3"});
    CHECK(r.rc == 0);
    CHECK(r.out ==
          "pset: {2,3}\n"
          "beta: 3\n"
          "interval: (2, 3]\n");

    // Ascending input is accepted and reindexed heaviest-first.
    CliRun rev = run({"si", "pset", "--weights", "1,2,4", "--quota", "3"});
    CHECK(rev.out == r.out);

    CliRun base = run({"si", "pset", "--base", "2", "-n", "3", "--quota", "3"});
    CHECK(base.out == r.out);

    CHECK(run({"si", "pset", "--weights", "4,2,1", "--quota", "8"}).rc == 1);  // > w(N)
    CHECK(run({"si", "pset", "--weights", "3,2,1", "--quota", "3"}).rc == 1);  // not SI
    CHECK(run({"si", "pset", "--weights", "2,4,1", "--quota", "3"}).rc == 1);  // unsorted
    CHECK(run({"si", "pset", "--quota", "3"}).rc == 2);  // no weights given
}

TEST_CASE("si shapley: closed form matches compute") {
    const std::string game = write_temp("g.json", kGameJson);
    CliRun direct = run({"compute", "--game", game});
    CliRun closed = run({"si", "shapley", "--weights", "4,2,1", "--quota", "3"});
    CHECK(closed.rc == 0);
    CHECK(closed.out == direct.out);

    CliRun one = run({"si", "shapley", "--base", "2", "-n", "3", "--quota", "3", "--agent", "1"});
    CHECK(one.out ==
          "agent_index,value_num,value_den,value_float\n"
          "1,2,3,0.66666666666666663\n");
}

TEST_CASE("si breakpoints: full table for base 2") {
    CliRun r = run({"si", "breakpoints", "--base", "2", "-n", "2"});
    CHECK(r.rc == 0);
    CHECK(r.out ==
          "beta,pset,lower_num,lower_den,upper_num,upper_den,phi1_num,phi1_den,phi2_num,phi2_den\n"
          "1,\"2\",0,1,1,1,1,2,1,2\n"
          "2,\"1\",1,1,2,1,1,1,0,1\n"
          "3,\"1,2\",2,1,3,1,1,2,1,2\n");
}

TEST_CASE("si limit: exact stabilized values") {
    CliRun r = run({"si", "limit", "--base", "2", "--quota", "3/8", "--agent", "1"});
    CHECK(r.rc == 0);
    CHECK(r.out ==
          "agent,value_num,value_den,value_float,error_num,error_den\n"
          "1,2,3,0.66666666666666663,0,1\n");

    CliRun all = run({"si", "limit", "--base", "3", "--quota", "2/5", "--depth", "24"});
    CHECK(all.rc == 0);
    // phi = (1/2, 1/2, 0, 0, ...) exactly at q = 2/5 in base 3.
    CHECK(all.out.find("\n1,1,2,0.5,0,1\n") != std::string::npos);
    CHECK(all.out.find("\n2,1,2,0.5,0,1\n") != std::string::npos);
    CHECK(all.out.find("\n3,0,1,0,0,1\n") != std::string::npos);

    CHECK(run({"si", "limit", "--base", "2", "--quota", "2"}).rc == 1);  // outside (0, 1/(d-1))
}

TEST_CASE("sample: deterministic, round-trips into compute and sweep") {
    const std::vector<std::string> cmd = {"sample", "-n", "4", "-m",   "1200",
                                          "--seed", "7", "--uniform"};
    CliRun a = run(cmd);
    CliRun b = run(cmd);
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"weights\"") != std::string::npos);
    CHECK(a.err.find("distribution=uniform") != std::string::npos);

    const std::string sample_path = write_temp("sample.json", a.out);
    CliRun comp = run({"compute", "--game", sample_path, "--quota", "601"});
    CHECK(comp.rc == 0);
    CliRun swept = run({"sweep", "--game", sample_path, "--quotas", "601"});
    CHECK(swept.rc == 0);
    // Same values through both paths.
    std::istringstream sweep_rows(swept.out);
    std::string header, row;
    std::getline(sweep_rows, header);
    std::getline(sweep_rows, row);
    CHECK(row.substr(0, 6) == "601,1,");
    CHECK(comp.out.find(row.substr(6)) != std::string::npos);

    CliRun expo = run({"sample", "-n", "3", "-m", "1000", "--seed", "1", "--rho", "2/5"});
    CHECK(expo.rc == 0);

    const std::string probs = write_temp("probs.txt", "1/2\n0.25\n# comment\n1/4\n");
    CliRun from_file = run({"sample", "-n", "3", "-m", "500", "--seed", "2", "--probs", probs});
    CHECK(from_file.rc == 0);

    const std::string short_probs = write_temp("short.txt", "1/2\n1/2\n");
    CHECK(run({"sample", "-n", "3", "-m", "500", "--seed", "2", "--probs", short_probs}).rc == 1);
    CHECK(run({"sample", "-n", "3", "-m", "500", "--seed", "2"}).rc == 2);  // no distribution
    CHECK(run({"sample", "-n", "3", "-m", "500", "--uniform"}).rc == 2);    // no seed
    CHECK(run({"sample", "-n", "3", "-m", "500", "--seed", "2", "--uniform", "--rho", "1/3"}).rc ==
          2);
}

TEST_CASE("sweep: grids, ordering, and exclusions") {
    const std::string game = write_temp("g.json", kGameJson);
    CliRun lin = run({"sweep", "--game", game, "--linspace", "1:7:4"});
    CHECK(lin.rc == 0);
    CHECK(lin.out ==
          "quota_num,quota_den,agent,phi_num,phi_den,phi_float\n"
          "1,1,1,1,3,0.33333333333333331\n"
          "1,1,2,1,3,0.33333333333333331\n"
          "1,1,3,1,3,0.33333333333333331\n"
          "3,1,1,2,3,0.66666666666666663\n"
          "3,1,2,1,6,0.16666666666666666\n"
          "3,1,3,1,6,0.16666666666666666\n"
          "5,1,1,2,3,0.66666666666666663\n"
          "5,1,2,1,6,0.16666666666666666\n"
          "5,1,3,1,6,0.16666666666666666\n"
          "7,1,1,1,3,0.33333333333333331\n"
          "7,1,2,1,3,0.33333333333333331\n"
          "7,1,3,1,3,0.33333333333333331\n");

    // Unsorted duplicate quota lists come out ascending and deduplicated.
    CliRun listed = run({"sweep", "--game", game, "--quotas", "6,3,3", "--agents", "1"});
    CHECK(listed.rc == 0);
    CHECK(listed.out ==
          "quota_num,quota_den,agent,phi_num,phi_den,phi_float\n"
          "3,1,1,2,3,0.66666666666666663\n"
          "6,1,1,1,2,0.5\n");

    CliRun bp = run({"sweep", "--game", game, "--breakpoints", "--midpoints", "--agents", "1"});
    CHECK(bp.rc == 0);
    // 7 breakpoints and 7 midpoints (the first interval's midpoint included).
    CHECK(std::count(bp.out.begin(), bp.out.end(), '\n') == 15);

    CHECK(run({"sweep", "--game", game, "--quotas", "3", "--linspace", "1:7:4"}).rc == 2);
    CHECK(run({"sweep", "--game", game, "--midpoints"}).rc == 2);  // needs --breakpoints
    CHECK(run({"sweep", "--game", game}).rc == 2);                 // no grid at all
    CHECK(run({"sweep", "--game", game, "--linspace", "1:7"}).rc == 2);
    CHECK(run({"sweep", "--game", game, "--quotas", "9"}).rc == 1);  // above w(N)
}

TEST_CASE("experiment: reports in JSON and CSV") {
    const std::vector<std::string> base = {"experiment", "min-shapley", "-n",      "2",
                                           "-m",         "100",         "--ell",   "1",
                                           "--trials",   "3",           "--seed",  "5"};
    CliRun a = run(base);
    CliRun b = run(base);
    CHECK(a.rc == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"tag\"") != std::string::npos);
    CHECK(a.out.find("\"trial_count\": 3") != std::string::npos);
    CHECK(a.err.find("# config: experiment") != std::string::npos);

    auto csv_cmd = base;
    csv_cmd.push_back("--csv");
    CliRun c = run(csv_cmd);
    CHECK(c.rc == 0);
    CHECK(c.out.substr(0, 48) == "trial,seed,weights_digest,measured,success,note\n");

    CliRun equal = run({"experiment", "equal-power", "-n", "4", "-m", "1200", "--trials", "2",
                        "--seed", "77"});
    CHECK(equal.rc == 0);
    CHECK(equal.out.find("\"success_fraction\": 1.0") != std::string::npos);

    // A quota sitting exactly on a multiple of m/n is refused.
    CliRun refused = run({"experiment", "equal-power", "-n", "4", "-m", "1200", "--trials", "2",
                          "--seed", "77", "--quotas", "300"});
    CHECK(refused.rc == 1);
    CHECK(refused.err.find("error:") != std::string::npos);

    CliRun thin = run({"experiment", "exponential", "-n", "5", "--rho", "2/5", "-m", "1000",
                       "--trials", "2", "--seed", "3"});
    CHECK(thin.rc == 1);
    CHECK(thin.err.find("31435") != std::string::npos);

    CHECK(run({"experiment", "min-shapley", "-n", "2", "-m", "100", "--ell", "1", "--trials",
               "3"}).rc == 2);  // missing --seed
}

TEST_CASE("verify: identity and oracle suites") {
    CliRun id = run({"verify", "identities", "--p-max", "12", "--k-max", "6"});
    CHECK(id.rc == 0);
    CHECK(id.out == "identities: 612 checks passed\n");

    CliRun oracle = run({"verify", "oracle", "--games", "10", "--seed", "9"});
    CHECK(oracle.rc == 0);
    CHECK(oracle.out == "oracle: 20 checks passed\n");

    CHECK(run({"verify", "oracle", "--games", "10"}).rc == 2);  // missing --seed
}
