#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "mobgossip/cli.hpp"
#include "mobgossip/csv.hpp"
#include "mobgossip/sweep.hpp"

using namespace mobgossip;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv = {"mobgossip"};
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

// Strips the wall_clock_ms column (always last) from every CSV line.
std::string without_wall_clock(const std::string& csv) {
    std::istringstream is(csv);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
        const auto cut = line.rfind(',');
        os << line.substr(0, cut) << '\n';
    }
    return os.str();
}

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "mobgossip_test";
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("csv escaping follows RFC 4180") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");

    std::ostringstream os;
    write_csv_row(os, {"a", "b,c", "d\"e"});
    CHECK(os.str() == "a,\"b,c\",\"d\"\"e\"\r\n");
}

TEST_CASE("csv parser round-trips quoted fields") {
    const std::string text = "x,y\r\n1,\"a,b\"\r\n2,\"q\"\"q\"\r\n";
    const CsvTable table = parse_csv(text);
    REQUIRE(table.header.size() == 2);
    CHECK(table.column("y") == 1);
    CHECK(table.column("missing") == -1);
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][1] == "a,b");
    CHECK(table.rows[1][1] == "q\"q");
}

TEST_CASE("result CSV header is frozen") {
    const auto header = result_header();
    std::ostringstream os;
    write_csv_row(os, header);
    CHECK(os.str() ==
          "schema,point,replicate,n,k,v,s,m,theta,phy,P,eta,alpha,beta,c_success,"
          "protocol,mobility,injection,seed,max_slots,t_median,t_max,t_probe,f_total,"
          "incomplete,total_slots,wall_clock_ms\r\n");
}

TEST_CASE("normalizer expressions evaluate factors against rows") {
    CsvTable table;
    table.header = {"n", "k", "T"};
    const std::vector<std::string> row = {"1024", "64", "500"};

    CHECK(Normalizer::parse("1").eval(table, row) == doctest::Approx(1.0));
    CHECK(Normalizer::parse("k").eval(table, row) == doctest::Approx(64.0));
    const double ln_n = std::log(1024.0);
    CHECK(Normalizer::parse("logn").eval(table, row) == doctest::Approx(ln_n));
    CHECK(Normalizer::parse("k*log2n").eval(table, row) ==
          doctest::Approx(64.0 * ln_n * ln_n));
    CHECK(Normalizer::parse("k/logn*2").eval(table, row) ==
          doctest::Approx(64.0 / ln_n * 2.0));
    CHECK_THROWS_AS(Normalizer::parse("missing").eval(table, row), std::invalid_argument);
}

TEST_CASE("replicate seed fan-out is injective across points and replicates") {
    std::set<std::uint64_t> seeds;
    for (int point = 0; point < 40; ++point) {
        for (int rep = 0; rep < 25; ++rep) {
            CHECK(seeds.insert(replicate_seed(12345, point, rep)).second);
        }
    }
}

TEST_CASE("cmd_run writes one deterministic row per replicate") {
    const fs::path dir = temp_dir();
    const fs::path out1 = dir / "run1.csv";
    const fs::path out2 = dir / "run2.csv";
    const std::vector<std::string> base = {
        "run",   "--n",   "64",        "--k",     "1",   "--v",    "0.333",
        "--protocol", "mobile_push", "--phy", "bernoulli", "--seed", "7",
        "--replicates", "3"};
    auto args = base;
    args.push_back("--out");
    args.push_back(out1.string());
    CHECK(run_cli(args) == 0);
    args = base;
    args.push_back("--out");
    args.push_back(out2.string());
    CHECK(run_cli(args) == 0);

    const CsvTable table = parse_csv(slurp(out1));
    CHECK(table.rows.size() == 3);
    CHECK(without_wall_clock(slurp(out1)) == without_wall_clock(slurp(out2)));
}

TEST_CASE("cmd_run exit codes: incomplete budget and bad config") {
    const fs::path dir = temp_dir();
    const fs::path out = dir / "budget.csv";
    CHECK(run_cli({"run", "--n", "512", "--k", "8", "--max-slots", "10", "--seed", "1",
                   "--out", out.string()}) == 3);
    const CsvTable table = parse_csv(slurp(out));
    const int col = table.column("incomplete");
    REQUIRE(col >= 0);
    CHECK(table.rows[0][col] == "1");

    CHECK(run_cli({"run", "--theta", "0.9", "--out", out.string()}) == 2);
}

TEST_CASE("cmd_sweep expands the cross-product and re-runs identically") {
    const fs::path dir = temp_dir();
    const fs::path spec_path = dir / "spec.json";
    const fs::path out1 = dir / "sweep1.csv";
    const fs::path out2 = dir / "sweep2.csv";
    spit(spec_path, R"({
      "base": {"k": 1, "v": 0.333, "phy_mode": "bernoulli", "seed": 11,
               "max_slots": 20000},
      "axes": {"n": [32, 64]},
      "replicates": 3
    })");
    CHECK(run_cli({"sweep", "--spec", spec_path.string(), "--out", out1.string(),
                   "--jobs", "1"}) == 0);
    CHECK(run_cli({"sweep", "--spec", spec_path.string(), "--out", out2.string(),
                   "--jobs", "4"}) == 0);
    const CsvTable table = parse_csv(slurp(out1));
    CHECK(table.rows.size() == 6);  // 2 points x 3 replicates
    // Scheduling must not affect the output bytes.
    CHECK(without_wall_clock(slurp(out1)) == without_wall_clock(slurp(out2)));

    // Rows are sorted by (point, replicate).
    const int pc = table.column("point");
    const int rc = table.column("replicate");
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        const int p0 = std::stoi(table.rows[i - 1][pc]);
        const int p1 = std::stoi(table.rows[i][pc]);
        CHECK(p1 >= p0);
        if (p0 == p1) {
            CHECK(std::stoi(table.rows[i][rc]) > std::stoi(table.rows[i - 1][rc]));
        }
    }
}

TEST_CASE("a sweep with an invalid point aborts before running") {
    const fs::path dir = temp_dir();
    const fs::path spec_path = dir / "bad_spec.json";
    const fs::path out = dir / "never.csv";
    spit(spec_path, R"({
      "base": {"k": 1, "seed": 3},
      "axes": {"n": [16], "v": [0.333, 0.9]},
      "replicates": 1
    })");
    CHECK(run_cli({"sweep", "--spec", spec_path.string(), "--out", out.string()}) == 2);
    CHECK(!fs::exists(out));
}

TEST_CASE("cmd_plot renders deterministic SVG and handles empty input") {
    const fs::path dir = temp_dir();
    const fs::path empty_csv = dir / "empty.csv";
    spit(empty_csv, "n,T\r\n");
    const fs::path svg1 = dir / "plot1.svg";
    const fs::path svg2 = dir / "plot2.svg";
    CHECK(run_cli({"plot", "--csv", empty_csv.string(), "--x", "n", "--y", "T", "--out",
                   svg1.string()}) == 0);
    const std::string body = slurp(svg1);
    CHECK(body.find("<svg") != std::string::npos);

    const fs::path data_csv = dir / "data.csv";
    spit(data_csv, "n,k,T\r\n256,1,40\r\n512,1,48\r\n1024,1,55\r\n");
    CHECK(run_cli({"plot", "--csv", data_csv.string(), "--x", "n", "--y", "T",
                   "--normalize", "logn", "--log-log", "--out", svg1.string()}) == 0);
    CHECK(run_cli({"plot", "--csv", data_csv.string(), "--x", "n", "--y", "T",
                   "--normalize", "logn", "--log-log", "--out", svg2.string()}) == 0);
    CHECK(slurp(svg1) == slurp(svg2));
    CHECK(slurp(svg1).find("circle") != std::string::npos);

    CHECK(run_cli({"plot", "--csv", data_csv.string(), "--x", "bogus", "--y", "T",
                   "--out", svg1.string()}) == 2);
}

TEST_CASE("protocol-by-mobility sweep ranks static push far behind mobile push") {
    // Desk-scale version of the protocol-ordering sweep: the static
    // random_push point completes much later than the mobile mobile_push one.
    ExperimentSpec spec;
    spec.base.n = 256;
    spec.base.k = 16;
    spec.base.v = 1.0 / 3.0;
    spec.base.c_success = 0.5;
    spec.base.max_slots = 300000;
    spec.base.seed = 5;
    spec.protocols = {Protocol::random_push, Protocol::mobile_push};
    spec.mobilities = {MobilityMode::edge_stay, MobilityMode::fixed};
    spec.replicates = 1;

    const auto rows = run_sweep(spec, 4);
    REQUIRE(rows.size() == 4);
    long long static_random = -1;
    long long mobile_mobile = -1;
    for (const auto& row : rows) {
        if (row.cfg.protocol == Protocol::random_push &&
            row.cfg.mobility == MobilityMode::fixed) {
            static_random = row.t_max;
        }
        if (row.cfg.protocol == Protocol::mobile_push &&
            row.cfg.mobility == MobilityMode::edge_stay) {
            mobile_mobile = row.t_max;
        }
    }
    REQUIRE(static_random > 0);
    REQUIRE(mobile_mobile > 0);
    CHECK(static_random > mobile_mobile);
}

TEST_CASE("oracle subcommands emit the documented CSV") {
    const fs::path dir = temp_dir();
    const fs::path out = dir / "oracle.csv";

    CHECK(run_cli({"oracle", "conductance", "--graph", "cycle4", "--out", out.string()}) == 0);
    CsvTable table = parse_csv(slurp(out));
    CHECK(table.rows[0][table.column("phi")] == "0.5");

    CHECK(run_cli({"oracle", "returns", "--horizon", "1", "--trials", "100000", "--out",
                   out.string()}) == 0);
    table = parse_csv(slurp(out));
    const double est = std::stod(table.rows[0][table.column("estimate")]);
    CHECK(std::abs(est - 1.0 / 9.0) <= 0.003);

    CHECK(run_cli({"oracle", "mixing", "--s", "3", "--out", out.string()}) == 0);
    table = parse_csv(slurp(out));
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][table.column("t_mix_powering")] ==
          table.rows[0][table.column("t_mix_iteration")]);

    CHECK(run_cli({"oracle", "hitting", "--s", "16", "--horizon", "3", "--trials", "5000",
                   "--out", out.string()}) == 0);
    table = parse_csv(slurp(out));
    CHECK(std::stod(table.rows[0][table.column("estimate")]) == 0.0);  // 2*3 < 16/2

    CHECK(run_cli({"oracle", "concentration", "--bins", "16", "--n", "256", "--trials",
                   "20", "--out", out.string()}) == 0);
    table = parse_csv(slurp(out));
    CHECK(table.rows[0][table.column("violations")] == "0");

    CHECK(run_cli({"oracle", "phy-constant", "--n", "128", "--slots", "20", "--out",
                   out.string()}) == 0);
    table = parse_csv(slurp(out));
    CHECK(std::stod(table.rows[0][table.column("success_rate")]) > 0.0);

    CHECK(run_cli({"oracle", "strip-profile", "--n", "96", "--k", "8", "--w", "4",
                   "--seed", "2", "--out", out.string()}) == 0);
    table = parse_csv(slurp(out));
    CHECK(table.rows.size() >= 1);  // one row per strip
    CHECK(std::stoll(table.rows[0][table.column("count")]) >= 1);

    CHECK(run_cli({"oracle", "bogus"}) == 2);
}

TEST_CASE("MOBGOSSIP_SEED is the fallback when no seed is given") {
    const fs::path dir = temp_dir();
    const fs::path out_env = dir / "env_seed.csv";
    const fs::path out_flag = dir / "flag_seed.csv";

    setenv("MOBGOSSIP_SEED", "4242", 1);
    CHECK(run_cli({"run", "--n", "32", "--k", "1", "--out", out_env.string()}) == 0);
    // The flag wins over the environment.
    CHECK(run_cli({"run", "--n", "32", "--k", "1", "--seed", "4242", "--out",
                   out_flag.string()}) == 0);
    unsetenv("MOBGOSSIP_SEED");
    CHECK(without_wall_clock(slurp(out_env)) == without_wall_clock(slurp(out_flag)));

    // A config-file seed beats the environment.
    const fs::path cfg_path = dir / "seeded.json";
    spit(cfg_path, R"({"n": 32, "k": 1, "seed": 4242})");
    setenv("MOBGOSSIP_SEED", "9999", 1);
    const fs::path out_file = dir / "file_seed.csv";
    CHECK(run_cli({"run", "--config", cfg_path.string(), "--out", out_file.string()}) == 0);
    unsetenv("MOBGOSSIP_SEED");
    CHECK(without_wall_clock(slurp(out_file)) == without_wall_clock(slurp(out_flag)));
}

TEST_CASE("series output is byte-identical across invocations") {
    const fs::path dir = temp_dir();
    const fs::path s1 = dir / "series1.txt";
    const fs::path s2 = dir / "series2.txt";
    for (const auto& path : {s1, s2}) {
        CHECK(run_cli({"run", "--n", "48", "--k", "2", "--seed", "21", "--series",
                       path.string(), "--out", (dir / "series_run.csv").string()}) == 0);
    }
    CHECK(slurp(s1) == slurp(s2));
    CHECK(slurp(s1).rfind("mobgossip.metrics.v1", 0) == 0);
}
