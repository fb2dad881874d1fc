#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "momnoise/io.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args, const std::string& extra_env = "") {
    const std::string out_path = "cli_output.tmp";
    const std::string cmd =
        extra_env + " " + std::string(MOMNOISE_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    const int raw = std::system(cmd.c_str());
    RunResult res;
    res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    res.output = ss.str();
    return res;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("rate command reports certificates and exit codes") {
    const auto hb = run_cli("rate --family hb --kappa 4");
    CHECK(hb.exit_code == 0);
    CHECK(contains(hb.output, "rho = 0.333333333333333"));
    CHECK(contains(hb.output, "settling_time = 1.5"));

    const auto gd = run_cli("rate --alpha 0.4 --beta 0 --gamma 0 --m 1 --L 4");
    CHECK(gd.exit_code == 0);
    CHECK(contains(gd.output, "rho = 0.6"));

    CHECK(run_cli("rate --alpha 10 --m 1 --L 4").exit_code == 2);
    CHECK(run_cli("rate --alpha -0.5 --m 1 --L 4").exit_code == 1);
    CHECK(run_cli("rate --family hb").exit_code == 1);       // no range given
    CHECK(run_cli("rate --family bogus --kappa 4").exit_code == 1);
    CHECK(run_cli("bogus-command").exit_code == 1);

    const auto checked = run_cli("rate --family na --kappa 9 --grid-check");
    CHECK(checked.exit_code == 0);
    CHECK(contains(checked.output, "grid check"));
}

TEST_CASE("amplify command cross-checks the two variance routes") {
    const auto rep = run_cli("amplify --family hb --kappa 4 --n 3");
    CHECK(rep.exit_code == 0);
    CHECK(contains(rep.output, "jhat(m) = 1.58203125"));
    CHECK(contains(rep.output, "lyapunov cross-check"));
    CHECK(run_cli("amplify --alpha 3 --m 1 --L 4").exit_code == 2);
}

TEST_CASE("sweep emits machine-readable datasets that round-trip") {
    const auto done = run_cli(
        "sweep --family hb-like --kappa 100 --n 10 --noise iterate "
        "--grid 4:500:12:log --out sweep_rt.csv --format csv");
    CHECK(done.exit_code == 0);

    std::ifstream in("sweep_rt.csv");
    const momnoise::Dataset ds = momnoise::read_csv(in);
    CHECK(ds.schema == "momnoise/sweep/1");
    CHECK(ds.columns.size() == 21);
    CHECK(ds.rows.size() == 12);
    CHECK(contains(ds.rows.front()[7], "infeasible"));  // grid starts below the floor
    int feasible = 0;
    for (const auto& row : ds.rows) {
        if (row[7] != "ok") continue;
        ++feasible;
        for (size_t col = 8; col < row.size(); ++col) {
            const double parsed = std::strtod(row[col].c_str(), nullptr);
            CHECK(momnoise::format_full(parsed) == row[col]);  // exact numeric round trip
        }
    }
    CHECK(feasible >= 9);

    // jsonl mirrors the csv fields
    const auto jl = run_cli(
        "sweep --family na-like --kappa 16 --n 4 --noise gradient "
        "--grid 3.6:8.5:5 --out sweep_rt.jsonl --format jsonl");
    CHECK(jl.exit_code == 0);
    std::ifstream jin("sweep_rt.jsonl");
    const momnoise::Dataset jds = momnoise::read_jsonl(jin);
    CHECK(jds.schema == "momnoise/sweep/1");
    CHECK(jds.columns.size() == 21);
    CHECK(jds.rows.size() == 5);

    // an empty grid still yields a valid header-only dataset
    const auto empty = run_cli(
        "sweep --family hb-like --kappa 10 --grid-min 5 --grid-max 5 --grid-points 0 "
        "--out sweep_empty.csv");
    CHECK(empty.exit_code == 0);
    std::ifstream ein("sweep_empty.csv");
    const momnoise::Dataset eds = momnoise::read_csv(ein);
    CHECK(eds.columns.size() == 21);
    CHECK(eds.rows.empty());
}

TEST_CASE("verify scopes, fault injection, and exit codes") {
    const auto ct = run_cli("verify --scope continuous");
    CHECK(ct.exit_code == 0);
    CHECK(contains(ct.output, "all satisfied"));

    const auto fault = run_cli("verify --scope discrete --inject-fault jmin-ts-kappa2-lb");
    CHECK(fault.exit_code == 3);
    CHECK(contains(fault.output, "jmin-ts-kappa2-lb"));

    const auto mism = run_cli("verify --scope discrete --inject-fault oracle-agreement");
    CHECK(mism.exit_code == 4);
    CHECK(contains(mism.output, "oracle-agreement"));

    CHECK(run_cli("verify --scope bogus").exit_code == 1);
}

TEST_CASE("simulate is reproducible and exact for zero noise") {
    const std::string flags =
        "simulate --family hb --kappa 4 --n 2 --steps 20000 --trials 3 --seed 7 --format jsonl";
    const auto a = run_cli(flags + " --out sim_a.jsonl");
    const auto b = run_cli(flags + " --out sim_b.jsonl");
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    std::ifstream fa("sim_a.jsonl"), fb("sim_b.jsonl");
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(contains(sa.str(), "\"z_score\""));

    const auto quiet = run_cli("simulate --family gd --kappa 4 --n 2 --sigma 0 --steps 2000");
    CHECK(quiet.exit_code == 0);
    CHECK(contains(quiet.output, "estimate = 0 "));

    CHECK(run_cli("simulate --alpha 10 --m 1 --L 4 --steps 100").exit_code == 2);
}

TEST_CASE("continuous command covers the three tunings") {
    const auto hb = run_cli("continuous --kappa 4 --n 3 --kind agd-hb");
    CHECK(hb.exit_code == 0);
    CHECK(contains(hb.output, "rho = 0.5"));
    CHECK(contains(hb.output, "jmax = 4.5"));

    const auto gfd = run_cli("continuous --kappa 4 --n 3 --kind gfd");
    CHECK(gfd.exit_code == 0);
    CHECK(contains(gfd.output, "jmax = 4.5"));

    CHECK(run_cli("continuous --kappa 3 --kind agd-na").exit_code == 1);  // needs kappa >= 4
    CHECK(run_cli("continuous --kappa 4 --beta 2 --gamma -1").exit_code == 2);
}

TEST_CASE("config files map onto flags with unknown keys rejected") {
    {
        std::ofstream cfg("cli_cfg.ini");
        cfg << "# sweep configuration\n"
            << "command = sweep\n"
            << "family = hb-like\n"
            << "kappa = 25\n"
            << "n = 4\n"
            << "noise = gradient\n"
            << "format = csv\n"
            << "out = cfg_sweep.csv\n\n"
            << "[grid]\n"
            << "min = 3\n"
            << "max = 60\n"
            << "points = 6\n"
            << "spacing = log\n";
    }
    const auto ok = run_cli("sweep --config cli_cfg.ini");
    CHECK(ok.exit_code == 0);
    std::ifstream in("cfg_sweep.csv");
    const momnoise::Dataset ds = momnoise::read_csv(in);
    CHECK(ds.rows.size() == 6);
    CHECK(ds.rows.back()[1] == "gradient");

    // explicit flags take precedence over the file
    const auto over = run_cli("sweep --config cli_cfg.ini --n 2 --out cfg_sweep2.csv");
    CHECK(over.exit_code == 0);
    std::ifstream in2("cfg_sweep2.csv");
    CHECK(momnoise::read_csv(in2).rows.front()[3] == "2");

    {
        std::ofstream cfg("cli_bad.ini");
        cfg << "family = hb-like\nwarp_drive = on\n";
    }
    const auto bad = run_cli("sweep --config cli_bad.ini");
    CHECK(bad.exit_code == 1);
    CHECK(contains(bad.output, "warp_drive"));
}

TEST_CASE("datasets round-trip extreme values through both formats") {
    momnoise::Dataset ds;
    ds.schema = "momnoise/test/1";
    ds.columns = {"value", "label"};
    const double values[] = {1.0 / 3.0,          -0.0,   5e-324, 1.7976931348623157e308,
                             -2.2250738585072014e-308, 1e17,   0.1};
    for (double v : values) ds.add_row({momnoise::format_full(v), "x"});
    CHECK_THROWS_AS(ds.add_row({"lonely"}), std::invalid_argument);

    std::stringstream csv;
    momnoise::write_csv(ds, csv);
    const momnoise::Dataset back = momnoise::read_csv(csv);
    CHECK(back.schema == ds.schema);
    REQUIRE(back.rows.size() == ds.rows.size());
    for (size_t i = 0; i < ds.rows.size(); ++i) {
        const double parsed = std::strtod(back.rows[i][0].c_str(), nullptr);
        CHECK(momnoise::format_full(parsed) == ds.rows[i][0]);
    }

    std::stringstream jsonl;
    momnoise::write_jsonl(ds, jsonl);
    const momnoise::Dataset jback = momnoise::read_jsonl(jsonl);
    CHECK(jback.columns == ds.columns);
    CHECK(jback.rows == ds.rows);
}

TEST_CASE("environment variables stand in for flags") {
    const auto env = run_cli("rate --family hb", "MOMNOISE_KAPPA=9");
    CHECK(env.exit_code == 0);
    CHECK(contains(env.output, "rho = 0.5"));
}
