#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "conedelta/report.hpp"

#ifndef CONEDELTA_BIN
#define CONEDELTA_BIN "conedelta"
#endif

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CONEDELTA_BIN) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("exit codes: success, invalid config, hardy gate") {
    CHECK(run_cli("bracket --alpha 1 --theta-deg 45 --n 100,400 --out cli_t1") == 0);
    CHECK(run_cli("spectrum --alpha 1 --theta-deg 120 --out cli_t2") == 1);
    CHECK(run_cli("spectrum --alpha 0 --theta-deg 45 --out cli_t3") == 1);
    // boundary angle: Hardy condition fails exactly at pi/6 with b=1
    CHECK(run_cli("certify --alpha 1 --theta-deg 30 --b-exp 1 --out cli_t4") == 1);
    std::remove("cli_t1.csv");
    std::remove("cli_t1.json");
}

TEST_CASE("outputs are deterministic for a fixed config") {
    const std::string cmd = "weyl --alpha 1 --theta-deg 45 --n 8,16 --p 0 --out cli_d --emit-plot-data";
    REQUIRE(run_cli(cmd) == 0);
    const std::string csv1 = slurp("cli_d.csv");
    const std::string dat1 = slurp("cli_d.dat");
    const std::string json1 = slurp("cli_d.json");
    REQUIRE(run_cli(cmd) == 0);
    CHECK(csv1 == slurp("cli_d.csv"));
    CHECK(dat1 == slurp("cli_d.dat"));
    CHECK(!dat1.empty());
    // JSON is identical except wall-clock timings
    auto r1 = conedelta::report::SpectralReport::from_json(json1);
    auto r2 = conedelta::report::SpectralReport::from_json(slurp("cli_d.json"));
    r1.timings_ms.clear();
    r2.timings_ms.clear();
    CHECK(r1.to_json() == r2.to_json());
    for (const char* e : {".csv", ".json", ".dat"})
        std::remove((std::string("cli_d") + e).c_str());
}

TEST_CASE("config file provides defaults, flags override") {
    {
        std::ofstream f("cli_cfg.ini");
        f << "[bracket]\nalpha = 2\nn = 100,400\nout = cli_cfgout\n";
    }
    CHECK(run_cli("--config cli_cfg.ini bracket") == 0);
    const std::string csv = slurp("cli_cfgout.csv");
    CHECK(csv.find("2.22222222222222") != std::string::npos);  // beta_eff = 2 * 10/9
    std::remove("cli_cfg.ini");
    std::remove("cli_cfgout.csv");
    std::remove("cli_cfgout.json");
}

TEST_CASE("certify reports truncation when the index recursion leaves 64-bit") {
    CHECK(run_cli("certify --alpha 1 --theta-deg 45 --kmax 4 --n 50 --out cli_tr") == 0);
    CHECK(slurp("cli_tr.json").find("certificate_truncated") != std::string::npos);
    for (const char* e : {".csv", ".json"}) std::remove((std::string("cli_tr") + e).c_str());
}

TEST_CASE("sweep subcommand with inline checks") {
    CHECK(run_cli("sweep --vary h --values 1,0.5,0.25 --rmax 8 --zext 8 "
                  "--alpha 1 --theta-deg 45 -k 2 --out cli_sw") == 0);
    const std::string js = slurp("cli_sw.json");
    CHECK(js.find("richardson_order") != std::string::npos);
    CHECK(run_cli("sweep --vary alpha --values 1,2 --rmax 8 --zext 8 --h 0.5 "
                  "--theta-deg 45 -k 2 --out cli_sw") == 0);
    const auto rep = conedelta::report::SpectralReport::from_json(slurp("cli_sw.json"));
    CHECK(rep.scalar("scaling_residual_1_to_2") <= 1e-9);  // exact dilation identity
    CHECK(run_cli("sweep --vary box --values 6,12 --h 0.5 --alpha 1 "
                  "--theta-deg 45 -k 2 --out cli_sw") == 0);
    CHECK(slurp("cli_sw.json").find("box_monotone_nonincreasing") != std::string::npos);
    for (const char* e : {".csv", ".json"}) std::remove((std::string("cli_sw") + e).c_str());
}

TEST_CASE("generatrix polyline ingestion") {
    {
        std::ofstream f("cli_poly.txt");
        f << "# r z polyline on the 45-degree ray\n0 0\n20 20\n";
    }
    CHECK(run_cli("spectrum --alpha 1 --theta-deg 45 --rmax 6 --h 0.5 -k 2 "
                  "--generatrix cli_poly.txt --out cli_gen") == 0);
    std::remove("cli_poly.txt");
    std::remove("cli_gen.csv");
    std::remove("cli_gen.json");
}
