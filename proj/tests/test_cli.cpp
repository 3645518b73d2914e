// End-to-end checks of the command-line tool: exit codes, output
// determinism and config-file handling. OWC_BIN is injected by the build.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int run(const std::string& args)
{
    const std::string cmd = std::string(OWC_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("golden verification exit codes")
{
    CHECK(run("golden") == 0);
    CHECK(run("golden --perturb x1/demix-l") == 1);
    CHECK(run("golden --tolerance 0") == 1);
}

TEST_CASE("unknown flags and values are configuration errors")
{
    CHECK(run("papr --waveform nope") == 2);
    CHECK(run("required --no-such-flag") == 2);
    CHECK(run("") == 2);
}

TEST_CASE("repeated runs with one seed emit identical files")
{
    const std::string base = "papr --n 64 --m 16 --symbols 40 --seed 9 "
                             "--thresh-min 4 --thresh-max 12 --thresh-step 1 --out ";
    REQUIRE(run(base + "cli_a.csv") == 0);
    REQUIRE(run(base + "cli_b.csv") == 0);
    const std::string a = slurp("cli_a.csv");
    CHECK(!a.empty());
    CHECK(a == slurp("cli_b.csv"));
    CHECK(a.rfind("waveform,bias_db,threshold_db,ccdf\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);
    std::remove("cli_a.csv");
    std::remove("cli_b.csv");
}

TEST_CASE("json output is emitted when requested")
{
    REQUIRE(run("required --waveform x1 --m 4 --n 64 --symbols 30 --target-ber 1e-2 "
                "--format json --out cli_req.json")
            == 0);
    const std::string doc = slurp("cli_req.json");
    CHECK(doc.find("\"required_db\"") != std::string::npos);
    CHECK(doc.find("\"waveform\": \"x1\"") != std::string::npos);
    std::remove("cli_req.json");
}

TEST_CASE("options come from a config file, flags take precedence")
{
    {
        std::ofstream cfg("cli_cfg.ini");
        cfg << "[required]\n"
            << "waveform=x1\n"
            << "n=64\n"
            << "m=4\n"
            << "symbols=30\n"
            << "target-ber=1e-2\n";
    }
    REQUIRE(run("--config cli_cfg.ini required --out cli_cfgout.csv") == 0);
    const std::string out = slurp("cli_cfgout.csv");
    CHECK(out.find("x1,4,") != std::string::npos);

    // the command line overrides the file
    REQUIRE(run("--config cli_cfg.ini required --m 16 --out cli_cfgout.csv") == 0);
    CHECK(slurp("cli_cfgout.csv").find("x1,16,") != std::string::npos);

    {
        std::ofstream cfg("cli_cfg.ini", std::ios::app);
        cfg << "no-such-key=1\n";
    }
    CHECK(run("--config cli_cfg.ini required --out cli_cfgbad.csv") == 2);
    CHECK(slurp("cli_cfgbad.csv").empty()); // no partial output

    std::remove("cli_cfg.ini");
    std::remove("cli_cfgout.csv");
}
