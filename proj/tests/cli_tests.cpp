#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::string g_cli;
std::filesystem::path g_dir;

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    auto out_path = g_dir / ("stdout." + std::to_string(counter));
    auto err_path = g_dir / ("stderr." + std::to_string(counter));
    ++counter;
    std::string cmd = env + g_cli + " " + args + " > " + out_path.string() +
                      " 2> " + err_path.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l)) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("precompute prints the constant rows") {
    RunResult r = run_cli("precompute");
    CHECK(r.code == 0);
    long long want[8] = {9869, 1772, 10, 1337, 967, 30, 173, 2886};
    bool found_i = false;
    for (const auto& line : lines_of(r.out)) {
        if (line.rfind("I ", 0) == 0) {
            std::istringstream in(line.substr(2));
            for (long long w : want) {
                long long got = -1;
                in >> got;
                CHECK(got == w);
            }
            found_i = true;
        }
        if (line.rfind("R ", 0) == 0) {
            std::istringstream in(line.substr(2));
            double expect[8] = {9.8696044, 1.7724539, 1.0, 1.3377607,
                                0.9672161, 0.03,      0.1732051, 2.8867513};
            for (double e : expect) {
                double got = -1;
                in >> got;
                CHECK(std::abs(got - e) <= 1e-3);
            }
        }
    }
    CHECK(found_i);
}

TEST_CASE("identical invocations produce identical bytes") {
    auto f1 = g_dir / "det1.csv";
    auto f2 = g_dir / "det2.csv";
    auto f3 = g_dir / "det3.csv";
    std::string flags =
        "simulate --scenario parent_loss --rdc xmac --rate 2 --duration 20 "
        "--seed 5 --sample-every 10 --out ";
    CHECK(run_cli(flags + f1.string()).code == 0);
    CHECK(run_cli(flags + f2.string()).code == 0);
    CHECK(slurp(f1) == slurp(f2));
    CHECK(!slurp(f1).empty());

    std::string other =
        "simulate --scenario parent_loss --rdc xmac --rate 2 --duration 20 "
        "--seed 6 --sample-every 10 --out ";
    CHECK(run_cli(other + f3.string()).code == 0);
    CHECK(slurp(f1) != slurp(f3));
}

TEST_CASE("duration zero yields a header-only report") {
    RunResult r = run_cli("simulate --duration 0");
    CHECK(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(!ls.empty());
    CHECK(ls.back() == "t_min,sigma_mAmin,remaining_metric,remaining_pct");
    for (const auto& l : ls) {
        if (!l.empty() && l[0] != '#') {
            CHECK(l == "t_min,sigma_mAmin,remaining_metric,remaining_pct");
        }
    }
}

TEST_CASE("duration suffixes are equivalent to minutes") {
    RunResult a = run_cli("simulate --duration 90s --seed 3");
    RunResult b = run_cli("simulate --duration 1.5 --seed 3");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("comparing a tier against itself reports zero difference") {
    RunResult r = run_cli(
        "compare --tiers float,float --duration 5 --rdc contikimac --rate 1");
    CHECK(r.code == 0);
    bool saw_row = false;
    for (const auto& l : lines_of(r.out)) {
        if (l.empty() || l[0] == '#' || l[0] == 't') continue;
        saw_row = true;
        auto comma = l.rfind(',');
        CHECK(l.substr(comma + 1) == "0.0000");
    }
    CHECK(saw_row);
}

TEST_CASE("every estimator tier runs") {
    for (std::string tier : {"float", "int", "linear", "oracle"}) {
        RunResult r =
            run_cli("simulate --duration 2 --estimator " + tier);
        CHECK(r.code == 0);
    }
}

TEST_CASE("kernel selection override is accepted") {
    RunResult r = run_cli("simulate --duration 2 --estimator oracle",
                          "BATTLIFE_KERNELS=scalar ");
    CHECK(r.code == 0);
}

TEST_CASE("ingest runs a trace end to end") {
    auto tr = g_dir / "ok.csv";
    spit(tr,
         "window,cpu_ms,lpm_ms,tx_ms,rx_ms\n"
         "0,100,1900,10,50\n"
         "1,600,1400,100,500\n"
         "2,0,2000,0,0\n");
    RunResult r = run_cli("ingest --trace " + tr.string() +
                          " --sample-every 1");
    CHECK(r.code == 0);
    auto ls = lines_of(r.out);
    REQUIRE(ls.size() > 4);
    CHECK(ls.back().substr(0, 6) == "0.1000");
}

TEST_CASE("a malformed trace line is reported by number") {
    auto tr = g_dir / "bad.csv";
    spit(tr,
         "0,500,CPU\n"
         "500,2000,LPM\n"
         "2000,2500,CPU\n"
         "2500,4000,LPM\n"
         "4000,4600,CPU\n"
         "4600,6000,LPM\n"
         "6000,5000,CPU\n");
    RunResult r = run_cli("ingest --trace " + tr.string());
    CHECK(r.code == 2);
    CHECK(r.err.find(":7") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("explode").code == 1);
    CHECK(run_cli("simulate --no-such-flag").code == 1);
    CHECK(run_cli("simulate --estimator bogus").code == 1);
    CHECK(run_cli("simulate --rate -2").code == 1);
    CHECK(run_cli("ingest").code == 1);
    CHECK(run_cli("project").code == 1);
    CHECK(run_cli("").code == 1);
}

TEST_CASE("validation errors exit 2") {
    CHECK(run_cli("simulate --config /nonexistent.ini").code == 2);
    CHECK(run_cli("simulate --profile imx8").code == 2);
    CHECK(run_cli("simulate --duration 5parsecs").code == 2);
    CHECK(run_cli("ingest --trace /nonexistent.csv").code == 2);
}

TEST_CASE("numeric faults exit 3") {
    auto rep = g_dir / "flat.csv";
    std::string text = "t_min,sigma_mAmin,remaining_metric,remaining_pct\n";
    for (int t = 0; t <= 30; ++t) {
        text += std::to_string(t) + ".0,1.0,100.0,50.0\n";
    }
    spit(rep, text);
    RunResult r = run_cli("project --in " + rep.string());
    CHECK(r.code == 3);
    CHECK(!r.err.empty());
}

TEST_CASE("help exits 0") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("simulate --help").code == 0);
}

TEST_CASE("simulate records the lifetime when the battery dies") {
    RunResult r = run_cli(
        "simulate --rdc constant --estimator linear --alpha-mAh 1 "
        "--duration 40 --sample-every 300");
    CHECK(r.code == 0);
    CHECK(r.out.find("# lifetime_min=") != std::string::npos);
}

TEST_CASE("projection over a dying run lands near the true lifetime") {
    auto rep = g_dir / "sics.csv";
    RunResult sim = run_cli(
        "simulate --rdc sicslowmac --duration 24h --sample-every 60 --out " +
        rep.string());
    CHECK(sim.code == 0);
    RunResult prj = run_cli("project --in " + rep.string());
    CHECK(prj.code == 0);
    auto ls = lines_of(prj.out);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0] == "scenario,slope_per_day,projected_days,rms");
    std::istringstream row(ls[1]);
    std::string name;
    std::getline(row, name, ',');
    CHECK(name == "steady/sicslowmac");
    std::string slope_s, days_s;
    std::getline(row, slope_s, ',');
    std::getline(row, days_s, ',');
    double days = std::stod(days_s);
    CHECK(days > 1.5);
    CHECK(days < 2.5);
}

int main(int argc, char** argv) {
    std::vector<char*> pass;
    pass.push_back(argv[0]);
    for (int i = 1; i < argc; ++i) {
        if (g_cli.empty() && argv[i][0] != '-' &&
            std::filesystem::exists(argv[i])) {
            g_cli = std::filesystem::absolute(argv[i]).string();
        } else {
            pass.push_back(argv[i]);
        }
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: cli_tests <path-to-battlife-binary>\n");
        return 2;
    }
    g_dir = std::filesystem::temp_directory_path() /
            ("battlife_cli_tests_" + std::to_string(::getpid()));
    std::filesystem::create_directories(g_dir);

    doctest::Context ctx;
    ctx.applyCommandLine(static_cast<int>(pass.size()), pass.data());
    int rc = ctx.run();
    std::error_code ec;
    std::filesystem::remove_all(g_dir, ec);
    return rc;
}
