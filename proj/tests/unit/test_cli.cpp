#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fakemu/bias.hpp"
#include "fakemu_cli/cli.hpp"
#include "json.hpp"
#include "test_util.hpp"

using fakemu::cli::run_cli;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run call(std::vector<std::string> args) {
    args.insert(args.begin(), "fakemu");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        rows.push_back(cells);
    }
    return rows;
}

std::string tmp_path(const char* name) { return std::string(FAKEMU_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("classify reports") {
    Run r = call({"classify", "--eps", "periodic:m=2:[i,-i]"});
    REQUIRE(r.code == 0);
    json j = json::parse(r.out);
    for (const char* k : {"z", "w", "re_z_plus_w", "c_half", "classification", "prime_limit", "tail_estimate"})
        CHECK(j.contains(k));
    CHECK(j["classification"] == "PERSISTENT");
    CHECK(std::abs(j["c_half"]["re"].get<double>() - 0.068434) <= 1e-3);
    CHECK(std::abs(j["c_half"]["im"].get<double>() - 0.103642) <= 1e-3);
    CHECK(j["prime_limit"] == 100000);

    Run a = call({"classify", "--eps", "cm:xi=exp(i*pi/3)"});
    REQUIRE(a.code == 0);
    json ja = json::parse(a.out);
    CHECK(ja["classification"] == "APPARENT");
    CHECK(std::abs(ja["re_z_plus_w"].get<double>()) <= 1e-10);
}

TEST_CASE("exit codes") {
    Run bad = call({"classify", "--eps", "finite:[bogus"});
    CHECK(bad.code == fakemu::cli::kExitParse);
    CHECK_FALSE(bad.err.empty());
    CHECK(bad.out.empty());
    CHECK(call({"classify", "--eps", "finite:[exp(i*0.9*pi),1]"}).code == fakemu::cli::kExitWindow);
    CHECK(call({"trajectory", "--eps", "periodic:m=2:[i,-i]", "--mode", "direct", "--x-max", "1e9"}).code ==
          fakemu::cli::kExitCapacity);
    CHECK(call({"classify"}).code == fakemu::cli::kExitParse);
    CHECK(call({"frobnicate"}).code == fakemu::cli::kExitParse);
    CHECK(call({"classify", "--eps", "finite:[-1]", "--a", "0.2"}).code == fakemu::cli::kExitParse);
    CHECK(call({"classify", "--eps", "finite:[-1]", "--format", "csv"}).code == fakemu::cli::kExitParse);
    CHECK(call({"trajectory", "--eps", "cm:xi=1", "--x-min", "1"}).code == fakemu::cli::kExitParse);
    CHECK(call({"watson", "--eps", "finite:[-1]", "--point", "zero:x"}).code == fakemu::cli::kExitParse);
    CHECK(call({"--help"}).code == 0);
}

TEST_CASE("trajectory csv layout and round trip") {
    Run r = call({"trajectory", "--eps", "cm:xi=1", "--x-min", "100", "--x-max", "1e4", "--points", "3",
                  "--mode", "formula"});
    REQUIRE(r.code == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"x", "re_B", "im_B", "re_B_centered", "im_B_centered", "mode"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].size() == 6);
        CHECK(rows[i][5] == "formula");
    }

    Run d = call({"trajectory", "--eps", "periodic:m=2:[i,-i]", "--x-min", "50", "--x-max", "2e4", "--points", "7",
                  "--mode", "direct"});
    REQUIRE(d.code == 0);
    auto dr = csv_rows(d.out);
    REQUIRE(dr.size() == 8);
    fakemu::ExplicitFormula F(fakemu::parse_eps_spec("periodic:m=2:[i,-i]"));
    auto mem = fakemu::trajectory(F, 50, 2e4, 7, fakemu::GridKind::Log, fakemu::SumMode::Direct, F.c_half());
    for (std::size_t i = 0; i < mem.size(); ++i) {
        CHECK(std::strtod(dr[i + 1][0].c_str(), nullptr) == mem[i].x);
        CHECK(std::strtod(dr[i + 1][1].c_str(), nullptr) == mem[i].B.real());
        CHECK(std::strtod(dr[i + 1][2].c_str(), nullptr) == mem[i].B.imag());
        CHECK(std::strtod(dr[i + 1][3].c_str(), nullptr) == mem[i].B_centered.real());
        CHECK(std::strtod(dr[i + 1][4].c_str(), nullptr) == mem[i].B_centered.imag());
        CHECK(dr[i + 1][5] == "direct");
    }
}

TEST_CASE("format_real round trips") {
    for (int n = 0; n < 2000; ++n) {
        double v = fakemu::test::uniform(-1, 1) * std::pow(10.0, fakemu::test::uniform(-300, 300));
        CHECK(std::strtod(fakemu::cli::format_real(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("deterministic output") {
    std::vector<std::string> args = {"trajectory", "--eps", "quadphase:alpha=0.3", "--x-min", "20", "--x-max",
                                     "5e4", "--points", "9", "--mode", "direct"};
    Run a = call(args), b = call(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    Run c = call({"classify", "--eps", "quadphase:alpha=0.3"});
    Run e = call({"classify", "--eps", "quadphase:alpha=0.3"});
    CHECK(c.out == e.out);
}

TEST_CASE("loglog grid and centring flag") {
    Run r = call({"trajectory", "--eps", "cm:xi=1", "--x-min", "10", "--x-max", "1e6", "--points", "6", "--grid",
                  "loglog", "--mode", "direct", "--no-center"});
    REQUIRE(r.code == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 7);
    std::vector<double> u;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double x = std::strtod(rows[i][0].c_str(), nullptr);
        u.push_back(std::log(std::log(x)));
        CHECK(rows[i][1] == rows[i][3]);
        CHECK(rows[i][2] == rows[i][4]);
    }
    for (std::size_t i = 2; i < u.size(); ++i) CHECK(u[i] - u[i - 1] == doctest::Approx(u[1] - u[0]).epsilon(1e-9));

    Run j = call({"trajectory", "--eps", "cm:xi=1", "--x-min", "10", "--x-max", "100", "--points", "2", "--format",
                  "json", "--mode", "direct"});
    REQUIRE(j.code == 0);
    json jj = json::parse(j.out);
    CHECK(jj["samples"].size() == 2);
}

TEST_CASE("evaluate breakdowns") {
    Run one = call({"evaluate", "--eps", "cm:xi=1", "--x", "100"});
    REQUIRE(one.code == 0);
    json j = json::parse(one.out);
    for (const char* k :
         {"x", "direct", "delta_1", "delta_half", "zero_sum", "per_zero", "total", "abs_discrepancy"})
        CHECK(j.contains(k));
    CHECK(std::abs(j["direct"]["re"].get<double>() - 99.50083) <= 1e-3);
    CHECK(std::abs(j["total"]["re"].get<double>() - 100.0) <= 1e-9);

    Run m3 = call({"evaluate", "--eps", "finite:[-1]", "--x", "1000"});
    Run m4 = call({"evaluate", "--eps", "finite:[-1]", "--x", "10000"});
    REQUIRE(m3.code == 0);
    REQUIRE(m4.code == 0);
    double K = json::parse(m3.out)["abs_discrepancy"].get<double>() / std::pow(1e3, 0.45);
    CHECK(json::parse(m4.out)["abs_discrepancy"].get<double>() <= K * std::pow(10.0, 1.8));
    CHECK(json::parse(m4.out)["per_zero"].size() == 60);

    Run l = call({"evaluate", "--eps", "cm:xi=-1", "--x", "1e6", "--mode", "formula"});
    REQUIRE(l.code == 0);
    json jl = json::parse(l.out);
    CHECK_FALSE(jl.contains("direct"));
    CHECK(std::abs(jl["total"]["re"].get<double>() / 1e3 + 0.6069) <= 0.3);

    CHECK(call({"evaluate", "--eps", "cm:xi=1", "--x", "2e9", "--mode", "direct"}).code ==
          fakemu::cli::kExitCapacity);
}

TEST_CASE("watson dump") {
    Run r = call({"watson", "--eps", "finite:[-1]", "--point", "one", "--order", "2", "--format", "csv"});
    REQUIRE(r.code == 0);
    auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == std::vector<std::string>{"k", "re_lambda", "im_lambda"});
    CHECK(std::abs(std::strtod(rows[1][1].c_str(), nullptr) - 1.0) <= 1e-12);

    Run z = call({"watson", "--eps", "periodic:m=2:[i,-i]", "--point", "zero:-2", "--order", "1"});
    REQUIRE(z.code == 0);
    CHECK(json::parse(z.out)["lambda"].size() == 2);
}

TEST_CASE("verify core suite") {
    Run r = call({"verify", "--suite", "core"});
    CHECK(r.code == 0);
    json j = json::parse(r.out);
    REQUIRE(j.size() == 1);
    CHECK(j[0]["failed"] == 0);
    CHECK(j[0]["passed"].get<int>() > 0);
}

TEST_CASE("config file and output path") {
    std::string cfg = tmp_path("cli_config.json");
    {
        std::ofstream f(cfg);
        f << "{\"prime_limit\": 20000, \"n_zeros\": 10, \"zeros_file\": \"" << FAKEMU_TEST_ZEROS_FILE << "\"}";
    }
    Run r = call({"classify", "--eps", "periodic:m=2:[i,-i]", "--config", cfg});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["prime_limit"] == 20000);
    Run o = call({"classify", "--eps", "periodic:m=2:[i,-i]", "--config", cfg, "--prime-limit", "30000"});
    CHECK(json::parse(o.out)["prime_limit"] == 30000);

    std::string bad = tmp_path("cli_bad_config.json");
    {
        std::ofstream f(bad);
        f << "{\"primes\": 5}";
    }
    CHECK(call({"classify", "--eps", "finite:[-1]", "--config", bad}).code == fakemu::cli::kExitParse);

    std::string out = tmp_path("cli_out.csv");
    Run w = call({"trajectory", "--eps", "cm:xi=1", "--x-min", "10", "--x-max", "100", "--points", "3", "--mode",
                  "direct", "--out", out});
    REQUIRE(w.code == 0);
    CHECK(w.out.empty());
    Run s = call({"trajectory", "--eps", "cm:xi=1", "--x-min", "10", "--x-max", "100", "--points", "3", "--mode",
                  "direct"});
    CHECK(slurp(out) == s.out);
}

}  // TEST_SUITE
