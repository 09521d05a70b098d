#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace fakemu::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,
    kExitParse = 2,
    kExitWindow = 3,
    kExitCapacity = 4,
};

struct RunConfig {
    std::string eps;
    std::uint64_t prime_limit = 100000;
    int n_zeros = 30;
    double a = 0.40;
    std::string zeros_file;
    std::string out;
    std::string format;  // empty picks the command's default
    std::string mode;
    std::string grid = "log";
    double x_min = 10;
    double x_max = 1e5;
    int points = 50;
    bool center = true;
    double x = 1e4;
    std::string point = "half";
    int order = 3;
    std::string suite = "core";
    std::string config_file;
};

// entry point used by the executable and the tests; never calls std::exit
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// 17 significant digits, round-trips every finite double
std::string format_real(double v);

}  // namespace fakemu::cli
