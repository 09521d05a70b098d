#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fakemu/explicit_formula.hpp"

namespace fakemu {

enum class Classification { Persistent, Apparent, NoNonzeroBias, Unbounded, IntegerSpecial };
enum class SumMode { Direct, Formula };
enum class GridKind { Log, LogLog };

const char* to_string(Classification c);
const char* to_string(SumMode m);

inline constexpr double kBiasZeroTol = 1e-12;
inline constexpr double kMaxDirectTrajectoryX = 1e8;

struct BiasReport {
    FactorParams params;
    cplx c_half;
    Classification classification = Classification::NoNonzeroBias;
    // what the sign rule alone gives, ignoring integer parameters
    Classification general_rule = Classification::NoNonzeroBias;
    double re_z_plus_w = 0;
    double tail_estimate = 0;
    std::uint64_t prime_limit = 0;
    std::vector<std::string> notes;
};

struct TrajectorySample {
    double x = 0;
    cplx B;
    cplx B_centered;
    SumMode mode = SumMode::Formula;
};

// x^{1/2} (log x)^{w-1}
cplx bias_scale(double x, cplx w);

cplx B_of_x(const ExplicitFormula& f, double x, SumMode mode);
std::vector<cplx> B_of_xs(const ExplicitFormula& f, std::span<const double> xs, SumMode mode);

Classification classify_by_rule(double re_z_plus_w, cplx c_half);
BiasReport classify(const ExplicitFormula& f);
BiasReport classify(const EpsilonSpec& spec, const FormulaConfig& cfg = {});

cplx cesaro_mean(std::span<const TrajectorySample> samples, cplx b);

std::vector<double> make_grid(double x_min, double x_max, int n_points, GridKind grid);

std::vector<TrajectorySample> trajectory(const ExplicitFormula& f, double x_min, double x_max,
                                         int n_points, GridKind grid, SumMode mode, cplx center);

}  // namespace fakemu
