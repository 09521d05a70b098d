#include "fakemu/bias.hpp"

#include <cmath>
#include <string>

#include "fakemu/errors.hpp"
#include "fakemu/sieve.hpp"

namespace fakemu {

const char* to_string(Classification c) {
    switch (c) {
        case Classification::Persistent: return "PERSISTENT";
        case Classification::Apparent: return "APPARENT";
        case Classification::NoNonzeroBias: return "NO_NONZERO_BIAS";
        case Classification::Unbounded: return "UNBOUNDED";
        case Classification::IntegerSpecial: return "INTEGER_SPECIAL";
    }
    return "?";
}

const char* to_string(SumMode m) { return m == SumMode::Direct ? "direct" : "formula"; }

cplx bias_scale(double x, cplx w) {
    if (!(x >= 3.0)) throw DomainError("normalization needs x >= 3");
    return std::sqrt(x) * std::exp((w - 1.0) * std::log(std::log(x)));
}

std::vector<cplx> B_of_xs(const ExplicitFormula& f, std::span<const double> xs, SumMode mode) {
    for (double x : xs)
        if (!(x >= 3.0)) throw DomainError("B(x) needs x >= 3");
    std::vector<cplx> num(xs.size());
    if (mode == SumMode::Direct) {
        num = direct_exp_sums(f.spec(), xs);
        for (std::size_t i = 0; i < xs.size(); ++i) num[i] -= f.delta_1(xs[i]);
    } else {
        for (std::size_t i = 0; i < xs.size(); ++i)
            num[i] = f.delta_half(xs[i]) + f.zero_sum(xs[i]).value;
    }
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = num[i] / bias_scale(xs[i], f.params().w);
    return out;
}

cplx B_of_x(const ExplicitFormula& f, double x, SumMode mode) {
    double xs[1] = {x};
    return B_of_xs(f, xs, mode)[0];
}

Classification classify_by_rule(double re, cplx c) {
    if (re < -kBiasZeroTol) return Classification::Unbounded;
    if (std::abs(c) <= kBiasZeroTol) return Classification::NoNonzeroBias;
    if (re > kBiasZeroTol) return Classification::Persistent;
    return Classification::Apparent;
}

BiasReport classify(const ExplicitFormula& f) {
    BiasReport r;
    r.params = f.params();
    r.re_z_plus_w = r.params.re_z_plus_w;
    r.c_half = f.c_half();
    r.prime_limit = f.config().gf.prime_limit();
    r.tail_estimate = f.residual().tail_estimate(0.5);
    r.general_rule = classify_by_rule(r.re_z_plus_w, r.c_half);
    r.classification = r.general_rule;
    if (r.params.z_integer_case && r.params.w_integer_case) {
        r.classification = Classification::IntegerSpecial;
        r.notes.push_back("z and w are integers: residue paths replace the branch-cut integrals; "
                          "the sign rule alone would give " +
                          std::string(to_string(r.general_rule)));
    }
    if (r.classification == Classification::Apparent)
        r.notes.push_back("consistent with apparent bias: bounded with vanishing logarithmic "
                          "Cesaro mean; non-existence of the limit is not decided numerically");
    if (r.params.w_is_one)
        r.notes.push_back("w = 1: bias constant from the residue of zeta(2s) at s = 1/2");
    return r;
}

BiasReport classify(const EpsilonSpec& spec, const FormulaConfig& cfg) {
    return classify(ExplicitFormula(spec, cfg));
}

cplx cesaro_mean(std::span<const TrajectorySample> s, cplx b) {
    if (s.size() < 10) throw GridError("cesaro mean needs at least 10 samples");
    std::vector<double> lx(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(s[i].x > 0)) throw GridError("sample abscissae must be positive");
        lx[i] = std::log(s[i].x);
        if (i && !(lx[i] > lx[i - 1])) throw GridError("samples must be strictly ascending");
    }
    double span = lx.back() - lx.front();
    double mean = span / static_cast<double>(s.size() - 1);
    for (std::size_t i = 1; i < s.size(); ++i)
        if (std::abs((lx[i] - lx[i - 1]) - mean) > 0.01 * mean)
            throw GridError("samples are not log-uniform within 1%");
    CompensatedSum acc;
    for (std::size_t i = 1; i < s.size(); ++i)
        acc.add(0.5 * (lx[i] - lx[i - 1]) * ((s[i].B - b) + (s[i - 1].B - b)));
    return acc.value() / span;
}

std::vector<double> make_grid(double x_min, double x_max, int n, GridKind grid) {
    if (!(x_min >= 3.0 && x_min < x_max)) throw DomainError("grid needs 3 <= x_min < x_max");
    if (n < 2 || n > 100000) throw DomainError("grid needs 2 <= points <= 100000");
    std::vector<double> xs(n);
    double a, b;
    if (grid == GridKind::Log) {
        a = std::log(x_min);
        b = std::log(x_max);
    } else {
        a = std::log(std::log(x_min));
        b = std::log(std::log(x_max));
    }
    for (int i = 0; i < n; ++i) {
        double u = a + (b - a) * i / (n - 1);
        xs[i] = grid == GridKind::Log ? std::exp(u) : std::exp(std::exp(u));
    }
    xs.front() = x_min;
    xs.back() = x_max;
    return xs;
}

std::vector<TrajectorySample> trajectory(const ExplicitFormula& f, double x_min, double x_max,
                                         int n, GridKind grid, SumMode mode, cplx center) {
    if (mode == SumMode::Direct && x_max > kMaxDirectTrajectoryX)
        throw CapacityError("direct trajectories are limited to x <= 1e8");
    auto xs = make_grid(x_min, x_max, n, grid);
    auto bs = B_of_xs(f, xs, mode);
    std::vector<TrajectorySample> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = {xs[i], bs[i], bs[i] - center, mode};
    return out;
}

}  // namespace fakemu
