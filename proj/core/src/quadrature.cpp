#include "fakemu/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fakemu/errors.hpp"

namespace fakemu {

namespace {

constexpr double kTMax = 6.0;
constexpr double kTinyU = 1e-13;
constexpr double kSkipRatio = 1e-24;

}  // namespace

LaplaceIntegral::LaplaceIntegral(double b, cplx alpha, cplx beta, double beta_scale, Regular r,
                                 double tol, int max_level, bool interpolate)
    : b_(b),
      alpha_(alpha),
      beta_(beta),
      scale_(beta_scale),
      r_(std::move(r)),
      tol_(tol),
      max_level_(max_level),
      interpolate_(interpolate) {
    if (!(b > 0)) throw DomainError("integration interval must have positive length");
    if (!(alpha.real() > -1.0)) throw DomainError("left endpoint exponent must have Re > -1");
    if (!(beta.real() > -1.0)) throw DomainError("right endpoint exponent must have Re > -1");
}

void LaplaceIntegral::build_interpolant() const {
    const double checks[] = {0.131, 0.377, 0.613, 0.887};
    std::vector<cplx> direct;
    for (double c : checks) {
        direct.push_back(r_(c * b_));
        ++evals_;
    }
    for (int n : {24, 48, 96}) {
        std::vector<cplx> vals(n);
        double scale = 0;
        for (int j = 0; j < n; ++j) {
            double th = kPi * (j + 0.5) / n;
            vals[j] = r_(0.5 * b_ * (1 - std::cos(th)));
            ++evals_;
            scale = std::max(scale, std::abs(vals[j]));
        }
        std::vector<cplx> c(n);
        for (int k = 0; k < n; ++k) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < n; ++j) acc += vals[j] * std::cos(kPi * k * (j + 0.5) / n);
            c[k] = acc * (2.0 / n);
        }
        c[0] *= 0.5;
        cheb_ = std::move(c);
        double err = 0;
        for (std::size_t i = 0; i < direct.size(); ++i)
            err = std::max(err, std::abs(regular(checks[i] * b_) - direct[i]));
        if (err <= 1e-12 * scale) return;
        cheb_.clear();
    }
}

cplx LaplaceIntegral::regular(double u) const {
    if (cheb_.empty()) {
        ++evals_;
        return r_(u);
    }
    // node map u = b (1 - cos th) / 2
    double x = 1.0 - 2.0 * u / b_;
    cplx b1(0.0, 0.0), b2(0.0, 0.0);
    for (std::size_t k = cheb_.size(); k-- > 1;) {
        cplx t = 2.0 * x * b1 - b2 + cheb_[k];
        b2 = b1;
        b1 = t;
    }
    return x * b1 - b2 + cheb_[0];
}

int LaplaceIntegral::interpolant_size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return static_cast<int>(cheb_.size());
}

void LaplaceIntegral::ensure_level(int k) const {
    if (!have_r0_) {
        if (interpolate_) build_interpolant();
        r0_ = r_(0.0);
        ++evals_;
        if (beta_ != cplx(0.0, 0.0)) {
            rb_ = r_(b_);
            ++evals_;
        }
        double qmin = std::exp(-kPi * std::sinh(kTMax));
        u_min_ = b_ / (1 + 1 / qmin);
        comp_min_ = b_ * qmin / (1 + qmin);
        have_r0_ = true;
    }
    while (static_cast<int>(levels_.size()) <= k) {
        int m = static_cast<int>(levels_.size());
        double h = std::ldexp(1.0, -m);
        std::vector<double> ts;
        if (m == 0) {
            for (int j = -static_cast<int>(kTMax); j <= static_cast<int>(kTMax); ++j) ts.push_back(j);
        } else {
            for (double t = h; t <= kTMax; t += 2 * h) {
                ts.push_back(-t);
                ts.push_back(t);
            }
        }
        double env_max = 0;
        for (const auto& lv : levels_)
            for (const Node& n : lv) env_max = std::max(env_max, std::abs(n.wf));
        std::vector<Node> nodes;
        nodes.reserve(ts.size());
        for (double t : ts) {
            double q = std::exp(-kPi * std::sinh(t));
            double u, comp;
            if (q > 1) {
                double iq = 1 / q;
                u = b_ * iq / (1 + iq);
                comp = b_ / (1 + iq);
            } else {
                u = b_ / (1 + q);
                comp = b_ * q / (1 + q);
            }
            double w = b_ * kPi * std::cosh(t) / ((1 + q) * (1 + 1 / q));
            if (!(w > 0) || !(u > 0) || !(comp > 0)) continue;
            cplx wf = w * std::exp(alpha_ * std::log(u));
            if (beta_ != cplx(0.0, 0.0)) wf *= std::exp(beta_ * std::log(scale_ * comp));
            nodes.push_back({u, wf, cplx(0.0, 0.0)});
            env_max = std::max(env_max, std::abs(wf));
        }
        for (Node& n : nodes) {
            if (std::abs(n.wf) < kSkipRatio * env_max) {
                n.wf = 0;
                continue;
            }
            n.r = n.u < kTinyU ? r0_ : regular(n.u);
        }
        levels_.push_back(std::move(nodes));
    }
}

cplx LaplaceIntegral::level_sum(int k, double L, double& abs_sum) const {
    double re = 0, im = 0;
    for (const Node& n : levels_[k]) {
        if (n.wf == cplx(0.0, 0.0)) continue;
        cplx f = std::exp(-L * n.u) * n.wf * n.r;
        re += f.real();
        im += f.imag();
        abs_sum += std::abs(f);
    }
    return {re, im};
}

cplx LaplaceIntegral::operator()(double L) const {
    std::lock_guard<std::mutex> lk(mu_);
    ensure_level(0);
    cplx rem = r0_ * std::exp((1.0 + alpha_) * std::log(u_min_)) / (1.0 + alpha_);
    if (beta_ != cplx(0.0, 0.0)) {
        rem *= std::exp(beta_ * std::log(scale_ * b_));
        rem += std::exp(-L * b_) * std::exp(alpha_ * std::log(b_)) * rb_ *
               std::exp(beta_ * std::log(scale_)) *
               std::exp((1.0 + beta_) * std::log(comp_min_)) / (1.0 + beta_);
    }
    cplx sum(0.0, 0.0);
    double abs_sum = 0;
    cplx prev(0.0, 0.0);
    for (int k = 0; k <= max_level_; ++k) {
        ensure_level(k);
        sum += level_sum(k, L, abs_sum);
        double h = std::ldexp(1.0, -k);
        cplx cur = h * sum + rem;
        if (k >= 3 && std::abs(cur - prev) <= tol_ * h * abs_sum) {
            last_level_ = k;
            return cur;
        }
        prev = cur;
    }
    throw QuadratureError("tanh-sinh quadrature did not reach tolerance " + std::to_string(tol_) +
                          " within " + std::to_string(max_level_) + " levels");
}

int LaplaceIntegral::last_level() const {
    std::lock_guard<std::mutex> lk(mu_);
    return last_level_;
}

std::size_t LaplaceIntegral::evaluations() const {
    std::lock_guard<std::mutex> lk(mu_);
    return evals_;
}

}  // namespace fakemu
