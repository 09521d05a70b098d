#include "fakemu/explicit_formula.hpp"

#include <cmath>
#include <string>

#include "fakemu/errors.hpp"

namespace fakemu {

const char* to_string(PartMode m) {
    switch (m) {
        case PartMode::Quadrature: return "quadrature";
        case PartMode::Watson: return "watson";
        case PartMode::Residue: return "residue";
        case PartMode::SineZero: return "sine_zero";
    }
    return "?";
}

void FormulaConfig::validate(std::size_t table_size) const {
    if (!(a > 1.0 / 3.0 && a < 0.5)) throw DomainError("a must lie in (1/3, 1/2)");
    if (n_zeros < 0 || static_cast<std::size_t>(n_zeros) > table_size)
        throw DomainError("n_zeros must be between 0 and the zero-table size " +
                          std::to_string(table_size));
    if (!(watson_radius > 0 && watson_radius < 0.5 - a))
        throw DomainError("watson radius must lie in (0, 1/2 - a)");
    if (!(quad_tol > 0)) throw DomainError("quadrature tolerance must be positive");
    if (watson_nodes < 8) throw DomainError("watson node count must be >= 8");
}

std::shared_ptr<const ZetaKernel> default_kernel() {
    static const std::shared_ptr<const ZetaKernel> k = std::make_shared<ZetaKernel>();
    return k;
}

ExplicitFormula::ExplicitFormula(EpsilonSpec spec, FormulaConfig cfg,
                                 std::shared_ptr<const ZetaKernel> kernel)
    : spec_(spec),
      cfg_(cfg),
      kernel_(kernel ? std::move(kernel) : default_kernel()),
      G_(spec, cfg.gf),
      params_(zw_params(spec)),
      z_(params_.z),
      w_(params_.w) {
    cfg_.validate(kernel_->zeros().size());
    if (!params_.in_window)
        throw WindowError("parameters z = " + std::to_string(z_.real()) + "+" +
                          std::to_string(z_.imag()) + "i, w = " + std::to_string(w_.real()) + "+" +
                          std::to_string(w_.imag()) + "i lie outside the treated window");
}

PartMode ExplicitFormula::mode_1() const {
    if (params_.z_integer_case) return *params_.z_integer_case == 1 ? PartMode::Residue : PartMode::SineZero;
    return PartMode::Quadrature;
}

PartMode ExplicitFormula::mode_half() const {
    if (params_.w_is_one) return PartMode::Residue;
    if (sin_pi(z_ + w_) == cplx(0.0, 0.0)) return PartMode::SineZero;
    return PartMode::Quadrature;
}

PartMode ExplicitFormula::mode_rho() const {
    if (params_.z_integer_case) return *params_.z_integer_case == -1 ? PartMode::Residue : PartMode::SineZero;
    return PartMode::Quadrature;
}

void ExplicitFormula::check_x(double x) const {
    if (!(x >= 3.0)) throw DomainError("explicit formula needs x >= 3");
}

cplx ExplicitFormula::J1_regular(double u) const {
    const ZetaKernel& k = *kernel_;
    cplx s = 1.0 - u;
    cplx v = s * k.Z(s, z_) * G_(s) * gamma(s);
    if (w_ != cplx(0.0, 0.0)) v *= std::exp(w_ * k.L1_value(2.0 * s));
    return v;
}

cplx ExplicitFormula::J1(cplx u) const {
    const ZetaKernel& k = *kernel_;
    cplx s = 1.0 - u;
    cplx v = s * k.Z(s, z_) * G_(s) * gamma(s);
    if (w_ != cplx(0.0, 0.0)) v *= k.zeta_pow(2.0 * s, w_);
    return v;
}

cplx ExplicitFormula::J_half(cplx u) const {
    const ZetaKernel& k = *kernel_;
    cplx s = 0.5 - u;
    cplx v = s * s * k.Z(s, z_) * k.Z(2.0 * s, w_) * G_(s) * gamma(s);
    if (z_ != cplx(0.0, 0.0)) v *= cpow(0.5 + u, -z_);
    return v;
}

cplx ExplicitFormula::J_rho(ZeroRef zr, cplx u) const {
    const ZetaKernel& k = *kernel_;
    cplx r = k.rho(zr);
    cplx s = r - u;
    cplx v = G_(s) * gamma(s);
    if (z_ != cplx(0.0, 0.0)) v *= cpow(s - 1.0, -z_) * std::exp(z_ * k.L_rho(zr, s).value);
    if (w_ != cplx(0.0, 0.0)) v *= k.zeta_pow(2.0 * s, w_);
    return v;
}

cplx ExplicitFormula::J(const ExpansionPoint& p, cplx u) const {
    switch (p.kind) {
        case PointKind::One: return J1(u);
        case PointKind::Half: return J_half(u);
        case PointKind::Zero: return J_rho(p.zero, u);
    }
    return {};
}

const LaplaceIntegral& ExplicitFormula::integral_1() const {
    std::lock_guard<std::mutex> lk(mu_);
    if (!int1_)
        int1_ = std::make_unique<LaplaceIntegral>(
            0.5, -z_, -w_, 2.0, [this](double u) { return J1_regular(u); }, cfg_.quad_tol);
    return *int1_;
}

const LaplaceIntegral& ExplicitFormula::integral_half() const {
    std::lock_guard<std::mutex> lk(mu_);
    if (!inthalf_)
        inthalf_ = std::make_unique<LaplaceIntegral>(
            0.5 - cfg_.a, -w_, cplx(0.0, 0.0), 1.0, [this](double u) { return J_half(u); },
            cfg_.quad_tol);
    return *inthalf_;
}

const LaplaceIntegral& ExplicitFormula::integral_rho(ZeroRef zr) const {
    std::lock_guard<std::mutex> lk(mu_);
    auto& slot = introh_[{zr.index, zr.conjugate}];
    if (!slot)
        slot = std::make_unique<LaplaceIntegral>(
            0.5 - cfg_.a, z_, cplx(0.0, 0.0), 1.0, [this, zr](double u) { return J_rho(zr, u); },
            cfg_.quad_tol);
    return *slot;
}

cplx ExplicitFormula::delta_1(double x) const {
    check_x(x);
    switch (mode_1()) {
        case PartMode::SineZero: return {0.0, 0.0};
        case PartMode::Residue: {
            cplx v = x * G_(1.0);
            if (w_ != cplx(0.0, 0.0)) v *= kernel_->zeta_pow(2.0, w_);
            return v;
        }
        default: break;
    }
    double L = std::log(x);
    return sin_pi(z_) / kPi * x * integral_1()(L);
}

cplx ExplicitFormula::delta_half(double x) const {
    check_x(x);
    double L = std::log(x);
    switch (mode_half()) {
        case PartMode::SineZero: return {0.0, 0.0};
        case PartMode::Residue: return std::sqrt(x) * c_half();
        default: break;
    }
    cplx pref = sin_pi(z_ + w_) / kPi * cpow(2.0, 1.0 - w_);
    return pref * std::sqrt(x) * integral_half()(L);
}

cplx ExplicitFormula::delta_rho(ZeroRef zr, double x) const {
    check_x(x);
    cplx r = kernel_->rho(zr);
    double L = std::log(x);
    cplx xr = std::polar(std::sqrt(x), r.imag() * L);
    switch (mode_rho()) {
        case PartMode::SineZero: return {0.0, 0.0};
        case PartMode::Residue: {
            cplx v = gamma(r) * xr * G_(r) / kernel_->zeta_prime_at_zero(zr);
            if (w_ != cplx(0.0, 0.0)) v *= kernel_->zeta_pow(2.0 * r, w_);
            return v;
        }
        default: break;
    }
    return -sin_pi(z_) / kPi * xr * integral_rho(zr)(L);
}

ExplicitFormula::ZeroSum ExplicitFormula::zero_sum(double x) const {
    check_x(x);
    ZeroSum out;
    const bool real = spec_.all_real();
    CompensatedSum acc;
    for (int k = 1; k <= cfg_.n_zeros; ++k) {
        ZeroRef up{static_cast<std::size_t>(k), false};
        ZeroRef dn{static_cast<std::size_t>(k), true};
        cplx a = delta_rho(up, x);
        cplx b = real ? std::conj(a) : delta_rho(dn, x);
        out.terms.push_back({up, a});
        out.terms.push_back({dn, b});
        if (real)
            acc.add(cplx(2.0 * a.real(), 0.0));
        else {
            acc.add(a);
            acc.add(b);
        }
        if (k == cfg_.n_zeros) out.last_term_abs = std::max(std::abs(a), std::abs(b));
    }
    out.value = acc.value();
    return out;
}

std::vector<cplx> ExplicitFormula::watson_coeffs(const ExpansionPoint& p, int M, int nodes) const {
    if (M < 0 || M > 8) throw DomainError("watson order must lie in 0..8");
    if (nodes <= 0) nodes = cfg_.watson_nodes;
    if (p.kind == PointKind::Zero && (p.zero.index == 0 || p.zero.index > kernel_->zeros().size()))
        throw RangeError("zero index out of range");
    const double r = cfg_.watson_radius;
    std::vector<cplx> samples(nodes);
    for (int j = 0; j < nodes; ++j) samples[j] = J(p, std::polar(r, 2 * kPi * j / nodes));
    std::vector<cplx> lam(M + 1);
    for (int k = 0; k <= M; ++k) {
        CompensatedSum acc;
        for (int j = 0; j < nodes; ++j) acc.add(samples[j] * std::polar(std::pow(r, -k), -2 * kPi * j * k / nodes));
        lam[k] = acc.value() / static_cast<double>(nodes);
    }
    cplx j0 = J(p, 0.0);
    if (rel_err(lam[0], j0) > 1e-9)
        throw ConsistencyError("watson coefficient lambda_0 differs from J(0)");
    return lam;
}

cplx ExplicitFormula::c_half() const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (have_c_half_) return c_half_;
    }
    cplx c;
    if (params_.w_is_one) {
        cplx zh = std::pow(zeta(0.5), static_cast<double>(*params_.z_integer_case));
        c = std::sqrt(kPi) * zh * G_(0.5) / 2.0;
    } else if (sin_pi(z_ + w_) == cplx(0.0, 0.0)) {
        c = 0.0;
    } else {
        auto lam = watson_coeffs(ExpansionPoint::half(), 0);
        c = sin_pi(z_ + w_) / kPi * cpow(2.0, 1.0 - w_) * gamma(1.0 - w_) * lam[0];
    }
    std::lock_guard<std::mutex> lk(mu_);
    c_half_ = c;
    have_c_half_ = true;
    return c;
}

cplx ExplicitFormula::watson_delta_half(double x, int M) const {
    if (!(x >= 10.0)) throw DomainError("watson form needs x >= 10");
    if (params_.w_is_one) throw DomainError("watson form needs Re w < 1");
    cplx s = sin_pi(z_ + w_);
    if (s == cplx(0.0, 0.0)) return {0.0, 0.0};
    std::vector<cplx> lam;
    {
        std::lock_guard<std::mutex> lk(mu_);
        lam = lambda_half_;
    }
    if (static_cast<int>(lam.size()) < M + 1) {
        lam = watson_coeffs(ExpansionPoint::half(), 8);
        std::lock_guard<std::mutex> lk(mu_);
        lambda_half_ = lam;
    }
    double L = std::log(x);
    double lnL = std::log(L);
    cplx sum(0.0, 0.0);
    for (int k = 0; k <= M; ++k) {
        cplx e = 1.0 - w_ + static_cast<double>(k);
        sum += lam[k] * gamma(e) * std::exp(-e * lnL);
    }
    return s / kPi * cpow(2.0, 1.0 - w_) * std::sqrt(x) * sum;
}

FormulaBreakdown ExplicitFormula::a_exp_formula(double x) const {
    check_x(x);
    FormulaBreakdown b;
    b.x = x;
    b.mode_1 = mode_1();
    b.mode_half = mode_half();
    b.mode_rho = mode_rho();
    b.delta_1 = delta_1(x);
    b.delta_half = delta_half(x);
    ZeroSum zs = zero_sum(x);
    b.zero_sum = zs.value;
    b.delta_rho = std::move(zs.terms);
    b.last_term_abs = zs.last_term_abs;
    b.total = b.delta_1 + b.delta_half + b.zero_sum;
    return b;
}

}  // namespace fakemu
