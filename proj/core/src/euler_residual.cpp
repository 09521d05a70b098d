#include "fakemu/euler_residual.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "fakemu/errors.hpp"
#include "fakemu/sieve.hpp"

namespace fakemu {

namespace {

struct PrimeCache {
    std::shared_ptr<const std::vector<std::uint32_t>> primes;
    std::shared_ptr<const std::vector<double>> logs;
};

PrimeCache cached_primes(std::uint64_t limit) {
    static std::mutex mu;
    static std::map<std::uint64_t, PrimeCache> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(limit);
    if (it != cache.end()) return it->second;
    auto p = std::make_shared<std::vector<std::uint32_t>>(primes_up_to(limit));
    auto l = std::make_shared<std::vector<double>>(p->size());
    for (std::size_t i = 0; i < p->size(); ++i) (*l)[i] = std::log(static_cast<double>((*p)[i]));
    PrimeCache c{p, l};
    cache.emplace(limit, c);
    return c;
}

}  // namespace

GfConfig::GfConfig(std::uint64_t prime_limit) : limit_(prime_limit) {
    if (prime_limit < 2) throw DomainError("prime limit must be >= 2");
    if (prime_limit > kMaxPrimeLimit)
        throw CapacityError("prime limit above " + std::to_string(kMaxPrimeLimit));
    auto c = cached_primes(prime_limit);
    primes_ = c.primes;
    logs_ = c.logs;
}

ResidualProduct::ResidualProduct(EpsilonSpec spec, GfConfig cfg)
    : spec_(std::move(spec)), cfg_(std::move(cfg)) {
    FactorParams fp = zw_params(spec_);
    z_ = fp.z;
    w_ = fp.w;

    constexpr int K = 64;
    std::vector<cplx> g(K + 1), l(K + 1);
    for (int k = 0; k <= K; ++k) g[k] = spec_.at(static_cast<std::uint64_t>(k));
    for (int k = 1; k <= K; ++k) {
        cplx acc(0.0, 0.0);
        for (int j = 1; j < k; ++j) acc += static_cast<double>(j) * l[j] * g[k - j];
        l[k] = g[k] - acc / static_cast<double>(k);
    }
    coeff_.assign(K + 1, cplx(0.0, 0.0));
    for (int k = 3; k <= K; ++k) {
        coeff_[k] = l[k] - z_ / static_cast<double>(k);
        if (k % 2 == 0) coeff_[k] -= w_ / static_cast<double>(k / 2);
    }
    for (int k = 3; k <= K; ++k)
        if (std::abs(coeff_[k]) <= 1e-14) coeff_[k] = 0.0;
    growth_ = 1.0;
    for (int k = K / 2; k <= K; ++k) {
        double m = std::abs(coeff_[k]);
        if (m > 0) growth_ = std::max(growth_, std::pow(m, 1.0 / k));
    }
}

cplx ResidualProduct::log_factor(double log_p, cplx s) const {
    cplx u = std::polar(std::exp(-s.real() * log_p), -s.imag() * log_p);
    cplx g = g_eval(spec_, u);
    if (g == cplx(0.0, 0.0)) throw DomainError("local factor g(p^{-s}) vanishes");
    cplx r = std::log(g);
    if (z_ != cplx(0.0, 0.0)) r += z_ * std::log(1.0 - u);
    if (w_ != cplx(0.0, 0.0)) r += w_ * std::log(1.0 - u * u);
    return r;
}

cplx ResidualProduct::log_value(cplx s) const {
    if (!(s.real() >= 0.35)) throw RangeError("G_f needs Re s >= 0.35");
    const auto& lp = cfg_.log_primes();
    const double sg = s.real(), tt = s.imag();
    // series once |u| * growth <= 0.3, so the dropped terms stay below 1e-18
    const double lp_series = (std::log(growth_) - std::log(0.3)) / sg;
    const int kmax = static_cast<int>(coeff_.size()) - 1;
    double re = 0, im = 0;
    for (double l : lp) {
        if (l < lp_series) {
            cplx t = log_factor(l, s);
            re += t.real();
            im += t.imag();
            continue;
        }
        double lu = sg * l - std::log(growth_);
        int K = std::min(kmax, static_cast<int>(std::ceil(41.5 / lu)) + 2);
        double mag = std::exp(-sg * l);
        cplx acc(0.0, 0.0);
        if (tt == 0.0) {
            for (int k = K; k >= 3; --k) acc = acc * mag + coeff_[k];
            acc *= mag * mag * mag;
        } else {
            cplx u = std::polar(mag, -tt * l);
            for (int k = K; k >= 3; --k) acc = acc * u + coeff_[k];
            acc *= u * u * u;
        }
        re += acc.real();
        im += acc.imag();
    }
    return {re, im};
}

double ResidualProduct::tail_estimate(cplx s) const {
    double sg = s.real();
    if (!(sg >= 0.35)) throw RangeError("tail estimate needs Re s >= 0.35");
    const auto& pr = cfg_.primes();
    const auto& lp = cfg_.log_primes();
    const double P = static_cast<double>(cfg_.prime_limit());
    double c = 0;
    for (std::size_t i = pr.size(); i-- > 0;) {
        if (pr[i] < P / 2) break;
        cplx gp = std::exp(log_factor(lp[i], s)) - 1.0;
        c = std::max(c, std::abs(gp) * std::exp(3 * sg * lp[i]));
    }
    if (c == 0.0) return 0.0;
    // int_P^inf t^{-3 sigma} / ln t dt = E1((3 sigma - 1) ln P)
    double arg = (3 * sg - 1) * std::log(P);
    return c * -std::expint(-arg);
}

cplx G_f(const EpsilonSpec& spec, cplx s, const GfConfig& cfg) { return ResidualProduct(spec, cfg)(s); }

double G_f_tail_estimate(const EpsilonSpec& spec, cplx s, const GfConfig& cfg) {
    return ResidualProduct(spec, cfg).tail_estimate(s);
}

}  // namespace fakemu
