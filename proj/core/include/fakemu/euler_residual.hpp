#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fakemu/complex_util.hpp"
#include "fakemu/eps_model.hpp"

namespace fakemu {

inline constexpr std::uint64_t kDefaultPrimeLimit = 100000;
inline constexpr std::uint64_t kMaxPrimeLimit = 10'000'000;

class GfConfig {
public:
    explicit GfConfig(std::uint64_t prime_limit = kDefaultPrimeLimit);

    std::uint64_t prime_limit() const { return limit_; }
    const std::vector<std::uint32_t>& primes() const { return *primes_; }
    const std::vector<double>& log_primes() const { return *logs_; }

private:
    std::uint64_t limit_;
    std::shared_ptr<const std::vector<std::uint32_t>> primes_;
    std::shared_ptr<const std::vector<double>> logs_;
};

// G_f(s) = prod_p g(p^{-s}) (1-p^{-s})^z (1-p^{-2s})^w, truncated at p <= P
class ResidualProduct {
public:
    ResidualProduct(EpsilonSpec spec, GfConfig cfg = GfConfig());

    const EpsilonSpec& spec() const { return spec_; }
    const GfConfig& config() const { return cfg_; }

    cplx log_value(cplx s) const;
    cplx operator()(cplx s) const { return std::exp(log_value(s)); }

    // log G_p(s) for a single prime
    cplx log_factor(double log_p, cplx s) const;

    double tail_estimate(cplx s) const;

private:
    EpsilonSpec spec_;
    GfConfig cfg_;
    cplx z_, w_;
    // log G_p = sum_{k>=3} coeff_[k] u^k, used once |u| is small
    std::vector<cplx> coeff_;
    double growth_ = 1.0;
};

cplx G_f(const EpsilonSpec& spec, cplx s, const GfConfig& cfg = GfConfig());
double G_f_tail_estimate(const EpsilonSpec& spec, cplx s, const GfConfig& cfg = GfConfig());

}  // namespace fakemu
