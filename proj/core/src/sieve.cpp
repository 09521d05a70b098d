#include "fakemu/sieve.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "fakemu/errors.hpp"

namespace fakemu {

std::vector<std::uint32_t> primes_up_to(std::uint64_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    std::vector<bool> composite(n + 1, false);
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return out;
}

SpfTable SpfTable::build(std::uint64_t limit, std::uint64_t cap) {
    if (limit < 2) throw DomainError("spf table needs limit >= 2");
    if (limit > cap || limit >= (std::uint64_t{1} << 31) - 1)
        throw CapacityError("spf table limit " + std::to_string(limit) + " exceeds cap " +
                            std::to_string(cap));
    SpfTable t;
    t.spf_.assign(limit + 1, 0);
    t.spf_[1] = 1;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (t.spf_[i]) continue;
        t.spf_[i] = static_cast<std::uint32_t>(i);
        for (std::uint64_t j = i * i; j <= limit; j += i)
            if (!t.spf_[j]) t.spf_[j] = static_cast<std::uint32_t>(i);
    }
    return t;
}

std::uint32_t SpfTable::spf(std::uint64_t n) const {
    if (n == 0 || n > limit()) throw RangeError("n out of spf table range");
    return spf_[n];
}

cplx f_of_n(const SpfTable& table, const EpsilonSpec& spec, std::uint64_t n) {
    if (n == 0 || n > table.limit()) throw RangeError("f_of_n: n outside table");
    cplx r(1.0, 0.0);
    while (n > 1) {
        std::uint32_t p = table.data()[n];
        std::uint64_t v = 0;
        while (n % p == 0) {
            n /= p;
            ++v;
        }
        r *= spec.at(v);
    }
    return r;
}

MultiplicativeSieve::MultiplicativeSieve(const EpsilonSpec& spec, std::uint64_t n_max,
                                         std::size_t block)
    : n_max_(n_max), block_(block) {
    if (n_max > kMaxDirectN)
        throw CapacityError("direct summation limited to n <= " + std::to_string(kMaxDirectN));
    if (block == 0) throw DomainError("block size must be positive");
    eps_.resize(64);
    for (std::uint64_t v = 0; v < 64; ++v) eps_[v] = spec.at(v);
    auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n_max)));
    while (root * root > n_max) --root;
    while ((root + 1) * (root + 1) <= n_max) ++root;
    primes_ = primes_up_to(root);
}

void MultiplicativeSieve::fill(std::uint64_t lo, std::span<cplx> out) const {
    std::vector<std::uint64_t> prod(out.size());
    fill(lo, out, prod);
}

void MultiplicativeSieve::fill(std::uint64_t lo, std::span<cplx> out,
                               std::span<std::uint64_t> prod) const {
    const std::size_t len = out.size();
    if (lo == 0 || lo + len - 1 > n_max_) throw RangeError("sieve block outside range");
    const std::uint64_t hi = lo + len;
    std::fill(out.begin(), out.end(), cplx(1.0, 0.0));
    std::fill(prod.begin(), prod.end(), 1);

    // p = 2 via trailing zeros
    for (std::uint64_t m = lo + (lo & 1); m < hi; m += 2) {
        int v = std::countr_zero(m);
        std::size_t i = m - lo;
        out[i] *= eps_[v];
        prod[i] <<= v;
    }
    for (std::size_t k = 1; k < primes_.size(); ++k) {
        const std::uint64_t p = primes_[k];
        if (p * p >= hi) break;
        for (std::uint64_t m = (lo + p - 1) / p * p; m < hi; m += p) {
            std::uint64_t q = m / p;
            std::uint64_t pk = p;
            int v = 1;
            while (q % p == 0) {
                q /= p;
                pk *= p;
                ++v;
            }
            std::size_t i = m - lo;
            out[i] *= eps_[v];
            prod[i] *= pk;
        }
    }
    const cplx e1 = eps_[1];
    for (std::size_t i = 0; i < len; ++i)
        if (prod[i] != lo + i) out[i] *= e1;
}

std::vector<cplx> direct_exp_sums(const EpsilonSpec& spec, std::span<const double> xs,
                                  double cutoff_mult) {
    if (cutoff_mult < 30.0) throw DomainError("cutoff_mult must be >= 30");
    double x_max = 0;
    for (double x : xs) {
        if (!(x >= 1.0)) throw DomainError("direct_exp_sum needs x >= 1");
        x_max = std::max(x_max, x);
    }
    std::vector<cplx> res(xs.size());
    if (xs.empty()) return res;
    double top = std::floor(cutoff_mult * x_max);
    if (top > static_cast<double>(kMaxDirectN))
        throw CapacityError("direct sum cutoff exceeds n <= " + std::to_string(kMaxDirectN));
    const auto n_max = static_cast<std::uint64_t>(top);

    struct Acc {
        double x;
        std::uint64_t last;
        double r;
        CompensatedSum sum;
    };
    std::vector<Acc> acc;
    acc.reserve(xs.size());
    for (double x : xs)
        acc.push_back({x, static_cast<std::uint64_t>(std::floor(cutoff_mult * x)),
                       std::exp(-1.0 / x), {}});

    constexpr std::size_t kResync = 1024;
    MultiplicativeSieve sv(spec, std::max<std::uint64_t>(n_max, 1));
    sv.for_each_block(1, sv.n_max(), [&](std::uint64_t lo, std::span<const cplx> f) {
        for (Acc& a : acc) {
            if (a.last < lo) continue;
            std::size_t end = static_cast<std::size_t>(std::min<std::uint64_t>(a.last - lo + 1, f.size()));
            for (std::size_t c = 0; c < end; c += kResync) {
                std::size_t ce = std::min(end, c + kResync);
                double wt = std::exp(-static_cast<double>(lo + c) / a.x);
                double re = 0, im = 0;
                for (std::size_t i = c; i < ce; ++i) {
                    re += f[i].real() * wt;
                    im += f[i].imag() * wt;
                    wt *= a.r;
                }
                a.sum.add({re, im});
            }
        }
    });
    for (std::size_t i = 0; i < acc.size(); ++i) res[i] = acc[i].sum.value();
    return res;
}

cplx direct_exp_sum(const EpsilonSpec& spec, double x, double cutoff_mult) {
    double xs[1] = {x};
    return direct_exp_sums(spec, xs, cutoff_mult)[0];
}

cplx direct_sharp_sum(const EpsilonSpec& spec, double x) {
    if (!(x >= 1.0)) throw DomainError("direct_sharp_sum needs x >= 1");
    double top = std::floor(x);
    if (top > static_cast<double>(kMaxDirectN))
        throw CapacityError("direct sum exceeds n <= " + std::to_string(kMaxDirectN));
    auto n = static_cast<std::uint64_t>(top);
    CompensatedSum sum;
    MultiplicativeSieve sv(spec, n);
    sv.for_each_block(1, n, [&](std::uint64_t, std::span<const cplx> f) {
        for (cplx v : f) sum.add(v);
    });
    return sum.value();
}

}  // namespace fakemu
