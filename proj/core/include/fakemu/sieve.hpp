#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "fakemu/complex_util.hpp"
#include "fakemu/eps_model.hpp"

namespace fakemu {

inline constexpr double kDefaultCutoffMult = 45.0;
inline constexpr std::uint64_t kDefaultSpfCap = 1'000'000'000ULL;
inline constexpr std::uint64_t kMaxDirectN = 4'500'000'000ULL;
inline constexpr std::size_t kSieveBlock = std::size_t{1} << 22;

std::vector<std::uint32_t> primes_up_to(std::uint64_t n);

class SpfTable {
public:
    static SpfTable build(std::uint64_t limit, std::uint64_t cap = kDefaultSpfCap);

    std::uint64_t limit() const { return spf_.size() - 1; }
    std::uint32_t spf(std::uint64_t n) const;
    std::span<const std::uint32_t> data() const { return spf_; }

private:
    std::vector<std::uint32_t> spf_;
};

inline SpfTable build_spf(std::uint64_t limit, std::uint64_t cap = kDefaultSpfCap) {
    return SpfTable::build(limit, cap);
}

cplx f_of_n(const SpfTable& table, const EpsilonSpec& spec, std::uint64_t n);

// Segmented evaluation of f on consecutive blocks of integers.
class MultiplicativeSieve {
public:
    MultiplicativeSieve(const EpsilonSpec& spec, std::uint64_t n_max,
                        std::size_t block = kSieveBlock);

    std::uint64_t n_max() const { return n_max_; }
    std::size_t block_size() const { return block_; }

    // fills out[0..len) with f(lo), ..., f(lo+len-1); lo >= 1, lo+len-1 <= n_max
    void fill(std::uint64_t lo, std::span<cplx> out) const;

    template <class Fn>
    void for_each_block(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        std::vector<cplx> buf(block_);
        std::vector<std::uint64_t> prod(block_);
        for (std::uint64_t b = lo; b <= hi; b += block_) {
            std::size_t len = static_cast<std::size_t>(std::min<std::uint64_t>(block_, hi - b + 1));
            std::span<cplx> view(buf.data(), len);
            fill(b, view, std::span<std::uint64_t>(prod.data(), len));
            fn(b, std::span<const cplx>(view));
        }
    }

private:
    void fill(std::uint64_t lo, std::span<cplx> out, std::span<std::uint64_t> prod) const;

    std::vector<cplx> eps_;  // eps_0..eps_63
    std::vector<std::uint32_t> primes_;
    std::uint64_t n_max_;
    std::size_t block_;
};

cplx direct_exp_sum(const EpsilonSpec& spec, double x, double cutoff_mult = kDefaultCutoffMult);

// all sums in one sweep up to cutoff_mult * max(xs)
std::vector<cplx> direct_exp_sums(const EpsilonSpec& spec, std::span<const double> xs,
                                  double cutoff_mult = kDefaultCutoffMult);

cplx direct_sharp_sum(const EpsilonSpec& spec, double x);

}  // namespace fakemu
