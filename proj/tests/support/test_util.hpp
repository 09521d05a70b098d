#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

namespace fakemu::test {

inline double rel(std::complex<double> got, std::complex<double> want) {
    double m = std::abs(want);
    return m > 0 ? std::abs(got - want) / m : std::abs(got - want);
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 g(0x5eed);
    return g;
}

inline double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng());
}

}  // namespace fakemu::test

#define CHECK_CNEAR(got, want, tol)                                                    \
    do {                                                                               \
        auto g_ = (got);                                                               \
        auto w_ = (want);                                                              \
        INFO("got " << g_.real() << "+" << g_.imag() << "i, want " << w_.real() << "+" \
                    << w_.imag() << "i");                                              \
        CHECK(std::abs(g_ - w_) <= (tol));                                             \
    } while (0)
