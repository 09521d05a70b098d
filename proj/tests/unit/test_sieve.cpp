#include <numeric>
#include <vector>

#include "fakemu/errors.hpp"
#include "fakemu/sieve.hpp"
#include "reference_values.hpp"
#include "test_util.hpp"

using namespace fakemu;

namespace {

int mobius_slow(int n) {
    int r = 1;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        r = -r;
    }
    return n > 1 ? -r : r;
}

}  // namespace

TEST_SUITE("sieve") {

TEST_CASE("smallest prime factor table") {
    SpfTable t = build_spf(10);
    std::vector<std::uint32_t> want = {1, 2, 3, 2, 5, 2, 7, 2, 3, 2};
    for (std::uint64_t n = 1; n <= 10; ++n) CHECK(t.spf(n) == want[n - 1]);
    SpfTable big = build_spf(20000000);
    CHECK(big.spf(49) == 7);
    CHECK(big.spf(20000000) == 2);
    std::uint32_t p = big.spf(19999999);
    CHECK(19999999 % p == 0);
    for (std::uint32_t q = 2; q < p; ++q) CHECK(19999999 % q != 0);
    CHECK_THROWS_AS(build_spf(2000, 1000), CapacityError);
    CHECK_THROWS_AS(build_spf(1), DomainError);
    CHECK_THROWS_AS(t.spf(11), RangeError);
}

TEST_CASE("property: spf entries are the least prime divisor") {
    SpfTable t = build_spf(100000);
    for (int k = 0; k < 2000; ++k) {
        std::uint64_t n = 2 + static_cast<std::uint64_t>(fakemu::test::uniform(0, 99998));
        std::uint32_t p = t.spf(n);
        CHECK(n % p == 0);
        for (std::uint32_t q = 2; q < p; ++q) CHECK(n % q != 0);
        for (std::uint32_t q = 2; q * q <= p; ++q) CHECK(p % q != 0);
    }
}

TEST_CASE("f(n) examples") {
    SpfTable t = build_spf(1000);
    CHECK(f_of_n(t, parse_eps_spec("finite:[-1]"), 4) == cplx(0, 0));
    CHECK(f_of_n(t, parse_eps_spec("cm:xi=-1"), 12) == cplx(-1, 0));
    CHECK(f_of_n(t, parse_eps_spec("periodic:m=2:[i,-i]"), 12) == cplx(1, 0));
    CHECK(f_of_n(t, parse_eps_spec("finite:[-1]"), 1) == cplx(1, 0));
    CHECK_THROWS_AS(f_of_n(t, parse_eps_spec("finite:[-1]"), 1001), RangeError);
}

TEST_CASE("segmented sieve reproduces Moebius") {
    MultiplicativeSieve sv(parse_eps_spec("finite:[-1]"), 300000, 1000);
    sv.for_each_block(1, 300000, [](std::uint64_t lo, std::span<const cplx> v) {
        for (std::size_t i = 0; i < v.size(); i += 7) {
            int n = static_cast<int>(lo + i);
            CHECK(v[i] == cplx(mobius_slow(n), 0));
        }
    });
}

TEST_CASE("property: multiplicativity on random coprime pairs") {
    SpfTable t = build_spf(1000000);
    const char* specs[] = {"periodic:m=3:[i,-1,exp(i*0.7)]", "quadphase:alpha=0.31", "cm:xi=exp(i*pi/5)",
                           "finite:[exp(i*pi/5),-0.25+0.9682458365518543i]"};
    for (const char* s : specs) {
        auto sp = parse_eps_spec(s);
        int done = 0;
        while (done < 500) {
            auto m = static_cast<std::uint64_t>(fakemu::test::uniform(2, 3000));
            auto n = static_cast<std::uint64_t>(fakemu::test::uniform(2, 3000));
            if (std::gcd(m, n) != 1 || m * n > 1000000) continue;
            CHECK(std::abs(f_of_n(t, sp, m * n) - f_of_n(t, sp, m) * f_of_n(t, sp, n)) <= 1e-14);
            ++done;
        }
    }
}

TEST_CASE("property: values are zero or unimodular") {
    for (const char* s : {"periodic:m=3:[i,0,exp(i*0.7)]", "quadphase:alpha=0.31", "finite:[exp(i*pi/5),-1]"}) {
        MultiplicativeSieve sv(parse_eps_spec(s), 100000);
        sv.for_each_block(1, 100000, [](std::uint64_t, std::span<const cplx> v) {
            for (cplx c : v) {
                double a = std::abs(c);
                CHECK((a == 0 || std::abs(a - 1) <= 1e-12));
            }
        });
    }
}

TEST_CASE("block size does not change sums") {
    auto sp = parse_eps_spec("quadphase:alpha=0.31");
    cplx a = 0, b = 0;
    MultiplicativeSieve s1(sp, 123457, 4096), s2(sp, 123457, 100000);
    s1.for_each_block(1, 123457, [&](std::uint64_t, std::span<const cplx> v) {
        for (cplx c : v) a += c;
    });
    s2.for_each_block(1, 123457, [&](std::uint64_t, std::span<const cplx> v) {
        for (cplx c : v) b += c;
    });
    CHECK(std::abs(a - b) < 1e-9);
}

TEST_CASE("geometric closed form") {
    auto one = parse_eps_spec("cm:xi=1");
    for (double x : {10.0, 100.0, 1000.0, 1e5}) {
        double want = 1 / std::expm1(1 / x);
        CHECK(std::abs(direct_exp_sum(one, x) - want) <= 1e-9 * want);
    }
    CHECK(direct_exp_sum(one, 100).real() == doctest::Approx(99.500833).epsilon(1e-8));
}

TEST_CASE("Moebius smoothed sums") {
    auto mob = parse_eps_spec("finite:[-1]");
    double want = 0;
    for (int n = 1; n <= 45; ++n) want += mobius_slow(n) * std::exp(-n);
    CHECK(std::abs(direct_exp_sum(mob, 1.0) - want) < 1e-15);
    CHECK(std::abs(direct_exp_sum(mob, 1000.0).real() - fakemu::ref::kMobiusDirect1e3) < 1e-11);
    CHECK_THROWS_AS(direct_exp_sum(mob, 0.5), DomainError);
    CHECK_THROWS_AS(direct_exp_sum(mob, 100, 20), DomainError);
    CHECK_THROWS_AS(direct_exp_sum(mob, 2e8), CapacityError);
}

TEST_CASE("periodic smoothed sum against an independent sieve") {
    cplx d = direct_exp_sum(parse_eps_spec("periodic:m=2:[i,-i]"), 1e4);
    CHECK(fakemu::test::rel(d, fakemu::ref::kPeriodicDirect1e4) < 1e-13);
}

TEST_CASE("batched sums equal single sums") {
    auto sp = parse_eps_spec("periodic:m=2:[i,-i]");
    std::vector<double> xs = {50, 1e3, 3.3e3};
    auto many = direct_exp_sums(sp, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(fakemu::test::rel(many[i], direct_exp_sum(sp, xs[i])) < 1e-13);
}

TEST_CASE("sharp sums") {
    CHECK(direct_sharp_sum(parse_eps_spec("finite:[-1]"), 5) == cplx(-2, 0));
    CHECK(direct_sharp_sum(parse_eps_spec("cm:xi=1"), 7.9) == cplx(7, 0));
    CHECK(direct_sharp_sum(parse_eps_spec("cm:xi=-1"), 4) == cplx(0, 0));
    CHECK_THROWS_AS(direct_sharp_sum(parse_eps_spec("cm:xi=1"), 0.5), DomainError);
}

}  // TEST_SUITE
