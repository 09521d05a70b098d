#include <limits>
#include <sstream>

#include "fakemu/errors.hpp"
#include "fakemu/zeta_kernel.hpp"
#include "reference_values.hpp"
#include "test_util.hpp"

using namespace fakemu;
using fakemu::test::rel;
using fakemu::test::uniform;

namespace {

const ZetaKernel& K() {
    static const ZetaKernel k;
    return k;
}

// relative error floor from the conditioning |s f'(s) / f(s)| of a double input
template <class F>
double conditioned(F f, cplx s, double tol) {
    const double h = 1e-4;
    cplx d = (f(s + h) - f(s - h)) / (2 * h);
    double kappa = std::abs(s) * std::abs(d / f(s));
    return std::max(tol, 4 * kappa * std::numeric_limits<double>::epsilon());
}

}  // namespace

TEST_SUITE("zeta_kernel") {

TEST_CASE("zeta at classical points") {
    CHECK(std::abs(zeta(2.0) - kPi * kPi / 6) < 1e-15);
    CHECK(std::abs(zeta(0.5) - (-1.4603545088095868)) < 1e-14);
    CHECK(std::abs(zeta(cplx(0.5, K().zeros().ordinate(1)))) < 1e-8);
    CHECK(std::abs(zeta(0.0) + 0.5) < 1e-15);
    CHECK(rel(zeta(-1.0), -1.0 / 12) <= 1e-12);
}

TEST_CASE("zeta against high-precision references") {
    for (const auto& r : ref::kZeta) {
        INFO("s = " << r.s.real() << "+" << r.s.imag() << "i");
        CHECK(rel(zeta(r.s), r.value) <= conditioned([](cplx t) { return zeta(t); }, r.s, 1e-12));
    }
}

TEST_CASE("zeta domain errors") {
    CHECK_THROWS_AS(zeta(1.0), PoleError);
    CHECK_THROWS_AS(zeta(cplx(-1.5, 0)), RangeError);
    CHECK_THROWS_AS(zeta(cplx(0.5, 700)), RangeError);
    CHECK_THROWS_AS(zeta(cplx(41, 0)), RangeError);
}

TEST_CASE("gamma against high-precision references") {
    CHECK(rel(gamma(cplx(0.5, 0)), std::sqrt(kPi)) <= 1e-13);
    CHECK(rel(gamma(cplx(1.0, 0)), 1.0) <= 1e-13);
    for (const auto& r : ref::kGamma) {
        INFO("s = " << r.s.real() << "+" << r.s.imag() << "i");
        CHECK(rel(gamma(r.s), r.value) <= conditioned([](cplx t) { return gamma(t); }, r.s, 1e-13));
    }
    CHECK(std::abs(gamma(cplx(0.5, 14.134725))) == doctest::Approx(5.7088371582756e-10).epsilon(1e-12));
    CHECK_THROWS_AS(gamma(cplx(0.0, 0)), PoleError);
    CHECK_THROWS_AS(gamma(cplx(-3.0, 0)), PoleError);
}

TEST_CASE("property: gamma recurrence and zeta reflection") {
    for (int n = 0; n < 100; ++n) {
        cplx s(uniform(-0.9, 3), uniform(-60, 60));
        cplx g1 = gamma(s + 1.0);
        CHECK(std::abs(g1 - s * gamma(s)) <= 1e-12 * std::abs(g1));
        cplx t(uniform(-1, 3), uniform(-200, 200));
        CHECK(std::abs(zeta(std::conj(t)) - std::conj(zeta(t))) <= 1e-13 * (1 + std::abs(zeta(t))));
    }
}

TEST_CASE("log zeta from the Euler product") {
    CHECK(std::abs(log_zeta_euler(2.0) - 0.49770030247074535) < 1e-13);
    CHECK(std::abs(log_zeta_euler(3.0) - std::log(1.2020569031595943)) < 1e-13);
    CHECK(log_zeta_euler(1.7).imag() == 0.0);
    for (int n = 0; n < 30; ++n) {
        cplx s(uniform(1.2, 5), uniform(-100, 100));
        CHECK(std::abs(std::exp(log_zeta_euler(s)) - zeta(s)) <= 1e-11 * std::abs(zeta(s)));
    }
    CHECK_THROWS_AS(log_zeta_euler(1.1), RangeError);
}

TEST_CASE("continued logarithm on the real line") {
    CHECK(std::abs(K().L1_value(1.0)) < 1e-15);
    for (const auto& r : ref::kL1Real) CHECK(std::abs(K().L1_value(r.s) - r.value) <= 1e-12);
    CHECK_THROWS_AS(K().L1(0.3), RangeError);
    CHECK_THROWS_AS(K().L1(cplx(0.45, K().zeros().ordinate(1))), CutError);
}

TEST_CASE("property: exp of the continued log reproduces (s-1) zeta(s)") {
    for (int n = 0; n < 200; ++n) {
        cplx s(uniform(0.35, 3), uniform(-50, 50));
        cplx h = zeta_h(s);
        CHECK(std::abs(std::exp(K().L1_value(s)) - h) <= 1e-10 * (1 + std::abs(h)));
    }
}

TEST_CASE("property: continued log is continuous along vertical lines") {
    // imaginary-part jumps of 2 pi would signal a lost winding
    for (double sig : {0.4, 0.6, 1.5}) {
        cplx prev = K().L1_value(cplx(sig, 0.0));
        for (double t = 0.05; t < 45; t += 0.05) {
            if (sig < 0.5) {
                bool near_zero = false;
                for (std::size_t k = 1; k <= 12; ++k)
                    near_zero = near_zero || std::abs(t - K().zeros().ordinate(k)) < 0.06;
                if (near_zero) {
                    prev = {};
                    continue;
                }
            }
            cplx v = K().L1_value(cplx(sig, t));
            if (prev != cplx{}) CHECK(std::abs(v.imag() - prev.imag()) < 1.0);
            prev = v;
        }
    }
}

TEST_CASE("Z examples and integer-power coherence") {
    CHECK(std::abs(K().Z(1.0, cplx(0.3, 0.7)) - 1.0) < 1e-15);
    CHECK(std::abs(K().Z(2.0, 1.0) - kPi * kPi / 12) < 1e-14);
    cplx s(0.4, 0.1);
    CHECK(std::abs(K().Z(s, 0.0) - 1.0 / s) < 1e-15);
    for (int z : {-1, 1, 2}) {
        for (int n = 0; n < 20; ++n) {
            double x = uniform(1.1, 3);
            cplx lhs = x * std::pow(x - 1, -z) * K().Z(x, z);
            CHECK(rel(lhs, std::pow(zeta(x), z)) <= 1e-10);
        }
    }
    CHECK(rel(K().zeta_pow(2.0, cplx(0.5, -1.5)), std::exp(cplx(0.5, -1.5) * std::log(zeta(2.0)))) < 1e-13);
}

TEST_CASE("zeta'(rho) against high-precision references") {
    for (std::size_t i = 0; i < 4; ++i) {
        ZeroRef zr{static_cast<std::size_t>(ref::kZetaPrimeIndex[i]), false};
        CHECK(rel(K().zeta_prime_at_zero(zr), ref::kZetaPrimeAtZero[i]) <= 1e-8);
        ZeroRef zc{zr.index, true};
        CHECK(rel(K().zeta_prime_at_zero(zc), std::conj(ref::kZetaPrimeAtZero[i])) <= 1e-8);
    }
    CHECK(std::abs(K().zeta_prime_at_zero({2, false})) > 1e-3);
}

TEST_CASE("local logarithm near a zero") {
    ZeroRef z1{1, false};
    cplx r = K().rho(z1);
    for (cplx d : {cplx(0.01, 0), cplx(-0.1, 0), cplx(0.02, -0.05), cplx(-0.05, 0.1)}) {
        cplx s = r + d;
        cplx lhs = std::exp(K().L_rho(z1, s).value) * d;
        CHECK(rel(lhs, zeta_h(s)) <= 1e-9);
    }
    cplx at = std::exp(K().L_rho(z1, r).value);
    CHECK(rel(at, (r - 1.0) * K().zeta_prime_at_zero(z1)) <= 1e-9);
    CHECK_THROWS_AS(K().L_rho(z1, r + 2.0), RangeError);

    ZeroRef c5{5, true};
    cplx rc = K().rho(c5);
    CHECK(rc == std::conj(K().rho({5, false})));
    cplx s = rc - 0.08;
    CHECK(rel(std::exp(K().L_rho(c5, s).value) * (s - rc), zeta_h(s)) <= 1e-9);
}

TEST_CASE("zero table") {
    const ZeroTable& t = K().zeros();
    CHECK(t.size() >= 100);
    CHECK(t.ordinate(1) > 14.13);
    CHECK(t.ordinate(1) < 14.14);
    for (std::size_t k = 2; k <= t.size(); ++k) CHECK(t.ordinate(k) > t.ordinate(k - 1));
    for (std::size_t k = 1; k <= t.size(); ++k) CHECK(std::abs(zeta(cplx(0.5, t.ordinate(k)))) <= 1e-8);
    CHECK_NOTHROW(t.check_zeros());
    CHECK_THROWS_AS(t.ordinate(0), RangeError);
    CHECK(t.disc_radius(1) == doctest::Approx(0.45));

    auto file = ZeroTable::from_file(FAKEMU_TEST_ZEROS_FILE);
    CHECK(file.size() == t.size());
    for (std::size_t k = 1; k <= t.size(); ++k) CHECK(file.ordinate(k) == t.ordinate(k));

    std::istringstream bad("14.134725141734693\n21.02x\n");
    CHECK_THROWS_AS(ZeroTable::parse(bad, "inline"), SyntaxError);
    std::istringstream unsorted("14.134725141734693\n25.0\n21.0\n");
    CHECK_THROWS_AS(ZeroTable::parse(unsorted, "inline"), DomainError);
    std::istringstream wrong("14.2\n");
    CHECK_THROWS_AS(ZeroTable::parse(wrong, "inline"), DomainError);
    std::istringstream fake("# comment\n14.134725141734693\n21.5\n");
    auto ft = ZeroTable::parse(fake, "inline");
    CHECK_THROWS_AS(ft.check_zeros(), ConsistencyError);
    CHECK_THROWS_AS(ZeroTable::from_file("/nonexistent/zeros.txt"), DomainError);
}

}  // TEST_SUITE
