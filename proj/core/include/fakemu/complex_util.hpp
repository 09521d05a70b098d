#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace fakemu {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kIntegerTol = 1e-12;
inline constexpr double kUnimodularTol = 1e-12;

// distance from x to the nearest integer
inline double integer_distance(double x) { return std::abs(x - std::round(x)); }

inline bool near_integer(cplx v, double tol = kIntegerTol) {
    return std::abs(v.imag()) <= tol && integer_distance(v.real()) <= tol;
}

// sin(pi*v), exactly zero when v is within tolerance of an integer
inline cplx sin_pi(cplx v) {
    if (near_integer(v)) return cplx(0.0, 0.0);
    double n = std::round(v.real());
    double r = v.real() - n;
    cplx s = std::sin(kPi * cplx(r, v.imag()));
    if (std::fmod(std::abs(n), 2.0) == 1.0) s = -s;
    return s;
}

inline double sin_pi(double x) { return sin_pi(cplx(x, 0.0)).real(); }

// principal power b^e with b != 0
inline cplx cpow(cplx b, cplx e) { return std::exp(e * std::log(b)); }

inline double rel_err(cplx got, cplx want) {
    double d = std::abs(got - want);
    double m = std::abs(want);
    return m > 0 ? d / m : d;
}

// Neumaier-compensated complex accumulator
class CompensatedSum {
public:
    void add(cplx v) {
        add1(re_, cre_, v.real());
        add1(im_, cim_, v.imag());
    }
    cplx value() const { return {re_ + cre_, im_ + cim_}; }

private:
    static void add1(double& s, double& c, double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double re_ = 0, im_ = 0, cre_ = 0, cim_ = 0;
};

}  // namespace fakemu
