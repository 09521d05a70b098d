#include "fakemu/zeta_kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "fakemu/errors.hpp"
#include "fakemu/sieve.hpp"
#include "zero_ordinates.inc"

namespace fakemu {

namespace {

// B_{2k} / (2k)!
constexpr std::array<double, 12> kEmCoeff = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
};

// B_{2k} / (2k (2k-1))
constexpr std::array<double, 12> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
    77683.0 / 5796.0,
    -236364091.0 / 1506960.0,
};

const std::vector<double>& log_table() {
    static const std::vector<double> t = [] {
        std::vector<double> v(2048);
        for (std::size_t n = 1; n < v.size(); ++n) v[n] = std::log(static_cast<double>(n));
        return v;
    }();
    return t;
}

inline double logn(std::size_t n) {
    const auto& t = log_table();
    return n < t.size() ? t[n] : std::log(static_cast<double>(n));
}

inline cplx npow(std::size_t n, cplx s) {
    double l = logn(n);
    return std::polar(std::exp(-s.real() * l), -s.imag() * l);
}

struct EmParts {
    cplx head;    // sum_{n<N} n^{-s} + N^{-s}/2 + Bernoulli tail
    cplx n1ms;    // N^{1-s}
};

EmParts euler_maclaurin(cplx s) {
    std::size_t N = std::max<std::size_t>(20, static_cast<std::size_t>(std::ceil(1.3 * std::abs(s.imag()))));
    double sr = 0, si = 0;
    for (std::size_t n = N - 1; n >= 1; --n) {
        cplx v = npow(n, s);
        sr += v.real();
        si += v.imag();
    }
    cplx nms = npow(N, s);
    double dn = static_cast<double>(N);
    cplx head(sr, si);
    head += 0.5 * nms;
    cplx term = s * nms / dn;
    cplx tail = kEmCoeff[0] * term;
    double inv2 = 1.0 / (dn * dn);
    for (std::size_t k = 2; k <= kEmCoeff.size(); ++k) {
        double a = static_cast<double>(2 * k - 3);
        term *= (s + a) * (s + a + 1.0) * inv2;
        tail += kEmCoeff[k - 1] * term;
    }
    head += tail;
    return {head, nms * dn};
}

cplx log_gamma_stirling(cplx z) {
    cplx r = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi);
    cplx iz = 1.0 / z;
    cplx iz2 = iz * iz;
    cplx p = iz;
    for (double c : kStirling) {
        r += c * p;
        p *= iz2;
    }
    return r;
}

// Gamma on Re s >= 1/2
cplx gamma_right(cplx s) {
    cplx t = s;
    cplx prod(1.0, 0.0);
    while (std::abs(t) < 15.0) {
        prod *= t;
        t += 1.0;
    }
    return std::exp(log_gamma_stirling(t)) / prod;
}

cplx log_gamma_right(cplx s) {
    cplx t = s;
    cplx lp(0.0, 0.0);
    while (std::abs(t) < 15.0) {
        lp += std::log(t);
        t += 1.0;
    }
    return log_gamma_stirling(t) - lp;
}

// log sin(pi s) on some branch, safe for large |Im s|
cplx log_sin_pi(cplx s) {
    if (s.imag() < 0) return std::conj(log_sin_pi(std::conj(s)));
    // sin(pi s) = e^{-i pi s} (e^{2 i pi s} - 1) / (2i)
    cplx e2 = std::exp(cplx(0.0, 2.0 * kPi) * s);
    return cplx(0.0, -kPi) * s + std::log((e2 - 1.0) / cplx(0.0, 2.0));
}

const std::vector<std::uint32_t>& euler_primes() {
    static const std::vector<std::uint32_t> p = primes_up_to(1'000'000);
    return p;
}

template <class H>
ContinuedLog continue_along(H&& h, cplx from, cplx log_from, cplx to) {
    ContinuedLog out;
    out.anchor = from;
    out.path.push_back(from);
    cplx dir = to - from;
    double len = std::abs(dir);
    double arg = log_from.imag();
    if (len == 0.0) {
        out.value = log_from;
        return out;
    }
    dir /= len;
    double pos = 0.0;
    double step = kContinuationStep;
    cplx hc = h(from);
    cplx hn = hc;
    while (pos < len) {
        double st = std::min(step, len - pos);
        cplx pn = from + dir * (pos + st);
        hn = h(pn);
        double d = std::arg(hn / hc);
        if (std::abs(d) >= kPi / 2) {
            step = st / 2;
            if (step < kContinuationFloor)
                throw StepError("continuation step underflow near " + std::to_string(pn.real()) +
                                "+" + std::to_string(pn.imag()) + "i");
            continue;
        }
        arg += d;
        pos += st;
        hc = hn;
        out.path.push_back(pn);
        step = std::min(kContinuationStep, 2 * st);
    }
    out.value = cplx(std::log(std::abs(hn)), arg);
    out.winding = static_cast<int>(std::lround((arg - std::arg(hn)) / (2 * kPi)));
    return out;
}

}  // namespace

cplx zeta_h(cplx s) {
    EmParts p = euler_maclaurin(s);
    return (s - 1.0) * p.head + p.n1ms;
}

cplx zeta(cplx s) {
    if (s == cplx(1.0, 0.0)) throw PoleError("zeta has a pole at s = 1");
    if (!(s.real() >= -1.0 && s.real() <= 40.0 && std::abs(s.imag()) <= 600.0))
        throw RangeError("zeta argument outside -1 <= Re s <= 40, |Im s| <= 600");
    EmParts p = euler_maclaurin(s);
    return p.head + p.n1ms / (s - 1.0);
}

cplx gamma(cplx s) {
    if (s.imag() == 0.0 && s.real() <= 0.0 && s.real() == std::round(s.real()))
        throw PoleError("gamma has a pole at a non-positive integer");
    if (s.real() >= 0.5) return gamma_right(s);
    if (std::abs(s.imag()) < 100.0) return kPi / (std::sin(kPi * s) * gamma_right(1.0 - s));
    return std::exp(std::log(kPi) - log_sin_pi(s) - log_gamma_right(1.0 - s));
}

cplx log_zeta_euler(cplx s) {
    double sg = s.real();
    if (!(sg >= 1.2)) throw RangeError("log_zeta_euler needs Re s >= 1.2");
    const auto& primes = euler_primes();
    std::uint32_t p0 = 100;
    while (p0 < 1'000'000) {
        double b = std::pow(p0, 1.0 - sg) / (sg - 1.0) + std::pow(p0, -sg);
        if (b <= 0.75) break;
        p0 *= 10;
    }
    cplx sum(0.0, 0.0);
    cplx euler(1.0, 0.0);
    for (std::uint32_t p : primes) {
        if (p > p0) break;
        cplx u = npow(p, s);
        sum -= std::log(1.0 - u);
        euler *= 1.0 - u;
    }
    if (sg > 40.0) return sum;
    cplx rough = zeta(s) * euler;
    return sum + std::log(rough);
}

ZeroTable::ZeroTable(std::vector<double> ords, std::string source)
    : ordinates_(std::move(ords)), source_(std::move(source)) {
    if (ordinates_.empty()) throw DomainError("zero table is empty");
    for (std::size_t i = 1; i < ordinates_.size(); ++i)
        if (!(ordinates_[i] > ordinates_[i - 1]))
            throw DomainError("zero ordinates must be strictly increasing");
    if (!(ordinates_[0] > 14.13 && ordinates_[0] < 14.14))
        throw DomainError("first zero ordinate must lie in (14.13, 14.14)");
}

ZeroTable ZeroTable::builtin() {
    return ZeroTable(std::vector<double>(std::begin(detail::kZeroOrdinates),
                                         std::end(detail::kZeroOrdinates)),
                     "builtin");
}

ZeroTable ZeroTable::parse(std::istream& in, std::string source) {
    std::vector<double> v;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        auto e = line.find_last_not_of(" \t\r");
        std::string tok = line.substr(b, e - b + 1);
        char* end = nullptr;
        double g = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size() || !std::isfinite(g))
            throw SyntaxError("zero table line " + std::to_string(lineno) + ": bad ordinate '" + tok + "'");
        v.push_back(g);
    }
    return ZeroTable(std::move(v), std::move(source));
}

ZeroTable ZeroTable::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open zero table '" + path + "'");
    return parse(in, path);
}

double ZeroTable::ordinate(std::size_t k) const {
    if (k == 0 || k > ordinates_.size()) throw RangeError("zero index out of range");
    return ordinates_[k - 1];
}

double ZeroTable::disc_radius(std::size_t k) const {
    double g = ordinate(k);
    double m = 1.0;
    if (k > 1) m = std::min(m, g - ordinates_[k - 2]);
    if (k < ordinates_.size()) m = std::min(m, ordinates_[k] - g);
    return 0.45 * m;
}

void ZeroTable::check_zeros(double tol) const {
    for (std::size_t k = 1; k <= size(); ++k) {
        double m = std::abs(zeta(cplx(0.5, ordinate(k))));
        if (!(m <= tol))
            throw ConsistencyError("|zeta(rho_" + std::to_string(k) + ")| = " + std::to_string(m) +
                                   " exceeds tolerance");
    }
}

ZetaKernel::ZetaKernel(ZeroTable table)
    : table_(std::move(table)),
      zprime_(table_.size()),
      anchor_(table_.size()),
      anchor_conj_(table_.size()) {}

cplx ZetaKernel::rho(ZeroRef z) const {
    double g = table_.ordinate(z.index);
    return {0.5, z.conjugate ? -g : g};
}

void ZetaKernel::check_cut(cplx s) const {
    if (s.real() > 0.5 + kCutTolerance) return;
    double t = std::abs(s.imag());
    const auto& o = table_.ordinates();
    auto it = std::lower_bound(o.begin(), o.end(), t - kCutTolerance);
    if (it != o.end() && std::abs(*it - t) <= kCutTolerance)
        throw CutError("point lies on the horizontal cut left of a zeta zero");
}

ContinuedLog ZetaKernel::L1(cplx s) const {
    if (!(s.real() > 1.0 / 3.0)) throw RangeError("L1 needs Re s > 1/3");
    if (s.real() >= 2.0) {
        ContinuedLog out;
        out.anchor = s;
        out.path = {s};
        out.value = log_zeta_euler(s) + std::log(s - 1.0);
        return out;
    }
    if (std::abs(s.imag()) <= 1.0) {
        ContinuedLog out;
        out.anchor = s;
        out.path = {s};
        out.value = std::log(zeta_h(s));
        return out;
    }
    check_cut(s);
    cplx a(3.0, s.imag());
    cplx la = log_zeta_euler(a) + std::log(a - 1.0);
    return continue_along([](cplx p) { return zeta_h(p); }, a, la, s);
}

cplx ZetaKernel::Z(cplx s, cplx z) const {
    if (s == cplx(0.0, 0.0)) throw PoleError("Z(s; z) has a pole at s = 0");
    if (z == cplx(0.0, 0.0)) return 1.0 / s;
    return std::exp(z * L1(s).value) / s;
}

cplx ZetaKernel::zeta_pow(cplx s, cplx w) const {
    if (w == cplx(0.0, 0.0)) return {1.0, 0.0};
    return std::exp(w * (L1(s).value - std::log(s - 1.0)));
}

cplx ZetaKernel::zeta_prime_at_zero(ZeroRef zr) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto& c = zprime_.at(zr.index - 1);
        if (c) return zr.conjugate ? std::conj(*c) : *c;
    }
    cplx r = rho({zr.index, false});
    const double h = 1e-4;
    cplx fd = (-zeta(r + 2 * h) + 8.0 * zeta(r + h) - 8.0 * zeta(r - h) + zeta(r - 2 * h)) / (12 * h);
    const int n = 64;
    const double rad = 1e-3;
    cplx acc(0.0, 0.0);
    for (int j = 0; j < n; ++j) {
        cplx e = std::polar(1.0, 2 * kPi * j / n);
        acc += zeta(r + rad * e) / e;
    }
    cplx cd = acc / (n * rad);
    if (rel_err(fd, cd) > 1e-7)
        throw ConsistencyError("zeta'(rho_" + std::to_string(zr.index) +
                               ") estimators disagree");
    cplx v = 0.5 * (fd + cd);
    {
        std::lock_guard<std::mutex> lk(mu_);
        zprime_[zr.index - 1] = v;
    }
    return zr.conjugate ? std::conj(v) : v;
}

cplx ZetaKernel::anchor_log_rho(ZeroRef zr) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto& c = (zr.conjugate ? anchor_conj_ : anchor_).at(zr.index - 1);
        if (c) return *c;
    }
    double r = 0.5 * table_.disc_radius(zr.index);
    cplx v = L1(rho(zr) + r).value - std::log(r);
    {
        std::lock_guard<std::mutex> lk(mu_);
        (zr.conjugate ? anchor_conj_ : anchor_)[zr.index - 1] = v;
    }
    return v;
}

ContinuedLog ZetaKernel::L_rho(ZeroRef zr, cplx s) const {
    cplx r0 = rho(zr);
    double R = table_.disc_radius(zr.index);
    if (std::abs(s - r0) > R * (1 + 1e-12)) throw RangeError("L_rho: point outside the zero's disc");
    cplx zp = zeta_prime_at_zero(zr);
    cplx h0 = (r0 - 1.0) * zp;
    auto h = [&](cplx p) {
        cplx d = p - r0;
        if (std::abs(d) < 1e-8) return h0;
        return zeta_h(p) / d;
    };
    cplx sa = r0 + 0.5 * R;
    return continue_along(h, sa, anchor_log_rho(zr), s);
}

}  // namespace fakemu
