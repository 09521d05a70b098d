#include "fakemu/eps_model.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <iomanip>
#include <sstream>

#include "fakemu/errors.hpp"

namespace fakemu {

const char* to_string(EpsClass c) {
    switch (c) {
        case EpsClass::CM: return "CM";
        case EpsClass::Periodic: return "PERIODIC";
        case EpsClass::Finite: return "FINITE";
        case EpsClass::QuadPhase: return "QUADPHASE";
    }
    return "?";
}

namespace {

bool unimodular_or_zero(cplx v) {
    double m = std::abs(v);
    return m <= kUnimodularTol || std::abs(m - 1.0) <= kUnimodularTol;
}

cplx int_power(cplx b, std::uint64_t k) {
    cplx r(1.0, 0.0);
    while (k) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

std::string fmt_num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string fmt_cnum(cplx v) {
    std::string s = fmt_num(v.real());
    if (v.imag() != 0.0) {
        if (v.imag() >= 0) s += "+";
        s += fmt_num(v.imag()) + "i";
    }
    return s;
}

class Parser {
public:
    explicit Parser(std::string_view t) : t_(t) {}

    EpsilonSpec spec() {
        std::string_view cls = word();
        expect(':');
        if (cls == "cm") {
            expect_lit("xi=");
            cplx xi = cnum();
            done();
            return EpsilonSpec::completely_multiplicative(xi);
        }
        if (cls == "periodic") {
            expect_lit("m=");
            long m = integer();
            expect(':');
            auto vals = list();
            done();
            if (m <= 0) throw DomainError("periodic spec needs m >= 1");
            if (static_cast<long>(vals.size()) != m)
                throw DomainError("periodic spec: list length " + std::to_string(vals.size()) +
                                  " differs from m=" + std::to_string(m));
            return EpsilonSpec::periodic(std::move(vals));
        }
        if (cls == "finite") {
            auto vals = list();
            done();
            return EpsilonSpec::finite(std::move(vals));
        }
        if (cls == "quadphase") {
            expect_lit("alpha=");
            double a = real();
            done();
            return EpsilonSpec::quadratic_phase(a);
        }
        fail("unknown class '" + std::string(cls) + "'");
    }

    cplx lone_cnum() {
        cplx v = cnum();
        done();
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError("eps spec: " + what + " at offset " + std::to_string(pos_) + " in '" +
                          std::string(t_) + "'");
    }

    bool eof() const { return pos_ >= t_.size(); }
    char peek() const { return eof() ? '\0' : t_[pos_]; }

    bool starts(std::string_view lit) const { return t_.substr(pos_, lit.size()) == lit; }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    void expect_lit(std::string_view lit) {
        if (!starts(lit)) fail("expected '" + std::string(lit) + "'");
        pos_ += lit.size();
    }

    void done() {
        if (!eof()) fail("trailing characters");
    }

    std::string_view word() {
        size_t b = pos_;
        while (!eof() && std::islower(static_cast<unsigned char>(peek()))) ++pos_;
        if (b == pos_) fail("expected class name");
        return t_.substr(b, pos_ - b);
    }

    long integer() {
        size_t b = pos_;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (b == pos_) fail("expected integer");
        long v = 0;
        auto r = std::from_chars(t_.data() + b, t_.data() + pos_, v);
        if (r.ec != std::errc()) fail("integer out of range");
        return v;
    }

    // REAL: [sign] digits [. digits] [e [sign] digits]
    bool real_ahead() const {
        size_t p = pos_;
        if (p < t_.size() && (t_[p] == '+' || t_[p] == '-')) ++p;
        if (p < t_.size() && std::isdigit(static_cast<unsigned char>(t_[p]))) return true;
        return p + 1 < t_.size() && t_[p] == '.' &&
               std::isdigit(static_cast<unsigned char>(t_[p + 1]));
    }

    double real(bool allow_sign = true) {
        size_t b = pos_;
        if (allow_sign && (peek() == '+' || peek() == '-')) ++pos_;
        size_t digits = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, ++digits;
        if (peek() == '.') {
            ++pos_;
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, ++digits;
        }
        if (digits == 0) fail("expected number");
        if (peek() == 'e' || peek() == 'E') {
            size_t save = pos_;
            ++pos_;
            if (peek() == '+' || peek() == '-') ++pos_;
            size_t ed = 0;
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, ++ed;
            if (ed == 0) pos_ = save;
        }
        std::string tok(t_.substr(b, pos_ - b));
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size()) fail("bad number");
        return v;
    }

    cplx cnum() {
        if (starts("exp(i*")) {
            pos_ += 6;
            double th = expr();
            expect(')');
            cplx v = std::polar(1.0, th);
            if (std::abs(v.real()) < 1e-15) v.real(0.0);
            if (std::abs(v.imag()) < 1e-15) v.imag(0.0);
            return v;
        }
        if (starts("i") || starts("-i")) {
            double sgn = peek() == '-' ? -1.0 : 1.0;
            if (peek() == '-') ++pos_;
            expect('i');
            return {0.0, sgn};
        }
        if (!real_ahead()) fail("expected complex number");
        double re = real();
        if ((peek() == '+' || peek() == '-') && real_ahead()) {
            size_t save = pos_;
            double im = real();
            if (peek() == 'i') {
                ++pos_;
                return {re, im};
            }
            pos_ = save;
            fail("expected 'i' after imaginary part");
        }
        return {re, 0.0};
    }

    std::vector<cplx> list() {
        expect('[');
        std::vector<cplx> out;
        out.push_back(cnum());
        while (peek() == ',') {
            ++pos_;
            out.push_back(cnum());
        }
        expect(']');
        return out;
    }

    double expr() {
        double v = term();
        while (peek() == '+' || peek() == '-') {
            char op = t_[pos_++];
            double r = term();
            v = op == '+' ? v + r : v - r;
        }
        return v;
    }

    double term() {
        double v = factor();
        while (peek() == '*' || peek() == '/') {
            char op = t_[pos_++];
            double r = factor();
            v = op == '*' ? v * r : v / r;
        }
        return v;
    }

    double factor() {
        if (peek() == '-') {
            ++pos_;
            return -factor();
        }
        if (peek() == '+') {
            ++pos_;
            return factor();
        }
        if (peek() == '(') {
            ++pos_;
            double v = expr();
            expect(')');
            return v;
        }
        if (starts("pi")) {
            pos_ += 2;
            return kPi;
        }
        return real(false);
    }

    std::string_view t_;
    size_t pos_ = 0;
};

}  // namespace

EpsilonSpec EpsilonSpec::completely_multiplicative(cplx xi) {
    EpsilonSpec s;
    s.kind_ = EpsClass::CM;
    s.xi_ = xi;
    s.validate();
    return s;
}

EpsilonSpec EpsilonSpec::periodic(std::vector<cplx> values) {
    EpsilonSpec s;
    s.kind_ = EpsClass::Periodic;
    s.values_ = std::move(values);
    s.validate();
    return s;
}

EpsilonSpec EpsilonSpec::finite(std::vector<cplx> values) {
    EpsilonSpec s;
    s.kind_ = EpsClass::Finite;
    s.values_ = std::move(values);
    s.validate();
    return s;
}

EpsilonSpec EpsilonSpec::quadratic_phase(double alpha) {
    EpsilonSpec s;
    s.kind_ = EpsClass::QuadPhase;
    s.alpha_ = alpha;
    s.validate();
    return s;
}

void EpsilonSpec::validate() const {
    if (kind_ == EpsClass::CM) {
        if (!unimodular_or_zero(xi_)) throw DomainError("xi must have modulus 0 or 1");
        return;
    }
    if (kind_ == EpsClass::QuadPhase) {
        if (!std::isfinite(alpha_)) throw DomainError("alpha must be finite");
        return;
    }
    if (values_.empty()) throw DomainError("value list must not be empty");
    for (size_t i = 0; i < values_.size(); ++i) {
        if (!unimodular_or_zero(values_[i]))
            throw DomainError("eps_" + std::to_string(i + 1) + " has modulus " +
                              fmt_num(std::abs(values_[i])) + ", not 0 or 1");
    }
}

cplx EpsilonSpec::at(std::uint64_t k) const {
    if (k == 0) return {1.0, 0.0};
    switch (kind_) {
        case EpsClass::CM: return int_power(xi_, k);
        case EpsClass::Periodic: return values_[(k - 1) % values_.size()];
        case EpsClass::Finite: return k <= values_.size() ? values_[k - 1] : cplx(0.0, 0.0);
        case EpsClass::QuadPhase: {
            // reduce 2*alpha*k^2 modulo 2 and hit quarter turns exactly
            double kk = static_cast<double>(k);
            double t = std::fmod(2.0 * alpha_ * kk * kk, 2.0);
            if (t < 0) t += 2.0;
            double q = std::round(2.0 * t);
            if (std::abs(2.0 * t - q) <= 1e-12) {
                switch (static_cast<int>(q) % 4) {
                    case 0: return {1.0, 0.0};
                    case 1: return {0.0, 1.0};
                    case 2: return {-1.0, 0.0};
                    default: return {0.0, -1.0};
                }
            }
            return std::polar(1.0, kPi * t);
        }
    }
    return {0.0, 0.0};
}

bool EpsilonSpec::all_real() const {
    switch (kind_) {
        case EpsClass::CM: return xi_.imag() == 0.0;
        case EpsClass::QuadPhase: return integer_distance(2.0 * alpha_) <= kIntegerTol;
        default:
            for (cplx v : values_)
                if (v.imag() != 0.0) return false;
            return true;
    }
}

std::string EpsilonSpec::describe() const {
    std::string out;
    auto join = [&] {
        std::string s = "[";
        for (size_t i = 0; i < values_.size(); ++i) {
            if (i) s += ",";
            s += fmt_cnum(values_[i]);
        }
        return s + "]";
    };
    switch (kind_) {
        case EpsClass::CM: return "cm:xi=" + fmt_cnum(xi_);
        case EpsClass::Periodic:
            return "periodic:m=" + std::to_string(values_.size()) + ":" + join();
        case EpsClass::Finite: return "finite:" + join();
        case EpsClass::QuadPhase: return "quadphase:alpha=" + fmt_num(alpha_);
    }
    return out;
}

EpsilonSpec parse_eps_spec(std::string_view text) { return Parser(text).spec(); }

cplx parse_cnum(std::string_view text) { return Parser(text).lone_cnum(); }

cplx eps_at(const EpsilonSpec& spec, std::uint64_t k) { return spec.at(k); }

FactorParams zw_params(const EpsilonSpec& spec) {
    FactorParams p;
    cplx e1 = spec.at(1);
    cplx e2 = spec.at(2);
    p.z = e1;
    p.w = e2 - e1 * (e1 + 1.0) / 2.0;
    p.re_z_plus_w = (p.z + p.w).real();
    if (near_integer(p.z)) p.z_integer_case = static_cast<int>(std::round(p.z.real()));
    if (near_integer(p.w)) p.w_integer_case = static_cast<int>(std::round(p.w.real()));
    p.w_is_one = p.w_integer_case && *p.w_integer_case == 1;
    double rz = p.z.real(), rw = p.w.real();
    bool z_ok = rz >= -1.0 - kIntegerTol && rz <= 1.0 + kIntegerTol;
    bool w_ok = rw >= -2.0 - kIntegerTol && rw < 1.0 - kIntegerTol;
    p.in_window = z_ok && (w_ok || (p.w_is_one && p.z_integer_case.has_value()));
    return p;
}

cplx g_eval(const EpsilonSpec& spec, cplx u, double tol) {
    double au = std::abs(u);
    if (!(au < 1.0)) throw DomainError("g_eval needs |u| < 1");
    switch (spec.kind()) {
        case EpsClass::CM: return 1.0 / (1.0 - spec.xi() * u);
        case EpsClass::Finite: {
            auto v = spec.values();
            cplx acc(0.0, 0.0);
            for (size_t k = v.size(); k-- > 0;) acc = (acc + v[k]) * u;
            return 1.0 + acc;
        }
        case EpsClass::Periodic: {
            auto v = spec.values();
            cplx acc(0.0, 0.0);
            for (size_t k = v.size(); k-- > 0;) acc = (acc + v[k]) * u;
            cplx um = int_power(u, v.size());
            return 1.0 + acc / (1.0 - um);
        }
        case EpsClass::QuadPhase: {
            cplx sum(1.0, 0.0);
            cplx pw(1.0, 0.0);
            double mag = 1.0;
            for (std::uint64_t k = 1;; ++k) {
                pw *= u;
                mag *= au;
                sum += spec.at(k) * pw;
                if (mag * au / (1.0 - au) < tol || mag == 0.0) break;
            }
            return sum;
        }
    }
    return {1.0, 0.0};
}

}  // namespace fakemu
