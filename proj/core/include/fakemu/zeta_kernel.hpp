#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "fakemu/complex_util.hpp"

namespace fakemu {

// zeta(s) on -1 <= Re s <= 40, |Im s| <= 600
cplx zeta(cplx s);

// (s-1) zeta(s), regular at s = 1 where it equals 1; no range check
cplx zeta_h(cplx s);

cplx gamma(cplx s);

// log zeta(s) on Re s >= 1.2, real for real s
cplx log_zeta_euler(cplx s);

class ZeroTable {
public:
    static ZeroTable builtin();
    static ZeroTable from_file(const std::string& path);
    static ZeroTable parse(std::istream& in, std::string source);

    std::size_t size() const { return ordinates_.size(); }
    // 1-based
    double ordinate(std::size_t k) const;
    const std::vector<double>& ordinates() const { return ordinates_; }
    const std::string& source() const { return source_; }

    // 0.45 * min(neighbour gaps, 1)
    double disc_radius(std::size_t k) const;

    // throws ConsistencyError unless |zeta(1/2 + i gamma_k)| <= tol for all k
    void check_zeros(double tol = 1e-8) const;

private:
    ZeroTable(std::vector<double> ords, std::string source);
    std::vector<double> ordinates_;
    std::string source_;
};

struct ZeroRef {
    std::size_t index = 1;  // 1-based
    bool conjugate = false;
};

struct ContinuedLog {
    cplx value;
    cplx anchor;
    std::vector<cplx> path;
    int winding = 0;
};

class ZetaKernel {
public:
    explicit ZetaKernel(ZeroTable table = ZeroTable::builtin());

    const ZeroTable& zeros() const { return table_; }
    cplx rho(ZeroRef z) const;

    // branch of log((s-1) zeta(s)) with L1(1) = 0, continued along horizontal lines
    ContinuedLog L1(cplx s) const;
    cplx L1_value(cplx s) const { return L1(s).value; }

    // ((s-1) zeta(s))^z / s
    cplx Z(cplx s, cplx z) const;

    // zeta(s)^w = (s-1)^{-w} exp(w L1(s)), principal (s-1)^{-w}
    cplx zeta_pow(cplx s, cplx w) const;

    // branch of log((s-1) zeta(s) / (s - rho)) on the disc around rho
    ContinuedLog L_rho(ZeroRef zr, cplx s) const;

    cplx zeta_prime_at_zero(ZeroRef zr) const;

private:
    void check_cut(cplx s) const;
    cplx anchor_log_rho(ZeroRef zr) const;

    ZeroTable table_;
    mutable std::mutex mu_;
    mutable std::vector<std::optional<cplx>> zprime_;
    mutable std::vector<std::optional<cplx>> anchor_;
    mutable std::vector<std::optional<cplx>> anchor_conj_;
};

// continuation controls
inline constexpr double kContinuationStep = 0.25;
inline constexpr double kContinuationFloor = 1e-6;
inline constexpr double kCutTolerance = 1e-9;

}  // namespace fakemu
