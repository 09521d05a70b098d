#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "fakemu/complex_util.hpp"
#include "fakemu/eps_model.hpp"
#include "fakemu/euler_residual.hpp"
#include "fakemu/quadrature.hpp"
#include "fakemu/zeta_kernel.hpp"

namespace fakemu {

struct FormulaConfig {
    double a = 0.40;
    int n_zeros = 30;
    double quad_tol = 1e-10;
    double watson_radius = 0.05;
    int watson_nodes = 256;
    GfConfig gf{};

    void validate(std::size_t table_size) const;
};

enum class PartMode { Quadrature, Watson, Residue, SineZero };

const char* to_string(PartMode m);

enum class PointKind { One, Half, Zero };

struct ExpansionPoint {
    PointKind kind = PointKind::Half;
    ZeroRef zero{};

    static ExpansionPoint one() { return {PointKind::One, {}}; }
    static ExpansionPoint half() { return {PointKind::Half, {}}; }
    static ExpansionPoint at_zero(std::size_t k, bool conj = false) {
        return {PointKind::Zero, {k, conj}};
    }
};

struct ZeroTerm {
    ZeroRef zero;
    cplx value;
};

struct FormulaBreakdown {
    double x = 0;
    cplx delta_1, delta_half, zero_sum, total;
    std::vector<ZeroTerm> delta_rho;
    double last_term_abs = 0;
    PartMode mode_1 = PartMode::Quadrature;
    PartMode mode_half = PartMode::Quadrature;
    PartMode mode_rho = PartMode::Quadrature;
};

// Laplace-form explicit formula for A_f^exp(x), evaluator bound to one spec
class ExplicitFormula {
public:
    ExplicitFormula(EpsilonSpec spec, FormulaConfig cfg = {},
                    std::shared_ptr<const ZetaKernel> kernel = nullptr);

    const EpsilonSpec& spec() const { return spec_; }
    const FactorParams& params() const { return params_; }
    const FormulaConfig& config() const { return cfg_; }
    const ZetaKernel& kernel() const { return *kernel_; }
    const ResidualProduct& residual() const { return G_; }

    cplx J1(cplx u) const;
    cplx J_half(cplx u) const;
    cplx J_rho(ZeroRef zr, cplx u) const;
    cplx J(const ExpansionPoint& p, cplx u) const;

    cplx delta_1(double x) const;
    cplx delta_half(double x) const;
    cplx delta_rho(ZeroRef zr, double x) const;

    PartMode mode_1() const;
    PartMode mode_half() const;
    PartMode mode_rho() const;

    struct ZeroSum {
        cplx value;
        std::vector<ZeroTerm> terms;
        double last_term_abs = 0;
    };
    ZeroSum zero_sum(double x) const;

    std::vector<cplx> watson_coeffs(const ExpansionPoint& p, int M, int nodes = 0) const;
    cplx c_half() const;
    cplx watson_delta_half(double x, int M) const;

    FormulaBreakdown a_exp_formula(double x) const;

private:
    cplx J1_regular(double u) const;
    const LaplaceIntegral& integral_1() const;
    const LaplaceIntegral& integral_half() const;
    const LaplaceIntegral& integral_rho(ZeroRef zr) const;
    void check_x(double x) const;

    EpsilonSpec spec_;
    FormulaConfig cfg_;
    std::shared_ptr<const ZetaKernel> kernel_;
    ResidualProduct G_;
    FactorParams params_;
    cplx z_, w_;

    mutable std::mutex mu_;
    mutable std::unique_ptr<LaplaceIntegral> int1_, inthalf_;
    mutable std::map<std::pair<std::size_t, bool>, std::unique_ptr<LaplaceIntegral>> introh_;
    mutable bool have_c_half_ = false;
    mutable cplx c_half_;
    mutable std::vector<cplx> lambda_half_;
};

std::shared_ptr<const ZetaKernel> default_kernel();

}  // namespace fakemu
