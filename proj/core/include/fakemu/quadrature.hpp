#pragma once

#include <functional>
#include <mutex>
#include <vector>

#include "fakemu/complex_util.hpp"

namespace fakemu {

inline constexpr int kMaxQuadLevel = 12;

// I(L) = int_0^b e^{-L u} u^alpha (scale (b-u))^beta R(u) du with R smooth on [0, b].
// Nodes and R values are cached so that many L share one set of evaluations.
class LaplaceIntegral {
public:
    using Regular = std::function<cplx(double)>;

    // with interpolate set, R is replaced by a verified Chebyshev interpolant on [0, b]
    LaplaceIntegral(double b, cplx alpha, cplx beta, double beta_scale, Regular r,
                    double tol = 1e-10, int max_level = kMaxQuadLevel, bool interpolate = true);

    cplx operator()(double L) const;

    int last_level() const;
    std::size_t evaluations() const;
    // Chebyshev degree in use, 0 when R is sampled directly
    int interpolant_size() const;

private:
    struct Node {
        double u;
        cplx wf;   // dt weight times endpoint powers
        cplx r;
    };

    void ensure_level(int k) const;
    void build_interpolant() const;
    cplx regular(double u) const;
    cplx level_sum(int k, double L, double& abs_sum) const;

    double b_;
    cplx alpha_, beta_;
    double scale_;
    Regular r_;
    double tol_;
    int max_level_;
    bool interpolate_;

    mutable std::mutex mu_;
    mutable std::vector<std::vector<Node>> levels_;
    mutable bool have_r0_ = false;
    mutable cplx r0_;
    mutable cplx rb_;
    mutable double u_min_ = 0, comp_min_ = 0;
    mutable int last_level_ = -1;
    mutable std::size_t evals_ = 0;
    mutable std::vector<cplx> cheb_;
};

}  // namespace fakemu
