#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fakemu/complex_util.hpp"

namespace fakemu {

enum class EpsClass { CM, Periodic, Finite, QuadPhase };

const char* to_string(EpsClass c);

// Symbolic description of a sequence eps_0 = 1, eps_1, eps_2, ...
class EpsilonSpec {
public:
    static EpsilonSpec completely_multiplicative(cplx xi);
    static EpsilonSpec periodic(std::vector<cplx> values);
    static EpsilonSpec finite(std::vector<cplx> values);
    static EpsilonSpec quadratic_phase(double alpha);

    EpsClass kind() const { return kind_; }
    cplx xi() const { return xi_; }
    double alpha() const { return alpha_; }
    std::span<const cplx> values() const { return values_; }

    cplx at(std::uint64_t k) const;

    // true when every eps_k is real; then F(conj s) = conj F(s)
    bool all_real() const;

    std::string describe() const;

private:
    EpsilonSpec() = default;
    void validate() const;

    EpsClass kind_ = EpsClass::Finite;
    cplx xi_{0.0, 0.0};
    double alpha_ = 0.0;
    std::vector<cplx> values_;
};

EpsilonSpec parse_eps_spec(std::string_view text);

// evaluates a complex literal of the eps grammar
cplx parse_cnum(std::string_view text);

cplx eps_at(const EpsilonSpec& spec, std::uint64_t k);

struct FactorParams {
    cplx z;
    cplx w;
    double re_z_plus_w = 0.0;
    std::optional<int> z_integer_case;
    std::optional<int> w_integer_case;
    bool w_is_one = false;
    bool in_window = false;
};

FactorParams zw_params(const EpsilonSpec& spec);

cplx g_eval(const EpsilonSpec& spec, cplx u, double tol = 1e-14);

}  // namespace fakemu
