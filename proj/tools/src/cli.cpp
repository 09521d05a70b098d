#include "fakemu_cli/cli.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fakemu/bias.hpp"
#include "fakemu/errors.hpp"
#include "fakemu/sieve.hpp"
#include "fakemu/verify.hpp"

namespace fakemu::cli {

using nlohmann::ordered_json;

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

ordered_json cjson(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

struct Shared {
    CLI::Option* prime_limit = nullptr;
    CLI::Option* n_zeros = nullptr;
    CLI::Option* a = nullptr;
    CLI::Option* zeros_file = nullptr;
};

Shared add_shared(CLI::App* app, RunConfig& rc, bool eps_required) {
    Shared sh;
    auto* eps = app->add_option("--eps", rc.eps, "eps spec, e.g. periodic:m=2:[i,-i]");
    if (eps_required) eps->required();
    sh.prime_limit = app->add_option("--prime-limit", rc.prime_limit, "Euler product cutoff P");
    sh.n_zeros = app->add_option("--n-zeros", rc.n_zeros, "number of zeta zeros in the zero sum");
    sh.a = app->add_option("--a", rc.a, "vertical line abscissa in (1/3, 1/2)");
    sh.zeros_file = app->add_option("--zeros-file", rc.zeros_file, "file of zero ordinates");
    app->add_option("--out", rc.out, "output path (stdout when omitted)");
    app->add_option("--format", rc.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--config", rc.config_file, "JSON file with zeros_file, prime_limit, n_zeros, a");
    return sh;
}

void apply_config_file(RunConfig& rc, const Shared& sh) {
    if (rc.config_file.empty()) return;
    std::ifstream in(rc.config_file);
    if (!in) throw SyntaxError("cannot open config file '" + rc.config_file + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw SyntaxError(std::string("config file: ") + e.what());
    }
    if (!j.is_object()) throw SyntaxError("config file must hold a JSON object");
    try {
        for (auto it = j.begin(); it != j.end(); ++it) {
            const std::string& k = it.key();
            if (k == "zeros_file") {
                if (!sh.zeros_file->count()) rc.zeros_file = it->get<std::string>();
            } else if (k == "prime_limit") {
                if (!sh.prime_limit->count()) rc.prime_limit = it->get<std::uint64_t>();
            } else if (k == "n_zeros") {
                if (!sh.n_zeros->count()) rc.n_zeros = it->get<int>();
            } else if (k == "a") {
                if (!sh.a->count()) rc.a = it->get<double>();
            } else {
                throw SyntaxError("config file: unknown key '" + k + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw SyntaxError(std::string("config file: ") + e.what());
    }
}

FormulaConfig formula_config(const RunConfig& rc) {
    FormulaConfig cfg;
    cfg.a = rc.a;
    cfg.n_zeros = rc.n_zeros;
    cfg.gf = GfConfig(rc.prime_limit);
    return cfg;
}

std::shared_ptr<const ZetaKernel> make_kernel(const RunConfig& rc) {
    if (rc.zeros_file.empty()) return default_kernel();
    return std::make_shared<ZetaKernel>(ZeroTable::from_file(rc.zeros_file));
}

std::string pick_format(const RunConfig& rc, const char* fallback, bool csv_ok) {
    std::string f = rc.format.empty() ? fallback : rc.format;
    if (f == "csv" && !csv_ok) throw DomainError("this command writes JSON only");
    return f;
}

void emit(const RunConfig& rc, std::ostream& out, const std::string& text) {
    if (rc.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(rc.out, std::ios::binary);
    if (!f) throw DomainError("cannot open output file '" + rc.out + "'");
    f << text;
}

ordered_json report_json(const BiasReport& r, const std::string& eps) {
    ordered_json j;
    j["eps"] = eps;
    j["z"] = cjson(r.params.z);
    j["w"] = cjson(r.params.w);
    j["re_z_plus_w"] = r.re_z_plus_w;
    j["c_half"] = cjson(r.c_half);
    j["classification"] = to_string(r.classification);
    j["general_rule"] = to_string(r.general_rule);
    j["prime_limit"] = r.prime_limit;
    j["tail_estimate"] = r.tail_estimate;
    j["notes"] = r.notes;
    return j;
}

int cmd_classify(const RunConfig& rc, std::ostream& out) {
    pick_format(rc, "json", false);
    ExplicitFormula F(parse_eps_spec(rc.eps), formula_config(rc), make_kernel(rc));
    emit(rc, out, report_json(classify(F), rc.eps).dump(2) + "\n");
    return kExitOk;
}

int cmd_trajectory(const RunConfig& rc, std::ostream& out) {
    std::string fmt = pick_format(rc, "csv", true);
    SumMode mode;
    if (rc.mode.empty() || rc.mode == "formula")
        mode = SumMode::Formula;
    else if (rc.mode == "direct")
        mode = SumMode::Direct;
    else
        throw DomainError("trajectory mode must be direct or formula");
    GridKind grid = rc.grid == "loglog" ? GridKind::LogLog : GridKind::Log;
    auto spec = parse_eps_spec(rc.eps);
    ExplicitFormula F(spec, formula_config(rc), make_kernel(rc));
    // capacity is checked before the costly bias constant
    if (mode == SumMode::Direct && rc.x_max > kMaxDirectTrajectoryX)
        throw CapacityError("direct trajectories are limited to x <= 1e8");
    make_grid(rc.x_min, rc.x_max, rc.points, grid);
    cplx center = rc.center ? F.c_half() : cplx(0.0, 0.0);
    auto samples = trajectory(F, rc.x_min, rc.x_max, rc.points, grid, mode, center);

    std::ostringstream os;
    if (fmt == "csv") {
        os << "x,re_B,im_B,re_B_centered,im_B_centered,mode\n";
        for (const auto& s : samples)
            os << format_real(s.x) << ',' << format_real(s.B.real()) << ',' << format_real(s.B.imag())
               << ',' << format_real(s.B_centered.real()) << ',' << format_real(s.B_centered.imag())
               << ',' << to_string(s.mode) << '\n';
    } else {
        ordered_json j;
        j["eps"] = rc.eps;
        j["center"] = cjson(center);
        j["grid"] = rc.grid;
        j["mode"] = to_string(mode);
        ordered_json rows = ordered_json::array();
        for (const auto& s : samples)
            rows.push_back({{"x", s.x}, {"B", cjson(s.B)}, {"B_centered", cjson(s.B_centered)}});
        j["samples"] = rows;
        os << j.dump(2) << '\n';
    }
    emit(rc, out, os.str());
    return kExitOk;
}

int cmd_evaluate(const RunConfig& rc, std::ostream& out) {
    pick_format(rc, "json", false);
    std::string mode = rc.mode.empty() ? "both" : rc.mode;
    if (mode != "direct" && mode != "formula" && mode != "both")
        throw DomainError("evaluate mode must be direct, formula or both");
    if (!(rc.x >= 3)) throw DomainError("evaluate needs x >= 3");
    auto spec = parse_eps_spec(rc.eps);
    ordered_json j;
    j["eps"] = rc.eps;
    j["x"] = rc.x;
    cplx direct;
    if (mode != "formula") {
        if (rc.x * kDefaultCutoffMult > static_cast<double>(kMaxDirectN))
            throw CapacityError("direct sum would exceed n = 4.5e9");
        direct = direct_exp_sum(spec, rc.x);
        j["direct"] = cjson(direct);
    }
    if (mode != "direct") {
        ExplicitFormula F(spec, formula_config(rc), make_kernel(rc));
        FormulaBreakdown b = F.a_exp_formula(rc.x);
        j["delta_1"] = cjson(b.delta_1);
        j["delta_half"] = cjson(b.delta_half);
        j["zero_sum"] = cjson(b.zero_sum);
        ordered_json pz = ordered_json::array();
        for (const auto& t : b.delta_rho)
            pz.push_back({{"index", t.zero.index}, {"conjugate", t.zero.conjugate}, {"value", cjson(t.value)}});
        j["per_zero"] = pz;
        j["total"] = cjson(b.total);
        j["last_term_abs"] = b.last_term_abs;
        j["modes"] = {{"delta_1", to_string(b.mode_1)},
                      {"delta_half", to_string(b.mode_half)},
                      {"delta_rho", to_string(b.mode_rho)}};
        if (mode == "both") j["abs_discrepancy"] = std::abs(direct - b.total);
    }
    emit(rc, out, j.dump(2) + "\n");
    return kExitOk;
}

ExpansionPoint parse_point(const std::string& p) {
    if (p == "one") return ExpansionPoint::one();
    if (p == "half") return ExpansionPoint::half();
    if (p.rfind("zero:", 0) == 0) {
        std::string k = p.substr(5);
        bool conj = !k.empty() && k[0] == '-';
        if (conj) k = k.substr(1);
        if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos || k.size() > 6)
            throw SyntaxError("point must be one, half or zero:K");
        std::size_t idx = std::stoul(k);
        if (idx == 0) throw SyntaxError("zero index is 1-based");
        return ExpansionPoint::at_zero(idx, conj);
    }
    throw SyntaxError("point must be one, half or zero:K");
}

int cmd_watson(const RunConfig& rc, std::ostream& out) {
    std::string fmt = pick_format(rc, "json", true);
    ExpansionPoint p = parse_point(rc.point);
    ExplicitFormula F(parse_eps_spec(rc.eps), formula_config(rc), make_kernel(rc));
    auto lam = F.watson_coeffs(p, rc.order);
    std::ostringstream os;
    if (fmt == "csv") {
        os << "k,re_lambda,im_lambda\n";
        for (std::size_t k = 0; k < lam.size(); ++k)
            os << k << ',' << format_real(lam[k].real()) << ',' << format_real(lam[k].imag()) << '\n';
    } else {
        ordered_json j;
        j["eps"] = rc.eps;
        j["point"] = rc.point;
        j["order"] = rc.order;
        j["radius"] = F.config().watson_radius;
        ordered_json l = ordered_json::array();
        for (cplx v : lam) l.push_back(cjson(v));
        j["lambda"] = l;
        os << j.dump(2) << '\n';
    }
    emit(rc, out, os.str());
    return kExitOk;
}

int cmd_verify(const RunConfig& rc, std::ostream& out) {
    pick_format(rc, "json", false);
    std::vector<std::string> names;
    if (rc.suite == "all")
        names = suite_names();
    else
        names = {rc.suite};
    FormulaConfig cfg = formula_config(rc);
    auto kernel = make_kernel(rc);
    ordered_json j = ordered_json::array();
    int failed = 0;
    for (const auto& n : names) {
        SuiteResult r = run_suite(n, cfg, kernel);
        failed += r.failed();
        ordered_json checks = ordered_json::array();
        for (const auto& c : r.checks)
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        j.push_back({{"suite", r.suite}, {"passed", r.passed()}, {"failed", r.failed()}, {"checks", checks}});
    }
    emit(rc, out, j.dump(2) + "\n");
    return failed ? kExitFailure : kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig rc;
    CLI::App app{"Bias of fake Moebius functions: classification, trajectories and explicit-formula checks"};
    app.name("fakemu");
    app.require_subcommand(1);

    auto* classify_cmd = app.add_subcommand("classify", "bias classification report");
    Shared s_classify = add_shared(classify_cmd, rc, true);

    auto* traj = app.add_subcommand("trajectory", "normalized bias trajectory");
    Shared s_traj = add_shared(traj, rc, true);
    traj->add_option("--x-min", rc.x_min, "first abscissa (>= 3)");
    traj->add_option("--x-max", rc.x_max, "last abscissa");
    traj->add_option("--points", rc.points, "number of samples");
    traj->add_option("--grid", rc.grid, "log or loglog")->check(CLI::IsMember({"log", "loglog"}));
    traj->add_option("--mode", rc.mode, "direct or formula")->check(CLI::IsMember({"direct", "formula"}));
    traj->add_flag("--center,!--no-center", rc.center, "subtract c_half (default on)");

    auto* eval = app.add_subcommand("evaluate", "direct sum and explicit-formula breakdown");
    Shared s_eval = add_shared(eval, rc, true);
    eval->add_option("--x", rc.x, "evaluation point (>= 3)");
    eval->add_option("--mode", rc.mode, "direct, formula or both")
        ->check(CLI::IsMember({"direct", "formula", "both"}));

    auto* wat = app.add_subcommand("watson", "Taylor coefficients of an integrand at u = 0");
    Shared s_wat = add_shared(wat, rc, true);
    wat->add_option("--point", rc.point, "one, half or zero:K");
    wat->add_option("--order", rc.order, "highest coefficient index M (0..8)");

    auto* ver = app.add_subcommand("verify", "run an invariant suite");
    Shared s_ver = add_shared(ver, rc, false);
    ver->add_option("--suite", rc.suite, "core, oracle, asymptotics or all")
        ->check(CLI::IsMember({"core", "oracle", "asymptotics", "all"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitParse;
    }

    try {
        if (classify_cmd->parsed()) {
            apply_config_file(rc, s_classify);
            return cmd_classify(rc, out);
        }
        if (traj->parsed()) {
            apply_config_file(rc, s_traj);
            return cmd_trajectory(rc, out);
        }
        if (eval->parsed()) {
            apply_config_file(rc, s_eval);
            return cmd_evaluate(rc, out);
        }
        if (wat->parsed()) {
            apply_config_file(rc, s_wat);
            return cmd_watson(rc, out);
        }
        apply_config_file(rc, s_ver);
        return cmd_verify(rc, out);
    } catch (const WindowError& e) {
        err << "window error: " << e.what() << '\n';
        return kExitWindow;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const SyntaxError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const DomainError& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitParse;
    } catch (const GridError& e) {
        err << "invalid grid: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace fakemu::cli
