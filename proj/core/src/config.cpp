#include "scalereg/config.hpp"
#include "scalereg/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace scalereg {

namespace {

using nlohmann::json;

OperatorKind kind_from_string(const std::string& s) {
    if (s == "linear-integration")
        return OperatorKind::LinearIntegration;
    if (s == "exponential-growth")
        return OperatorKind::ExponentialGrowth;
    if (s == "autoconvolution")
        return OperatorKind::Autoconvolution;
    throw InvalidParameterError("config: unknown operator kind '" + s + "'");
}

std::string kind_to_string(OperatorKind k) {
    switch (k) {
    case OperatorKind::LinearIntegration:
        return "linear-integration";
    case OperatorKind::ExponentialGrowth:
        return "exponential-growth";
    case OperatorKind::Autoconvolution:
        return "autoconvolution";
    }
    return "?";
}

DomainKind domain_from_string(const std::string& s) {
    if (s == "all")
        return DomainKind::WholeSpace;
    if (s == "nonnegative")
        return DomainKind::Nonnegative;
    throw InvalidParameterError("config: unknown domain '" + s + "'");
}

std::string domain_to_string(DomainKind d) {
    return d == DomainKind::WholeSpace ? "all" : "nonnegative";
}

} // namespace

void ExperimentConfig::validate() const {
    if (n <= 0 || T <= 0.0)
        throw InvalidParameterError("config: n and T must be positive");
    if (kind == OperatorKind::ExponentialGrowth && (c0 <= 0.0 || c1 <= 0.0))
        throw InvalidParameterError("config: c0, c1 must be positive");
    if (!(a >= 0.0) || !(s >= 0.0) || !(s < u) || !(u <= 2.0 * s + a) || !(-a < s))
        throw InvalidIndicesError("config: indices must satisfy a >= 0, 0 <= s < u <= 2s + a, "
                                  "-a < s");
    if (phi_kind == "hoelder") {
        if (!(gamma > 0.0) || gamma > 1.0)
            throw InvalidParameterError("config: gamma must be in (0, 1]");
    } else if (phi_kind == "logarithmic") {
        if (!(mu > 0.0))
            throw InvalidParameterError("config: mu must be positive");
    } else {
        throw InvalidParameterError("config: unknown phi kind '" + phi_kind + "'");
    }
    if (deltas.empty())
        throw InvalidParameterError("config: delta grid must not be empty");
    for (double d : deltas)
        if (!(d > 0.0))
            throw InvalidParameterError("config: deltas must be positive");
    for (double s2 : sigmas)
        if (s2 < 0.0)
            throw InvalidParameterError("config: sigmas must be nonnegative");
    if (replications < 1)
        throw InvalidParameterError("config: replications must be >= 1");
    if (xi_profile != "alternating" && xi_profile != "smooth")
        throw InvalidParameterError("config: unknown xi profile '" + xi_profile + "'");
    if (rule != "apriori-det" && rule != "lepskij" && rule != "apriori-stoch")
        throw InvalidParameterError("config: unknown rule '" + rule + "'");
    if (rule == "lepskij" && !(lepskij_r > 1.0))
        throw InvalidParameterError("config: lepskij r must exceed 1");
    if (rule == "apriori-stoch" && (!(theta > 0.0) || !(theta < 1.0)))
        throw InvalidParameterError("config: theta must be in (0, 1)");
    if (initial_guess != "zero" && initial_guess != "constant")
        throw InvalidParameterError("config: unknown initial guess rule '" + initial_guess + "'");
    if (truth_profile != "u-smooth" && truth_profile != "constant-one" &&
        truth_profile != "one-plus-half-sine" && truth_profile != "coefficients")
        throw InvalidParameterError("config: unknown truth profile '" + truth_profile + "'");
    if (truth_profile == "coefficients" && static_cast<int>(truth_coefficients.size()) != n)
        throw InvalidParameterError("config: truth coefficients must have length n");
    if (!(v_exponent > 0.0))
        throw InvalidParameterError("config: v exponent must be positive");
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j = json::parse(text);
    ExperimentConfig c;

    if (j.contains("problem")) {
        const auto& p = j["problem"];
        if (p.contains("kind"))
            c.kind = kind_from_string(p["kind"].get<std::string>());
        c.c0 = p.value("c0", c.c0);
        c.c1 = p.value("c1", c.c1);
        c.n = p.value("n", c.n);
        c.T = p.value("T", c.T);
        if (p.contains("domain"))
            c.domain = domain_from_string(p["domain"].get<std::string>());
    }
    if (j.contains("truth")) {
        const auto& t = j["truth"];
        c.truth_profile = t.value("profile", c.truth_profile);
        c.truth_seed = t.value("seed", c.truth_seed);
        if (t.contains("coefficients"))
            c.truth_coefficients = t["coefficients"].get<std::vector<double>>();
    }
    if (j.contains("indices")) {
        const auto& idx = j["indices"];
        c.a = idx.value("a", c.a);
        c.s = idx.value("s", c.s);
        c.u = idx.value("u", c.u);
    }
    if (j.contains("phi")) {
        const auto& p = j["phi"];
        c.phi_kind = p.value("kind", c.phi_kind);
        c.gamma = p.value("gamma", c.gamma);
        c.mu = p.value("mu", c.mu);
    }
    if (j.contains("noise")) {
        const auto& nz = j["noise"];
        if (nz.contains("deltas"))
            c.deltas = nz["deltas"].get<std::vector<double>>();
        if (nz.contains("sigmas"))
            c.sigmas = nz["sigmas"].get<std::vector<double>>();
        c.replications = nz.value("replications", c.replications);
        c.base_seed = nz.value("base_seed", c.base_seed);
        c.xi_profile = nz.value("xi", c.xi_profile);
    }
    if (j.contains("rule")) {
        const auto& r = j["rule"];
        c.rule = r.value("kind", c.rule);
        c.lepskij_r = r.value("r", c.lepskij_r);
        c.theta = r.value("theta", c.theta);
    }
    if (j.contains("solver")) {
        const auto& sv = j["solver"];
        c.max_outer_iterations = sv.value("max_outer_iterations", c.max_outer_iterations);
        c.gradient_tolerance = sv.value("gradient_tolerance", c.gradient_tolerance);
        c.cg_tolerance = sv.value("cg_tolerance", c.cg_tolerance);
        c.cg_max_iterations = sv.value("cg_max_iterations", c.cg_max_iterations);
        c.initial_guess = sv.value("initial_guess", c.initial_guess);
        c.initial_constant = sv.value("initial_constant", c.initial_constant);
        c.multistart = sv.value("multistart", c.multistart);
    }
    if (j.contains("v_scale"))
        c.v_exponent = j["v_scale"].value("exponent", c.v_exponent);
    if (j.contains("run")) {
        const auto& r = j["run"];
        c.threads = r.value("threads", c.threads);
        c.csv_path = r.value("csv", c.csv_path);
        c.svg_path = r.value("svg", c.svg_path);
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidParameterError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["problem"] = {{"kind", kind_to_string(kind)}, {"c0", c0},     {"c1", c1},
                    {"n", n},                       {"T", T},       {"domain", domain_to_string(domain)}};
    j["truth"] = {{"profile", truth_profile}, {"seed", truth_seed}};
    if (!truth_coefficients.empty())
        j["truth"]["coefficients"] = truth_coefficients;
    j["indices"] = {{"a", a}, {"s", s}, {"u", u}};
    j["phi"] = {{"kind", phi_kind}, {"gamma", gamma}, {"mu", mu}};
    j["noise"] = {{"deltas", deltas},
                  {"sigmas", sigmas},
                  {"replications", replications},
                  {"base_seed", base_seed},
                  {"xi", xi_profile}};
    j["rule"] = {{"kind", rule}, {"r", lepskij_r}, {"theta", theta}};
    j["solver"] = {{"max_outer_iterations", max_outer_iterations},
                   {"gradient_tolerance", gradient_tolerance},
                   {"cg_tolerance", cg_tolerance},
                   {"cg_max_iterations", cg_max_iterations},
                   {"initial_guess", initial_guess},
                   {"initial_constant", initial_constant},
                   {"multistart", multistart}};
    j["v_scale"] = {{"exponent", v_exponent}};
    j["run"] = {{"threads", threads}, {"csv", csv_path}, {"svg", svg_path}};
    return j.dump(2);
}

} // namespace scalereg
