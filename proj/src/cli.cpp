#include "osctrig/cli.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace osctrig::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError("unknown key \"" + key + "\" in " + where);
}

RuleTag parse_method(const std::string& name) {
    if (name == "filon") return RuleTag::FilonSine;
    if (name == "lobatto") return RuleTag::Lobatto5;
    if (name == "trapezoid") return RuleTag::Trapezoid;
    throw ConfigError("unknown method \"" + name + "\" (expected filon|lobatto|trapezoid)");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Adaptive Simpson reference for the quadrature-check oracle.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 0) {
    const double m = (a + b) / 2;
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double est,
            int d) -> double {
        const double mid = (lo + hi) / 2;
        const double lm = (lo + mid) / 2, rm = (mid + hi) / 2;
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (d > 40 || std::abs(left + right - est) < 15 * tol)
            return left + right + (left + right - est) / 15;
        return rec(lo, mid, flo, flm, fmid, left, d + 1) +
               rec(mid, hi, fmid, frm, fhi, right, d + 1);
    };
    (void)depth;
    return rec(a, b, fa, fm, fb, whole, 0);
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    try {
        RunConfig cfg;
        reject_unknown_keys(doc, {"problem", "experiment", "output"}, "top level");
        if (!doc.contains("problem")) throw ConfigError("missing \"problem\" section");

        const json& prob = doc.at("problem");
        reject_unknown_keys(prob, {"omega", "epsilon", "x0", "v0", "t_end", "forcing"}, "problem");
        cfg.problem.omega = prob.at("omega").get<double>();
        cfg.problem.epsilon = prob.value("epsilon", 0.0);
        cfg.problem.x0 = prob.value("x0", 0.0);
        cfg.problem.v0 = prob.value("v0", 0.0);
        cfg.problem.t_end = prob.value("t_end", 1.0);
        std::vector<TrigTerm> terms;
        if (prob.contains("forcing")) {
            for (const auto& t : prob.at("forcing")) {
                reject_unknown_keys(t, {"amplitude", "frequency", "phase"}, "forcing term");
                TrigTerm term;
                term.amplitude = t.at("amplitude").get<double>();
                term.frequency = t.at("frequency").get<double>();
                const std::string phase = t.value("phase", "cosine");
                if (phase == "cosine") term.phase = TrigPhase::Cosine;
                else if (phase == "sine") term.phase = TrigPhase::Sine;
                else throw ConfigError("forcing phase must be \"cosine\" or \"sine\"");
                terms.push_back(term);
            }
        }
        cfg.problem.forcing = Forcing(std::move(terms));

        if (doc.contains("experiment")) {
            const json& exp = doc.at("experiment");
            reject_unknown_keys(exp, {"methods", "step_sizes", "n_fine", "samples", "seed"},
                                "experiment");
            std::set<std::string> seen;
            cfg.methods.clear();
            for (const auto& m : exp.value("methods", std::vector<std::string>{"filon"})) {
                if (!seen.insert(m).second)
                    throw ConfigError("duplicate method \"" + m + "\"");
                cfg.methods.push_back({parse_method(m), 5});
            }
            cfg.step_sizes = exp.value("step_sizes", std::vector<double>{0.0625});
            cfg.n_fine = exp.value("n_fine", std::size_t{1} << 14);
            cfg.samples = exp.value("samples", std::size_t{500});
            cfg.seed = exp.value("seed", std::uint64_t{0});
        } else {
            cfg.methods = {{RuleTag::FilonSine, 5}};
            cfg.step_sizes = {0.0625};
        }

        if (doc.contains("output")) {
            const json& out = doc.at("output");
            reject_unknown_keys(out, {"path", "format"}, "output");
            cfg.output_path = out.value("path", cfg.output_path);
            cfg.output_format = out.value("format", cfg.output_format);
            if (cfg.output_format != "csv")
                throw ConfigError("unsupported output format \"" + cfg.output_format + "\"");
        }
        cfg.problem.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string serialize_run_config(const RunConfig& cfg) {
    json doc;
    json prob;
    prob["omega"] = cfg.problem.omega;
    prob["epsilon"] = cfg.problem.epsilon;
    prob["x0"] = cfg.problem.x0;
    prob["v0"] = cfg.problem.v0;
    prob["t_end"] = cfg.problem.t_end;
    json terms = json::array();
    for (const auto& t : cfg.problem.forcing.terms()) {
        terms.push_back({{"amplitude", t.amplitude},
                         {"frequency", t.frequency},
                         {"phase", t.phase == TrigPhase::Cosine ? "cosine" : "sine"}});
    }
    prob["forcing"] = terms;
    doc["problem"] = prob;

    json exp;
    std::vector<std::string> names;
    for (const auto& m : cfg.methods) names.push_back(rule_name(m.tag));
    exp["methods"] = names;
    exp["step_sizes"] = cfg.step_sizes;
    exp["n_fine"] = cfg.n_fine;
    exp["samples"] = cfg.samples;
    exp["seed"] = cfg.seed;
    doc["experiment"] = exp;

    doc["output"] = {{"path", cfg.output_path}, {"format", cfg.output_format}};
    return doc.dump(2);
}

ExperimentConfig to_experiment_config(const RunConfig& cfg) {
    ExperimentConfig e;
    e.problem = cfg.problem;
    e.methods = cfg.methods;
    e.step_sizes = cfg.step_sizes;
    e.n_fine = cfg.n_fine;
    e.samples = cfg.samples;
    e.seed = cfg.seed;
    return e;
}

std::string trajectory_csv(const std::vector<State>& trajectory) {
    std::string out = "t,x,v\n";
    for (const auto& s : trajectory)
        out += fmt(s.t) + "," + fmt(s.x) + "," + fmt(s.v) + "\n";
    return out;
}

std::string report_csv(const StrongErrorReport& report) {
    std::string out = "method,omega,h,err_x,err_v,ci_x,ci_v,samples,seed\n";
    for (const auto& r : report.rows) {
        char tail[64];
        std::snprintf(tail, sizeof tail, "%zu,%" PRIu64 "\n", r.samples, r.seed);
        out += r.method + "," + fmt(r.omega) + "," + fmt(r.h) + "," + fmt(r.err_x) + "," +
               fmt(r.err_v) + "," + fmt(r.ci_x) + "," + fmt(r.ci_v) + "," + tail;
    }
    return out;
}

void atomic_write(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << contents;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

int cmd_integrate(const std::string& config_path, const IntegrateOverrides& overrides) {
    RunConfig cfg;
    QuadratureRule rule;
    double h;
    try {
        cfg = load_run_config(config_path);
        if (overrides.seed) cfg.seed = *overrides.seed;
        rule = cfg.methods.empty() ? QuadratureRule{RuleTag::FilonSine, 5} : cfg.methods.front();
        if (overrides.method) rule = {parse_method(*overrides.method), 5};
        h = cfg.step_sizes.empty() ? 0.0625 : cfg.step_sizes.front();
        if (overrides.h) h = *overrides.h;
        if (overrides.output) cfg.output_path = *overrides.output;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const StepScheme scheme(cfg.problem, h, rule);
        std::vector<double> dW(scheme.n_steps(), 0.0);
        if (cfg.problem.epsilon > 0.0) {
            const std::uint64_t sample = overrides.sample.value_or(0);
            WienerPath path = generate_path(cfg.seed, sample, cfg.n_fine, cfg.problem.t_end);
            dW = coarsen(path, cfg.n_fine / scheme.n_steps());
        }
        const auto traj = integrate(scheme, dW);
        atomic_write(cfg.output_path, trajectory_csv(traj));
        return 0;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_strong_error(const std::string& config_path, std::optional<std::size_t> samples_override,
                     std::optional<std::string> output_override) {
    RunConfig cfg;
    try {
        cfg = load_run_config(config_path);
        if (samples_override) cfg.samples = *samples_override;
        if (output_override) cfg.output_path = *output_override;
        to_experiment_config(cfg).validate();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        const StrongErrorReport report = strong_error(to_experiment_config(cfg));
        if (report.reference_filon_fallback)
            std::cerr << "warning: callable forcing, reference uses Filon at the fine grid\n";
        if (report.aborted_samples > 0)
            std::cerr << "warning: " << report.aborted_samples
                      << " sample(s) aborted on non-finite values\n";
        atomic_write(cfg.output_path, report_csv(report));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_quadrature_check(double k, int nodes, const std::string& family) {
    struct Family {
        std::function<double(double)> psi;
        double m3;  // bound on |psi'''|
    };
    const std::map<std::string, Family> families = {
        {"constant", {[](double) { return 1.0; }, 0.0}},
        {"linear", {[](double x) { return x; }, 0.0}},
        {"quadratic", {[](double x) { return 3 * x * x - 2 * x + 1; }, 0.0}},
        {"cubic", {[](double x) { return x * x * x / 6; }, 1.0}},
        {"cos3x", {[](double x) { return std::cos(3 * x); }, 27.0}},
    };
    const auto it = families.find(family);
    if (it == families.end()) {
        std::cerr << "config error: unknown family \"" << family << "\"\n";
        return 2;
    }
    const auto& [psi, m3] = it->second;
    const double a = 0.0, b = 1.0;
    try {
        const double ref_s =
            adaptive_simpson([&](double x) { return psi(x) * std::sin(k * x); }, a, b, 1e-14);
        const double ref_c =
            adaptive_simpson([&](double x) { return psi(x) * std::cos(k * x); }, a, b, 1e-14);

        const double h_quad = (b - a) / (nodes - 1);
        const double theta = std::abs(k) * h_quad;
        std::string bound_str = "n/a";
        if (theta < 1.0) {
            const auto est = filon_error_bound(theta, m3, a, b, h_quad);
            bound_str = fmt(est.bound);
        }

        std::printf("rule,err_sine_kernel,err_cosine_kernel,filon_bound\n");
        std::printf("filon,%s,%s,%s\n",
                    fmt(std::abs(filon_sine(psi, a, b, k, nodes) - ref_s)).c_str(),
                    fmt(std::abs(filon_cosine(psi, a, b, k, nodes) - ref_c)).c_str(),
                    bound_str.c_str());
        std::printf("lobatto,%s,%s,\n",
                    fmt(std::abs(lobatto5([&](double x) { return psi(x) * std::sin(k * x); }, a, b) -
                                 ref_s))
                        .c_str(),
                    fmt(std::abs(lobatto5([&](double x) { return psi(x) * std::cos(k * x); }, a, b) -
                                 ref_c))
                        .c_str());
        std::printf(
            "trapezoid,%s,%s,\n",
            fmt(std::abs(
                    trapezoid([&](double x) { return psi(x) * std::sin(k * x); }, a, b, nodes) -
                    ref_s))
                .c_str(),
            fmt(std::abs(
                    trapezoid([&](double x) { return psi(x) * std::cos(k * x); }, a, b, nodes) -
                    ref_c))
                .c_str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace osctrig::cli
