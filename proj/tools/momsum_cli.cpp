// momsum: configuration-driven runner for the summation and solver pipelines.

#include "momsum/borel_laplace.hpp"
#include "momsum/errors.hpp"
#include "momsum/formal_series.hpp"
#include "momsum/growth.hpp"
#include "momsum/io.hpp"
#include "momsum/kernel.hpp"
#include "momsum/mde.hpp"
#include "momsum/moment_sequence.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using momsum::Complex;
using momsum::Rational;
using momsum::io::Json;

namespace {

constexpr const char* kConfigSchema = "momsum.config/1";
constexpr const char* kResultSchema = "momsum.result/1";

enum ExitCode { kOk = 0, kConfig = 2, kNumeric = 3, kSingular = 4 };

struct Context {
    std::string command;
    fs::path config_dir;
    fs::path out;
    bool rational = false;
    std::uint64_t seed = 0;
};

struct Artifact {
    std::string suffix;  ///< ".json", ".csv", ...
    std::string content;
};

struct Outcome {
    int code = kOk;
    std::string summary;
    std::vector<Artifact> artifacts;
};

int exit_code_for(const momsum::Error& e) {
    const std::string& k = e.kind();
    if (k == "singular_direction") return kSingular;
    if (k == "accuracy" || k == "summability") return kNumeric;
    return kConfig;
}

// ---------------------------------------------------------------------------
// Config helpers

void reject_unknown(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw momsum::ConfigError("unknown field '" + key + "' in " + what);
}

double get_number(const Json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw momsum::ConfigError(std::string("'") + key + "' must be a number");
    return j[key].get<double>();
}

int get_int(const Json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw momsum::ConfigError(std::string("'") + key + "' must be an integer");
    return j[key].get<int>();
}

const Json& require(const Json& j, const char* key) {
    if (!j.contains(key)) throw momsum::ConfigError(std::string("missing field '") + key + "'");
    return j[key];
}

Json load_relative(const Context& ctx, const Json& path) {
    if (!path.is_string()) throw momsum::ConfigError("file references must be strings");
    fs::path p = path.get<std::string>();
    if (p.is_relative()) p = ctx.config_dir / p;
    if (!fs::exists(p)) throw momsum::ConfigError("referenced file does not exist: " + p.string());
    return momsum::io::read_json_file(p);
}

momsum::Kernel parse_kernel(const Json& j) {
    if (!j.is_object()) throw momsum::ConfigError("'kernel' must be an object {\"s\": real}");
    reject_unknown(j, {"s"}, "kernel");
    return momsum::make_gevrey_kernel(require(j, "s").get<double>());
}

std::vector<Complex> parse_grid(const Json& j) {
    if (!j.is_array() || j.empty()) throw momsum::ConfigError("'grid' must be a non-empty array");
    std::vector<Complex> g;
    for (const auto& x : j) g.push_back(momsum::io::parse_complex(x));
    return g;
}

momsum::SumOptions parse_sum_options(const Json& exp) {
    momsum::SumOptions opt;
    if (exp.contains("strategy")) {
        const Json& s = exp["strategy"];
        reject_unknown(s, {"method", "L", "M", "doublet_tol", "pole_angle_tol", "trust_tol", "radius_cap"},
                       "strategy");
        if (s.contains("method")) {
            const std::string m = s["method"].get<std::string>();
            if (m == "pade") opt.strategy.method = momsum::ContinuationStrategy::Method::pade;
            else if (m == "partial_sum") opt.strategy.method = momsum::ContinuationStrategy::Method::partial_sum;
            else throw momsum::ConfigError("unknown continuation method '" + m + "'");
        }
        opt.strategy.L = get_int(s, "L", opt.strategy.L);
        opt.strategy.M = get_int(s, "M", opt.strategy.M);
        opt.strategy.doublet_tol = get_number(s, "doublet_tol", opt.strategy.doublet_tol);
        opt.strategy.pole_angle_tol = get_number(s, "pole_angle_tol", opt.strategy.pole_angle_tol);
        opt.strategy.trust_tol = get_number(s, "trust_tol", opt.strategy.trust_tol);
        opt.strategy.radius_cap = get_number(s, "radius_cap", opt.strategy.radius_cap);
    }
    if (exp.contains("growth")) {
        const Json& g = exp["growth"];
        reject_unknown(g, {"R_max", "samples", "tol"}, "growth");
        opt.growth.R_max = get_number(g, "R_max", opt.growth.R_max);
        opt.growth.samples = get_int(g, "samples", opt.growth.samples);
        opt.growth.tol = get_number(g, "tol", opt.growth.tol);
    }
    return opt;
}

momsum::Series<Complex> generated_series(const Json& j) {
    reject_unknown(j, {"generator", "N"}, "series generator");
    const std::string gen = require(j, "generator").get<std::string>();
    const int N = require(j, "N").get<int>();
    if (N < 1) throw momsum::ConfigError("generated series need N >= 1");
    std::vector<Complex> c(static_cast<std::size_t>(N) + 1);
    double fact = 1.0;
    for (int p = 0; p <= N; ++p) {
        if (p > 0) fact *= p;
        if (gen == "euler") c[p] = (p % 2 ? -1.0 : 1.0) * fact;
        else if (gen == "geometric") c[p] = 1.0;
        else throw momsum::ConfigError("unknown series generator '" + gen + "' (euler, geometric)");
    }
    return momsum::Series<Complex>(momsum::Var::z, std::move(c));
}

/// Series from "series" (inline or generator) or "series_file" (series or a
/// solution file, whose trace "trace" is taken).
momsum::Series<Complex> parse_series(const Json& exp, const Context& ctx, const char* key = "series") {
    const std::string file_key = std::string(key) + "_file";
    if (exp.contains(key) && exp.contains(file_key))
        throw momsum::ConfigError(std::string("give either '") + key + "' or '" + file_key + "'");
    if (exp.contains(key)) {
        const Json& s = exp[key];
        if (s.is_object() && s.contains("generator")) return generated_series(s);
        return momsum::io::series_from_json<Complex>(s);
    }
    if (!exp.contains(file_key)) throw momsum::ConfigError(std::string("missing field '") + key + "'");
    Json doc = load_relative(ctx, exp[file_key]);
    if (doc.contains("solution")) doc = Json(doc["solution"]);
    if (doc.contains("traces")) {
        const int j = get_int(exp, "trace", 0);
        const Json& tr = doc["traces"];
        if (j < 0 || j >= static_cast<int>(tr.size())) throw momsum::ConfigError("trace index out of range");
        auto s = momsum::io::series_from_json<Complex>(tr[j]);
        return momsum::Series<Complex>(momsum::Var::z, s.coeffs());
    }
    return momsum::io::series_from_json<Complex>(doc);
}

momsum::MomentSequence sequence_or_default(const Json& exp, const char* key, double s, int N) {
    if (exp.contains(key)) {
        momsum::MomentSequence m = momsum::io::sequence_from_json(exp[key]);
        return m.N() >= N ? m : m.with_length(N);
    }
    return momsum::MomentSequence::make(momsum::SequenceKind::factorial_power, {{"s", s}}, std::max(N, 2));
}

momsum::Level parse_level(const Json& j, int N) {
    if (!j.is_object()) throw momsum::ConfigError("levels must be objects {\"kernel\", \"M\"}");
    reject_unknown(j, {"kernel", "M"}, "level");
    momsum::Kernel k = parse_kernel(require(j, "kernel"));
    return momsum::Level{sequence_or_default(j, "M", k.s(), N), k};
}

std::string fmt(double x) { return momsum::io::format_double(x); }

Json result_header(const Context& ctx, const std::string& name) {
    Json j;
    j["schema"] = kResultSchema;
    j["command"] = ctx.command;
    j["name"] = name;
    j["mode"] = ctx.rational ? "rational" : "float";
    j["seed"] = ctx.seed;
    return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Commands

Outcome run_check_sequence(const Json& exp, const Context& ctx, const std::string& name) {
    reject_unknown(exp, {"name", "sequence", "sequence_file", "omega"}, "check-sequence experiment");
    const Json doc = exp.contains("sequence_file") ? load_relative(ctx, exp["sequence_file"])
                                                   : require(exp, "sequence");
    const momsum::MomentSequence m = momsum::io::sequence_from_json(doc);
    momsum::OmegaOptions oo;
    if (exp.contains("omega")) {
        reject_unknown(exp["omega"], {"r_min", "r_max", "points"}, "omega options");
        oo.r_min = get_number(exp["omega"], "r_min", oo.r_min);
        oo.r_max = get_number(exp["omega"], "r_max", oo.r_max);
        oo.points = get_int(exp["omega"], "points", oo.points);
    }
    const momsum::SRCheckReport rep = momsum::check_strongly_regular(m);
    Json res = result_header(ctx, name);
    res["sequence"] = momsum::io::to_json(m);
    res["report"] = momsum::io::to_json(rep);
    std::ostringstream sum;
    sum << "check-sequence " << name << ": " << m.description() << " N=" << m.N() << " lc=" << rep.lc_ok
        << " mg=" << rep.mg_ok << " snq=" << momsum::to_string(rep.snq_verdict);
    try {
        const auto om = momsum::estimate_omega(m, oo);
        res["omega"] = {{"omega", om.omega},
                        {"uncertainty", om.uncertainty},
                        {"used_extension", om.used_extension},
                        {"truncation_limited_points", om.truncation_limited_points}};
        sum << " omega=" << fmt(om.omega);
    } catch (const momsum::AccuracyError& e) {
        res["omega"] = {{"error", e.what()}};
        sum << " omega=n/a";
    }
    return {kOk, sum.str(), {{".json", dump(res)}}};
}

Outcome sum_outcome(const momsum::SumResult& r, Json res, const std::string& head) {
    res["result"] = momsum::io::to_json(r);
    std::ostringstream sum;
    sum << head << ": " << r.grid.size() << " points";
    for (std::size_t i = 0; i < r.grid.size() && i < 3; ++i)
        sum << "; S(" << fmt(r.grid[i].real()) << (r.grid[i].imag() < 0 ? "" : "+") << fmt(r.grid[i].imag())
            << "i) = " << fmt(r.values[i].real()) << (r.values[i].imag() < 0 ? "" : "+") << fmt(r.values[i].imag())
            << "i";
    return {kOk, sum.str(), {{".json", dump(res)}, {".csv", momsum::io::to_csv(r)}}};
}

Outcome run_borel_sum(const Json& exp, const Context& ctx, const std::string& name) {
    reject_unknown(exp, {"name", "series", "series_file", "trace", "M", "kernel", "direction", "grid", "strategy",
                         "growth"},
                   "borel-sum experiment");
    const auto u = parse_series(exp, ctx);
    const momsum::Kernel k = parse_kernel(require(exp, "kernel"));
    const auto M = sequence_or_default(exp, "M", k.s(), u.N());
    const double d = get_number(exp, "direction", 0.0);
    const auto r = momsum::borel_sum(u, M, k, d, parse_grid(require(exp, "grid")), parse_sum_options(exp));
    Json res = result_header(ctx, name);
    res["kernel_s"] = k.s();
    return sum_outcome(r, res, "borel-sum " + name);
}

Outcome run_multisum(const Json& exp, const Context& ctx, const std::string& name) {
    reject_unknown(exp, {"name", "series", "series_file", "trace", "level1", "level2", "d1", "d2", "grid", "strategy",
                         "growth", "split"},
                   "multisum experiment");
    const auto grid = parse_grid(require(exp, "grid"));
    const auto opt = parse_sum_options(exp);
    const double d1 = get_number(exp, "d1", 0.0), d2 = get_number(exp, "d2", 0.0);
    Json res = result_header(ctx, name);
    if (exp.contains("split")) {
        const Json& sp = exp["split"];
        reject_unknown(sp, {"f1", "f2"}, "split");
        const auto f1 = parse_series(sp, ctx, "f1");
        const auto f2 = parse_series(sp, ctx, "f2");
        const int N = std::max(f1.N(), f2.N());
        const auto l1 = parse_level(require(exp, "level1"), N);
        const auto l2 = parse_level(require(exp, "level2"), N);
        const auto md = momsum::make_multidirection(d1, d2, l1, l2);
        const auto rep = momsum::split_multisum_check(f1, f2, md, l1, l2, grid, opt);
        res["max_deviation"] = rep.max_deviation;
        res["deviation"] = rep.deviation;
        res["part1"] = momsum::io::to_json(rep.part1);
        res["part2"] = momsum::io::to_json(rep.part2);
        Outcome out = sum_outcome(rep.combined, res, "multisum " + name);
        out.summary += "; split deviation " + fmt(rep.max_deviation);
        return out;
    }
    const auto u = parse_series(exp, ctx);
    const auto l1 = parse_level(require(exp, "level1"), u.N());
    const auto l2 = parse_level(require(exp, "level2"), u.N());
    const auto md = momsum::make_multidirection(d1, d2, l1, l2);
    return sum_outcome(momsum::multisum(u, l1, l2, md, grid, opt), res, "multisum " + name);
}

Json problem_json(const Json& exp, const Context& ctx) {
    if (exp.contains("problem") && exp.contains("problem_file"))
        throw momsum::ConfigError("give either 'problem' or 'problem_file'");
    return exp.contains("problem_file") ? load_relative(ctx, exp["problem_file"]) : require(exp, "problem");
}

template <class T>
Outcome solve_main_as(const Json& exp, const Context& ctx, const std::string& name) {
    auto prob = momsum::io::main_problem_from_json<T>(problem_json(exp, ctx));
    prob.N_eps = get_int(exp, "N_eps", prob.N_eps);
    prob.N_z = get_int(exp, "N_z", prob.N_z);
    const auto sol = momsum::solve_main(prob);
    const double tres = momsum::transformed_residual(sol, prob);
    Json res = result_header(ctx, name);
    res["solution"] = momsum::io::to_json(sol);
    res["transformed_residual"] = tres;
    res["predicted_level"] = momsum::predicted_level(prob.k, prob.p, prob.s2);
    std::ostringstream sum;
    sum << "solve " << name << ": N_eps=" << sol.series.N_outer() << " N_z=" << sol.series.N_z()
        << " residual=" << fmt(sol.residual_norm) << " transformed_residual=" << fmt(tres)
        << " predicted_level=" << fmt(momsum::predicted_level(prob.k, prob.p, prob.s2));
    const double tol = ctx.rational ? 0.0 : 1e-10;
    const int code = (sol.residual_norm > tol || tres > tol) ? kNumeric : kOk;
    return {code, sum.str(), {{".json", dump(res)}}};
}

template <class T>
Outcome solve_cauchy_as(const Json& exp, const Context& ctx, const std::string& name) {
    auto prob = momsum::io::cauchy_problem_from_json<T>(problem_json(exp, ctx));
    prob.N_t = get_int(exp, "N_t", prob.N_t);
    prob.N_z = get_int(exp, "N_z", prob.N_z);
    const auto sol = momsum::solve_cauchy(prob);
    Json res = result_header(ctx, name);
    res["solution"] = momsum::io::to_json(sol);
    std::ostringstream sum;
    sum << "solve-cauchy " << name << ": N_t=" << sol.series.N_outer() << " residual=" << fmt(sol.residual_norm);
    const double tol = ctx.rational ? 0.0 : 1e-10;
    int code = sol.residual_norm > tol ? kNumeric : kOk;
    if (exp.contains("Q")) {
        const int Q = get_int(exp, "Q", 0);
        const auto fp = momsum::fixed_point_solution(prob, Q, sol.traces_normalized);
        const auto ref = momsum::z_derivative(sol, prob.m2, prob.p);
        const auto agree = momsum::compare_solutions(ref, fp);
        res["fixed_point"] = momsum::io::to_json(fp);
        res["agreement"] = {{"equal", agree.equal},
                            {"compared", agree.compared},
                            {"max_difference", agree.max_difference}};
        sum << "; fixed point Q=" << Q << " agrees on " << agree.compared << " cells: " << agree.equal;
        if (!agree.equal) code = kNumeric;
    }
    return {code, sum.str(), {{".json", dump(res)}}};
}

Outcome run_solve(const Json& exp, const Context& ctx, const std::string& name) {
    reject_unknown(exp, {"name", "problem", "problem_file", "N_eps", "N_z"}, "solve experiment");
    return ctx.rational ? solve_main_as<Rational>(exp, ctx, name) : solve_main_as<Complex>(exp, ctx, name);
}

Outcome run_solve_cauchy(const Json& exp, const Context& ctx, const std::string& name) {
    reject_unknown(exp, {"name", "problem", "problem_file", "N_t", "N_z", "Q"}, "solve-cauchy experiment");
    return ctx.rational ? solve_cauchy_as<Rational>(exp, ctx, name) : solve_cauchy_as<Complex>(exp, ctx, name);
}

Outcome run_analyze_growth(const Json& exp, const Context& ctx, const std::string& name) {
    reject_unknown(exp, {"name", "solution_file", "series_file", "trace", "values", "base", "window"},
                   "analyze-growth experiment");
    std::vector<double> mags;
    if (exp.contains("values")) {
        for (const auto& v : exp["values"]) mags.push_back(std::abs(momsum::io::parse_complex(v)));
    } else {
        Json sel = exp;
        if (sel.contains("solution_file")) sel["series_file"] = sel["solution_file"];
        for (const auto& c : parse_series(sel, ctx).coeffs()) mags.push_back(std::abs(c));
    }
    if (mags.size() < 3) throw momsum::ConfigError("analyze-growth needs at least 3 magnitudes");
    const int N = static_cast<int>(mags.size()) - 1;
    const auto base = sequence_or_default(exp, "base", 1.0, N);
    momsum::Window w;
    if (exp.contains("window")) {
        const Json& wj = exp["window"];
        if (!wj.is_array() || wj.size() != 2) throw momsum::ConfigError("'window' must be [first, last]");
        w.first = wj[0].get<int>();
        w.last = wj[1].get<int>();
    }
    const auto fit = momsum::fit_growth(mags, base, w);
    Json res = result_header(ctx, name);
    res["base"] = base.description();
    res["fit"] = momsum::io::to_json(fit);
    std::ostringstream sum;
    sum << "analyze-growth " << name << ": s_est=" << fmt(fit.s_est) << " logA=" << fmt(fit.logA)
        << " window=[" << fit.window.first << "," << fit.window.last << "] residual=" << fmt(fit.residual);
    return {kOk, sum.str(), {{".json", dump(res)}}};
}

Outcome run_kernel_check(const Json& exp, const Context& ctx, const std::string& name) {
    reject_unknown(exp, {"name", "kernel", "samples", "random_samples", "flatness_angles", "cauchy_tol"},
                   "kernel-check experiment");
    const momsum::Kernel k = parse_kernel(require(exp, "kernel"));
    const double tol = get_number(exp, "cauchy_tol", 1e-6);
    struct Sample {
        Complex z, w;
        double tau;
    };
    std::vector<Sample> samples;
    if (exp.contains("samples")) {
        for (const auto& s : exp["samples"]) {
            reject_unknown(s, {"z", "w", "tau"}, "kernel-check sample");
            const Complex w = momsum::io::parse_complex(require(s, "w"));
            samples.push_back({momsum::io::parse_complex(require(s, "z")), w, get_number(s, "tau", -std::arg(w))});
        }
    }
    std::mt19937_64 rng(ctx.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < get_int(exp, "random_samples", 0); ++i) {
        const double wr = 0.5 + 1.5 * unit(rng);
        const double wa = (unit(rng) - 0.5) * k.s() * momsum::kPi / 2.0;
        const Complex w = std::polar(wr, wa);
        const Complex z = std::polar(0.3 * wr * unit(rng), 2.0 * momsum::kPi * unit(rng));
        samples.push_back({z, w, -wa});
    }

    Json res = result_header(ctx, name);
    res["kernel_s"] = k.s();
    const auto& md = k.metadata();
    res["metadata"] = {{"alpha", md.alpha}, {"beta", md.beta}, {"flat_C", md.flat_C}, {"flat_K", md.flat_K},
                       {"rho2", md.rho2}};
    Json rows = Json::array();
    double worst = 0.0;
    for (const auto& s : samples) {
        const auto q = momsum::cauchy_kernel_identity(k, s.z, s.w, s.tau);
        const double err = std::abs(q.value - 1.0 / (s.w - s.z));
        worst = std::max(worst, err);
        rows.push_back({{"z", {s.z.real(), s.z.imag()}},
                        {"w", {s.w.real(), s.w.imag()}},
                        {"tau", s.tau},
                        {"value", {q.value.real(), q.value.imag()}},
                        {"error", err},
                        {"quad_error", q.error}});
    }
    res["cauchy_identity"] = rows;
    Json flat = Json::array();
    bool flat_ok = true;
    if (exp.contains("flatness_angles")) {
        for (const auto& a : exp["flatness_angles"]) {
            const auto f = momsum::fit_flatness(k, a.get<double>());
            flat_ok = flat_ok && f.ok;
            flat.push_back({{"theta", f.theta}, {"ok", f.ok}, {"C", f.C}, {"K", f.K}});
        }
    }
    res["flatness"] = flat;
    std::ostringstream sum;
    sum << "kernel-check " << name << ": s=" << fmt(k.s()) << " cauchy samples=" << samples.size()
        << " max error=" << fmt(worst) << " flatness fits ok=" << flat_ok;
    const int code = (worst > tol || !flat_ok) ? kNumeric : kOk;
    return {code, sum.str(), {{".json", dump(res)}}};
}

using Runner = std::function<Outcome(const Json&, const Context&, const std::string&)>;

struct Command {
    Runner run;
    const char* help;
};

const std::map<std::string, Command>& runners() {
    static const std::map<std::string, Command> r = {
        {"check-sequence", {run_check_sequence, "strong regularity and growth index of moment sequences"}},
        {"borel-sum", {run_borel_sum, "single-level moment sum of a series along a direction"}},
        {"multisum", {run_multisum, "two-level moment sum along a multidirection"}},
        {"solve", {run_solve, "formal solution of a singularly perturbed moment equation"}},
        {"solve-cauchy", {run_solve_cauchy, "formal solution of a moment Cauchy problem"}},
        {"analyze-growth", {run_analyze_growth, "Gevrey-type level fit of coefficient magnitudes"}},
        {"kernel-check", {run_kernel_check, "Cauchy identity and flatness checks for a Gevrey kernel"}},
    };
    return r;
}

struct Experiment {
    std::string name;
    Json body;
};

std::vector<Experiment> split_config(const Json& cfg, const std::string& command) {
    if (!cfg.is_object()) throw momsum::ConfigError("config must be a JSON object");
    if (!cfg.contains("schema") || cfg["schema"] != kConfigSchema)
        throw momsum::ConfigError(std::string("config must declare \"schema\": \"") + kConfigSchema + "\"");
    if (cfg.contains("command") && cfg["command"] != command)
        throw momsum::ConfigError("config is for command " + cfg["command"].dump() + ", not '" + command + "'");
    std::vector<Experiment> out;
    if (cfg.contains("experiments")) {
        reject_unknown(cfg, {"schema", "command", "experiments"}, "config");
        const Json& list = cfg["experiments"];
        if (!list.is_array() || list.empty()) throw momsum::ConfigError("'experiments' must be a non-empty array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!list[i].is_object()) throw momsum::ConfigError("experiments must be objects");
            const std::string name =
                list[i].contains("name") ? list[i]["name"].get<std::string>() : command + "-" + std::to_string(i);
            out.push_back({name, list[i]});
        }
    } else {
        Json body = cfg;
        body.erase("schema");
        body.erase("command");
        const std::string name = body.contains("name") ? body["name"].get<std::string>() : command;
        out.push_back({name, body});
    }
    std::set<std::string> seen;
    for (const auto& e : out) {
        if (e.name.empty() || e.name.find_first_of("/\\") != std::string::npos)
            throw momsum::ConfigError("invalid experiment name '" + e.name + "'");
        if (!seen.insert(e.name).second) throw momsum::ConfigError("duplicate experiment name '" + e.name + "'");
    }
    return out;
}

Json error_record(const std::string& name, const std::string& kind, const std::string& msg, int code) {
    Json j;
    j["schema"] = "momsum.error/1";
    j["experiment"] = name;
    j["kind"] = kind;
    j["message"] = msg;
    j["exit_code"] = code;
    return j;
}

Outcome run_guarded(const Runner& run, const Experiment& e, const Context& ctx) {
    try {
        return run(e.body, ctx, e.name);
    } catch (const momsum::Error& err) {
        const int code = exit_code_for(err);
        Json rec = error_record(e.name, err.kind(), err.what(), code);
        return {code, "error " + e.name + ": " + rec.dump(), {{".error.json", dump(rec)}}};
    } catch (const nlohmann::json::exception& err) {
        Json rec = error_record(e.name, "config", err.what(), kConfig);
        return {kConfig, "error " + e.name + ": " + rec.dump(), {{".error.json", dump(rec)}}};
    } catch (const std::exception& err) {
        Json rec = error_record(e.name, "numeric", err.what(), kNumeric);
        return {kNumeric, "error " + e.name + ": " + rec.dump(), {{".error.json", dump(rec)}}};
    }
}

int run_command(const std::string& command, const std::string& config, const std::string& out, const std::string& mode,
                int jobs, std::uint64_t seed) {
    Context ctx;
    ctx.command = command;
    ctx.out = out;
    ctx.seed = seed;
    ctx.rational = mode == "rational";
    std::vector<Experiment> exps;
    try {
        const fs::path cfg_path = config;
        ctx.config_dir = cfg_path.has_parent_path() ? cfg_path.parent_path() : fs::path(".");
        exps = split_config(momsum::io::read_json_file(cfg_path), command);
    } catch (const momsum::Error& e) {
        std::cerr << error_record("", "config", e.what(), kConfig).dump() << "\n";
        return kConfig;
    }

    const Runner& run = runners().at(command).run;
    std::vector<Outcome> results(exps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < exps.size();) results[i] = run_guarded(run, exps[i], ctx);
    };
    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(exps.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    int code = kOk;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        const Outcome& o = results[i];
        try {
            for (const auto& a : o.artifacts) momsum::io::write_file_atomic(ctx.out / (exps[i].name + a.suffix), a.content);
            momsum::io::write_file_atomic(ctx.out / (exps[i].name + ".txt"), o.summary + "\n");
        } catch (const momsum::Error& e) {
            std::cerr << error_record(exps[i].name, "config", e.what(), kConfig).dump() << "\n";
            if (code == kOk) code = kConfig;
        }
        (o.code == kOk ? std::cout : std::cerr) << o.summary << "\n";
        if (code == kOk) code = o.code;
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"momsum: moment summation and singularly perturbed moment equations"};
    app.require_subcommand(1);
    std::string config, out = ".", mode = "float";
    int jobs = 1;
    std::uint64_t seed = 0;
    for (const auto& [name, cmd] : runners()) {
        auto* sub = app.add_subcommand(name, cmd.help);
        sub->add_option("--config", config, "experiment configuration (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "output directory")->capture_default_str();
        sub->add_option("--mode", mode, "arithmetic for solver commands")
            ->check(CLI::IsMember({"float", "rational"}))
            ->capture_default_str();
        sub->add_option("--jobs", jobs, "experiments run concurrently")->check(CLI::PositiveNumber)->capture_default_str();
        sub->add_option("--seed", seed, "seed for randomized samples")->capture_default_str();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfig;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    return run_command(command, config, out, mode, jobs, seed);
}
