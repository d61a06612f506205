#include "momsum/io.hpp"

#include "momsum/errors.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <unistd.h>

namespace momsum::io {

namespace {

void require_object(const Json& j, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
}

void reject_unknown(const Json& j, std::initializer_list<const char*> known, const std::string& what) {
    std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError("unknown field '" + key + "' in " + what);
}

const Json& field(const Json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) throw ConfigError(what + " is missing the field '" + key + "'");
    return j.at(key);
}

int int_field(const Json& j, const char* key, const std::string& what) {
    const Json& v = field(j, key, what);
    if (!v.is_number_integer()) throw ConfigError(what + ": '" + key + "' must be an integer");
    return v.get<int>();
}

double number_field(const Json& j, const char* key, const std::string& what) {
    const Json& v = field(j, key, what);
    if (!v.is_number()) throw ConfigError(what + ": '" + key + "' must be a number");
    return v.get<double>();
}

Json number_or_null(double x) {
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json complex_json(Complex c) {
    return Json::array({number_or_null(c.real()), number_or_null(c.imag())});
}

template <class T>
T parse_scalar(const Json& j);

template <>
Complex parse_scalar<Complex>(const Json& j) {
    return parse_complex(j);
}

template <>
Rational parse_scalar<Rational>(const Json& j) {
    if (j.is_array()) {
        if (j.size() != 2) throw ConfigError("coefficient must be [re, im]");
        if (parse_rational(j[1]) != 0)
            throw DomainError("exact mode needs real coefficients (imaginary part " + j[1].dump() + ")");
        return parse_rational(j[0]);
    }
    return parse_rational(j);
}

template <class T>
Json scalar_json(const T& x) {
    return complex_json(ScalarTraits<T>::to_complex(x));
}

Var parse_var(const Json& j) {
    if (!j.is_string()) throw ConfigError("variable name must be a string");
    try {
        return var_from_string(j.get<std::string>());
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

template <class T>
AnalyticGerm<T> germ_from_json(const Json& j) {
    require_object(j, "germ");
    double radius = 1.0;
    Json s = j;
    if (s.contains("radius")) {
        if (!s["radius"].is_number()) throw ConfigError("germ radius must be a number");
        radius = s["radius"].get<double>();
        s.erase("radius");
    }
    return make_germ(series_from_json<T>(s), radius);
}

MomentSequence optional_sequence(const Json& j, const char* key, const MomentSequence& fallback) {
    return j.contains(key) ? sequence_from_json(j.at(key)) : fallback;
}

int optional_int(const Json& j, const char* key, int fallback, const std::string& what) {
    return j.contains(key) ? int_field(j, key, what) : fallback;
}

void check_schema(const Json& j, const std::string& what) {
    if (j.contains("schema") && j["schema"] != "momsum.problem/1")
        throw ConfigError(what + ": unsupported schema " + j["schema"].dump());
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Rational parse_rational(const Json& j) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) {
        const double x = j.get<double>();
        if (!std::isfinite(x)) throw ConfigError("non-finite coefficient");
        return Rational(x);
    }
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        try {
            return Rational(s);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse rational '" + s + "'");
        }
    }
    throw ConfigError("expected a number or a rational string, got " + j.dump());
}

Complex parse_complex(const Json& j) {
    auto real = [](const Json& x) -> double {
        if (x.is_number()) return x.get<double>();
        if (x.is_string()) return parse_rational(x).convert_to<double>();
        throw ConfigError("expected a number, got " + x.dump());
    };
    if (j.is_array()) {
        if (j.size() != 2) throw ConfigError("complex value must be [re, im]");
        return {real(j[0]), real(j[1])};
    }
    return {real(j), 0.0};
}

// ---------------------------------------------------------------------------
// Sequences

MomentSequence sequence_from_json(const Json& j) {
    const std::string what = "sequence";
    require_object(j, what);
    reject_unknown(j, {"kind", "params", "N", "values", "log_values", "description"}, what);
    const Json& kind_j = field(j, "kind", what);
    if (!kind_j.is_string()) throw ConfigError("sequence kind must be a string");
    SequenceKind kind;
    try {
        kind = sequence_kind_from_string(kind_j.get<std::string>());
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (kind == SequenceKind::explicit_values || kind == SequenceKind::derived) {
        const Json& vals = field(j, "values", what);
        if (!vals.is_array()) throw ConfigError("sequence values must be an array");
        std::vector<double> v;
        for (const auto& x : vals) {
            if (!x.is_number()) throw ConfigError("sequence values must be finite numbers");
            v.push_back(x.get<double>());
        }
        if (j.contains("N") && int_field(j, "N", what) != static_cast<int>(v.size()) - 1)
            throw ConfigError("sequence N does not match the number of values");
        return MomentSequence::from_values(std::move(v));
    }
    SequenceParams params;
    if (j.contains("params")) {
        require_object(j["params"], "sequence params");
        for (const auto& [key, val] : j["params"].items()) {
            if (!val.is_number()) throw ConfigError("sequence parameter '" + key + "' must be a number");
            params[key] = val.get<double>();
        }
    }
    return MomentSequence::make(kind, params, int_field(j, "N", what));
}

Json to_json(const MomentSequence& m) {
    Json j;
    j["kind"] = to_string(m.kind());
    Json params = Json::object();
    for (const auto& [k, v] : m.params()) params[k] = v;
    j["params"] = params;
    j["N"] = m.N();
    Json values = Json::array(), logs = Json::array();
    for (double v : m.values()) values.push_back(number_or_null(v));
    for (double v : m.log_values()) logs.push_back(number_or_null(v));
    j["values"] = values;
    j["log_values"] = logs;
    j["description"] = m.description();
    return j;
}

// ---------------------------------------------------------------------------
// Series

template <class T>
Series<T> series_from_json(const Json& j) {
    const std::string what = "series";
    require_object(j, what);
    reject_unknown(j, {"var", "N", "coeffs", "exact"}, what);
    const Var v = parse_var(field(j, "var", what));
    const int N = int_field(j, "N", what);
    const Json& src = (ScalarTraits<T>::mode == Mode::exact && j.contains("exact")) ? j["exact"]
                                                                                  : field(j, "coeffs", what);
    if (!src.is_array()) throw ConfigError("series coefficients must be an array");
    if (static_cast<int>(src.size()) != N + 1)
        throw ConfigError("series N = " + std::to_string(N) + " but " + std::to_string(src.size()) +
                          " coefficients given");
    std::vector<T> c;
    c.reserve(src.size());
    for (const auto& x : src) c.push_back(parse_scalar<T>(x));
    return Series<T>(v, std::move(c));
}

template <class T>
Json to_json(const Series<T>& s) {
    Json j;
    j["var"] = to_string(s.var());
    j["N"] = s.N();
    Json coeffs = Json::array();
    for (const auto& c : s.coeffs()) coeffs.push_back(scalar_json(c));
    j["coeffs"] = coeffs;
    if constexpr (ScalarTraits<T>::mode == Mode::exact) {
        Json ex = Json::array();
        for (const auto& c : s.coeffs()) ex.push_back(to_string(c));
        j["exact"] = ex;
    }
    return j;
}

template <class T>
Bivariate<T> bivariate_from_json(const Json& j) {
    const std::string what = "bivariate series";
    require_object(j, what);
    reject_unknown(j, {"vars", "N", "coeffs", "exact"}, what);
    const Json& vars = field(j, "vars", what);
    if (!vars.is_array() || vars.size() != 2) throw ConfigError("bivariate 'vars' must have two entries");
    const Var outer = parse_var(vars[0]);
    if (parse_var(vars[1]) != Var::z) throw ConfigError("the inner variable of a bivariate series must be z");
    if (outer == Var::z) throw ConfigError("the outer variable of a bivariate series must be eps or t");
    const Json& N = field(j, "N", what);
    if (!N.is_array() || N.size() != 2 || !N[0].is_number_integer() || !N[1].is_number_integer())
        throw ConfigError("bivariate 'N' must be [int, int]");
    const int No = N[0].get<int>(), Nz = N[1].get<int>();
    if (No < 0 || Nz < 0) throw ConfigError("bivariate truncations must be >= 0");
    const Json& src = (ScalarTraits<T>::mode == Mode::exact && j.contains("exact")) ? j["exact"]
                                                                                  : field(j, "coeffs", what);
    if (!src.is_array() || static_cast<int>(src.size()) != No + 1)
        throw ConfigError("bivariate coefficients must have N[0] + 1 rows");
    Bivariate<T> b(outer, No, Nz);
    for (int n = 0; n <= No; ++n) {
        const Json& row = src[n];
        if (!row.is_array() || static_cast<int>(row.size()) != Nz + 1)
            throw ConfigError("bivariate row " + std::to_string(n) + " must have N[1] + 1 entries");
        for (int q = 0; q <= Nz; ++q) b(n, q) = parse_scalar<T>(row[q]);
    }
    return b;
}

template <class T>
Json to_json(const Bivariate<T>& b) {
    Json j;
    j["vars"] = Json::array({to_string(b.outer()), "z"});
    j["N"] = Json::array({b.N_outer(), b.N_z()});
    Json rows = Json::array();
    for (int n = 0; n <= b.N_outer(); ++n) {
        Json row = Json::array();
        for (int q = 0; q <= b.N_z(); ++q) row.push_back(scalar_json(b(n, q)));
        rows.push_back(row);
    }
    j["coeffs"] = rows;
    if constexpr (ScalarTraits<T>::mode == Mode::exact) {
        Json ex = Json::array();
        for (int n = 0; n <= b.N_outer(); ++n) {
            Json row = Json::array();
            for (int q = 0; q <= b.N_z(); ++q) row.push_back(to_string(b(n, q)));
            ex.push_back(row);
        }
        j["exact"] = ex;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Problems

template <class T>
SingularlyPerturbedProblem<T> main_problem_from_json(const Json& j) {
    const std::string what = "problem";
    require_object(j, what);
    reject_unknown(j, {"schema", "description", "k", "p", "s1", "s2", "baseM", "m1", "m2", "a", "f", "phi",
                       "N_eps", "N_z"},
                   what);
    check_schema(j, what);
    SingularlyPerturbedProblem<T> prob;
    prob.k = int_field(j, "k", what);
    prob.p = int_field(j, "p", what);
    prob.s1 = number_field(j, "s1", what);
    prob.s2 = number_field(j, "s2", what);
    prob.baseM = sequence_from_json(field(j, "baseM", what));
    prob.m1 = optional_sequence(j, "m1", combine_power(prob.baseM, prob.s1));
    prob.m2 = optional_sequence(j, "m2", combine_power(prob.baseM, prob.s2));
    prob.a = germ_from_json<T>(field(j, "a", what));
    prob.f = bivariate_from_json<T>(field(j, "f", what));
    prob.N_eps = optional_int(j, "N_eps", -1, what);
    prob.N_z = optional_int(j, "N_z", -1, what);
    return prob;
}

template <class T>
CauchyProblem<T> cauchy_problem_from_json(const Json& j) {
    const std::string what = "Cauchy problem";
    require_object(j, what);
    reject_unknown(j, {"schema", "description", "k", "p", "s1", "s2", "baseM", "m1", "m2", "a", "f", "phi",
                       "N_t", "N_z"},
                   what);
    check_schema(j, what);
    CauchyProblem<T> prob;
    prob.k = int_field(j, "k", what);
    prob.p = int_field(j, "p", what);
    if (!j.contains("m1") || !j.contains("m2")) {
        const MomentSequence base = sequence_from_json(field(j, "baseM", what));
        prob.m1 = optional_sequence(j, "m1", combine_power(base, number_field(j, "s1", what)));
        prob.m2 = optional_sequence(j, "m2", combine_power(base, number_field(j, "s2", what)));
    } else {
        prob.m1 = sequence_from_json(j["m1"]);
        prob.m2 = sequence_from_json(j["m2"]);
    }
    prob.a = germ_from_json<T>(field(j, "a", what));
    prob.f = bivariate_from_json<T>(field(j, "f", what));
    const Json& phi = field(j, "phi", what);
    if (!phi.is_array()) throw ConfigError("'phi' must be an array of series");
    for (const auto& s : phi) prob.phi.push_back(series_from_json<T>(s));
    prob.N_t = optional_int(j, "N_t", -1, what);
    prob.N_z = optional_int(j, "N_z", -1, what);
    return prob;
}

template <class T>
Json to_json(const FormalSolution<T>& sol) {
    Json j;
    j["construction"] = to_string(sol.construction);
    j["series"] = to_json(sol.series);
    j["frontier"] = sol.frontier;
    Json tr = Json::array(), trn = Json::array();
    for (const auto& s : sol.traces) tr.push_back(to_json(s));
    for (const auto& s : sol.traces_normalized) trn.push_back(to_json(s));
    j["traces"] = tr;
    j["traces_normalized"] = trn;
    j["residual"] = sol.residual_norm;
    return j;
}

// ---------------------------------------------------------------------------
// Reports

Json to_json(const GrowthRecord& g) {
    Json j;
    j["ok"] = g.ok;
    j["C"] = number_or_null(g.C);
    j["K"] = number_or_null(g.K);
    j["R_max"] = g.R_max;
    j["note"] = g.note;
    return j;
}

Json to_json(const SumResult& r) {
    Json j;
    j["direction"] = r.direction;
    if (r.multilevel) j["direction2"] = r.direction2;
    j["multilevel"] = r.multilevel;
    j["region"] = {{"bisector", r.region.bisector}, {"opening", r.region.opening}, {"radius", r.region.radius}};
    j["growth"] = to_json(r.growth);
    Json pts = Json::array();
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        pts.push_back({{"z", complex_json(r.grid[i])},
                       {"sum", complex_json(r.values[i])},
                       {"err_est", number_or_null(r.err_est[i])}});
    j["points"] = pts;
    Json stages = Json::array();
    for (const auto& s : r.stages) {
        Json poles = Json::array();
        for (const auto& p : s.poles) poles.push_back(complex_json(p));
        stages.push_back({{"stage", s.stage},
                          {"method", s.method},
                          {"pade_L", s.pade_L},
                          {"pade_M", s.pade_M},
                          {"removed_doublets", s.removed_doublets},
                          {"trust_radius", number_or_null(s.trust_radius)},
                          {"poles", poles},
                          {"growth", to_json(s.growth)}});
    }
    j["stages"] = stages;
    return j;
}

Json to_json(const SRCheckReport& r) {
    Json j;
    j["lc_ok"] = r.lc_ok;
    j["mg_ok"] = r.mg_ok;
    j["A1"] = number_or_null(r.A1);
    j["snq_ok"] = r.snq_ok;
    j["snq_verdict"] = to_string(r.snq_verdict);
    j["A2"] = number_or_null(r.A2);
    j["N_checked"] = r.N_checked;
    j["notes"] = r.notes;
    return j;
}

Json to_json(const GrowthFit& g) {
    Json j;
    j["s_est"] = g.s_est;
    j["logA"] = g.logA;
    j["logC"] = g.logC;
    j["residual"] = g.residual;
    j["window"] = Json::array({g.window.first, g.window.last});
    j["used"] = g.used;
    return j;
}

std::string to_csv(const SumResult& r) {
    std::ostringstream os;
    os << "z_re,z_im,sum_re,sum_im,err_est\n";
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        os << format_double(r.grid[i].real()) << ',' << format_double(r.grid[i].imag()) << ','
           << format_double(r.values[i].real()) << ',' << format_double(r.values[i].imag()) << ','
           << format_double(r.err_est[i]) << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Files

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    fs::create_directories(dir);
    const fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw ConfigError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw ConfigError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

#define MOMSUM_INSTANTIATE_IO(T)                                                    \
    template Series<T> series_from_json<T>(const Json&);                            \
    template Json to_json(const Series<T>&);                                        \
    template Bivariate<T> bivariate_from_json<T>(const Json&);                      \
    template Json to_json(const Bivariate<T>&);                                     \
    template SingularlyPerturbedProblem<T> main_problem_from_json<T>(const Json&);  \
    template CauchyProblem<T> cauchy_problem_from_json<T>(const Json&);             \
    template Json to_json(const FormalSolution<T>&);

MOMSUM_INSTANTIATE_IO(Complex)
MOMSUM_INSTANTIATE_IO(Rational)

}  // namespace momsum::io
