#pragma once

#include "momsum/borel_laplace.hpp"
#include "momsum/formal_series.hpp"
#include "momsum/mde.hpp"
#include "momsum/moment_sequence.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace momsum::io {

using Json = nlohmann::ordered_json;

/// {"kind", "params", "N"} for closed-form kinds; "values" is required for
/// explicit sequences and accepted (as explicit values) for derived ones.
MomentSequence sequence_from_json(const Json& j);
Json to_json(const MomentSequence& m);

/// Coefficients are [re, im] pairs. In exact mode an entry may also be a
/// string "p/q" (or ["p/q", 0]); writers add an "exact" array of such strings.
template <class T>
Series<T> series_from_json(const Json& j);
template <class T>
Json to_json(const Series<T>& s);

template <class T>
Bivariate<T> bivariate_from_json(const Json& j);
template <class T>
Json to_json(const Bivariate<T>& b);

/// Problem file: {"k", "p", "s1", "s2", "baseM", "a", "f"} plus optional
/// "m1", "m2" (default (M_p)^{s1}, (M_p)^{s2}), "N_eps", "N_z". Unknown fields
/// are rejected.
template <class T>
SingularlyPerturbedProblem<T> main_problem_from_json(const Json& j);

/// Same layout with "phi" (k series) and f in (t, z); "N_t" replaces "N_eps".
/// "s1", "s2", "baseM" build the default m1, m2 when those are absent.
template <class T>
CauchyProblem<T> cauchy_problem_from_json(const Json& j);

template <class T>
Json to_json(const FormalSolution<T>& sol);

Json to_json(const SumResult& r);
Json to_json(const SRCheckReport& r);
Json to_json(const GrowthFit& g);
Json to_json(const GrowthRecord& g);

/// z_re,z_im,sum_re,sum_im,err_est
std::string to_csv(const SumResult& r);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

Rational parse_rational(const Json& j);
Complex parse_complex(const Json& j);

Json read_json_file(const std::filesystem::path& path);
/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace momsum::io
