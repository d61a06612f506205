#pragma once

#include "momsum/scalar.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace momsum {

enum class SequenceKind { factorial_power, gamma_gevrey, q_factorial, explicit_values, derived };

std::string to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(const std::string& name);

using SequenceParams = std::map<std::string, double>;

/// Finite prefix m(0..N) of a positive sequence.
///
/// Values are kept both as binary64 and as natural logarithms; the former may
/// overflow to +inf for long Gevrey prefixes while the latter stay finite.
/// Sequences built from closed forms (Gevrey kinds, q-factorials and their
/// powers/products) also know how to continue themselves past N, which the
/// growth-index and rho estimates use to look at large arguments.
class MomentSequence {
public:
    /// Empty placeholder (N() == -1) until a real sequence is assigned.
    MomentSequence() = default;

    /// Constructs one of the closed-form kinds. Throws DomainError on bad
    /// parameters (s <= 0, q outside (0,1), N < 2).
    static MomentSequence make(SequenceKind kind, const SequenceParams& params, int N);

    /// Explicit positive values. `exact` may carry rational values; when absent
    /// the exact binary values of the doubles are used.
    static MomentSequence from_values(std::vector<double> values,
                                      std::optional<std::vector<Rational>> exact = std::nullopt);

    SequenceKind kind() const noexcept { return kind_; }
    const SequenceParams& params() const noexcept { return params_; }
    const std::string& description() const noexcept { return description_; }
    int N() const noexcept { return static_cast<int>(log_values_.size()) - 1; }
    std::size_t size() const noexcept { return log_values_.size(); }

    double operator[](std::size_t p) const { return values_.at(p); }
    double log_value(std::size_t p) const { return log_values_.at(p); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> log_values() const noexcept { return log_values_; }
    /// m(num)/m(den) in binary64, safe when the individual values overflow.
    double ratio(std::size_t num, std::size_t den) const;

    bool has_exact() const noexcept { return exact_ != nullptr; }
    /// Exact value; throws DomainError when the sequence has no exact mode.
    const Rational& exact(std::size_t p) const;

    /// True when log m(p) is known in closed form for every real p >= 0.
    bool extensible() const noexcept { return static_cast<bool>(log_extension_); }
    /// log m(p) for arbitrary p >= 0; requires extensible().
    double log_value_extended(double p) const;

    /// Same sequence re-materialized with a different truncation. Requires
    /// extensible() when N exceeds the current prefix.
    MomentSequence with_length(int N) const;

    /// Known growth index for Gevrey powers, if any.
    std::optional<double> known_growth_index() const noexcept { return growth_index_; }

private:
    friend MomentSequence combine_power(const MomentSequence&, double);
    friend MomentSequence combine_product(const MomentSequence&, const MomentSequence&);
    friend MomentSequence combine_quotient(const MomentSequence&, const MomentSequence&);

    void fill_from_logs(std::vector<double> logs);

    SequenceKind kind_ = SequenceKind::explicit_values;
    SequenceParams params_;
    std::string description_;
    std::vector<double> values_;
    std::vector<double> log_values_;
    std::shared_ptr<const std::vector<Rational>> exact_;
    std::function<double(double)> log_extension_;
    std::function<MomentSequence(int)> rebuild_;
    std::optional<double> growth_index_;
};

/// m(p) as a scalar of the requested arithmetic mode.
template <class T>
T moment_value(const MomentSequence& m, std::size_t p);

template <>
inline Complex moment_value<Complex>(const MomentSequence& m, std::size_t p) {
    return {m[p], 0.0};
}

template <>
inline Rational moment_value<Rational>(const MomentSequence& m, std::size_t p) {
    return m.exact(p);
}

inline MomentSequence make_sequence(SequenceKind kind, const SequenceParams& params, int N) {
    return MomentSequence::make(kind, params, N);
}

enum class CombineOp { power, product, quotient };

MomentSequence combine_power(const MomentSequence& a, double s);
MomentSequence combine_product(const MomentSequence& a, const MomentSequence& b);
MomentSequence combine_quotient(const MomentSequence& a, const MomentSequence& b);

/// Dispatching form; `s` is used by power, `b` by product and quotient.
MomentSequence combine(CombineOp op, const MomentSequence& a,
                       const MomentSequence* b = nullptr, double s = 1.0);

// ---------------------------------------------------------------------------
// Diagnostics

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

struct SRCheckReport {
    bool lc_ok = false;
    bool mg_ok = false;
    double A1 = 0.0;
    bool snq_ok = false;
    Verdict snq_verdict = Verdict::inconclusive;
    double A2 = 0.0;
    int N_checked = 0;
    std::vector<std::string> notes;
};

/// Checks (lc), (mg) exactly over the prefix and applies a tail heuristic for
/// (snq). Requires N >= 10.
SRCheckReport check_strongly_regular(const MomentSequence& seq);

struct AssociatedValue {
    double value = 0.0;
    std::size_t argmax = 0;
    bool truncation_limited = false;
};

/// M(t) = sup_p log(t^p / m_p) over the stored prefix.
AssociatedValue associated_function(const MomentSequence& seq, double t);

/// M(t) over the closed-form continuation of the sequence (no truncation).
/// Returns +inf when the supremum is unbounded.
double associated_function_extended(const MomentSequence& seq, double t);

/// Extended evaluation when available, prefix evaluation otherwise.
double associated_function_best(const MomentSequence& seq, double t);

struct OmegaOptions {
    double r_min = 1e1;
    double r_max = 1e8;
    int points = 30;
};

struct OmegaEstimate {
    double omega = 0.0;
    double uncertainty = 0.0;
    bool used_extension = false;
    int truncation_limited_points = 0;
};

/// Growth index omega(M) from the extrapolated limsup of log M(r) / log r.
OmegaEstimate estimate_omega(const MomentSequence& seq, const OmegaOptions& opt = {});

/// Known index for Gevrey powers, estimate otherwise.
double growth_index(const MomentSequence& seq);

struct EquivalenceReport {
    bool equivalent = false;
    double C = 0.0, D = 0.0;              ///< lower bound  C D^p a_p <= b_p
    double C_tilde = 0.0, D_tilde = 0.0;  ///< upper bound  b_p <= C~ D~^p a_p
    double slope_drift = 0.0;             ///< change of log-ratio slope between halves
};

EquivalenceReport check_equivalence(const MomentSequence& a, const MomentSequence& b);

struct RhoOptions {
    double t_min = 1e-2;
    double t_max = 0.0;  ///< 0 selects the largest safely evaluable t
    int t_points = 200;
    double step = 1e-2;
    double cap = 100.0;
};

/// Smallest grid rho >= 1 with M(t) >= s M(t/rho) on the sampled t grid.
double rho_factor(const MomentSequence& seq, double s, const RhoOptions& opt = {});

}  // namespace momsum
