#pragma once

#include "momsum/scalar.hpp"

#include <vector>

namespace momsum::detail {

/// [L/M] Pade approximant sum a_i x^i / sum b_j x^j of a power series,
/// computed in binary128 and stored in factored form
///   kappa * prod (x - zero_i) / prod (x - pole_j).
///
/// Exactly degenerate blocks of the Pade table (a rational function of lower
/// degree) are detected by rank and the degrees lowered along the diagonal.
/// Pole/zero pairs closer than `doublet_tol * max(1, |pole|)` are removed.
class Pade {
public:
    Pade(const std::vector<Complex>& coeffs, int L, int M, double doublet_tol = 1e-8);

    Complex operator()(Complex x) const;

    int L() const noexcept { return L_; }
    int M() const noexcept { return M_; }
    const std::vector<Complex>& zeros() const noexcept { return zeros_; }
    const std::vector<Complex>& poles() const noexcept { return poles_; }
    int removed_doublets() const noexcept { return removed_; }

private:
    int L_ = 0, M_ = 0;
    bool zero_ = false;
    Complex kappa_{};
    std::vector<Complex> zeros_, poles_;
    int removed_ = 0;
};

}  // namespace momsum::detail
