#pragma once

#include <optional>
#include <random>
#include <vector>

#include "nslab/errors.hpp"

namespace nslab {

/// Data of the iteration lemma: a nonnegative nonincreasing f on [m0, inf)
/// with f(l) <= M0 (l+1)^alpha (l-m)^{-beta} f^sigma(m) for all l > m >= m0.
struct IterationHypothesis {
    double M0 = 0.0;
    double alpha = 0.0;
    double beta = 1.0;
    double sigma = 2.0;
    double m0 = 0.0;
    double f0 = 0.0; // f(m0)

    void validate() const;
};

/// Gap d such that f(m0 + d) = 0:
/// d = [2 f0^sigma (m0 + M0 + 2)^E]^{1/(beta-alpha)} + 2,
/// E = (2 alpha + 2 beta + 1)/(sigma-1) + beta/(sigma-1)^2 + 2 alpha + beta + 1.
double iteration_gap(const IterationHypothesis& h);

struct HypothesisReport {
    bool pass = true;
    double worst_ratio = 0.0; // max over sampled pairs of LHS / RHS
    double worst_level = 0.0; // the l of the worst pair
    double worst_base = 0.0;  // the m of the worst pair
};

/// Brute-force check of the recursion over all sampled pairs l > m.
/// Pairs with f(m) = 0 demand f(l) = 0 exactly.
HypothesisReport verify_hypothesis(const std::vector<double>& levels,
                                   const std::vector<double>& f, const IterationHypothesis& h);

enum class LadderOrientation {
    NondecreasingInLevel, // lower (entropy) ladders: zeros sit at low levels
    NonincreasingInLevel, // upper (temperature) ladders: zeros sit at high levels
};

/// Extremal sampled level whose value is <= zero_tol * (1 + max value):
/// the largest such level for a nondecreasing ladder, the smallest for a
/// nonincreasing one. Throws DataError if the ladder is non-monotone beyond
/// the same tolerance.
std::optional<double> vanishing_level(const std::vector<double>& levels,
                                      const std::vector<double>& values,
                                      LadderOrientation orientation, double zero_tol = 1e-12);

/// Piecewise-constant finitely supported family: f = eps on [m0, cutoff),
/// 0 beyond, with eps chosen so the recursion hypothesis holds (satisfy =
/// true) or is violated at a sampled pair (satisfy = false).
struct SyntheticFamily {
    IterationHypothesis hyp;
    std::vector<double> levels;
    std::vector<double> f;
    double cutoff = 0.0; // first level at which f vanishes
};

SyntheticFamily make_synthetic_family(std::mt19937_64& rng, bool satisfy);

/// Exploratory fit of the superlinear recursion v_child <= C * Z *
/// gap^{-4} * v_parent^2 over all sampled ladder pairs, where the parent is
/// the level nearer the starting end of the iteration. Not a certified
/// bound; quadrature noise can make small values unreliable.
struct RecursionFit {
    double C = 0.0;         // max required constant over usable pairs
    int pairs = 0;          // usable pairs (parent value above tolerance)
    int degenerate = 0;     // pairs with vanished parent but live child
};

RecursionFit fit_recursion_constant(const std::vector<double>& levels,
                                    const std::vector<double>& values, double Z,
                                    LadderOrientation orientation, double zero_tol = 1e-12);

} // namespace nslab
