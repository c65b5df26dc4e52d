#include "nslab/degiorgi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nslab {

void IterationHypothesis::validate() const {
    if (!(M0 >= 0.0)) throw ParameterError("IterationHypothesis: M0 must be >= 0");
    if (!(alpha >= 0.0)) throw ParameterError("IterationHypothesis: alpha must be >= 0");
    if (!(beta > alpha)) throw ParameterError("IterationHypothesis: beta must exceed alpha");
    if (!(sigma > 1.0)) throw ParameterError("IterationHypothesis: sigma must be > 1");
    if (!(m0 >= 0.0)) throw ParameterError("IterationHypothesis: m0 must be >= 0");
    if (!(f0 >= 0.0)) throw ParameterError("IterationHypothesis: f0 must be >= 0");
}

double iteration_gap(const IterationHypothesis& h) {
    h.validate();
    const double sm1 = h.sigma - 1.0;
    const double E = (2.0 * h.alpha + 2.0 * h.beta + 1.0) / sm1 + h.beta / (sm1 * sm1) +
                     2.0 * h.alpha + h.beta + 1.0;
    const double M = h.m0 + h.M0 + 2.0;
    const double base = 2.0 * std::pow(h.f0, h.sigma) * std::pow(M, E);
    return std::pow(base, 1.0 / (h.beta - h.alpha)) + 2.0;
}

HypothesisReport verify_hypothesis(const std::vector<double>& levels,
                                   const std::vector<double>& f, const IterationHypothesis& h) {
    h.validate();
    const std::size_t n = levels.size();
    if (f.size() != n) throw ParameterError("verify_hypothesis: levels/f size mismatch");
    if (n < 2) throw ParameterError("verify_hypothesis: need at least two levels");
    for (std::size_t i = 0; i < n; ++i) {
        if (levels[i] < h.m0) throw ParameterError("verify_hypothesis: level below m0");
        if (i > 0 && !(levels[i] > levels[i - 1])) {
            throw ParameterError("verify_hypothesis: levels must be strictly increasing");
        }
        if (!(f[i] >= 0.0)) throw ParameterError("verify_hypothesis: f must be nonnegative");
    }

    HypothesisReport rep;
    for (std::size_t j = 0; j < n; ++j) {     // m = levels[j]
        for (std::size_t i = j + 1; i < n; ++i) { // l = levels[i]
            double rhs = h.M0 * std::pow(levels[i] + 1.0, h.alpha) *
                         std::pow(levels[i] - levels[j], -h.beta) * std::pow(f[j], h.sigma);
            double ratio;
            if (rhs > 0.0) {
                ratio = f[i] / rhs;
            } else {
                ratio = (f[i] > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
            }
            if (ratio > rep.worst_ratio) {
                rep.worst_ratio = ratio;
                rep.worst_level = levels[i];
                rep.worst_base = levels[j];
            }
        }
    }
    rep.pass = rep.worst_ratio <= 1.0;
    return rep;
}

std::optional<double> vanishing_level(const std::vector<double>& levels,
                                      const std::vector<double>& values,
                                      LadderOrientation orientation, double zero_tol) {
    const std::size_t n = levels.size();
    if (values.size() != n) throw ParameterError("vanishing_level: levels/values size mismatch");
    if (n == 0) return std::nullopt;
    double top = 0.0;
    for (double v : values) top = std::max(top, v);
    const double tol = zero_tol * (1.0 + top);

    const bool increasing = orientation == LadderOrientation::NondecreasingInLevel;
    for (std::size_t i = 1; i < n; ++i) {
        double jump = values[i] - values[i - 1];
        if ((increasing && jump < -tol) || (!increasing && jump > tol)) {
            throw DataError("vanishing_level: ladder not monotone at level " +
                            std::to_string(levels[i]));
        }
    }
    std::optional<double> found;
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i] <= tol) {
            if (!found || (increasing ? levels[i] > *found : levels[i] < *found)) {
                found = levels[i];
            }
        }
    }
    return found;
}

SyntheticFamily make_synthetic_family(std::mt19937_64& rng, bool satisfy) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SyntheticFamily fam;
    IterationHypothesis& h = fam.hyp;
    h.M0 = 0.2 + 5.0 * unit(rng);
    h.alpha = 2.0 * unit(rng);
    h.beta = h.alpha + 0.5 + 4.0 * unit(rng);
    h.sigma = 1.25 + 1.75 * unit(rng);
    h.m0 = 3.0 * unit(rng);

    const int count = 16 + static_cast<int>(32.0 * unit(rng));
    const double span = 2.0 + 18.0 * unit(rng);
    const double dl = span / (count - 1);
    fam.levels.resize(count);
    for (int i = 0; i < count; ++i) fam.levels[i] = h.m0 + i * dl;
    const int cut = 2 + static_cast<int>((count - 3) * unit(rng));
    fam.cutoff = fam.levels[cut];

    // eps threshold making the recursion tight at the widest nonzero pair
    // (l just below the cutoff, m = m0); above it the family satisfies the
    // hypothesis on the whole continuum, below it a sampled pair witnesses
    // the violation.
    auto needed = [&](double l) {
        return std::pow(l - h.m0, h.beta) / (h.M0 * std::pow(l + 1.0, h.alpha));
    };
    double threshold = 0.0;
    if (satisfy) {
        for (int k = 1; k <= 2000; ++k) {
            double l = h.m0 + (fam.cutoff - h.m0) * k / 2000.0;
            threshold = std::max(threshold, needed(l));
        }
    } else {
        threshold = needed(fam.levels[cut - 1]); // worst sampled pair
    }
    const double margin = satisfy ? 1.0 + unit(rng) : 0.2 + 0.5 * unit(rng);
    double eps = std::pow(std::max(threshold * margin, 1e-12), 1.0 / (h.sigma - 1.0));
    if (satisfy) eps = std::max(eps, 0.5); // raising eps only loosens the recursion

    fam.f.assign(count, 0.0);
    for (int i = 0; i < cut; ++i) fam.f[i] = eps;
    h.f0 = eps;
    return fam;
}

RecursionFit fit_recursion_constant(const std::vector<double>& levels,
                                    const std::vector<double>& values, double Z,
                                    LadderOrientation orientation, double zero_tol) {
    if (values.size() != levels.size()) {
        throw ParameterError("fit_recursion_constant: levels/values size mismatch");
    }
    if (!(Z > 0.0)) throw ParameterError("fit_recursion_constant: Z must be > 0");
    double top = 0.0;
    for (double v : values) top = std::max(top, v);
    const double tol = zero_tol * (1.0 + top);

    RecursionFit fit;
    const std::size_t n = levels.size();
    const bool increasing = orientation == LadderOrientation::NondecreasingInLevel;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            // the iteration marches away from the starting end, so the
            // parent is the level nearer it
            std::size_t parent = increasing ? b : a;
            std::size_t child = increasing ? a : b;
            double gap = levels[b] - levels[a];
            if (values[parent] <= tol) {
                if (values[child] > tol) ++fit.degenerate;
                continue;
            }
            ++fit.pairs;
            double c = values[child] * std::pow(gap, 4.0) /
                       (Z * values[parent] * values[parent]);
            fit.C = std::max(fit.C, c);
        }
    }
    return fit;
}

} // namespace nslab
