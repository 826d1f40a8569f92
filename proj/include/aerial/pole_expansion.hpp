#pragma once

#include <cstddef>
#include <vector>

namespace aerial {

/// One factor (1 - s/location)^{-multiplicity} of a rational MGF.
/// Rayleigh links contribute multiplicity 1 at location 1/mean; the
/// Gamma component of an aerial link contributes multiplicity m at m/mean.
struct PoleFactor {
    double location = 0.0;  // > 0
    int multiplicity = 1;
};

/// Partial-fraction decomposition of
///   R(s) = prod_i (1 - s/p_i)^{-m_i} = sum_{i,k} r_{i,k} / (s - p_i)^k.
///
/// Near-coincident poles are merged into a single higher-multiplicity pole
/// at the multiplicity-weighted mean before decomposition. Merging an exact
/// tie is exact (a sum of i.i.d. exponentials IS the higher-order pole), and
/// a near tie costs O(gap^2); separating such poles instead amplifies
/// round-off by gap^{-(m1+m2-1)}, which destroys the decomposition.
/// The merge threshold for a pair is merge_scale * eps^{1/(m1+m2+1)},
/// the crossover point of the two error regimes.
///
/// Residues are held in a rescaled coordinate z = s/scale (scale = the
/// multiplicity-weighted geometric mean of the pole locations) so that
/// physical pole magnitudes of ~1e-8 never underflow intermediate values.
class PoleExpansion {
public:
    struct Term {
        int pole = 0;            // index into poles()
        int order = 1;           // k in 1..multiplicity
        double residue_scaled = 0.0;  // residue of 1/(z - q)^k in z-coordinates
    };

    /// Decomposes the given factors. merge_scale scales the merge thresholds
    /// (used by the degeneracy sensitivity test); 1.0 is the operating value.
    static PoleExpansion decompose(std::vector<PoleFactor> factors,
                                   double merge_scale = 1.0);

    bool empty() const { return poles_.empty(); }
    double scale() const { return scale_; }
    const std::vector<PoleFactor>& poles() const { return poles_; }
    const std::vector<Term>& terms() const { return terms_; }

    /// For merged pole i, the indices of the input factors it absorbed.
    const std::vector<int>& absorbed(int i) const { return absorbed_[i]; }

    /// Cancellation mass of the expansion: sum_{i,k} |rho_{i,k}| / q_i^k.
    /// The signed version of this sum is exactly R(0) = 1, and every
    /// downstream evaluation (exp moments, the incomplete-gamma cross terms)
    /// sums terms bounded by these magnitudes, so machine epsilon times this
    /// value bounds the absolute round-off of anything built from the
    /// expansion. Clustered poles drive it up fast.
    double condition() const;

    /// E[exp(-c X)] of the distribution with MGF R, via the residue sum:
    /// sum_{i,k} rho_{i,k} (-1)^k / (c/scale + q_i)^k. Requires c >= 0.
    double exp_moment(double c) const;

    /// Same expectation via the product form; no residues involved.
    double exp_moment_product(double c) const;

    /// R(s) from the residue sum at a probe point s (s != any pole).
    double evaluate_residue_sum(double s) const;

    /// R(s) from the product form.
    double evaluate_product(double s) const;

    /// |residue_sum - product| / |product| at the probe point. Meaningful
    /// for |s| below the smallest pole, the region where the expansion is
    /// consumed; far beyond it the product decays geometrically in the total
    /// multiplicity while individual residue terms do not, and no float
    /// representation of the residues could cancel that far down.
    double reconstruction_error(double s) const;

    /// A probe point in the meaningful band: s = -min_pole * fraction,
    /// fraction in (0, 0.5].
    double probe_point(double fraction) const;

private:
    double scale_ = 1.0;
    std::vector<PoleFactor> poles_;          // merged, ascending location
    std::vector<std::vector<int>> absorbed_; // input indices per merged pole
    std::vector<Term> terms_;
};

/// Merges near-coincident factors; exposed separately for tests.
/// Returns merged factors (ascending) plus the absorbed input indices.
std::vector<std::pair<PoleFactor, std::vector<int>>> merge_pole_factors(
    const std::vector<PoleFactor>& factors, double merge_scale = 1.0);

}  // namespace aerial
