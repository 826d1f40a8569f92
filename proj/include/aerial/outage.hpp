#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "aerial/types.hpp"

namespace aerial {

/// One receiver's fading situation on a sub-carrier, with every mean already
/// scaled by the transmit power employed on that carrier.
///
/// UE receivers see Rayleigh fading on all links (exponential SNR with the
/// given mean). UAV receivers see a composite: a Gamma(m, A/m) line-of-sight
/// component plus an exponential(B) non-line-of-sight component, summed, on
/// the serving link and on every interfering link.
struct LinkSpec {
    UserKind kind = UserKind::ue;
    double gamma_th = 0.1;
    int nakagami_m = 1;

    // UE receiver
    double serving_mean_snr = 0.0;
    std::vector<double> interferer_mean_snr;

    // UAV receiver
    double serving_los_mean = 0.0;   // A_uv
    double serving_nlos_mean = 0.0;  // B_uv
    std::vector<std::pair<double, double>> interferer_los_nlos;  // (A_tv, B_tv)

    void validate() const;
};

struct McEstimate {
    double outage = 0.0;
    double std_error = 0.0;
};

/// Closed-form outage probability for a UE receiver:
///   P_out = 1 - exp(-gamma_th/mean) * E[exp(-(gamma_th/mean) I)],
/// with the interference expectation evaluated through the partial-fraction
/// expansion of the interferers' joint MGF. Zero-mean interferers are
/// dropped. Throws NumericError if the result leaves [0,1] by more than 1e-9.
double outage_ue(const LinkSpec& link);

/// Analytic outage probability for a UAV receiver, assembled from the
/// serving-link CDF residues and the interference-density residues combined
/// under the CDF x density integral. The Gamma-origin serving terms run
/// through the Gauss-Laguerre rule (after factoring the full exponential
/// decay into the weight, which leaves a polynomial integrand); the
/// exponential-origin serving term and the no-interference case use closed
/// forms. With check_convergence set, the value is recomputed at twice the
/// quadrature order and a discrepancy above 1e-6 throws NumericError.
double outage_uav(const LinkSpec& link, int laguerre_order = 32,
                  bool check_convergence = true, double merge_scale = 1.0);

/// Degenerate-mixture closed forms used as cross-checks of outage_uav:
///   1: all links NLoS-only           -> Rayleigh formula on the B means
///   2: all links LoS-only, general m -> quadrature-free series evaluation
///   3: all links LoS-only, m = 1     -> Rayleigh formula on the A means
///   4: serving NLoS-only, interferers unrestricted -> pure product form
double outage_special_case(int case_id, const LinkSpec& link);

/// Independent sampling oracle: empirical P(SINR <= gamma_th) with the
/// binomial standard error. Draws are split into fixed 65536-draw blocks,
/// each with a sub-stream seed derived from (seed, block index), so the
/// estimate does not depend on how blocks would be scheduled. Requires
/// draws >= 1e4.
McEstimate outage_mc(const LinkSpec& link, long draws, std::uint64_t seed);

namespace detail {
/// Quadrature-free evaluation of the UAV pipeline: the incomplete-gamma
/// cross terms are expanded binomially into elementary integrals. Backs
/// special case 2 and the analytic-vs-analytic tests.
double outage_uav_series(const LinkSpec& link, double merge_scale = 1.0);

/// The same outage integral evaluated through the interference product MGF
/// and its derivative recurrence (exponentially tilted moments of I) instead
/// of the residue expansion. Every term in the recurrence is positive, so
/// the value stays accurate for arbitrarily clustered interferer means,
/// where the residue form cancels catastrophically. Fallback path for
/// links the residue pipeline rejects as ill-conditioned.
double outage_uav_stable(const LinkSpec& link);

/// Rayleigh-receiver outage through the interference product form.
double outage_ue_product(const LinkSpec& link);
}  // namespace detail

}  // namespace aerial
