#include "zeris/cascade.hpp"

#include <cmath>
#include <stdexcept>

#include "zeris/errors.hpp"

namespace zeris::cascade {

CircularMomentPair circular_moments(const phase::PhaseMixture& mix,
                                    const phase::QuantizerConfig& qc, int truncation,
                                    MomentModel mm) {
    CircularMomentPair out;
    if (mm == MomentModel::uniform_benchmark) {
        out.mu1 = {phase::circular_moment_uniform(1, qc), 0.0};
        out.mu2 = {phase::circular_moment_uniform(2, qc), 0.0};
    } else {
        out.mu1 = phase::circular_moment(1, mix, qc, truncation).value;
        out.mu2 = phase::circular_moment(2, mix, qc, truncation).value;
    }
    return out;
}

double moment_e_x(int n_elements, const model::ChannelLeg& leg, const CircularMomentPair& mu) {
    if (n_elements < 1) throw std::domain_error("moment_e_x: need at least one element");
    const double n = static_cast<double>(n_elements);
    const double e1 = model::nakagami_abs_moment(leg.nakagami_shape, leg.nakagami_spread, 1.0);
    const double e2 = model::nakagami_abs_moment(leg.nakagami_shape, leg.nakagami_spread, 2.0);
    const double mu1_sq = std::norm(mu.mu1);
    return n * e2 + n * (n - 1.0) * e1 * e1 * mu1_sq;
}

double moment_e_x2(int n_elements, const model::ChannelLeg& leg, const CircularMomentPair& mu) {
    if (n_elements < 1) throw std::domain_error("moment_e_x2: need at least one element");
    const double n = static_cast<double>(n_elements);
    const double e1 = model::nakagami_abs_moment(leg.nakagami_shape, leg.nakagami_spread, 1.0);
    const double e2 = model::nakagami_abs_moment(leg.nakagami_shape, leg.nakagami_spread, 2.0);
    const double e3 = model::nakagami_abs_moment(leg.nakagami_shape, leg.nakagami_spread, 3.0);
    const double e4 = model::nakagami_abs_moment(leg.nakagami_shape, leg.nakagami_spread, 4.0);
    const double e1_sq = e1 * e1;
    const double mu1_sq = std::norm(mu.mu1);
    const double mu2_sq = std::norm(mu.mu2);
    const double cross = 2.0 * std::real(mu.mu2 * std::conj(mu.mu1) * std::conj(mu.mu1)) +
                         4.0 * mu1_sq;

    const double pair = n * (n - 1.0);
    const double triple = pair * (n - 2.0);
    const double quad = triple * (n - 3.0);

    // the 3+1 pattern carries |h|^3 on the repeated element, so its third
    // absolute moment enters as a unit (it does not factor into E2*E1)
    return n * e4                                    // all four indices equal
           + 4.0 * pair * e3 * e1 * mu1_sq          // 3+1 pattern
           + pair * e2 * e2 * mu2_sq                 // 2+2 pattern, squared pair
           + 2.0 * pair * e2 * e2                    // 2+2 pattern, moduli only
           + triple * e2 * e1_sq * cross             // 2+1+1 pattern
           + quad * e1_sq * e1_sq * mu1_sq * mu1_sq; // all distinct
}

double moment_e_x(int n_elements, const model::ChannelLeg& leg, const phase::PhaseMixture& mix,
                  const phase::QuantizerConfig& qc, int truncation, MomentModel mm) {
    return moment_e_x(n_elements, leg, circular_moments(mix, qc, truncation, mm));
}

double moment_e_x2(int n_elements, const model::ChannelLeg& leg, const phase::PhaseMixture& mix,
                   const phase::QuantizerConfig& qc, int truncation, MomentModel mm) {
    return moment_e_x2(n_elements, leg, circular_moments(mix, qc, truncation, mm));
}

GammaMatch gamma_match(double mean, double second_moment) {
    if (!(mean > 0.0)) throw std::domain_error("gamma_match: mean must be positive");
    const double mean_sq = mean * mean;
    if (!(second_moment > mean_sq * (1.0 + 1e-12))) {
        throw degenerate_variance_error(
            "gamma_match: variance vanishes; the summed channel is (numerically) deterministic");
    }
    const double var = second_moment - mean_sq;
    GammaMatch out;
    out.shape = mean_sq / var;
    out.scale = var / mean;
    out.source_mean = mean;
    out.source_second_moment = second_moment;
    return out;
}

}  // namespace zeris::cascade
