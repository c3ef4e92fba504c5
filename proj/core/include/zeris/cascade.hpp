#ifndef ZERIS_CASCADE_HPP
#define ZERIS_CASCADE_HPP

#include <complex>

#include "zeris/model.hpp"
#include "zeris/phase.hpp"

namespace zeris::cascade {

/// Gamma(k, theta) fitted to the first two moments of a non-negative
/// random variable; keeps the source moments for round-trip checks.
struct GammaMatch {
    double shape = 0.0;  // k
    double scale = 0.0;  // theta
    double source_mean = 0.0;
    double source_second_moment = 0.0;
};

/// Which circular-moment model drives the cascade moments: the full
/// mixture moments, or the uniform closed form (the benchmark that is
/// exact only for pure non-LoS propagation).
enum class MomentModel { proposed, uniform_benchmark };

/// First and second circular moments feeding the cascade expansion.
struct CircularMomentPair {
    std::complex<double> mu1{0.0, 0.0};
    std::complex<double> mu2{0.0, 0.0};
};

CircularMomentPair circular_moments(const phase::PhaseMixture& mix,
                                    const phase::QuantizerConfig& qc,
                                    int truncation = phase::kDefaultTruncation,
                                    MomentModel mm = MomentModel::proposed);

/// E[X] for X = |sum_i |h_i| e^{j eps_i}|^2 over n i.i.d. elements:
/// N E[|h|^2] + N(N-1) E[|h|]^2 |mu1|^2.
double moment_e_x(int n_elements, const model::ChannelLeg& leg, const phase::PhaseMixture& mix,
                  const phase::QuantizerConfig& qc, int truncation = phase::kDefaultTruncation,
                  MomentModel mm = MomentModel::proposed);

/// E[X^2], summing all six index-pattern classes of the fourth-order
/// expansion; mu1 and mu2 enter as complex values because the mixed term
/// Re{mu2 conj(mu1)^2} is phase sensitive.
double moment_e_x2(int n_elements, const model::ChannelLeg& leg, const phase::PhaseMixture& mix,
                   const phase::QuantizerConfig& qc, int truncation = phase::kDefaultTruncation,
                   MomentModel mm = MomentModel::proposed);

/// Same expansions with the circular moments supplied by the caller.
double moment_e_x(int n_elements, const model::ChannelLeg& leg, const CircularMomentPair& mu);
double moment_e_x2(int n_elements, const model::ChannelLeg& leg, const CircularMomentPair& mu);

/// k = mean^2 / var, theta = var / mean. Throws degenerate_variance_error
/// when the variance is non-positive (numerically deterministic input).
GammaMatch gamma_match(double mean, double second_moment);

}  // namespace zeris::cascade

#endif
