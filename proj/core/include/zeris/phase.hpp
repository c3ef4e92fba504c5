#ifndef ZERIS_PHASE_HPP
#define ZERIS_PHASE_HPP

#include <cmath>
#include <complex>

#include "zeris/model.hpp"

namespace zeris::phase {

enum class TieBreak { lower_level };

/// q-bit phase quantizer over the level set {0, step, ..., (2^q - 1) step}
/// with step = 2*pi / 2^q. Exact midpoints resolve to the lower level.
struct QuantizerConfig {
    int bits = 1;
    TieBreak tie_break = TieBreak::lower_level;

    void validate() const;
    int levels() const { return 1 << bits; }
    double step() const;
};

/// Phase law of a fading leg: a circular density with concentration kappa
/// around mean_phase, mixed with a point mass of weight K/(K+1) at
/// mean_phase itself.
struct PhaseMixture {
    double kappa = 0.0;       // >= 0; 0 gives the uniform circular law
    double rice_k = 0.0;      // >= 0; atom weight K/(K+1)
    double mean_phase = 0.0;  // mod(2*pi*d/lambda, 2*pi)

    void validate() const;
    double atom_weight() const {
        return std::isinf(rice_k) ? 1.0 : rice_k / (rice_k + 1.0);
    }

    /// Mixture of the given fading leg at carrier wavelength lambda.
    static PhaseMixture from_leg(const model::ChannelLeg& leg, double wavelength_m);
};

/// mod(2*pi*d/lambda, 2*pi), computed from the fractional part of
/// d/lambda so large electrical distances keep full precision.
double los_phase(double distance_m, double wavelength_m);

/// Nearest quantizer level to mod(phi, 2*pi) under circular distance.
double quantize(double phi, const QuantizerConfig& qc);

/// Residual phase error quantize(phi) - phi wrapped to [-step/2, step/2).
double residual_error(double phi, const QuantizerConfig& qc);

/// Deterministic residual of the LoS phase:
/// mod(Q(-2*pi*d/lambda) + 2*pi*d/lambda + step/2, step) - step/2.
double epsilon_d(double distance_m, double wavelength_m, const QuantizerConfig& qc);

/// Same residual expressed directly in terms of the (wrapped) mean phase.
double epsilon_d_from_phase(double mean_phase, const QuantizerConfig& qc);

/// Density of the residual phase error, split into its continuous part and
/// the point mass (a Dirac atom has no pointwise density, so the two
/// components are reported separately).
struct ErrorPdfValue {
    double continuous_density = 0.0;
    double atom_weight = 0.0;
    double atom_location = 0.0;
};

ErrorPdfValue error_pdf(double epsilon, const PhaseMixture& mix, const QuantizerConfig& qc);

/// n-th circular moment E[e^{j n epsilon}] of the residual phase error,
/// with the concentration series truncated after L terms and the tail
/// bound that truncation incurs.
struct CircularMoment {
    int order = 1;
    std::complex<double> value{0.0, 0.0};
    int truncation_order = 10;
    double error_bound = 0.0;
};

/// Series truncation defaults to 10 terms; the reported error_bound always
/// reflects the (L, kappa, K) actually used so callers can assert rather
/// than assume accuracy.
inline constexpr int kDefaultTruncation = 10;

CircularMoment circular_moment(int order, const PhaseMixture& mix, const QuantizerConfig& qc,
                               int truncation = kDefaultTruncation);

/// Closed form for the uniform residual (kappa = 0, K = 0):
/// sin(n*step/2) / (n*step/2). Also the benchmark moment model that
/// ignores the phase distribution entirely.
double circular_moment_uniform(int order, const QuantizerConfig& qc);

/// Upper bound on |mu_n - mu_n^(L)|:
/// 2 [e^{kappa/2} - sum_{l=0}^{L} (kappa/2)^l / l!] / (K+1).
/// Follows from the Bessel ratio bound I_l(kappa)/I_0(kappa) <= (kappa/2)^l / l!
/// and really does dominate the dropped tail (property-tested).
double truncation_bound(int truncation, double kappa, double rice_k);

}  // namespace zeris::phase

#endif
