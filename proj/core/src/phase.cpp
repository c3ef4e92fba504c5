#include "zeris/phase.hpp"

#include <cmath>
#include <stdexcept>

#include "zeris/numerics.hpp"

namespace zeris::phase {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;

// mod into [0, m)
double positive_mod(double x, double m) {
    double r = std::fmod(x, m);
    if (r < 0.0) r += m;
    return r;
}

}  // namespace

void QuantizerConfig::validate() const {
    if (bits < 1 || bits > 24) {
        throw std::domain_error("QuantizerConfig: bits must lie in [1, 24]");
    }
}

double QuantizerConfig::step() const {
    return kTwoPi / static_cast<double>(1 << bits);
}

void PhaseMixture::validate() const {
    if (!(kappa >= 0.0)) throw std::domain_error("PhaseMixture: kappa must be non-negative");
    if (!(rice_k >= 0.0)) throw std::domain_error("PhaseMixture: rice factor must be non-negative");
}

PhaseMixture PhaseMixture::from_leg(const model::ChannelLeg& leg, double wavelength_m) {
    PhaseMixture mix;
    mix.kappa = leg.phase_concentration;
    mix.rice_k = leg.rice_factor;
    mix.mean_phase = los_phase(leg.distance_m, wavelength_m);
    mix.validate();
    return mix;
}

double los_phase(double distance_m, double wavelength_m) {
    if (!(distance_m > 0.0) || !(wavelength_m > 0.0)) {
        throw std::domain_error("los_phase: distance and wavelength must be positive");
    }
    const double turns = distance_m / wavelength_m;
    return kTwoPi * (turns - std::floor(turns));
}

double quantize(double phi, const QuantizerConfig& qc) {
    qc.validate();
    if (!std::isfinite(phi)) throw std::domain_error("quantize: phase must be finite");
    const double step = qc.step();
    const double wrapped = positive_mod(phi, kTwoPi);
    // round-half-down keeps exact midpoints on the lower level
    auto idx = static_cast<long>(std::ceil(wrapped / step - 0.5));
    idx %= qc.levels();
    if (idx < 0) idx += qc.levels();
    return static_cast<double>(idx) * step;
}

double residual_error(double phi, const QuantizerConfig& qc) {
    qc.validate();
    if (!std::isfinite(phi)) throw std::domain_error("residual_error: phase must be finite");
    const double step = qc.step();
    // Q(phi) - phi in one wrap; ties land on -step/2 (lower level chosen)
    return positive_mod(0.5 * step - phi, step) - 0.5 * step;
}

double epsilon_d(double distance_m, double wavelength_m, const QuantizerConfig& qc) {
    return epsilon_d_from_phase(los_phase(distance_m, wavelength_m), qc);
}

double epsilon_d_from_phase(double mean_phase, const QuantizerConfig& qc) {
    const double step = qc.step();
    const double raw = quantize(-mean_phase, qc) + mean_phase;
    return positive_mod(raw + 0.5 * step, step) - 0.5 * step;
}

ErrorPdfValue error_pdf(double epsilon, const PhaseMixture& mix, const QuantizerConfig& qc) {
    qc.validate();
    mix.validate();
    const double step = qc.step();
    const double half = 0.5 * step;
    if (std::fabs(epsilon) > half * (1.0 + 1e-12)) {
        throw std::domain_error("error_pdf: epsilon outside [-step/2, step/2]");
    }
    const int levels = qc.levels();
    const double i0 = numerics::bessel_i(0, mix.kappa);
    const double norm = (mix.rice_k + 1.0) * kTwoPi * i0;

    double acc = 0.0;
    for (int m = 0; m < levels; ++m) {
        const double angle = static_cast<double>(m) * step - epsilon + mix.mean_phase;
        acc += std::exp(mix.kappa * std::cos(angle));
    }

    ErrorPdfValue out;
    out.continuous_density = acc / norm;
    out.atom_weight = mix.atom_weight();
    out.atom_location = epsilon_d_from_phase(mix.mean_phase, qc);
    return out;
}

CircularMoment circular_moment(int order, const PhaseMixture& mix, const QuantizerConfig& qc,
                               int truncation) {
    qc.validate();
    mix.validate();
    if (order < 1) throw std::domain_error("circular_moment: order must be positive");
    if (truncation < 1) throw std::domain_error("circular_moment: truncation must be positive");

    const double step = qc.step();
    const int levels = qc.levels();
    const double i0 = numerics::bessel_i(0, mix.kappa);

    // Bessel ratios I_l / I_0 for l = 1..L
    std::complex<double> sum{0.0, 0.0};
    const double base_term = numerics::sinc_like(static_cast<double>(order), step);
    for (int m = 0; m < levels; ++m) {
        std::complex<double> cell{base_term, 0.0};
        if (mix.kappa > 0.0) {
            const double cell_phase = static_cast<double>(m) * step + mix.mean_phase;
            for (int l = 1; l <= truncation; ++l) {
                const double ratio = numerics::bessel_i(l, mix.kappa) / i0;
                if (ratio == 0.0) break;
                const double lphase = static_cast<double>(l) * cell_phase;
                const std::complex<double> rot{std::cos(lphase), std::sin(lphase)};
                const double lo = numerics::sinc_like(static_cast<double>(order - l), step);
                const double hi = numerics::sinc_like(static_cast<double>(order + l), step);
                cell += ratio * (rot * lo + std::conj(rot) * hi);
            }
        }
        sum += cell;
    }
    sum /= kTwoPi * (mix.rice_k + 1.0);

    const double atom_angle =
        static_cast<double>(order) * epsilon_d_from_phase(mix.mean_phase, qc);
    sum += mix.atom_weight() * std::complex<double>{std::cos(atom_angle), std::sin(atom_angle)};

    CircularMoment out;
    out.order = order;
    out.value = sum;
    out.truncation_order = truncation;
    out.error_bound = truncation_bound(truncation, mix.kappa, mix.rice_k);
    return out;
}

double circular_moment_uniform(int order, const QuantizerConfig& qc) {
    qc.validate();
    if (order < 1) throw std::domain_error("circular_moment_uniform: order must be positive");
    const double step = qc.step();
    return numerics::sinc_like(static_cast<double>(order), step) / step;
}

double truncation_bound(int truncation, double kappa, double rice_k) {
    if (truncation < 0) throw std::domain_error("truncation_bound: L must be non-negative");
    if (!(kappa >= 0.0) || !(rice_k >= 0.0)) {
        throw std::domain_error("truncation_bound: kappa and K must be non-negative");
    }
    if (kappa == 0.0) return 0.0;
    const double half = 0.5 * kappa;
    // tail sum_{l=L+1}^inf (kappa/2)^l / l!, accumulated directly rather
    // than as e^{kappa/2} minus a partial sum, which cancels badly once
    // the tail is small
    double term = 1.0;
    for (int i = 1; i <= truncation + 1; ++i) {
        term *= half / static_cast<double>(i);
    }
    double tail = term;
    for (int l = truncation + 2; l < truncation + 2000; ++l) {
        term *= half / static_cast<double>(l);
        tail += term;
        if (term < tail * 1e-18) break;
    }
    const double bound = 2.0 * tail / (rice_k + 1.0);
    return bound < 0.0 ? 0.0 : bound;
}

}  // namespace zeris::phase
