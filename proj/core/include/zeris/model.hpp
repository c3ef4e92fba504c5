#ifndef ZERIS_MODEL_HPP
#define ZERIS_MODEL_HPP

namespace zeris::model {

/// One hop of the cascaded channel. A LoS leg has unit amplitude and a
/// deterministic phase mod(2*pi*d/lambda, 2*pi); a fading leg carries
/// Nakagami-m amplitude statistics and the concentration/Rice-factor pair
/// describing its phase mixture.
struct ChannelLeg {
    double distance_m = 0.0;           // d > 0
    double path_loss_exponent = 2.0;   // a >= 0
    double nakagami_shape = 1.0;       // m >= 0.5
    double nakagami_spread = 1.0;      // Omega > 0
    double phase_concentration = 0.0;  // kappa >= 0
    double rice_factor = 0.0;          // K >= 0
    bool is_los = false;
    bool rice_factor_derived = true;   // K computed from m rather than overridden

    void validate() const;
};

enum class DeploymentSide { tx_side, ue_side };

/// Surface placement: leg1 is Tx->surface, leg2 is surface->UE. Exactly
/// one leg is LoS, determined by the side the surface is deployed on.
struct Deployment {
    DeploymentSide side = DeploymentSide::tx_side;
    ChannelLeg leg1;
    ChannelLeg leg2;

    void validate() const;
    const ChannelLeg& los_leg() const;
    const ChannelLeg& fading_leg() const;
};

/// Link-budget and power-model parameters. All gains and powers are kept
/// linear here; dB is accepted only at the configuration boundary.
struct SystemConfig {
    double transmit_power_w = 0.4;
    double tx_gain = 1.0;             // linear
    double rx_gain = 1.0;             // linear
    double noise_power_w = 1e-10;
    double wavelength_m = 0.0;
    double conversion_efficiency = 0.65;  // zeta in (0, 1]
    double pin_diode_power_w = 6e-5;      // per-bit element power
    double controller_power_w = 0.05;
    double block_duration_s = 1.0;
    double rate_threshold = 0.0;  // bits/s/Hz

    void validate() const;
    double combined_gain() const { return tx_gain * rx_gain; }
    double transmit_snr() const { return transmit_power_w / noise_power_w; }
};

/// C0 * d^-a with C0 = lambda^2 / (16 pi^2).
double path_loss(const ChannelLeg& leg, double wavelength_m);

/// Rice factor from the Nakagami shape, K = sqrt(m^2-m) / (m - sqrt(m^2-m)).
/// Defined for m >= 1 only (K = 0 at m = 1).
double rice_k_from_m(double m);

/// E[|h|^k] = Gamma(m + k/2)/Gamma(m) * (Omega/m)^(k/2) for a Nakagami-m
/// amplitude.
double nakagami_abs_moment(double m, double omega, double order);

/// Per-element power draw at resolution q: q * P_PIN.
double element_power(int bits, const SystemConfig& cfg);

}  // namespace zeris::model

#endif
