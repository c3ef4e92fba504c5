#include "zeris/model.hpp"

#include <cmath>
#include <stdexcept>

#include "zeris/numerics.hpp"

namespace zeris::model {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

void ChannelLeg::validate() const {
    if (!(distance_m > 0.0)) throw std::domain_error("ChannelLeg: distance must be positive");
    if (!(path_loss_exponent >= 0.0))
        throw std::domain_error("ChannelLeg: path loss exponent must be non-negative");
    if (!is_los) {
        if (!(nakagami_shape >= 0.5))
            throw std::domain_error("ChannelLeg: nakagami shape must be >= 0.5");
        if (!(nakagami_spread > 0.0))
            throw std::domain_error("ChannelLeg: nakagami spread must be positive");
        if (!(phase_concentration >= 0.0))
            throw std::domain_error("ChannelLeg: phase concentration must be non-negative");
        if (!(rice_factor >= 0.0))
            throw std::domain_error("ChannelLeg: rice factor must be non-negative");
    }
}

void Deployment::validate() const {
    leg1.validate();
    leg2.validate();
    const bool tx = side == DeploymentSide::tx_side;
    if (tx && !(leg1.is_los && !leg2.is_los))
        throw std::domain_error("Deployment: tx-side requires LoS leg1 and fading leg2");
    if (!tx && !(leg2.is_los && !leg1.is_los))
        throw std::domain_error("Deployment: ue-side requires fading leg1 and LoS leg2");
}

const ChannelLeg& Deployment::los_leg() const {
    return side == DeploymentSide::tx_side ? leg1 : leg2;
}

const ChannelLeg& Deployment::fading_leg() const {
    return side == DeploymentSide::tx_side ? leg2 : leg1;
}

void SystemConfig::validate() const {
    if (!(transmit_power_w > 0.0)) throw std::domain_error("SystemConfig: transmit power must be positive");
    if (!(tx_gain > 0.0) || !(rx_gain > 0.0))
        throw std::domain_error("SystemConfig: antenna gains must be positive");
    if (!(noise_power_w > 0.0)) throw std::domain_error("SystemConfig: noise power must be positive");
    if (!(wavelength_m > 0.0)) throw std::domain_error("SystemConfig: wavelength must be positive");
    if (!(conversion_efficiency > 0.0 && conversion_efficiency <= 1.0))
        throw std::domain_error("SystemConfig: conversion efficiency must lie in (0, 1]");
    if (pin_diode_power_w < 0.0)
        throw std::domain_error("SystemConfig: PIN diode power must be non-negative");
    if (controller_power_w < 0.0)
        throw std::domain_error("SystemConfig: controller power must be non-negative");
    if (!(block_duration_s > 0.0))
        throw std::domain_error("SystemConfig: block duration must be positive");
    if (rate_threshold < 0.0)
        throw std::domain_error("SystemConfig: rate threshold must be non-negative");
}

double path_loss(const ChannelLeg& leg, double wavelength_m) {
    if (!(leg.distance_m > 0.0)) throw std::domain_error("path_loss: distance must be positive");
    if (!(wavelength_m > 0.0)) throw std::domain_error("path_loss: wavelength must be positive");
    const double c0 = wavelength_m * wavelength_m / (16.0 * kPi * kPi);
    return c0 * std::pow(leg.distance_m, -leg.path_loss_exponent);
}

double rice_k_from_m(double m) {
    if (!(m >= 1.0)) {
        throw std::domain_error("rice_k_from_m: defined for m >= 1 only");
    }
    const double root = std::sqrt(m * m - m);
    if (root == 0.0) return 0.0;  // m == 1
    return root / (m - root);
}

double nakagami_abs_moment(double m, double omega, double order) {
    if (!(m >= 0.5)) throw std::domain_error("nakagami_abs_moment: m must be >= 0.5");
    if (!(omega > 0.0)) throw std::domain_error("nakagami_abs_moment: omega must be positive");
    if (!(order > 0.0)) throw std::domain_error("nakagami_abs_moment: order must be positive");
    using numerics::ln_gamma;
    return std::exp(ln_gamma(m + 0.5 * order) - ln_gamma(m) +
                    0.5 * order * std::log(omega / m));
}

double element_power(int bits, const SystemConfig& cfg) {
    if (bits < 1) throw std::domain_error("element_power: resolution must be at least 1 bit");
    return static_cast<double>(bits) * cfg.pin_diode_power_w;
}

}  // namespace zeris::model
