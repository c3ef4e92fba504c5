#include "zeris/mc.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace zeris::mc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
constexpr std::uint64_t kChunk = 8192;  // fixed reduction granularity, not worker-dependent

double positive_mod(double x, double m) {
    double r = std::fmod(x, m);
    if (r < 0.0) r += m;
    return r;
}

// Marsaglia-Tsang squeeze/acceptance Gamma variates; shapes in [0.5, 1)
// use the boost G(a) = G(a+1) U^{1/a}.
struct GammaSampler {
    double shape = 1.0;
    double scale = 1.0;
    double d = 0.0;
    double c = 0.0;
    bool boosted = false;

    GammaSampler(double shape_in, double scale_in) : shape(shape_in), scale(scale_in) {
        if (!(shape >= 0.5)) {
            throw std::domain_error("GammaSampler: shape must be >= 0.5");
        }
        boosted = shape < 1.0;
        const double a = boosted ? shape + 1.0 : shape;
        d = a - 1.0 / 3.0;
        c = 1.0 / std::sqrt(9.0 * d);
    }

    double draw(CounterRng& rng) const {
        for (;;) {
            const double x = rng.next_normal();
            const double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = rng.next_unit_open_low();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2 ||
                std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
                double g = d * v;
                if (boosted) {
                    g *= std::pow(rng.next_unit_open_low(), 1.0 / shape);
                }
                return g * scale;
            }
        }
    }
};

// Best-Fisher wrapped-Cauchy envelope rejection sampler.
struct VonMisesSampler {
    double mean = 0.0;
    double kappa = 0.0;
    double r = 0.0;
    bool uniform = true;

    VonMisesSampler(double mean_in, double kappa_in) : mean(mean_in), kappa(kappa_in) {
        uniform = kappa < 1e-10;
        if (!uniform) {
            const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
            const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
            r = (1.0 + rho * rho) / (2.0 * rho);
        }
    }

    double draw(CounterRng& rng) const {
        if (uniform) {
            return kTwoPi * rng.next_unit();
        }
        for (;;) {
            const double z = std::cos(kPi * rng.next_unit());
            const double f = (1.0 + r * z) / (r + z);
            const double c = kappa * (r - f);
            const double u2 = rng.next_unit_open_low();
            if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
                const double u3 = rng.next_unit();
                const double theta = u3 < 0.5 ? mean - std::acos(f) : mean + std::acos(f);
                return positive_mod(theta, kTwoPi);
            }
        }
    }
};

struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v)) {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }

    void add(const NeumaierSum& other) {
        add(other.sum);
        comp += other.comp;
    }

    double total() const { return sum + comp; }
};

template <typename Partial, typename TrialFn>
std::vector<Partial> run_chunks(std::uint64_t n_trials, int workers, const TrialFn& fn) {
    const std::uint64_t n_chunks = (n_trials + kChunk - 1) / kChunk;
    std::vector<Partial> partials(n_chunks);
    std::atomic<std::uint64_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1);
            if (chunk >= n_chunks) return;
            Partial& p = partials[chunk];
            const std::uint64_t begin = chunk * kChunk;
            const std::uint64_t end = std::min(begin + kChunk, n_trials);
            for (std::uint64_t t = begin; t < end; ++t) fn(p, t);
        }
    };
    const int w = static_cast<int>(
        std::min<std::uint64_t>(static_cast<std::uint64_t>(std::max(1, workers)), n_chunks));
    if (w <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(w);
        for (int i = 0; i < w; ++i) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return partials;
}

Estimate binomial_estimate(std::uint64_t outages, std::uint64_t n) {
    Estimate est;
    est.n_trials = n;
    const double p = static_cast<double>(outages) / static_cast<double>(n);
    est.value = p;
    est.std_error = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    est.ci95_lo = std::max(0.0, p - 1.96 * est.std_error);
    est.ci95_hi = std::min(1.0, p + 1.96 * est.std_error);
    return est;
}

Estimate constant_estimate(double value, std::uint64_t n) {
    Estimate est;
    est.value = value;
    est.n_trials = n;
    est.ci95_lo = value;
    est.ci95_hi = value;
    return est;
}

// Pre-resolved element sampler for the hot loops: the point mass maps to a
// fixed residual whose phasor is precomputed, so only the continuous
// branch needs a von Mises draw and fresh trig.
struct ElementSampler {
    GammaSampler gamma;
    VonMisesSampler vm;
    double atom_prob;
    double step;
    double half_step;
    double mean_phase;
    double shift;  // extra deterministic phase entering the quantization
    double atom_cos;
    double atom_sin;

    ElementSampler(const model::ChannelLeg& leg, const phase::PhaseMixture& mix,
                   const phase::QuantizerConfig& qc, double shift_in)
        : gamma(leg.nakagami_shape, leg.nakagami_spread / leg.nakagami_shape),
          vm(mix.mean_phase, mix.kappa),
          atom_prob(mix.atom_weight()),
          step(qc.step()),
          half_step(0.5 * qc.step()),
          mean_phase(mix.mean_phase),
          shift(shift_in) {
        const double eps = residual(mean_phase);
        atom_cos = std::cos(eps);
        atom_sin = std::sin(eps);
    }

    // residual of quantizing -(theta + shift)
    double residual(double theta) const {
        return positive_mod(half_step + theta + shift, step) - half_step;
    }

    // e^{j eps} for a freshly drawn element; consumes one uniform for the
    // mixture branch plus the von Mises draws when off the atom
    void draw_phasor(CounterRng& rng, double& ce, double& se) const {
        if (rng.next_unit() < atom_prob) {
            ce = atom_cos;
            se = atom_sin;
            return;
        }
        const double eps = residual(vm.draw(rng));
        ce = std::cos(eps);
        se = std::sin(eps);
    }
};

// two phasors driven by one shared phase draw (same mixture, different
// deterministic shift inside the quantizer)
void draw_phasor_pair(CounterRng& rng, const ElementSampler& a, const ElementSampler& b,
                      double& ce_a, double& se_a, double& ce_b, double& se_b) {
    if (rng.next_unit() < a.atom_prob) {
        ce_a = a.atom_cos;
        se_a = a.atom_sin;
        ce_b = b.atom_cos;
        se_b = b.atom_sin;
        return;
    }
    const double theta = a.vm.draw(rng);
    const double eps_a = a.residual(theta);
    const double eps_b = b.residual(theta);
    ce_a = std::cos(eps_a);
    se_a = std::sin(eps_a);
    ce_b = std::cos(eps_b);
    se_b = std::sin(eps_b);
}

}  // namespace

double sample_nakagami_amplitude(double m, double omega, CounterRng& rng) {
    if (!(m >= 0.5)) throw std::domain_error("sample_nakagami_amplitude: m must be >= 0.5");
    if (!(omega > 0.0)) throw std::domain_error("sample_nakagami_amplitude: omega must be positive");
    GammaSampler gs(m, omega / m);
    return std::sqrt(gs.draw(rng));
}

double sample_channel_phase(const phase::PhaseMixture& mix, CounterRng& rng) {
    mix.validate();
    if (rng.next_unit() < mix.atom_weight()) return mix.mean_phase;
    VonMisesSampler vm(mix.mean_phase, mix.kappa);
    return vm.draw(rng);
}

Estimate simulate_outage(const model::SystemConfig& sys, const model::Deployment& dep,
                         const outage::SchemeConfig& sc, const phase::QuantizerConfig& qc,
                         const TrialPlan& plan, int workers) {
    sys.validate();
    dep.validate();
    sc.validate();
    qc.validate();
    if (plan.n_trials == 0) throw std::domain_error("simulate_outage: need at least one trial");
    if (workers <= 0) workers = default_worker_count();

    const bool tx = dep.side == model::DeploymentSide::tx_side;
    const bool ts = sc.kind == outage::SchemeKind::time_switching;
    const double t_block = sys.block_duration_s;
    const double l1 = model::path_loss(dep.leg1, sys.wavelength_m);
    const double l2 = model::path_loss(dep.leg2, sys.wavelength_m);
    const double lp = l1 * l2;
    const double harvest = sys.conversion_efficiency * sys.transmit_power_w * sys.tx_gain * l1;
    const double p_elem = model::element_power(qc.bits, sys);
    const double snr_gain = sys.transmit_snr() * sys.combined_gain() * lp;
    const double n_total = static_cast<double>(sc.n_total);

    const auto& fading = dep.fading_leg();
    const auto mix = phase::PhaseMixture::from_leg(fading, sys.wavelength_m);
    const ElementSampler elem(fading, mix, qc, 0.0);
    // deterministic LoS phase of the other hop; enters the reflection
    // quantization only in physical mode on the UE side
    const double los = phase::los_phase(dep.los_leg().distance_m, sys.wavelength_m);
    const bool split_wrap = !tx && plan.mode == Mode::physical;
    const ElementSampler elem_reflect(fading, mix, qc, split_wrap ? los : 0.0);

    const double tau = ts ? sc.tau : 0.0;
    const double consumption =
        ts ? t_block * ((1.0 - tau) * n_total * p_elem + sys.controller_power_w)
           : t_block * (static_cast<double>(sc.n2) * p_elem + sys.controller_power_w);
    const double rate_fraction = ts ? 1.0 - tau : 1.0;
    const double rate_thr = sys.rate_threshold;

    if (tx) {
        // the LoS harvest sum is fully coherent, so the energy side is a
        // deterministic gate in both modes
        const double n_harvest = ts ? n_total : static_cast<double>(sc.n1);
        const double harvest_scale = ts ? tau * t_block * harvest : t_block * harvest;
        if (harvest_scale * n_harvest * n_harvest < consumption) {
            return constant_estimate(1.0, plan.n_trials);
        }
        const int n_reflect = ts ? sc.n_total : sc.n2;
        if (n_reflect == 0) {
            const bool outage = rate_fraction * std::log2(1.0) < rate_thr;
            return constant_estimate(outage ? 1.0 : 0.0, plan.n_trials);
        }
        auto trial = [&](std::uint64_t& outages, std::uint64_t t) {
            CounterRng rng(plan.seed, t);
            double re = 0.0;
            double im = 0.0;
            for (int i = 0; i < n_reflect; ++i) {
                double ce, se;
                elem.draw_phasor(rng, ce, se);
                const double amp = std::sqrt(elem.gamma.draw(rng));
                re += amp * ce;
                im += amp * se;
            }
            const double x = re * re + im * im;
            if (rate_fraction * std::log2(1.0 + snr_gain * x) < rate_thr) ++outages;
        };
        const auto partials = run_chunks<std::uint64_t>(plan.n_trials, workers, trial);
        std::uint64_t outages = 0;
        for (const auto c : partials) outages += c;
        return binomial_estimate(outages, plan.n_trials);
    }

    // UE side: the harvest sum is random
    auto trial = [&](std::uint64_t& outages, std::uint64_t t) {
        CounterRng rng(plan.seed, t);
        bool outage;
        if (ts) {
            double re_h = 0.0, im_h = 0.0, re_c = 0.0, im_c = 0.0;
            if (split_wrap) {
                for (int i = 0; i < sc.n_total; ++i) {
                    double ch, sh, cc, ss;
                    draw_phasor_pair(rng, elem, elem_reflect, ch, sh, cc, ss);
                    const double amp = std::sqrt(elem.gamma.draw(rng));
                    re_h += amp * ch;
                    im_h += amp * sh;
                    re_c += amp * cc;
                    im_c += amp * ss;
                }
            } else {
                for (int i = 0; i < sc.n_total; ++i) {
                    double ch, sh;
                    elem.draw_phasor(rng, ch, sh);
                    const double amp = std::sqrt(elem.gamma.draw(rng));
                    re_h += amp * ch;
                    im_h += amp * sh;
                }
            }
            const double x_h = re_h * re_h + im_h * im_h;
            const double x_c = split_wrap ? re_c * re_c + im_c * im_c : x_h;
            outage = tau * t_block * harvest * x_h < consumption ||
                     rate_fraction * std::log2(1.0 + snr_gain * x_c) < rate_thr;
        } else {
            double re_h = 0.0, im_h = 0.0, re_c = 0.0, im_c = 0.0;
            for (int i = 0; i < sc.n1; ++i) {
                double ch, sh;
                elem.draw_phasor(rng, ch, sh);
                const double amp = std::sqrt(elem.gamma.draw(rng));
                re_h += amp * ch;
                im_h += amp * sh;
            }
            for (int i = 0; i < sc.n2; ++i) {
                double cc, ss;
                elem_reflect.draw_phasor(rng, cc, ss);
                const double amp = std::sqrt(elem_reflect.gamma.draw(rng));
                re_c += amp * cc;
                im_c += amp * ss;
            }
            const double x_h = re_h * re_h + im_h * im_h;
            const double x_c = re_c * re_c + im_c * im_c;
            outage = t_block * harvest * x_h < consumption ||
                     std::log2(1.0 + snr_gain * x_c) < rate_thr;
        }
        if (outage) ++outages;
    };
    const auto partials = run_chunks<std::uint64_t>(plan.n_trials, workers, trial);
    std::uint64_t outages = 0;
    for (const auto c : partials) outages += c;
    return binomial_estimate(outages, plan.n_trials);
}

std::pair<Estimate, Estimate> simulate_cascade_moments(int n_elements,
                                                       const model::ChannelLeg& leg,
                                                       const phase::PhaseMixture& mix,
                                                       const phase::QuantizerConfig& qc,
                                                       const TrialPlan& plan, int workers) {
    if (n_elements < 1) throw std::domain_error("simulate_cascade_moments: need elements");
    if (plan.n_trials == 0) throw std::domain_error("simulate_cascade_moments: need trials");
    qc.validate();
    mix.validate();
    if (workers <= 0) workers = default_worker_count();

    const ElementSampler elem(leg, mix, qc, 0.0);

    struct Partial {
        NeumaierSum x;
        NeumaierSum x2;
        NeumaierSum x4;
    };
    auto trial = [&](Partial& p, std::uint64_t t) {
        CounterRng rng(plan.seed, t);
        double re = 0.0;
        double im = 0.0;
        for (int i = 0; i < n_elements; ++i) {
            double ce, se;
            elem.draw_phasor(rng, ce, se);
            const double amp = std::sqrt(elem.gamma.draw(rng));
            re += amp * ce;
            im += amp * se;
        }
        const double x = re * re + im * im;
        p.x.add(x);
        p.x2.add(x * x);
        p.x4.add(x * x * x * x);
    };
    const auto partials = run_chunks<Partial>(plan.n_trials, workers, trial);
    NeumaierSum sx, sx2, sx4;
    for (const auto& p : partials) {
        sx.add(p.x);
        sx2.add(p.x2);
        sx4.add(p.x4);
    }

    const double n = static_cast<double>(plan.n_trials);
    const auto moment_estimate = [&](double sum, double sum_sq) {
        Estimate est;
        est.n_trials = plan.n_trials;
        est.value = sum / n;
        const double var = std::max(0.0, (sum_sq / n - est.value * est.value) * n / (n - 1.0));
        est.std_error = std::sqrt(var / n);
        est.ci95_lo = est.value - 1.96 * est.std_error;
        est.ci95_hi = est.value + 1.96 * est.std_error;
        return est;
    };
    return {moment_estimate(sx.total(), sx2.total()),
            moment_estimate(sx2.total(), sx4.total())};
}

}  // namespace zeris::mc
