// SPDX-License-Identifier: Apache-2.0

#include "fdadm/metrics.hpp"

#include "fdadm/parallel.hpp"
#include "fdadm/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fdadm
{

namespace
{

constexpr double kInvSqrt2 = 0.70710678118654752440;

cd slot_rotation(std::uint64_t slot)
{
    return (slot & 1u) ? cd(kInvSqrt2, kInvSqrt2) : cd(1.0, 0.0);
}

} // namespace

cd PiOver4Qpsk::modulate(unsigned bits, std::uint64_t slot)
{
    const double i = (bits & 1u) ? -kInvSqrt2 : kInvSqrt2;
    const double q = (bits & 2u) ? -kInvSqrt2 : kInvSqrt2;
    return cd(i, q) * slot_rotation(slot);
}

unsigned PiOver4Qpsk::detect(cd y, std::uint64_t slot)
{
    const cd d = y * std::conj(slot_rotation(slot));
    return (d.real() < 0.0 ? 1u : 0u) | (d.imag() < 0.0 ? 2u : 0u);
}

std::array<cd, PiOver4Qpsk::order> PiOver4Qpsk::alphabet(std::uint64_t slot)
{
    std::array<cd, order> out;
    for (unsigned b = 0; b < order; ++b)
        out[b] = modulate(b, slot);
    return out;
}

TransmitConfig TransmitConfig::make(double ps, double beta1, double snr_db,
                                    NoiseCalibration calibration)
{
    if (!(beta1 >= 0.0 && beta1 <= 1.0))
        throw std::invalid_argument("transmit: beta1 must lie in [0, 1]");
    TransmitConfig tx;
    tx.ps = ps;
    tx.beta1 = beta1;
    tx.beta2 = std::sqrt(1.0 - beta1 * beta1);
    const double gamma = std::pow(10.0, snr_db / 10.0);
    tx.sigma2 = calibration == NoiseCalibration::BobSnr ? ps * beta1 * beta1 / gamma : ps / gamma;
    validate(tx);
    return tx;
}

void validate(const TransmitConfig& tx)
{
    if (!(tx.ps > 0.0) || !std::isfinite(tx.ps))
        throw std::invalid_argument("transmit: Ps must be positive");
    if (!(tx.sigma2 > 0.0) || !std::isfinite(tx.sigma2))
        throw std::invalid_argument("transmit: noise variance must be positive");
    if (std::abs(tx.beta1 * tx.beta1 + tx.beta2 * tx.beta2 - 1.0) > 1e-12)
        throw std::invalid_argument("transmit: beta1^2 + beta2^2 must equal 1");
}

cd received_sample(const TransmitConfig& tx, const ChannelResponse& h, cd s, cd z, cd xi)
{
    const double amp = std::sqrt(tx.ps);
    return amp * tx.beta1 * h.kappa * s + amp * tx.beta2 * h.eta * z + xi;
}

cd received_sample(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                   double t, const WeightPair& w, cd s, cd z, cd xi, ChannelMode mode)
{
    return received_sample(tx, channel_response(cfg, p, t, w, mode), s, z, xi);
}

WeightSchedule WeightSchedule::generate(const ArrayConfig& cfg, const ObservationPoint& bob,
                                        double t, ChannelMode mode, std::size_t slots,
                                        std::uint64_t master_seed, const SynthesisOptions& opts,
                                        Regeneration regen)
{
    if (slots == 0)
        throw std::invalid_argument("weight schedule: need at least one slot");
    const auto c = channel_coefficients(cfg, bob, t, mode);
    const std::size_t draws = regen == Regeneration::Static ? 1 : slots;

    WeightSchedule out;
    out.slots_ = slots;
    out.pairs_.resize(draws);
    std::vector<SynthesisReport> reports(draws);
    parallel_for(draws, [&](std::size_t k) {
        auto res = synthesize_weights(c, derive_seed(master_seed, Stream::Weights, k), opts);
        out.pairs_[k] = std::move(res.weights);
        reports[k] = res.report;
    });
    for (const auto& r : reports)
    {
        out.max_kappa_residual_ = std::max(out.max_kappa_residual_, r.kappa_residual);
        out.max_eta_residual_ = std::max(out.max_eta_residual_, r.eta_residual);
    }
    return out;
}

BerResult measure_ber(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                      double t, ChannelMode mode, const WeightSchedule& schedule,
                      std::uint64_t point_seed)
{
    validate(tx);
    if (!(tx.beta1 > 0.0))
        throw std::invalid_argument("ber: beta1 must be positive to normalise the receiver");

    const auto c = channel_coefficients(cfg, p, t, mode);
    Rng rng(point_seed);
    std::uniform_int_distribution<unsigned> bit_pair(0, PiOver4Qpsk::order - 1);
    std::normal_distribution<double> an(0.0, kInvSqrt2);
    std::normal_distribution<double> noise(0.0, std::sqrt(tx.sigma2 / 2.0));
    const double norm = 1.0 / (std::sqrt(tx.ps) * tx.beta1);

    std::uint64_t errors = 0;
    const std::uint64_t n = schedule.size();
    for (std::uint64_t k = 0; k < n; ++k)
    {
        const unsigned bits = bit_pair(rng);
        const cd s = PiOver4Qpsk::modulate(bits, k);
        const double zr = an(rng);
        const cd z(zr, an(rng));
        const double xr = noise(rng);
        const cd xi(xr, noise(rng));

        const auto h = channel_response(c, schedule.at(k));
        const cd y = received_sample(tx, h, s, z, xi) * norm;
        const unsigned diff = bits ^ PiOver4Qpsk::detect(y, k);
        errors += (diff & 1u) + ((diff >> 1) & 1u);
    }

    const double bits_total = static_cast<double>(n) * PiOver4Qpsk::bits_per_symbol;
    const double ber = static_cast<double>(errors) / bits_total;
    return BerResult{
        .point = p,
        .trials = n,
        .bit_errors = errors,
        .ber = ber,
        .std_error = std::sqrt(ber * (1.0 - ber) / bits_total),
        .mode = mode,
    };
}

BerResult run_ber(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                  const ObservationPoint& bob, double t, ChannelMode mode, std::uint64_t n_symbols,
                  std::uint64_t seed, const SynthesisOptions& opts)
{
    if (n_symbols == 0)
        throw std::invalid_argument("ber: need at least one symbol");
    const auto schedule = WeightSchedule::generate(cfg, bob, t, mode, n_symbols, seed, opts);
    return measure_ber(cfg, tx, p, t, mode, schedule, derive_seed(seed, Stream::Symbols, 0));
}

double snr(const TransmitConfig& tx, const ChannelResponse& h)
{
    return tx.ps * tx.beta1 * tx.beta1 * std::norm(h.kappa) / tx.sigma2;
}

double sinr(const TransmitConfig& tx, const ChannelResponse& h)
{
    return tx.ps * tx.beta1 * tx.beta1 * std::norm(h.kappa) /
           (tx.ps * tx.beta2 * tx.beta2 * std::norm(h.eta) + tx.sigma2);
}

double snr(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p, double t,
           const WeightPair& w, ChannelMode mode)
{
    return snr(tx, channel_response(cfg, p, t, w, mode));
}

double sinr(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p, double t,
            const WeightPair& w, ChannelMode mode)
{
    return sinr(tx, channel_response(cfg, p, t, w, mode));
}

double achievable_rate(double sinr) { return std::log2(1.0 + sinr); }

double bob_rate(const TransmitConfig& tx)
{
    return achievable_rate(tx.ps * tx.beta1 * tx.beta1 / tx.sigma2);
}

double secrecy_rate(double bob_rate, std::span<const double> eve_rates)
{
    if (eve_rates.empty())
        throw std::invalid_argument("secrecy rate: need at least one eavesdropper");
    const double best_eve = *std::max_element(eve_rates.begin(), eve_rates.end());
    return std::max(0.0, bob_rate - best_eve);
}

RateResult rate_at(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                   double t, const WeightPair& w, ChannelMode mode)
{
    const auto h = channel_response(cfg, p, t, w, mode);
    RateResult r;
    r.snr = snr(tx, h);
    r.sinr = sinr(tx, h);
    r.rate = achievable_rate(r.sinr);
    return r;
}

void validate(const EveSet& eves, const ObservationPoint& bob)
{
    if (eves.points.empty())
        throw std::invalid_argument("eves: need at least one eavesdropper");
    for (const auto& e : eves.points)
        if (e.range() == bob.range() && e.theta() == bob.theta() && e.psi() == bob.psi())
            throw std::invalid_argument("eves: an eavesdropper coincides with Bob");
}

std::vector<double> nested_secrecy_rates(const TransmitConfig& tx,
                                         std::span<const std::vector<cd>> eve_coefficients,
                                         const WeightSchedule& schedule)
{
    if (eve_coefficients.empty())
        throw std::invalid_argument("secrecy rate: need at least one eavesdropper");
    const double zb = bob_rate(tx);
    const std::size_t v = eve_coefficients.size();
    std::vector<double> sums(v, 0.0);
    for (std::size_t k = 0; k < schedule.size(); ++k)
    {
        const auto& w = schedule.at(k);
        double gap = std::numeric_limits<double>::infinity();
        for (std::size_t e = 0; e < v; ++e)
        {
            const double ze = achievable_rate(sinr(tx, channel_response(eve_coefficients[e], w)));
            gap = std::min(gap, zb - ze);
            sums[e] += std::max(0.0, gap);
        }
    }
    for (double& s : sums)
        s /= static_cast<double>(schedule.size());
    return sums;
}

double secrecy_rate(const ArrayConfig& cfg, const TransmitConfig& tx, const EveSet& eves,
                    const ObservationPoint& bob, double t, ChannelMode mode,
                    const WeightSchedule& schedule)
{
    validate(eves, bob);
    std::vector<std::vector<cd>> coeffs;
    coeffs.reserve(eves.points.size());
    for (const auto& e : eves.points)
        coeffs.push_back(channel_coefficients(cfg, e, t, mode));
    return nested_secrecy_rates(tx, coeffs, schedule).back();
}

} // namespace fdadm
