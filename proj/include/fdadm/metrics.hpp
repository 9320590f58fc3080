// SPDX-License-Identifier: Apache-2.0
//
// Transmit signal construction, Monte Carlo BER and the SNR / SINR /
// achievable-rate / secrecy-rate analytics.

#pragma once

#include "fdadm/channel.hpp"
#include "fdadm/weights.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace fdadm
{

// Coherent Gray-mapped QPSK whose constellation is rotated by pi/4 on every
// odd symbol slot. Unit average energy. Bit 0 rides the in-phase sign, bit 1
// the quadrature sign (before the slot rotation).
struct PiOver4Qpsk
{
    static constexpr int bits_per_symbol = 2;
    static constexpr int order = 4;

    static cd modulate(unsigned bits, std::uint64_t slot);
    // Minimum-distance decision against the slot's rotated alphabet.
    static unsigned detect(cd y, std::uint64_t slot);
    static std::array<cd, order> alphabet(std::uint64_t slot);
};

enum class NoiseCalibration
{
    BobSnr,     // sigma^2 = Ps beta1^2 / gamma: gamma is Bob's SNR
    TotalPower, // sigma^2 = Ps / gamma
};

struct TransmitConfig
{
    double ps = 1.0;
    double beta1 = 0.6;
    double beta2 = 0.8;
    double sigma2 = 0.036; // AWGN variance

    // beta2 = sqrt(1 - beta1^2); sigma^2 from the SNR in dB.
    static TransmitConfig make(double ps, double beta1, double snr_db,
                               NoiseCalibration calibration = NoiseCalibration::BobSnr);
};

// Throws std::invalid_argument when Ps or sigma^2 is not positive or
// beta1^2 + beta2^2 != 1.
void validate(const TransmitConfig& tx);

cd received_sample(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                   double t, const WeightPair& w, cd s, cd z, cd xi, ChannelMode mode);
cd received_sample(const TransmitConfig& tx, const ChannelResponse& h, cd s, cd z, cd xi);

enum class Regeneration
{
    PerSymbol, // fresh (a, b) every symbol slot
    Static,    // one pair reused for all slots
};

// The (a, b) sequence Alice transmits with, one pair per symbol slot. Every
// observation point sees the same sequence. Slot k is synthesised from a
// seed derived from (master seed, k), so the sequence does not depend on
// the number of workers.
class WeightSchedule
{
public:
    static WeightSchedule generate(const ArrayConfig& cfg, const ObservationPoint& bob, double t,
                                   ChannelMode mode, std::size_t slots, std::uint64_t master_seed,
                                   const SynthesisOptions& opts = {},
                                   Regeneration regen = Regeneration::PerSymbol);

    std::size_t size() const { return slots_; }
    const WeightPair& at(std::size_t slot) const
    {
        return pairs_.size() == 1 ? pairs_.front() : pairs_[slot];
    }
    double max_kappa_residual() const { return max_kappa_residual_; }
    double max_eta_residual() const { return max_eta_residual_; }

private:
    std::vector<WeightPair> pairs_;
    std::size_t slots_ = 0;
    double max_kappa_residual_ = 0.0;
    double max_eta_residual_ = 0.0;
};

struct BerResult
{
    ObservationPoint point;
    std::uint64_t trials = 0; // symbols
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
    double std_error = 0.0; // sqrt(ber (1 - ber) / bits)
    ChannelMode mode = ChannelMode::TwoRayMultipath;
};

// Transmits schedule.size() symbols and detects them at p with Bob's
// normalise-and-slice rule. point_seed drives symbols, AN and noise.
BerResult measure_ber(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                      double t, ChannelMode mode, const WeightSchedule& schedule,
                      std::uint64_t point_seed);

// Synthesises a per-symbol schedule toward bob, then measures at p.
BerResult run_ber(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                  const ObservationPoint& bob, double t, ChannelMode mode, std::uint64_t n_symbols,
                  std::uint64_t seed, const SynthesisOptions& opts = {});

double snr(const TransmitConfig& tx, const ChannelResponse& h);
double sinr(const TransmitConfig& tx, const ChannelResponse& h);
double snr(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p, double t,
           const WeightPair& w, ChannelMode mode);
double sinr(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p, double t,
            const WeightPair& w, ChannelMode mode);

double achievable_rate(double sinr);
double bob_rate(const TransmitConfig& tx);
// [min_v (bob - eve_v)]^+ ; throws std::invalid_argument on an empty set.
double secrecy_rate(double bob_rate, std::span<const double> eve_rates);

struct RateResult
{
    double snr = 0.0;
    double sinr = 0.0;
    double rate = 0.0;
    std::optional<double> secrecy_rate;
};

RateResult rate_at(const ArrayConfig& cfg, const TransmitConfig& tx, const ObservationPoint& p,
                   double t, const WeightPair& w, ChannelMode mode);

struct EveSet
{
    std::vector<ObservationPoint> points;
};

// Throws std::invalid_argument if empty or any Eve coincides with Bob.
void validate(const EveSet& eves, const ObservationPoint& bob);

// Secrecy rate under per-symbol weight regeneration: the instantaneous
// secrecy rate of each slot, averaged over the schedule. Element v-1 of the
// result uses the first v Eves, so the sequence is non-increasing.
std::vector<double> nested_secrecy_rates(const TransmitConfig& tx,
                                         std::span<const std::vector<cd>> eve_coefficients,
                                         const WeightSchedule& schedule);

double secrecy_rate(const ArrayConfig& cfg, const TransmitConfig& tx, const EveSet& eves,
                    const ObservationPoint& bob, double t, ChannelMode mode,
                    const WeightSchedule& schedule);

} // namespace fdadm
