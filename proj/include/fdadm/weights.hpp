// SPDX-License-Identifier: Apache-2.0
//
// Randomised synthesis of excitation factors {a_n} and AN coefficients {b_n}
// such that kappa = 1 and eta = 0 at the intended receiver.

#pragma once

#include "fdadm/channel.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace fdadm
{

enum class AnModulus
{
    Unit,    // |b_n| = 1
    Bounded, // |b_n| <= b_max
};

struct SynthesisOptions
{
    double tol = 1e-9;
    int max_iterations = 10000; // per projection loop and attempt
    int max_attempts = 10;
    AnModulus an_modulus = AnModulus::Unit;
    double b_max = 1.0;
};

struct SynthesisReport
{
    double kappa_residual = 0.0; // |kappa_B - 1|
    double eta_residual = 0.0;   // |eta_B|
    int iterations = 0;
    std::uint64_t seed = 0;
    bool passed = false;
};

// No attempt reached the tolerance. Carries the best residuals seen.
class SynthesisError : public std::runtime_error
{
public:
    SynthesisError(const std::string& what, double kappa_residual, double eta_residual)
        : std::runtime_error(what), kappa_residual(kappa_residual), eta_residual(eta_residual)
    {
    }
    double kappa_residual;
    double eta_residual;
};

// The constraint set is empty for this geometry (e.g. grazing Bob in two-ray mode).
class InfeasibleError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

struct SynthesisResult
{
    WeightPair weights;
    SynthesisReport report;
};

// Core solver against Bob's per-element coefficients c_n.
SynthesisResult synthesize_weights(std::span<const cd> bob_coefficients, std::uint64_t seed,
                                   const SynthesisOptions& opts = {});

SynthesisResult synthesize_weights(const ArrayConfig& cfg, const ObservationPoint& bob, double t,
                                   ChannelMode mode, std::uint64_t seed,
                                   const SynthesisOptions& opts = {});

SynthesisReport verify_weights(const WeightPair& w, const ArrayConfig& cfg,
                               const ObservationPoint& bob, double t, ChannelMode mode,
                               double tol);

// Weight CSV interchange. Columns n,re_a,im_a,re_b,im_b with an optional
// leading draw_index column.
struct WeightDraw
{
    std::uint64_t draw_index = 0;
    WeightPair weights;
};

std::vector<WeightDraw> read_weights_csv(std::istream& in);
void write_weights_csv(std::ostream& out, std::span<const WeightDraw> draws);

} // namespace fdadm
