// SPDX-License-Identifier: Apache-2.0
//
// Per-element steering terms and complex-baseband fields of the FDA over a
// perfectly conducting ground (two-ray) or in free space (single path).
// The carrier exp{j 2 pi f0 t} is stripped from every field.

#pragma once

#include "fdadm/geometry.hpp"

#include <complex>
#include <span>
#include <vector>

namespace fdadm
{

using cd = std::complex<double>;

// Image-theory reflection coefficient of the ground plane.
inline constexpr double kGroundReflection = -1.0;

enum class ChannelMode
{
    TwoRayMultipath,
    SinglePathLoS, // free-space array, no ground
};

const char* to_string(ChannelMode mode);
ChannelMode channel_mode_from_string(const std::string& name); // "two-ray" | "single-path"

struct WeightPair
{
    std::vector<cd> a; // unit-modulus excitation factors, index n + N
    std::vector<cd> b; // AN weighting coefficients

    std::size_t size() const { return a.size(); }
};

// Per-element vectors indexed by n + N.
struct SteeringComponents
{
    std::vector<cd> mu;     // carrier phase exp{-j 2 pi f0 (r - d_n u)/c}
    std::vector<cd> eps;    // offset phase exp{j 2 pi df_n (t - (r - d_n u)/c)}
    std::vector<cd> rho;    // two-ray factor j 2 sin(2 pi f_n h0 v / c)
    std::vector<double> lift_phase; // 2 pi f_n h0 v / c

    std::size_t size() const { return mu.size(); }
};

struct ChannelResponse
{
    cd kappa; // useful-signal gain
    cd eta;   // AN gain
};

SteeringComponents steering_components(const ArrayConfig& cfg, const ObservationPoint& p,
                                        double t);

// Per-element coefficient c_n such that kappa = sum a_n c_n and
// eta = sum a_n b_n c_n. TwoRay: mu eps rho. SinglePath: mu eps.
std::vector<cd> channel_coefficients(const ArrayConfig& cfg, const ObservationPoint& p, double t,
                                     ChannelMode mode);

cd los_field(const ArrayConfig& cfg, const ObservationPoint& p, double t, const WeightPair& w,
             std::span<const cd> feed);
cd nlos_field(const ArrayConfig& cfg, const ObservationPoint& p, double t, const WeightPair& w,
              std::span<const cd> feed);
cd total_field(const ArrayConfig& cfg, const ObservationPoint& p, double t, const WeightPair& w,
               std::span<const cd> feed, ChannelMode mode);

ChannelResponse channel_response(const ArrayConfig& cfg, const ObservationPoint& p, double t,
                                 const WeightPair& w, ChannelMode mode);
// Same sums against precomputed coefficients.
ChannelResponse channel_response(std::span<const cd> coefficients, const WeightPair& w);

// Wavefront-arrival convention t* = r / c.
inline double arrival_time(const ObservationPoint& p) { return p.range() / kSpeedOfLight; }

} // namespace fdadm
