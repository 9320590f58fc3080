// SPDX-License-Identifier: Apache-2.0
//
// Symmetric (2N+1)-element frequency diverse array mounted above a ground
// plane, and the polar observation points it radiates toward.

#pragma once

#include <array>
#include <string>
#include <vector>

namespace fdadm
{

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

using Vec3 = std::array<double, 3>; // Cartesian x, y, z in meters

struct ArrayConfig
{
    int half_count = 3;           // N, the array has 2N+1 elements
    double f0 = 10e9;             // central carrier frequency [Hz]
    double delta_f = 2e3;         // frequency increment [Hz]
    double g = 1.0;               // increment control exponent
    double spacing = kSpeedOfLight / (2.0 * 10e9); // element spacing d [m]
    double height = 4.25 * kSpeedOfLight / 10e9;   // h0 [m]
    double offset_ratio_guard = 1e-3;              // warn when |delta_f|/f0 exceeds this

    int element_count() const { return 2 * half_count + 1; }
    double wavelength() const { return kSpeedOfLight / f0; }

    // Geometry with d = lambda0/2 and h0 = height_wavelengths * lambda0.
    static ArrayConfig with_carrier(int half_count, double f0, double delta_f, double g,
                                    double height_wavelengths = 4.25);
};

// Throws std::invalid_argument on a hard invariant violation; returns soft
// warnings (the narrowband ratio guard) otherwise.
std::vector<std::string> validate(const ArrayConfig& cfg);

// Polar observation point. u = cos(theta) cos(psi), v = sin(theta) are derived
// at construction and cannot drift from the angles.
class ObservationPoint
{
public:
    ObservationPoint(double range_m, double theta_rad, double psi_rad);
    static ObservationPoint from_degrees(double range_m, double theta_deg, double psi_deg);

    double range() const { return range_; }
    double theta() const { return theta_; }
    double psi() const { return psi_; }
    double u() const { return u_; }
    double v() const { return v_; }

    Vec3 cartesian() const;

    friend bool operator==(const ObservationPoint&, const ObservationPoint&) = default;

private:
    double range_;
    double theta_;
    double psi_;
    double u_;
    double v_;
};

struct PathLengths
{
    double los;
    double nlos;
};

// Element index n in [-N, N]; anything else throws std::domain_error.
Vec3 element_position(const ArrayConfig& cfg, int n);
double element_frequency(const ArrayConfig& cfg, int n);
double frequency_offset(const ArrayConfig& cfg, int n); // f_n - f0

// Far-field approximations r - d_n u -/+ h0 v for the direct and the
// ground-reflected (image element) paths.
PathLengths path_lengths(const ArrayConfig& cfg, int n, const ObservationPoint& p);

} // namespace fdadm
