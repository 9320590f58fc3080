// SPDX-License-Identifier: Apache-2.0

#include "fdadm/geometry.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fdadm
{

ArrayConfig ArrayConfig::with_carrier(int half_count, double f0, double delta_f, double g,
                                      double height_wavelengths)
{
    ArrayConfig cfg;
    cfg.half_count = half_count;
    cfg.f0 = f0;
    cfg.delta_f = delta_f;
    cfg.g = g;
    cfg.spacing = kSpeedOfLight / (2.0 * f0);
    cfg.height = height_wavelengths * kSpeedOfLight / f0;
    return cfg;
}

std::vector<std::string> validate(const ArrayConfig& cfg)
{
    if (cfg.half_count < 1)
        throw std::invalid_argument("array: half_count N must be >= 1");
    if (!(cfg.f0 > 0.0) || !std::isfinite(cfg.f0))
        throw std::invalid_argument("array: f0 must be positive");
    if (!(cfg.spacing > 0.0) || !std::isfinite(cfg.spacing))
        throw std::invalid_argument("array: spacing must be positive");
    if (!(cfg.height > 0.0) || !std::isfinite(cfg.height))
        throw std::invalid_argument("array: height must be positive");
    if (!std::isfinite(cfg.delta_f) || !std::isfinite(cfg.g))
        throw std::invalid_argument("array: delta_f and g must be finite");

    std::vector<std::string> warnings;
    const double ratio = std::abs(cfg.delta_f) / cfg.f0;
    if (ratio >= cfg.offset_ratio_guard)
    {
        std::ostringstream os;
        os << "array: |delta_f|/f0 = " << ratio << " exceeds the narrowband guard "
           << cfg.offset_ratio_guard;
        warnings.push_back(os.str());
    }
    return warnings;
}

ObservationPoint::ObservationPoint(double range_m, double theta_rad, double psi_rad)
    : range_(range_m), theta_(theta_rad), psi_(psi_rad),
      u_(std::cos(theta_rad) * std::cos(psi_rad)), v_(std::sin(theta_rad))
{
    if (!(range_m > 0.0) || !std::isfinite(range_m))
        throw std::invalid_argument("observation point: range must be positive");
    if (!std::isfinite(theta_rad) || !std::isfinite(psi_rad))
        throw std::invalid_argument("observation point: angles must be finite");
}

ObservationPoint ObservationPoint::from_degrees(double range_m, double theta_deg, double psi_deg)
{
    return {range_m, deg_to_rad(theta_deg), deg_to_rad(psi_deg)};
}

Vec3 ObservationPoint::cartesian() const
{
    const double ct = std::cos(theta_);
    return {range_ * ct * std::cos(psi_), range_ * ct * std::sin(psi_), range_ * v_};
}

namespace
{

void check_index(const ArrayConfig& cfg, int n)
{
    if (n < -cfg.half_count || n > cfg.half_count)
    {
        std::ostringstream os;
        os << "element index " << n << " outside [-" << cfg.half_count << ", "
           << cfg.half_count << "]";
        throw std::domain_error(os.str());
    }
}

} // namespace

Vec3 element_position(const ArrayConfig& cfg, int n)
{
    check_index(cfg, n);
    return {n * cfg.spacing, 0.0, cfg.height};
}

double frequency_offset(const ArrayConfig& cfg, int n)
{
    check_index(cfg, n);
    // ln(|n|+1)^g taken as g * ln(|n|+1).
    return cfg.delta_f * cfg.g * std::log(static_cast<double>(std::abs(n)) + 1.0);
}

double element_frequency(const ArrayConfig& cfg, int n)
{
    return cfg.f0 + frequency_offset(cfg, n);
}

PathLengths path_lengths(const ArrayConfig& cfg, int n, const ObservationPoint& p)
{
    check_index(cfg, n);
    const double common = p.range() - n * cfg.spacing * p.u();
    const double lift = cfg.height * p.v();
    return {common - lift, common + lift};
}

} // namespace fdadm
