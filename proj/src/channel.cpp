// SPDX-License-Identifier: Apache-2.0

#include "fdadm/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fdadm
{

const char* to_string(ChannelMode mode)
{
    switch (mode)
    {
    case ChannelMode::TwoRayMultipath:
        return "two-ray";
    case ChannelMode::SinglePathLoS:
        return "single-path";
    }
    return "unknown";
}

ChannelMode channel_mode_from_string(const std::string& name)
{
    if (name == "two-ray")
        return ChannelMode::TwoRayMultipath;
    if (name == "single-path")
        return ChannelMode::SinglePathLoS;
    throw std::invalid_argument("unknown channel mode '" + name + "'");
}

namespace
{

cd unit_phasor(double phase) { return {std::cos(phase), std::sin(phase)}; }

void check_lengths(const ArrayConfig& cfg, const WeightPair& w, std::size_t feed_size)
{
    const auto n = static_cast<std::size_t>(cfg.element_count());
    if (w.a.size() != n || feed_size != n)
        throw std::domain_error("weights/feed length must equal the element count 2N+1");
}

} // namespace

SteeringComponents steering_components(const ArrayConfig& cfg, const ObservationPoint& p,
                                        double t)
{
    const int count = cfg.element_count();
    SteeringComponents sc;
    sc.mu.resize(count);
    sc.eps.resize(count);
    sc.rho.resize(count);
    sc.lift_phase.resize(count);

    for (int n = -cfg.half_count; n <= cfg.half_count; ++n)
    {
        const auto i = static_cast<std::size_t>(n + cfg.half_count);
        const double along = n * cfg.spacing * p.u();
        const double offset = frequency_offset(cfg, n);
        const double fn = cfg.f0 + offset;

        // Delay (r - d_n u)/c split so t - r/c does not cancel catastrophically.
        const double rel_delay = (t - p.range() / kSpeedOfLight) + along / kSpeedOfLight;

        sc.mu[i] = unit_phasor(-2.0 * kPi * cfg.f0 * (p.range() - along) / kSpeedOfLight);
        sc.eps[i] = unit_phasor(2.0 * kPi * offset * rel_delay);
        sc.lift_phase[i] = 2.0 * kPi * fn * cfg.height * p.v() / kSpeedOfLight;
        sc.rho[i] = cd(0.0, 2.0 * std::sin(sc.lift_phase[i]));
    }
    return sc;
}

std::vector<cd> channel_coefficients(const ArrayConfig& cfg, const ObservationPoint& p, double t,
                                     ChannelMode mode)
{
    const auto sc = steering_components(cfg, p, t);
    std::vector<cd> c(sc.size());
    for (std::size_t i = 0; i < c.size(); ++i)
    {
        c[i] = sc.mu[i] * sc.eps[i];
        if (mode == ChannelMode::TwoRayMultipath)
            c[i] *= sc.rho[i];
    }
    return c;
}

cd los_field(const ArrayConfig& cfg, const ObservationPoint& p, double t, const WeightPair& w,
             std::span<const cd> feed)
{
    check_lengths(cfg, w, feed.size());
    const auto sc = steering_components(cfg, p, t);
    cd sum{};
    for (std::size_t i = 0; i < sc.size(); ++i)
        sum += w.a[i] * feed[i] * sc.mu[i] * sc.eps[i] * unit_phasor(sc.lift_phase[i]);
    return sum;
}

cd nlos_field(const ArrayConfig& cfg, const ObservationPoint& p, double t, const WeightPair& w,
              std::span<const cd> feed)
{
    check_lengths(cfg, w, feed.size());
    const auto sc = steering_components(cfg, p, t);
    cd sum{};
    for (std::size_t i = 0; i < sc.size(); ++i)
        sum += w.a[i] * feed[i] * sc.mu[i] * sc.eps[i] * unit_phasor(-sc.lift_phase[i]);
    return kGroundReflection * sum;
}

cd total_field(const ArrayConfig& cfg, const ObservationPoint& p, double t, const WeightPair& w,
               std::span<const cd> feed, ChannelMode mode)
{
    check_lengths(cfg, w, feed.size());
    const auto c = channel_coefficients(cfg, p, t, mode);
    cd sum{};
    for (std::size_t i = 0; i < c.size(); ++i)
        sum += w.a[i] * feed[i] * c[i];
    return sum;
}

ChannelResponse channel_response(std::span<const cd> coefficients, const WeightPair& w)
{
    if (w.a.size() != coefficients.size() || w.b.size() != coefficients.size())
        throw std::domain_error("weights length must equal the element count 2N+1");
    ChannelResponse out{};
    for (std::size_t i = 0; i < coefficients.size(); ++i)
    {
        const cd ac = w.a[i] * coefficients[i];
        out.kappa += ac;
        out.eta += ac * w.b[i];
    }
    return out;
}

ChannelResponse channel_response(const ArrayConfig& cfg, const ObservationPoint& p, double t,
                                 const WeightPair& w, ChannelMode mode)
{
    return channel_response(channel_coefficients(cfg, p, t, mode), w);
}

} // namespace fdadm
