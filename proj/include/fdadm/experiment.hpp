// SPDX-License-Identifier: Apache-2.0
//
// Experiment configuration (JSON), parameter sweeps and CSV emission.

#pragma once

#include "fdadm/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fdadm
{

inline constexpr int kConfigSchemaVersion = 1;

// Config problems; the message starts with the offending field path.
class ConfigError : public std::runtime_error
{
public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path(path)
    {
    }
    std::string path;
};

enum class SweepVariable
{
    Range,       // meters
    Theta,       // degrees
    Psi,         // degrees
    SnrDb,       // dB
    EveLocation, // grid: r [m], grid2: theta [deg], psi fixed at Bob's
};

const char* to_string(SweepVariable v);

struct SweepSpec
{
    SweepVariable variable = SweepVariable::Theta;
    std::vector<double> grid;
    std::vector<double> grid2;
};

struct EveSpec
{
    std::size_t count = 4;
    double r_min = 50e3, r_max = 300e3;          // m
    double theta_min = 0.0, theta_max = 90.0;    // deg
    double psi_min = 0.0, psi_max = 180.0;       // deg
    std::uint64_t seed = 7;
};

struct ExperimentConfig
{
    ArrayConfig array;
    double ps = 1.0;
    double beta1 = 0.6;
    double snr_db = 10.0;
    NoiseCalibration calibration = NoiseCalibration::BobSnr;
    double bob_r = 150e3;       // m
    double bob_theta = 40.0;    // deg
    double bob_psi = 70.0;      // deg
    std::optional<double> observation_time; // s; defaults to r_B / c
    EveSpec eves;
    SweepSpec sweep;
    ChannelMode mode = ChannelMode::TwoRayMultipath;
    std::uint64_t symbols = 100000;
    std::uint64_t seed = 1;
    Regeneration regeneration = Regeneration::PerSymbol;
    SynthesisOptions synthesis;
    std::string output_dir = ".";
    std::vector<std::string> warnings;

    ObservationPoint bob() const { return ObservationPoint::from_degrees(bob_r, bob_theta, bob_psi); }
    double time() const { return observation_time.value_or(arrival_time(bob())); }
    TransmitConfig transmit() const { return transmit_at(snr_db); }
    TransmitConfig transmit_at(double snr) const
    {
        return TransmitConfig::make(ps, beta1, snr, calibration);
    }
};

std::vector<double> linspace(double start, double stop, std::size_t points);

ExperimentConfig default_config();
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Deterministic Eve placement from eves.seed; never coincides with Bob.
EveSet sample_eves(const ExperimentConfig& cfg);

// Observation point at one value of an r/theta/psi sweep, other coordinates at Bob's.
ObservationPoint sweep_point(const ExperimentConfig& cfg, double value);

struct BerRow
{
    double sweep_value;
    BerResult result;
};

std::vector<BerRow> run_ber_sweep(const ExperimentConfig& cfg);
void write_ber_csv(std::ostream& out, std::span<const BerRow> rows);

struct SecrecyRow
{
    double snr_db = 0.0;
    double r = 0.0;     // Eve-location sweeps only
    double theta = 0.0; // deg, Eve-location sweeps only
    double secrecy_rate = 0.0;
    std::size_t eve_count = 0;
    double beta1 = 0.0;
};

// snr_db sweeps emit one row per (grid value, V) with nested Eve sets
// V = 1..eves.count; eve_location sweeps emit one row per (r, theta) cell
// with a single Eve there.
std::vector<SecrecyRow> run_secrecy_sweep(const ExperimentConfig& cfg);
void write_secrecy_csv(std::ostream& out, SweepVariable variable, std::span<const SecrecyRow> rows);

// count synthesised draws toward Bob; each is verified before it is returned.
std::vector<WeightDraw> emit_weights(const ExperimentConfig& cfg, std::size_t count);

struct VerifyRow
{
    std::uint64_t draw_index;
    SynthesisReport report;
};
std::vector<VerifyRow> verify_draws(const ExperimentConfig& cfg, std::span<const WeightDraw> draws,
                                    double tol);
void write_verify_csv(std::ostream& out, std::span<const VerifyRow> rows);

// Width of the contiguous region around center where values < threshold,
// with linear interpolation at both crossings. 0 if values[center] is not
// below threshold.
double lobe_width(std::span<const double> grid, std::span<const double> values, double threshold,
                  std::size_t center);

// Number of 4-connected cells of a row-major rows x cols map holding values
// below threshold, grown from seed cell (row, col).
std::size_t region_area(std::span<const double> values, std::size_t rows, std::size_t cols,
                        double threshold, std::size_t seed_row, std::size_t seed_col);

} // namespace fdadm
