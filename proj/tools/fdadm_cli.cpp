// SPDX-License-Identifier: Apache-2.0
//
// fdadm: BER / secrecy-rate sweeps and weight synthesis for the two-ray FDA
// directional-modulation transmitter.

#include "fdadm/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace
{

enum ExitCode
{
    kOk = 0,
    kConfigError = 2,
    kSynthesisError = 3,
    kIoError = 4,
};

struct IoError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct CommonOptions
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string mode;
};

void add_common(CLI::App* cmd, CommonOptions& opts)
{
    cmd->add_option("--config", opts.config, "Experiment config (JSON)")->envname("FDADM_CONFIG");
    cmd->add_option("--seed", opts.seed, "Master seed (overrides monte_carlo.seed)")
        ->envname("FDADM_SEED");
    cmd->add_option("--out", opts.out, "Output directory (overrides output.directory)")
        ->envname("FDADM_OUT");
    cmd->add_option("--mode", opts.mode, "Channel mode")
        ->check(CLI::IsMember({"two-ray", "single-path"}))
        ->envname("FDADM_MODE");
}

fdadm::ExperimentConfig resolve(const CommonOptions& opts)
{
    auto cfg = opts.config.empty() ? fdadm::default_config() : fdadm::load_config(opts.config);
    if (opts.seed)
        cfg.seed = *opts.seed;
    if (!opts.out.empty())
        cfg.output_dir = opts.out;
    if (!opts.mode.empty())
        cfg.mode = fdadm::channel_mode_from_string(opts.mode);
    for (const auto& w : cfg.warnings)
        std::cerr << "warning: " << w << '\n';
    return cfg;
}

std::ofstream open_output(const fdadm::ExperimentConfig& cfg, const std::string& name)
{
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    const auto path = std::filesystem::path(cfg.output_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot write " + path.string());
    std::cout << path.string() << '\n';
    return out;
}

void finish(std::ofstream& out)
{
    out.flush();
    if (!out)
        throw IoError("write failed");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-ray FDA directional-modulation simulator"};
    app.require_subcommand(1);

    CommonOptions ber_opts, sec_opts, w_opts, v_opts;
    auto* ber = app.add_subcommand("ber-sweep", "Monte Carlo BER over an r, theta or psi grid");
    add_common(ber, ber_opts);

    auto* sec = app.add_subcommand("secrecy-sweep", "Secrecy rate over SNR or Eve location");
    add_common(sec, sec_opts);

    auto* weights = app.add_subcommand("weights", "Synthesise (a, b) weight pairs toward Bob");
    add_common(weights, w_opts);
    std::size_t count = 1;
    weights->add_option("--count", count, "Number of draws")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Check a weights CSV against Bob's constraints");
    add_common(verify, v_opts);
    std::string weights_path;
    std::optional<double> tol;
    verify->add_option("--weights", weights_path, "Weights CSV")->required();
    verify->add_option("--tol", tol, "Residual tolerance (default weights.tol)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*ber)
        {
            const auto cfg = resolve(ber_opts);
            const auto rows = fdadm::run_ber_sweep(cfg);
            auto out = open_output(cfg, std::string("ber_") + fdadm::to_string(cfg.sweep.variable) +
                                            "_" + fdadm::to_string(cfg.mode) + ".csv");
            fdadm::write_ber_csv(out, rows);
            finish(out);
        }
        else if (*sec)
        {
            const auto cfg = resolve(sec_opts);
            const auto rows = fdadm::run_secrecy_sweep(cfg);
            auto out = open_output(cfg, std::string("secrecy_") +
                                            fdadm::to_string(cfg.sweep.variable) + "_" +
                                            fdadm::to_string(cfg.mode) + ".csv");
            fdadm::write_secrecy_csv(out, cfg.sweep.variable, rows);
            finish(out);
        }
        else if (*weights)
        {
            const auto cfg = resolve(w_opts);
            const auto draws = fdadm::emit_weights(cfg, count);
            auto out = open_output(cfg, "weights.csv");
            fdadm::write_weights_csv(out, draws);
            finish(out);
        }
        else if (*verify)
        {
            const auto cfg = resolve(v_opts);
            std::ifstream in(weights_path, std::ios::binary);
            if (!in)
                throw IoError("cannot open " + weights_path);
            std::vector<fdadm::WeightDraw> draws;
            try
            {
                draws = fdadm::read_weights_csv(in);
            }
            catch (const std::invalid_argument& e)
            {
                throw fdadm::ConfigError(weights_path, e.what());
            }
            const auto rows = fdadm::verify_draws(cfg, draws, tol.value_or(cfg.synthesis.tol));
            auto out = open_output(cfg, "verify.csv");
            fdadm::write_verify_csv(out, rows);
            finish(out);
            for (const auto& r : rows)
                if (!r.report.passed)
                {
                    std::cerr << "draw " << r.draw_index << " fails: |kappa-1| = "
                              << r.report.kappa_residual << ", |eta| = " << r.report.eta_residual
                              << '\n';
                    return kSynthesisError;
                }
        }
    }
    catch (const fdadm::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    catch (const fdadm::SynthesisError& e)
    {
        std::cerr << "synthesis error: " << e.what() << '\n';
        return kSynthesisError;
    }
    catch (const fdadm::InfeasibleError& e)
    {
        std::cerr << "synthesis error: " << e.what() << '\n';
        return kSynthesisError;
    }
    catch (const IoError& e)
    {
        std::cerr << "io error: " << e.what() << '\n';
        return kIoError;
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    }
    return kOk;
}
