// SPDX-License-Identifier: Apache-2.0

#include "fdadm/experiment.hpp"

#include "fdadm/csv.hpp"
#include "fdadm/parallel.hpp"
#include "fdadm/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace fdadm
{

using nlohmann::json;

const char* to_string(SweepVariable v)
{
    switch (v)
    {
    case SweepVariable::Range:
        return "r";
    case SweepVariable::Theta:
        return "theta";
    case SweepVariable::Psi:
        return "psi";
    case SweepVariable::SnrDb:
        return "snr_db";
    case SweepVariable::EveLocation:
        return "eve_location";
    }
    return "unknown";
}

std::vector<double> linspace(double start, double stop, std::size_t points)
{
    if (points == 0)
        return {};
    if (points == 1)
        return {start};
    std::vector<double> out(points);
    const double span = stop - start;
    for (std::size_t k = 0; k < points; ++k)
        out[k] = start + span * static_cast<double>(k) / static_cast<double>(points - 1);
    out.back() = stop;
    return out;
}

ExperimentConfig default_config()
{
    ExperimentConfig cfg;
    cfg.array = ArrayConfig::with_carrier(3, 10e9, 2e3, 1.0, 4.25);
    cfg.sweep.variable = SweepVariable::Theta;
    cfg.sweep.grid = linspace(0.0, 90.0, 181);
    return cfg;
}

namespace
{

// Walks one JSON object, tracking which keys were consumed so that unknown
// keys can be reported with their full path.
class ObjectReader
{
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw ConfigError(path_, "expected an object");
    }

    bool has(const char* key) const { return obj_.contains(key); }

    std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* get(const char* key)
    {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const char* key, double& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number())
                throw ConfigError(child(key), "expected a number");
            out = v->get<double>();
            if (!std::isfinite(out))
                throw ConfigError(child(key), "must be finite");
        }
    }

    template <typename Int>
    void integer(const char* key, Int& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_number_integer())
                throw ConfigError(child(key), "expected an integer");
            if constexpr (std::is_unsigned_v<Int>)
            {
                if (v->is_number_unsigned())
                    out = static_cast<Int>(v->get<std::uint64_t>());
                else if (v->get<std::int64_t>() < 0)
                    throw ConfigError(child(key), "must be non-negative");
                else
                    out = static_cast<Int>(v->get<std::int64_t>());
            }
            else
            {
                out = static_cast<Int>(v->get<std::int64_t>());
            }
        }
    }

    void string(const char* key, std::string& out)
    {
        if (const json* v = get(key))
        {
            if (!v->is_string())
                throw ConfigError(child(key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void range(const char* key, double& lo, double& hi)
    {
        if (const json* v = get(key))
        {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
                throw ConfigError(child(key), "expected [min, max]");
            lo = (*v)[0].get<double>();
            hi = (*v)[1].get<double>();
            if (!(lo <= hi))
                throw ConfigError(child(key), "min must not exceed max");
        }
    }

    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(child(it.key().c_str()), "unknown field");
    }

private:
    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<double> read_grid(const json& v, const std::string& path)
{
    std::vector<double> grid;
    if (v.is_array())
    {
        for (std::size_t i = 0; i < v.size(); ++i)
        {
            if (!v[i].is_number())
                throw ConfigError(path + "[" + std::to_string(i) + "]", "expected a number");
            grid.push_back(v[i].get<double>());
        }
    }
    else if (v.is_object())
    {
        ObjectReader r(v, path);
        double start = 0.0, stop = 0.0;
        std::size_t points = 0;
        if (!r.has("start") || !r.has("stop") || !r.has("points"))
            throw ConfigError(path, "range grid needs start, stop and points");
        r.number("start", start);
        r.number("stop", stop);
        r.integer("points", points);
        r.finish();
        grid = linspace(start, stop, points);
    }
    else
    {
        throw ConfigError(path, "expected an array or {start, stop, points}");
    }

    if (grid.empty())
        throw ConfigError(path, "grid must not be empty");
    bool increasing = true, decreasing = true;
    for (std::size_t i = 1; i < grid.size(); ++i)
    {
        increasing = increasing && grid[i] > grid[i - 1];
        decreasing = decreasing && grid[i] < grid[i - 1];
    }
    if (!increasing && !decreasing)
        throw ConfigError(path, "grid must be strictly monotone");
    return grid;
}

SweepVariable sweep_variable_from_string(const std::string& s, const std::string& path)
{
    for (auto v : {SweepVariable::Range, SweepVariable::Theta, SweepVariable::Psi,
                   SweepVariable::SnrDb, SweepVariable::EveLocation})
        if (s == to_string(v))
            return v;
    throw ConfigError(path, "unknown sweep variable '" + s + "'");
}

void read_array(ObjectReader& root, ExperimentConfig& cfg)
{
    const json* node = root.get("array");
    if (!node)
        return;
    ObjectReader r(*node, "array");
    auto& a = cfg.array;
    r.integer("N", a.half_count);
    r.number("f0_hz", a.f0);
    if (!(a.f0 > 0.0))
        throw ConfigError("array.f0_hz", "must be positive");
    r.number("delta_f_hz", a.delta_f);
    r.number("g", a.g);

    a.spacing = kSpeedOfLight / (2.0 * a.f0);
    r.number("spacing_m", a.spacing);

    double height_wl = 4.25;
    r.number("height_wavelengths", height_wl);
    a.height = height_wl * kSpeedOfLight / a.f0;
    if (r.has("height_m") && r.has("height_wavelengths"))
        throw ConfigError("array.height_m", "give either height_m or height_wavelengths");
    r.number("height_m", a.height);
    r.number("offset_ratio_guard", a.offset_ratio_guard);
    r.finish();
}

void read_transmit(ObjectReader& root, ExperimentConfig& cfg)
{
    const json* node = root.get("transmit");
    if (!node)
        return;
    ObjectReader r(*node, "transmit");
    r.number("ps", cfg.ps);
    r.number("beta1", cfg.beta1);
    if (!(cfg.beta1 > 0.0 && cfg.beta1 <= 1.0))
        throw ConfigError("transmit.beta1", "must lie in (0, 1]");
    if (r.has("beta2"))
    {
        double beta2 = 0.0;
        r.number("beta2", beta2);
        if (!r.has("beta1"))
        {
            if (!(beta2 >= 0.0 && beta2 < 1.0))
                throw ConfigError("transmit.beta2", "must lie in [0, 1)");
            cfg.beta1 = std::sqrt(1.0 - beta2 * beta2);
        }
        else if (std::abs(cfg.beta1 * cfg.beta1 + beta2 * beta2 - 1.0) > 1e-12)
        {
            throw ConfigError("transmit.beta2", "beta1^2 + beta2^2 must equal 1");
        }
    }
    r.number("snr_db", cfg.snr_db);
    std::string cal;
    r.string("noise_calibration", cal);
    if (cal == "total-power")
        cfg.calibration = NoiseCalibration::TotalPower;
    else if (!cal.empty() && cal != "bob-snr")
        throw ConfigError("transmit.noise_calibration", "expected 'bob-snr' or 'total-power'");
    r.finish();
    if (!(cfg.ps > 0.0))
        throw ConfigError("transmit.ps", "must be positive");
}

void read_bob(ObjectReader& root, ExperimentConfig& cfg)
{
    const json* node = root.get("bob");
    if (!node)
        return;
    ObjectReader r(*node, "bob");
    r.number("r_m", cfg.bob_r);
    r.number("theta_deg", cfg.bob_theta);
    r.number("psi_deg", cfg.bob_psi);
    r.finish();
    if (!(cfg.bob_r > 0.0))
        throw ConfigError("bob.r_m", "must be positive");
}

void read_eves(ObjectReader& root, ExperimentConfig& cfg)
{
    const json* node = root.get("eves");
    if (!node)
        return;
    ObjectReader r(*node, "eves");
    auto& e = cfg.eves;
    r.integer("count", e.count);
    r.range("r_range_m", e.r_min, e.r_max);
    r.range("theta_range_deg", e.theta_min, e.theta_max);
    r.range("psi_range_deg", e.psi_min, e.psi_max);
    r.integer("seed", e.seed);
    r.finish();
    if (e.count == 0)
        throw ConfigError("eves.count", "must be >= 1");
    if (!(e.r_min > 0.0))
        throw ConfigError("eves.r_range_m", "ranges must be positive");
}

void read_sweep(ObjectReader& root, ExperimentConfig& cfg)
{
    const json* node = root.get("sweep");
    if (!node)
        return;
    ObjectReader r(*node, "sweep");
    std::string var;
    r.string("variable", var);
    if (var.empty())
        throw ConfigError("sweep.variable", "required");
    cfg.sweep.variable = sweep_variable_from_string(var, "sweep.variable");
    const json* grid = r.get("grid");
    if (!grid)
        throw ConfigError("sweep.grid", "required");
    cfg.sweep.grid = read_grid(*grid, "sweep.grid");
    cfg.sweep.grid2.clear();
    if (const json* grid2 = r.get("grid2"))
    {
        if (cfg.sweep.variable != SweepVariable::EveLocation)
            throw ConfigError("sweep.grid2", "only used by the eve_location sweep");
        cfg.sweep.grid2 = read_grid(*grid2, "sweep.grid2");
    }
    else if (cfg.sweep.variable == SweepVariable::EveLocation)
    {
        throw ConfigError("sweep.grid2", "eve_location needs a theta grid");
    }
    r.finish();
    if (cfg.sweep.variable == SweepVariable::Range || cfg.sweep.variable == SweepVariable::EveLocation)
        for (double x : cfg.sweep.grid)
            if (!(x > 0.0))
                throw ConfigError("sweep.grid", "ranges must be positive");
}

void read_weights(ObjectReader& root, ExperimentConfig& cfg)
{
    const json* node = root.get("weights");
    if (!node)
        return;
    ObjectReader r(*node, "weights");
    std::string regen, modulus;
    r.string("regeneration", regen);
    if (regen == "static")
        cfg.regeneration = Regeneration::Static;
    else if (!regen.empty() && regen != "per-symbol")
        throw ConfigError("weights.regeneration", "expected 'per-symbol' or 'static'");
    r.string("an_modulus", modulus);
    if (modulus == "bounded")
        cfg.synthesis.an_modulus = AnModulus::Bounded;
    else if (!modulus.empty() && modulus != "unit")
        throw ConfigError("weights.an_modulus", "expected 'unit' or 'bounded'");
    r.number("b_max", cfg.synthesis.b_max);
    r.number("tol", cfg.synthesis.tol);
    r.integer("max_iterations", cfg.synthesis.max_iterations);
    r.integer("max_attempts", cfg.synthesis.max_attempts);
    r.finish();
    if (!(cfg.synthesis.tol > 0.0))
        throw ConfigError("weights.tol", "must be positive");
    if (!(cfg.synthesis.b_max > 0.0))
        throw ConfigError("weights.b_max", "must be positive");
    if (cfg.synthesis.max_iterations < 1 || cfg.synthesis.max_attempts < 1)
        throw ConfigError("weights", "iteration and attempt limits must be >= 1");
}

} // namespace

ExperimentConfig parse_config(std::string_view json_text)
{
    json doc;
    try
    {
        doc = json::parse(json_text);
    }
    catch (const json::parse_error& e)
    {
        throw ConfigError("$", std::string("parse error: ") + e.what());
    }

    ExperimentConfig cfg = default_config();
    ObjectReader root(doc, "");

    if (const json* v = root.get("schema_version"))
    {
        if (!v->is_number_integer() || v->get<int>() != kConfigSchemaVersion)
            throw ConfigError("schema_version",
                              "unsupported, expected " + std::to_string(kConfigSchemaVersion));
    }
    read_array(root, cfg);
    read_transmit(root, cfg);
    read_bob(root, cfg);
    if (const json* v = root.get("observation_time_s"))
    {
        if (!v->is_number())
            throw ConfigError("observation_time_s", "expected a number");
        cfg.observation_time = v->get<double>();
    }
    read_eves(root, cfg);
    read_sweep(root, cfg);
    std::string mode;
    root.string("mode", mode);
    if (!mode.empty())
    {
        try
        {
            cfg.mode = channel_mode_from_string(mode);
        }
        catch (const std::invalid_argument& e)
        {
            throw ConfigError("mode", e.what());
        }
    }
    if (const json* mc = root.get("monte_carlo"))
    {
        ObjectReader r(*mc, "monte_carlo");
        r.integer("symbols", cfg.symbols);
        r.integer("seed", cfg.seed);
        r.finish();
        if (cfg.symbols == 0)
            throw ConfigError("monte_carlo.symbols", "must be >= 1");
    }
    read_weights(root, cfg);
    if (const json* out = root.get("output"))
    {
        ObjectReader r(*out, "output");
        r.string("directory", cfg.output_dir);
        r.finish();
    }
    root.finish();

    try
    {
        cfg.warnings = validate(cfg.array);
        validate(cfg.transmit());
        (void)cfg.bob();
    }
    catch (const std::invalid_argument& e)
    {
        throw ConfigError("$", e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError(path.string(), "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

EveSet sample_eves(const ExperimentConfig& cfg)
{
    const auto bob = cfg.bob();
    EveSet set;
    Rng rng(derive_seed(cfg.eves.seed, Stream::Eves, 0));
    std::uniform_real_distribution<double> ur(cfg.eves.r_min, cfg.eves.r_max);
    std::uniform_real_distribution<double> ut(cfg.eves.theta_min, cfg.eves.theta_max);
    std::uniform_real_distribution<double> up(cfg.eves.psi_min, cfg.eves.psi_max);
    while (set.points.size() < cfg.eves.count)
    {
        const double r = ur(rng);
        const double th = ut(rng);
        const double ps = up(rng);
        auto p = ObservationPoint::from_degrees(r, th, ps);
        if (!(p == bob))
            set.points.push_back(p);
    }
    return set;
}

ObservationPoint sweep_point(const ExperimentConfig& cfg, double value)
{
    switch (cfg.sweep.variable)
    {
    case SweepVariable::Range:
        return ObservationPoint::from_degrees(value, cfg.bob_theta, cfg.bob_psi);
    case SweepVariable::Theta:
        return ObservationPoint::from_degrees(cfg.bob_r, value, cfg.bob_psi);
    case SweepVariable::Psi:
        return ObservationPoint::from_degrees(cfg.bob_r, cfg.bob_theta, value);
    default:
        throw ConfigError("sweep.variable", "expected r, theta or psi");
    }
}

namespace
{

WeightSchedule make_schedule(const ExperimentConfig& cfg)
{
    return WeightSchedule::generate(cfg.array, cfg.bob(), cfg.time(), cfg.mode, cfg.symbols,
                                    cfg.seed, cfg.synthesis, cfg.regeneration);
}

} // namespace

std::vector<BerRow> run_ber_sweep(const ExperimentConfig& cfg)
{
    const auto var = cfg.sweep.variable;
    if (var != SweepVariable::Range && var != SweepVariable::Theta && var != SweepVariable::Psi)
        throw ConfigError("sweep.variable", "ber-sweep needs r, theta or psi");

    const auto tx = cfg.transmit();
    const double t = cfg.time();
    const auto schedule = make_schedule(cfg);

    std::vector<std::optional<BerRow>> slots(cfg.sweep.grid.size());
    parallel_for(slots.size(), [&](std::size_t i) {
        const double x = cfg.sweep.grid[i];
        slots[i] = BerRow{x, measure_ber(cfg.array, tx, sweep_point(cfg, x), t, cfg.mode, schedule,
                                         derive_seed(cfg.seed, Stream::Symbols, i))};
    });
    std::vector<BerRow> rows;
    rows.reserve(slots.size());
    for (auto& s : slots)
        rows.push_back(std::move(*s));
    return rows;
}

void write_ber_csv(std::ostream& out, std::span<const BerRow> rows)
{
    out << "sweep_value,ber,stderr,trials,mode\n";
    for (const auto& row : rows)
        out << csv::format_number(row.sweep_value) << ',' << csv::format_number(row.result.ber) << ','
            << csv::format_number(row.result.std_error) << ',' << row.result.trials << ','
            << to_string(row.result.mode) << '\n';
}

std::vector<SecrecyRow> run_secrecy_sweep(const ExperimentConfig& cfg)
{
    const double t = cfg.time();
    const auto schedule = make_schedule(cfg);

    std::vector<SecrecyRow> rows;
    if (cfg.sweep.variable == SweepVariable::SnrDb)
    {
        const auto eves = sample_eves(cfg);
        std::vector<std::vector<cd>> coeffs;
        for (const auto& e : eves.points)
            coeffs.push_back(channel_coefficients(cfg.array, e, t, cfg.mode));

        std::vector<std::vector<double>> per_point(cfg.sweep.grid.size());
        parallel_for(per_point.size(), [&](std::size_t i) {
            per_point[i] = nested_secrecy_rates(cfg.transmit_at(cfg.sweep.grid[i]), coeffs, schedule);
        });
        for (std::size_t i = 0; i < per_point.size(); ++i)
            for (std::size_t v = 0; v < per_point[i].size(); ++v)
                rows.push_back({cfg.sweep.grid[i], 0.0, 0.0, per_point[i][v], v + 1, cfg.beta1});
        return rows;
    }
    if (cfg.sweep.variable == SweepVariable::EveLocation)
    {
        const auto tx = cfg.transmit();
        const auto& rs = cfg.sweep.grid;
        const auto& ths = cfg.sweep.grid2;
        rows.resize(rs.size() * ths.size());
        parallel_for(rows.size(), [&](std::size_t k) {
            const double r = rs[k / ths.size()];
            const double th = ths[k % ths.size()];
            const auto eve = ObservationPoint::from_degrees(r, th, cfg.bob_psi);
            const std::vector<std::vector<cd>> coeffs{
                channel_coefficients(cfg.array, eve, t, cfg.mode)};
            rows[k] = {cfg.snr_db, r, th, nested_secrecy_rates(tx, coeffs, schedule).front(), 1,
                       cfg.beta1};
        });
        return rows;
    }
    throw ConfigError("sweep.variable", "secrecy-sweep needs snr_db or eve_location");
}

void write_secrecy_csv(std::ostream& out, SweepVariable variable, std::span<const SecrecyRow> rows)
{
    if (variable == SweepVariable::EveLocation)
    {
        out << "eve_r_m,eve_theta_deg,secrecy_rate,V,beta1\n";
        for (const auto& row : rows)
            out << csv::format_number(row.r) << ',' << csv::format_number(row.theta) << ','
                << csv::format_number(row.secrecy_rate) << ',' << row.eve_count << ','
                << csv::format_number(row.beta1) << '\n';
        return;
    }
    out << "snr_db,secrecy_rate,V,beta1\n";
    for (const auto& row : rows)
        out << csv::format_number(row.snr_db) << ',' << csv::format_number(row.secrecy_rate) << ','
            << row.eve_count << ',' << csv::format_number(row.beta1) << '\n';
}

std::vector<WeightDraw> emit_weights(const ExperimentConfig& cfg, std::size_t count)
{
    if (count == 0)
        throw std::invalid_argument("weights: count must be >= 1");
    const auto bob = cfg.bob();
    const double t = cfg.time();
    const auto c = channel_coefficients(cfg.array, bob, t, cfg.mode);

    std::vector<WeightDraw> draws(count);
    parallel_for(count, [&](std::size_t k) {
        auto res = synthesize_weights(c, derive_seed(cfg.seed, Stream::Weights, k), cfg.synthesis);
        const auto rep = verify_weights(res.weights, cfg.array, bob, t, cfg.mode, cfg.synthesis.tol);
        if (!rep.passed)
            throw SynthesisError("weights: draw " + std::to_string(k) + " failed verification",
                                 rep.kappa_residual, rep.eta_residual);
        draws[k] = {k, std::move(res.weights)};
    });
    return draws;
}

std::vector<VerifyRow> verify_draws(const ExperimentConfig& cfg, std::span<const WeightDraw> draws,
                                    double tol)
{
    const auto bob = cfg.bob();
    std::vector<VerifyRow> rows;
    for (const auto& d : draws)
    {
        if (d.weights.size() != static_cast<std::size_t>(cfg.array.element_count()))
            throw ConfigError("array.N", "weights file has " + std::to_string(d.weights.size()) +
                                             " elements, config expects " +
                                             std::to_string(cfg.array.element_count()));
        rows.push_back({d.draw_index, verify_weights(d.weights, cfg.array, bob, cfg.time(), cfg.mode, tol)});
    }
    return rows;
}

void write_verify_csv(std::ostream& out, std::span<const VerifyRow> rows)
{
    out << "draw_index,kappa_residual,eta_residual,passed\n";
    for (const auto& row : rows)
        out << row.draw_index << ',' << csv::format_number(row.report.kappa_residual) << ','
            << csv::format_number(row.report.eta_residual) << ',' << (row.report.passed ? 1 : 0)
            << '\n';
}

double lobe_width(std::span<const double> grid, std::span<const double> values, double threshold,
                  std::size_t center)
{
    if (grid.size() != values.size() || center >= grid.size())
        throw std::invalid_argument("lobe_width: size mismatch");
    if (!(values[center] < threshold))
        return 0.0;

    std::size_t lo = center;
    while (lo > 0 && values[lo - 1] < threshold)
        --lo;
    std::size_t hi = center;
    while (hi + 1 < values.size() && values[hi + 1] < threshold)
        ++hi;

    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double f = (threshold - values[inside]) / (values[outside] - values[inside]);
        return grid[inside] + f * (grid[outside] - grid[inside]);
    };
    const double left = lo > 0 ? crossing(lo, lo - 1) : grid[lo];
    const double right = hi + 1 < grid.size() ? crossing(hi, hi + 1) : grid[hi];
    return std::abs(right - left);
}

std::size_t region_area(std::span<const double> values, std::size_t rows, std::size_t cols,
                        double threshold, std::size_t seed_row, std::size_t seed_col)
{
    if (values.size() != rows * cols || seed_row >= rows || seed_col >= cols)
        throw std::invalid_argument("region_area: size mismatch");
    std::vector<char> visited(values.size(), 0);
    std::vector<std::size_t> stack;
    const std::size_t seed = seed_row * cols + seed_col;
    if (!(values[seed] < threshold))
        return 0;
    stack.push_back(seed);
    visited[seed] = 1;
    std::size_t area = 0;
    while (!stack.empty())
    {
        const std::size_t k = stack.back();
        stack.pop_back();
        ++area;
        const std::size_t r = k / cols, c = k % cols;
        auto visit = [&](std::size_t rr, std::size_t cc) {
            const std::size_t j = rr * cols + cc;
            if (!visited[j] && values[j] < threshold)
            {
                visited[j] = 1;
                stack.push_back(j);
            }
        };
        if (r > 0)
            visit(r - 1, c);
        if (r + 1 < rows)
            visit(r + 1, c);
        if (c > 0)
            visit(r, c - 1);
        if (c + 1 < cols)
            visit(r, c + 1);
    }
    return area;
}

} // namespace fdadm
