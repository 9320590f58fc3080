// SPDX-License-Identifier: Apache-2.0

#include "fdadm/weights.hpp"

#include "fdadm/csv.hpp"
#include "fdadm/random.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace fdadm
{

namespace
{

constexpr double kTinyModulus = 1e-300;

// Once within tolerance, keep iterating toward this fraction of it so that the
// kappa and eta errors do not add up to more than tol at the receiver.
constexpr double kPolishFactor = 1e-3;

bool converged(double residual, double previous, int it, const SynthesisOptions& opts)
{
    if (it >= opts.max_iterations || residual <= opts.tol * kPolishFactor)
        return true;
    return residual <= opts.tol && residual >= previous;
}

cd random_phasor(Rng& rng)
{
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    const double p = phase(rng);
    return {std::cos(p), std::sin(p)};
}

cd weighted_sum(std::span<const cd> x, std::span<const cd> c)
{
    cd s{};
    for (std::size_t i = 0; i < c.size(); ++i)
        s += x[i] * c[i];
    return s;
}

// kappa = sum a_n c_n = 1 with |a_n| = 1 is solvable iff 1 lies in the
// annulus [max(0, 2 max|c| - sum|c|), sum|c|]; eta = 0 with unit |b_n| iff
// 2 max|c| <= sum|c|.
void check_feasible(std::span<const cd> c, const SynthesisOptions& opts)
{
    double total = 0.0;
    double largest = 0.0;
    for (const cd& ci : c)
    {
        total += std::abs(ci);
        largest = std::max(largest, std::abs(ci));
    }
    if (total <= std::numeric_limits<double>::min())
        throw InfeasibleError("synthesis: all receiver coefficients vanish, kappa = 1 unreachable");
    const double inner = std::max(0.0, 2.0 * largest - total);
    if (1.0 > total + opts.tol || 1.0 < inner - opts.tol)
    {
        std::ostringstream os;
        os << "synthesis: kappa = 1 outside the reachable annulus [" << inner << ", " << total
           << "]";
        throw InfeasibleError(os.str());
    }
    if (opts.an_modulus == AnModulus::Unit && 2.0 * largest > total + opts.tol)
        throw InfeasibleError("synthesis: eta = 0 unreachable with unit-modulus AN weights");
}

// Alternating projection onto {sum a c = 1} and the unit circle per entry.
int solve_excitation(std::span<const cd> c, std::vector<cd>& a, Rng& rng,
                     const SynthesisOptions& opts, double& residual)
{
    double energy = 0.0;
    for (const cd& ci : c)
        energy += std::norm(ci);

    double previous = std::numeric_limits<double>::infinity();
    int it = 0;
    for (;; ++it)
    {
        const cd s = weighted_sum(a, c);
        residual = std::abs(s - 1.0);
        if (converged(residual, previous, it, opts))
            break;
        previous = residual;
        const cd step = (1.0 - s) / energy;
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            a[i] += std::conj(c[i]) * step;
            const double m = std::abs(a[i]);
            a[i] = m > kTinyModulus ? a[i] / m : random_phasor(rng);
        }
    }
    return it;
}

// Alternating projection onto {sum b w = 0} and the modulus constraint.
int solve_noise_weights(std::span<const cd> w, std::vector<cd>& b, Rng& rng,
                        const SynthesisOptions& opts, double& residual)
{
    double energy = 0.0;
    for (const cd& wi : w)
        energy += std::norm(wi);

    double previous = std::numeric_limits<double>::infinity();
    int it = 0;
    for (;; ++it)
    {
        const cd e = weighted_sum(b, w);
        residual = std::abs(e);
        if (converged(residual, previous, it, opts))
            break;
        previous = residual;
        const cd step = e / energy;
        for (std::size_t i = 0; i < b.size(); ++i)
        {
            b[i] -= std::conj(w[i]) * step;
            const double m = std::abs(b[i]);
            if (opts.an_modulus == AnModulus::Unit)
                b[i] = m > kTinyModulus ? b[i] / m : random_phasor(rng);
            else if (m > opts.b_max)
                b[i] *= opts.b_max / m;
        }
    }
    return it;
}

} // namespace

SynthesisResult synthesize_weights(std::span<const cd> bob_coefficients, std::uint64_t seed,
                                   const SynthesisOptions& opts)
{
    if (bob_coefficients.size() < 3)
        throw std::domain_error("synthesis: need at least 3 elements (N >= 1)");
    if (!(opts.tol > 0.0))
        throw std::invalid_argument("synthesis: tolerance must be positive");
    check_feasible(bob_coefficients, opts);

    const std::size_t count = bob_coefficients.size();
    Rng rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    double best_kappa = std::numeric_limits<double>::infinity();
    double best_eta = std::numeric_limits<double>::infinity();

    for (int attempt = 0; attempt < opts.max_attempts; ++attempt)
    {
        std::vector<cd> a(count);
        for (cd& ai : a)
            ai = random_phasor(rng);

        double kappa_res = 0.0;
        const int a_iters = solve_excitation(bob_coefficients, a, rng, opts, kappa_res);
        if (kappa_res > opts.tol)
        {
            best_kappa = std::min(best_kappa, kappa_res);
            continue;
        }

        std::vector<cd> w(count);
        for (std::size_t i = 0; i < count; ++i)
            w[i] = a[i] * bob_coefficients[i];

        std::vector<cd> b(count);
        for (cd& bi : b)
        {
            bi = random_phasor(rng);
            if (opts.an_modulus == AnModulus::Bounded)
                bi *= opts.b_max * std::sqrt(unit(rng));
        }

        double eta_res = 0.0;
        const int b_iters = solve_noise_weights(w, b, rng, opts, eta_res);
        if (eta_res > opts.tol)
        {
            best_kappa = std::min(best_kappa, kappa_res);
            best_eta = std::min(best_eta, eta_res);
            continue;
        }

        SynthesisResult out;
        out.weights.a = std::move(a);
        out.weights.b = std::move(b);
        out.report = {kappa_res, eta_res, a_iters + b_iters, seed, true};
        return out;
    }

    std::ostringstream os;
    os << "synthesis: no attempt converged (best |kappa-1| = " << best_kappa
       << ", best |eta| = " << best_eta << ")";
    throw SynthesisError(os.str(), best_kappa, best_eta);
}

SynthesisResult synthesize_weights(const ArrayConfig& cfg, const ObservationPoint& bob, double t,
                                   ChannelMode mode, std::uint64_t seed,
                                   const SynthesisOptions& opts)
{
    const auto c = channel_coefficients(cfg, bob, t, mode);
    return synthesize_weights(c, seed, opts);
}

SynthesisReport verify_weights(const WeightPair& w, const ArrayConfig& cfg,
                               const ObservationPoint& bob, double t, ChannelMode mode,
                               double tol)
{
    const auto r = channel_response(cfg, bob, t, w, mode);
    SynthesisReport rep;
    rep.kappa_residual = std::abs(r.kappa - 1.0);
    rep.eta_residual = std::abs(r.eta);
    rep.passed = rep.kappa_residual <= tol && rep.eta_residual <= tol;
    return rep;
}

std::vector<WeightDraw> read_weights_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("weights csv: empty input");
    const auto header = csv::split_line(line);
    const bool indexed = !header.empty() && header.front() == "draw_index";
    const std::vector<std::string> expected =
        indexed ? std::vector<std::string>{"draw_index", "n", "re_a", "im_a", "re_b", "im_b"}
                : std::vector<std::string>{"n", "re_a", "im_a", "re_b", "im_b"};
    if (header != expected)
        throw std::invalid_argument("weights csv: unexpected header '" + line + "'");

    // draw_index -> (n -> (a, b)), ordered for deterministic output.
    std::map<std::uint64_t, std::map<int, std::pair<cd, cd>>> rows;
    int line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        const auto f = csv::split_line(line);
        if (f.size() != expected.size())
            throw std::invalid_argument("weights csv: wrong field count on line " +
                                        std::to_string(line_no));
        std::size_t k = 0;
        std::uint64_t draw = 0;
        if (indexed)
            draw = static_cast<std::uint64_t>(csv::parse_number(f[k++]));
        const int n = static_cast<int>(csv::parse_number(f[k++]));
        const double re_a = csv::parse_number(f[k++]);
        const double im_a = csv::parse_number(f[k++]);
        const double re_b = csv::parse_number(f[k++]);
        const double im_b = csv::parse_number(f[k++]);
        if (!rows[draw].emplace(n, std::make_pair(cd(re_a, im_a), cd(re_b, im_b))).second)
            throw std::invalid_argument("weights csv: duplicate element " + std::to_string(n) +
                                        " on line " + std::to_string(line_no));
    }
    if (rows.empty())
        throw std::invalid_argument("weights csv: no rows");

    std::vector<WeightDraw> out;
    for (auto& [draw, elements] : rows)
    {
        const int half = elements.rbegin()->first;
        if (elements.begin()->first != -half || elements.size() != static_cast<std::size_t>(2 * half + 1))
            throw std::invalid_argument("weights csv: draw " + std::to_string(draw) +
                                        " does not cover n = -N..N");
        WeightDraw d;
        d.draw_index = draw;
        for (const auto& [n, ab] : elements)
        {
            d.weights.a.push_back(ab.first);
            d.weights.b.push_back(ab.second);
        }
        out.push_back(std::move(d));
    }
    return out;
}

void write_weights_csv(std::ostream& out, std::span<const WeightDraw> draws)
{
    out << "draw_index,n,re_a,im_a,re_b,im_b\n";
    for (const auto& d : draws)
    {
        const int half = static_cast<int>(d.weights.size() / 2);
        for (std::size_t i = 0; i < d.weights.size(); ++i)
        {
            out << d.draw_index << ',' << static_cast<int>(i) - half << ','
                << csv::format_number(d.weights.a[i].real()) << ','
                << csv::format_number(d.weights.a[i].imag()) << ','
                << csv::format_number(d.weights.b[i].real()) << ','
                << csv::format_number(d.weights.b[i].imag()) << '\n';
        }
    }
}

} // namespace fdadm
