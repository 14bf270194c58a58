#include "losnlos/montecarlo.hpp"

#include "losnlos/quadrature.hpp"
#include "losnlos/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace losnlos::mc {

namespace {

double uniform01(SplitMix64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double unit_exponential(SplitMix64& rng)
{
    return -std::log1p(-uniform01(rng));
}

void validate(const McConfig& cfg)
{
    if (!(cfg.disk_radius_km > 0.0) || cfg.trials < 1 || !(cfg.min_bs_guard_km >= 0.0) ||
        cfg.min_bs_guard_km >= cfg.disk_radius_km || cfg.max_empty_draws < 1) {
        throw std::invalid_argument("McConfig: need radius > guard >= 0, trials >= 1, empty-draw budget >= 1");
    }
}

struct Station {
    double distance;
    double gain;
};

}  // namespace

SplitMix64::result_type SplitMix64::operator()()
{
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SplitMix64 SplitMix64::for_trial(std::uint64_t seed, std::uint64_t trial)
{
    SplitMix64 keyed(seed);
    const std::uint64_t base = keyed();
    SplitMix64 mixer(base ^ (trial * 0xd1b54a32d192ed03ULL));
    return SplitMix64(mixer());
}

double default_disk_radius(const PathLossModel& m, const LosProbabilityFn& f, double lambda)
{
    if (!(lambda > 0.0)) {
        throw std::invalid_argument("default_disk_radius: lambda must be positive");
    }
    double last = 0.0;
    for (double d : m.breaks()) {
        last = std::max(last, d);
    }
    for (double d : f.breaks()) {
        last = std::max(last, d);
    }
    return std::max({5.0 / std::sqrt(lambda), 3.0 * last, 2.0});
}

McConfig default_config(const PathLossModel& m, const LosProbabilityFn& f, double lambda, std::int64_t trials,
                        std::uint64_t seed)
{
    McConfig cfg;
    cfg.disk_radius_km = default_disk_radius(m, f, lambda);
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

Drop simulate_drop(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                   const McConfig& cfg, std::int64_t trial_index)
{
    params.validate();
    validate(cfg);
    SplitMix64 rng = SplitMix64::for_trial(cfg.seed, static_cast<std::uint64_t>(trial_index));
    const double radius = cfg.disk_radius_km;
    std::poisson_distribution<std::int64_t> count_dist(params.lambda * kPi * radius * radius);

    Drop drop;
    std::int64_t k = count_dist(rng);
    while (k == 0) {
        if (++drop.empty_draws >= cfg.max_empty_draws) {
            std::ostringstream os;
            os << "no BS in the window after " << drop.empty_draws << " draws (lambda*pi*R^2 = "
               << params.lambda * kPi * radius * radius << "); use a larger disk radius";
            throw std::runtime_error(os.str());
        }
        k = count_dist(rng);
    }
    drop.bs_count = k;

    thread_local std::vector<Station> stations;
    stations.clear();
    stations.reserve(static_cast<std::size_t>(k));
    std::size_t best = 0;
    for (std::int64_t i = 0; i < k; ++i) {
        double r = 0.0;
        do {
            r = radius * std::sqrt(uniform01(rng));
        } while (r <= cfg.min_bs_guard_km);
        const Branch b = uniform01(rng) < f(r) ? Branch::Los : Branch::Nlos;
        const double gain = m.gain(r, b);
        stations.push_back({r, gain});
        const Station& s = stations[best];
        if (i > 0 && (gain > s.gain || (gain == s.gain && r < s.distance))) {
            best = static_cast<std::size_t>(i);
        }
        if (i == static_cast<std::int64_t>(best)) {
            drop.serving_branch = b;
        }
    }

    double interference = 0.0;
    double signal = 0.0;
    for (std::size_t i = 0; i < stations.size(); ++i) {
        const double faded = params.p_tx * stations[i].gain * unit_exponential(rng);
        if (i == best) {
            signal = faded;
        } else {
            interference += faded;
        }
    }
    drop.serving_distance = stations[best].distance;
    drop.sinr = signal / (interference + params.n0);
    return drop;
}

double simulate_sinr(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                     const McConfig& cfg, std::int64_t trial_index)
{
    return simulate_drop(m, f, params, cfg, trial_index).sinr;
}

std::vector<Drop> simulate_drops(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                                 const McConfig& cfg)
{
    params.validate();
    validate(cfg);
    std::vector<Drop> drops(static_cast<std::size_t>(cfg.trials));
    unsigned workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::int64_t>(workers, cfg.trials));

    constexpr std::int64_t kBlock = 256;
    std::atomic<std::int64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    const auto work = [&] {
        try {
            for (;;) {
                const std::int64_t start = next.fetch_add(kBlock);
                if (start >= cfg.trials || failed.load()) {
                    return;
                }
                const std::int64_t stop = std::min(cfg.trials, start + kBlock);
                for (std::int64_t i = start; i < stop; ++i) {
                    drops[static_cast<std::size_t>(i)] = simulate_drop(m, f, params, cfg, i);
                }
            }
        } catch (...) {
            if (!failed.exchange(true)) {
                failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < workers; ++i) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return drops;
}

McEstimate coverage_from_drops(const std::vector<Drop>& drops, double gamma, std::uint64_t seed)
{
    if (drops.empty()) {
        throw std::invalid_argument("coverage_from_drops: no drops");
    }
    std::int64_t hits = 0;
    for (const Drop& d : drops) {
        hits += d.sinr > gamma ? 1 : 0;
    }
    const auto n = static_cast<double>(drops.size());
    const double p = static_cast<double>(hits) / n;
    const double var = drops.size() > 1 ? p * (1.0 - p) * n / (n - 1.0) : 0.0;
    return {p, std::sqrt(var / n), static_cast<std::int64_t>(drops.size()), seed};
}

McEstimate estimate_coverage(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                             const McConfig& cfg)
{
    return coverage_from_drops(simulate_drops(m, f, params, cfg), params.gamma, cfg.seed);
}

double AssociationHistogram::total_mass() const
{
    double sum = overflow;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        sum += (density_los[i] + density_nlos[i]) * (edges[i + 1] - edges[i]);
    }
    return sum;
}

AssociationHistogram histogram_from_drops(const std::vector<Drop>& drops, int bins, double r_max)
{
    if (bins < 2) {
        throw std::invalid_argument("association histogram needs at least 2 bins");
    }
    if (!(r_max > 0.0) || drops.empty()) {
        throw std::invalid_argument("association histogram needs r_max > 0 and at least one drop");
    }
    AssociationHistogram h;
    const auto nb = static_cast<std::size_t>(bins);
    const double width = r_max / bins;
    h.edges.resize(nb + 1);
    for (std::size_t i = 0; i <= nb; ++i) {
        h.edges[i] = width * static_cast<double>(i);
    }
    std::vector<std::int64_t> los(nb, 0);
    std::vector<std::int64_t> nlos(nb, 0);
    std::int64_t over = 0;
    for (const Drop& d : drops) {
        if (d.serving_distance >= r_max) {
            ++over;
            continue;
        }
        const auto i = std::min(nb - 1, static_cast<std::size_t>(d.serving_distance / width));
        ++(d.serving_branch == Branch::Los ? los : nlos)[i];
    }
    const auto n = static_cast<double>(drops.size());
    h.density_los.resize(nb);
    h.density_nlos.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) {
        h.density_los[i] = static_cast<double>(los[i]) / (n * width);
        h.density_nlos[i] = static_cast<double>(nlos[i]) / (n * width);
    }
    h.overflow = static_cast<double>(over) / n;
    h.trials = static_cast<std::int64_t>(drops.size());
    return h;
}

AssociationHistogram estimate_association_pdf(const PathLossModel& m, const LosProbabilityFn& f,
                                              const NetworkParams& params, const McConfig& cfg, int bins,
                                              double r_max)
{
    if (bins < 2) {
        throw std::invalid_argument("association histogram needs at least 2 bins");
    }
    return histogram_from_drops(simulate_drops(m, f, params, cfg), bins, r_max);
}

double histogram_sup_deviation(const AssociationHistogram& h, const std::function<double(double)>& pdf_los,
                               const std::function<double(double)>& pdf_nlos)
{
    double peak = 0.0;
    double worst = 0.0;
    const QuadratureTolerance tol{1e-10, 1e-8};
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
        const double a = std::max(h.edges[i], 1e-12);
        const double b = h.edges[i + 1];
        const double w = b - h.edges[i];
        const double mean_los = integrate(pdf_los, a, b, tol).value / w;
        const double mean_nlos = integrate(pdf_nlos, a, b, tol).value / w;
        peak = std::max({peak, mean_los, mean_nlos});
        worst = std::max({worst, std::abs(mean_los - h.density_los[i]), std::abs(mean_nlos - h.density_nlos[i])});
    }
    if (!(peak > 0.0)) {
        throw std::invalid_argument("histogram_sup_deviation: analytic densities vanish on the histogram range");
    }
    return worst / peak;
}

}  // namespace losnlos::mc
