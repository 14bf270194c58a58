#pragma once

#include "losnlos/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

/// HPPP drop simulation around a typical UE at the origin.
namespace losnlos::mc {

struct McConfig {
    double disk_radius_km = 2.0;
    std::int64_t trials = 10000;
    std::uint64_t seed = 1;
    double min_bs_guard_km = 1e-9;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Empty draws allowed per trial before giving up.
    int max_empty_draws = 64;
};

/// Window radius max(5/sqrt(lambda), 3 * last break, 2 km).
double default_disk_radius(const PathLossModel& m, const LosProbabilityFn& f, double lambda);
McConfig default_config(const PathLossModel& m, const LosProbabilityFn& f, double lambda, std::int64_t trials,
                        std::uint64_t seed);

/// One simulated snapshot.
struct Drop {
    double sinr = 0.0;
    double serving_distance = 0.0;
    Branch serving_branch = Branch::Nlos;
    std::int64_t bs_count = 0;
    int empty_draws = 0;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
};

/// SplitMix64, usable as a UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t state) : state_(state) {}
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }
    result_type operator()();

    /// Independent stream for one trial; depends only on (seed, trial).
    static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial);

private:
    std::uint64_t state_;
};

Drop simulate_drop(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                   const McConfig& cfg, std::int64_t trial_index);

double simulate_sinr(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                     const McConfig& cfg, std::int64_t trial_index);

/// All cfg.trials drops, in trial order, computed on a thread pool.
std::vector<Drop> simulate_drops(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                                 const McConfig& cfg);

/// Empirical P[SINR > gamma] over a drop set.
McEstimate coverage_from_drops(const std::vector<Drop>& drops, double gamma, std::uint64_t seed);

McEstimate estimate_coverage(const PathLossModel& m, const LosProbabilityFn& f, const NetworkParams& params,
                             const McConfig& cfg);

/// Serving-distance histogram split by branch, as densities (1/km). Mass
/// beyond r_max is kept in `overflow` so that the total is one.
struct AssociationHistogram {
    std::vector<double> edges;
    std::vector<double> density_los;
    std::vector<double> density_nlos;
    double overflow = 0.0;
    std::int64_t trials = 0;

    double total_mass() const;
};

AssociationHistogram histogram_from_drops(const std::vector<Drop>& drops, int bins, double r_max);

AssociationHistogram estimate_association_pdf(const PathLossModel& m, const LosProbabilityFn& f,
                                              const NetworkParams& params, const McConfig& cfg, int bins,
                                              double r_max);

/// Largest gap between the histogram and the bin averages of the given
/// densities, over both branches, divided by the largest bin average.
double histogram_sup_deviation(const AssociationHistogram& h, const std::function<double(double)>& pdf_los,
                               const std::function<double(double)>& pdf_nlos);

}  // namespace losnlos::mc
