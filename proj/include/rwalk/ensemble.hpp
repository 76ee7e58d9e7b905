#ifndef RWALK_ENSEMBLE_HPP
#define RWALK_ENSEMBLE_HPP

#include <cstdint>
#include <vector>

#include "rwalk/grid.hpp"
#include "rwalk/model.hpp"

namespace rwalk {

struct EnsembleOptions {
    std::uint64_t master_seed = 0;
    std::uint32_t replications = 1;
    int threads = 0;  // 0 = hardware concurrency
    // Pack walker-0 indicators per step; single-walker runs only.
    bool record_draws = false;
    // Full per-walker snapshots are kept while walkers*replications*grid
    // stays within this many doubles; beyond it only reduced rows are kept.
    std::size_t full_budget = 100'000'000;
    // Hard cap on reduced storage (three doubles per replication per
    // snapshot); beyond it the run is refused.
    std::size_t reduced_budget = 400'000'000;
};

// Snapshots of independent replications on a fixed grid of steps.
// Replication j is driven entirely by stream (master_seed, j), so the
// result is a pure function of the configuration; worker count only sets
// how replications are interleaved.
struct EnsembleResult {
    std::vector<std::uint64_t> grid;
    std::uint32_t replications = 0;
    int n_walkers = 0;
    std::uint64_t master_seed = 0;
    std::uint64_t horizon = 0;  // last simulated step == grid.back()
    bool has_full = false;

    // Reduced rows, indexed [rep * grid.size() + gi].
    std::vector<double> zbar;
    std::vector<double> dev0;      // z[0] - zbar
    std::vector<double> sync_msq;  // mean_i (z[i] - zbar)^2
    // Full snapshots [rep][gi][walker] when has_full.
    std::vector<double> z_full;
    // Packed walker-0 indicators per replication when record_draws.
    std::vector<std::vector<std::uint64_t>> draw_words;

    std::size_t cell(std::uint32_t rep, std::size_t gi) const {
        return static_cast<std::size_t>(rep) * grid.size() + gi;
    }
    double zbar_at(std::uint32_t rep, std::size_t gi) const {
        return zbar[cell(rep, gi)];
    }
    double dev0_at(std::uint32_t rep, std::size_t gi) const {
        return dev0[cell(rep, gi)];
    }
    double sync_at(std::uint32_t rep, std::size_t gi) const {
        return sync_msq[cell(rep, gi)];
    }
    const double* state_at(std::uint32_t rep, std::size_t gi) const {
        return z_full.data() +
               cell(rep, gi) * static_cast<std::size_t>(n_walkers);
    }
    // Terminal (last grid point) mean, the plug-in estimate of the limit.
    double z_hat(std::uint32_t rep) const {
        return zbar_at(rep, grid.size() - 1);
    }
    // Index of step `s` in grid; throws if absent.
    std::size_t grid_index(std::uint64_t s) const;
};

EnsembleResult run_ensemble(const ModelParams& params,
                            const RecordingGrid& grid,
                            const EnsembleOptions& options);

// Cross-replication moments per grid step.  mean_sq_conv_proxy is the mean
// of (zbar_n - zbar_terminal)^2 across replications, the plug-in estimate
// of E[(Zbar_n - Zbar_limit)^2]; it is zero at the terminal point by
// construction.
struct MomentRow {
    std::uint64_t n = 0;
    double mean_zbar = 0.0;
    double var_zbar = 0.0;
    double mean_sq_sync = 0.0;
    double mean_sq_conv_proxy = 0.0;
};
std::vector<MomentRow> moment_stream(const EnsembleResult& result);

// Fixation index of a packed indicator sequence: the smallest 1-based M
// such that the bits are constant from position M on.  Returns no value for
// sequences shorter than 2 bits or when the last bit differs from its
// predecessor (a single-element tail says nothing).
// Bits beyond n_bits are ignored.
std::int64_t fixation_index(const std::vector<std::uint64_t>& words,
                            std::uint64_t n_bits);  // -1 when absent

}  // namespace rwalk

#endif
