#include "rwalk/ensemble.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "rwalk/errors.hpp"
#include "rwalk/rng.hpp"

namespace rwalk {

std::size_t EnsembleResult::grid_index(std::uint64_t s) const {
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        if (grid[gi] == s) return gi;
    }
    throw std::invalid_argument("recording grid has no snapshot at step " +
                                std::to_string(s));
}

namespace {

struct RecordTargets {
    EnsembleResult* out;
    bool record_draws;
    std::size_t draw_word_count;
};

void simulate_one(const ModelParams& params, std::uint32_t rep,
                  const RecordTargets& t) {
    EnsembleResult& out = *t.out;
    RandomStream stream(out.master_seed, rep);
    WalkState state = initial_state(params, stream);
    const std::size_t n_grid = out.grid.size();
    const auto n_walkers = static_cast<std::size_t>(out.n_walkers);

    std::vector<std::uint64_t>* words = nullptr;
    if (t.record_draws) {
        auto& w = out.draw_words[rep];
        w.assign(t.draw_word_count, 0);
        words = &w;
    }

    std::size_t gi = 0;
    auto record = [&]() {
        std::size_t cell = out.cell(rep, gi);
        out.zbar[cell] = state.z_bar;
        out.dev0[cell] = state.z[0] - state.z_bar;
        double acc = 0.0;
        for (double z : state.z) {
            double d = z - state.z_bar;
            acc += d * d;
        }
        out.sync_msq[cell] = acc / static_cast<double>(n_walkers);
        if (out.has_full) {
            double* slot = out.z_full.data() + cell * n_walkers;
            for (std::size_t i = 0; i < n_walkers; ++i) slot[i] = state.z[i];
        }
        ++gi;
    };

    if (out.grid[0] == 0) record();
    for (std::uint64_t n = 0; gi < n_grid; ++n) {
        double r = step_size(params.schedule, n);
        bool draw = false;
        step_in_place(state, params, r, stream,
                      words != nullptr ? &draw : nullptr);
        if (words && draw) {
            (*words)[n >> 6] |= std::uint64_t{1} << (n & 63);
        }
        if (n + 1 == out.grid[gi]) record();
    }
}

}  // namespace

EnsembleResult run_ensemble(const ModelParams& params,
                            const RecordingGrid& grid,
                            const EnsembleOptions& options) {
    validate(params);
    if (options.replications < 1) {
        throw std::invalid_argument("replications must be >= 1");
    }
    std::vector<std::uint64_t> steps = grid_steps(grid);

    EnsembleResult out;
    out.grid = std::move(steps);
    out.replications = options.replications;
    out.n_walkers = params.n_walkers;
    out.master_seed = options.master_seed;
    out.horizon = out.grid.back();

    if (auto len = schedule_length(params.schedule);
        len.has_value() && *len < out.horizon) {
        throw ScheduleExhausted(
            "schedule defines " + std::to_string(*len) +
            " steps but the grid records up to step " +
            std::to_string(out.horizon));
    }
    if (options.record_draws && params.n_walkers != 1) {
        throw std::invalid_argument(
            "draw recording is defined for single-walker runs only");
    }

    const std::size_t n_grid = out.grid.size();
    const std::size_t cells =
        static_cast<std::size_t>(out.replications) * n_grid;
    if (3 * cells > options.reduced_budget) {
        throw BudgetExceeded(
            "snapshot storage over budget; use a coarser recording grid or "
            "fewer replications");
    }
    const std::size_t full_cells =
        cells * static_cast<std::size_t>(params.n_walkers);
    out.has_full = full_cells <= options.full_budget;

    std::size_t draw_word_count = 0;
    if (options.record_draws) {
        draw_word_count = static_cast<std::size_t>((out.horizon + 63) / 64);
        if (draw_word_count * out.replications * 8 > 2'000'000'000ull) {
            throw BudgetExceeded(
                "draw recording over budget; shorten the horizon or reduce "
                "replications");
        }
        out.draw_words.resize(out.replications);
    }

    out.zbar.resize(cells);
    out.dev0.resize(cells);
    out.sync_msq.resize(cells);
    if (out.has_full) out.z_full.resize(full_cells);

    RecordTargets targets{&out, options.record_draws, draw_word_count};

    unsigned hw = std::thread::hardware_concurrency();
    unsigned requested =
        options.threads > 0 ? static_cast<unsigned>(options.threads)
                            : (hw > 0 ? hw : 1);
    unsigned n_threads =
        std::min<unsigned>(std::max<unsigned>(requested, 1),
                           out.replications);

    if (n_threads == 1) {
        for (std::uint32_t rep = 0; rep < out.replications; ++rep) {
            simulate_one(params, rep, targets);
        }
        return out;
    }

    std::atomic<std::uint32_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        try {
            for (;;) {
                std::uint32_t rep = next.fetch_add(1);
                if (rep >= out.replications) return;
                simulate_one(params, rep, targets);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::vector<MomentRow> moment_stream(const EnsembleResult& result) {
    const std::size_t n_grid = result.grid.size();
    std::vector<MomentRow> rows(n_grid);
    const double m = static_cast<double>(result.replications);
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
        MomentRow& row = rows[gi];
        row.n = result.grid[gi];
        double sum = 0.0;
        for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
            sum += result.zbar_at(rep, gi);
        }
        row.mean_zbar = sum / m;
        double ss = 0.0;
        double sync = 0.0;
        double conv = 0.0;
        for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
            double d = result.zbar_at(rep, gi) - row.mean_zbar;
            ss += d * d;
            sync += result.sync_at(rep, gi);
            double e = result.zbar_at(rep, gi) - result.z_hat(rep);
            conv += e * e;
        }
        row.var_zbar = result.replications > 1 ? ss / (m - 1.0) : 0.0;
        row.mean_sq_sync = sync / m;
        row.mean_sq_conv_proxy = conv / m;
    }
    return rows;
}

std::int64_t fixation_index(const std::vector<std::uint64_t>& words,
                            std::uint64_t n_bits) {
    if (n_bits < 2) return -1;
    auto bit = [&](std::uint64_t i) -> std::uint64_t {
        return (words[i >> 6] >> (i & 63)) & 1u;
    };
    std::uint64_t last_change = 0;  // 0 = constant throughout
    for (std::uint64_t i = 1; i < n_bits; ++i) {
        if (bit(i) != bit(i - 1)) last_change = i;
    }
    if (last_change == n_bits - 1) return -1;
    return static_cast<std::int64_t>(last_change) + 1;
}

}  // namespace rwalk
