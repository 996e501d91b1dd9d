#include "simsketch/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace simsketch {

PairwiseRun run_pairwise(std::span<const MultisetPair> corpus, const SketchParams& params,
                         Metric metric) {
    if (corpus.empty()) {
        throw std::invalid_argument("pairwise run needs a non-empty corpus");
    }
    PairwiseRun run;
    run.results.reserve(corpus.size());
    for (const auto& pair : corpus) {
        try {
            const double truth = metric == Metric::dice ? dice(pair.first, pair.second)
                                                        : cosine(pair.first, pair.second);
            const Sketch a = build_sketch(pair.first, params);
            const Sketch b = build_sketch(pair.second, params);
            const double estimate = estimate_similarity(a, b, metric);
            run.results.push_back({pair.id, truth, estimate, estimate - truth});
        } catch (const std::exception& e) {
            run.failures.push_back({pair.id, e.what()});
        }
    }
    std::stable_sort(run.results.begin(), run.results.end(),
                     [](const ComparisonResult& a, const ComparisonResult& b) {
                         if (a.truth != b.truth) return a.truth < b.truth;
                         return a.pair_id < b.pair_id;
                     });
    return run;
}

double rmse(std::span<const ComparisonResult> results) {
    if (results.empty()) {
        throw std::invalid_argument("rmse of an empty result set");
    }
    double sum = 0.0;
    for (const auto& r : results) sum += r.error * r.error;
    return std::sqrt(sum / static_cast<double>(results.size()));
}

// ---------------------------------------------------------------------------

const std::optional<double>& RmseGrid::at(std::size_t width_index, std::size_t depth_index) const {
    if (width_index >= widths.size() || depth_index >= depths.size()) {
        throw std::out_of_range("grid cell index out of range");
    }
    return cells[width_index * depths.size() + depth_index];
}

double RmseGrid::value(std::uint32_t width, std::uint32_t depth) const {
    const auto wi = std::find(widths.begin(), widths.end(), width);
    const auto di = std::find(depths.begin(), depths.end(), depth);
    if (wi == widths.end() || di == depths.end()) {
        throw std::out_of_range("grid has no cell for the requested dimensions");
    }
    const auto& cell = at(static_cast<std::size_t>(wi - widths.begin()),
                          static_cast<std::size_t>(di - depths.begin()));
    if (!cell) {
        throw std::out_of_range("grid cell failed");
    }
    return *cell;
}

RmseGrid run_grid(std::span<const MultisetPair> corpus, const GridSpec& spec, unsigned threads) {
    if (spec.widths.empty() || spec.depths.empty()) {
        throw std::invalid_argument("grid needs at least one width and one depth");
    }
    const auto zero = [](std::uint32_t v) { return v == 0; };
    if (std::any_of(spec.widths.begin(), spec.widths.end(), zero) ||
        std::any_of(spec.depths.begin(), spec.depths.end(), zero)) {
        throw std::invalid_argument("grid dimensions must be >= 1");
    }
    if (spec.kind == StructureKind::bloom_filter) {
        throw std::invalid_argument("grid sweeps need a counting structure");
    }
    if (corpus.empty()) {
        throw std::invalid_argument("grid needs a non-empty corpus");
    }

    RmseGrid grid;
    grid.widths = spec.widths;
    grid.depths = spec.depths;
    const std::size_t cell_count = spec.widths.size() * spec.depths.size();
    grid.cells.assign(cell_count, std::nullopt);
    std::vector<std::vector<std::string>> cell_failures(cell_count);

    auto run_cell = [&](std::size_t cell) {
        const SketchParams params{spec.kind, spec.widths[cell / spec.depths.size()],
                                  spec.depths[cell % spec.depths.size()], spec.seed};
        const PairwiseRun run = run_pairwise(corpus, params, spec.metric);
        for (const auto& f : run.failures) {
            cell_failures[cell].push_back("width " + std::to_string(params.width) + " depth " +
                                          std::to_string(params.hashes) + " pair " +
                                          f.pair_id + ": " + f.message);
        }
        if (run.failures.empty()) {
            grid.cells[cell] = rmse(run.results);
        }
    };

    const unsigned workers =
        std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(cell_count)));
    if (workers == 1) {
        for (std::size_t c = 0; c < cell_count; ++c) run_cell(c);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < cell_count; c = next++) run_cell(c);
            });
        }
    }
    for (auto& f : cell_failures) {
        grid.failures.insert(grid.failures.end(), f.begin(), f.end());
    }
    return grid;
}

// ---------------------------------------------------------------------------

ThresholdReport threshold_report(std::span<const ComparisonResult> results, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("threshold must lie strictly between 0 and 1");
    }
    ThresholdReport r;
    r.threshold = threshold;
    for (const auto& c : results) {
        const bool predicted = c.estimate >= threshold;
        const bool actual = c.truth >= threshold;
        if (predicted && actual) {
            ++r.true_positives;
        } else if (predicted) {
            ++r.false_positives;
            r.max_overshoot = std::max(r.max_overshoot, threshold - c.truth);
        } else if (actual) {
            ++r.false_negatives;
        } else {
            ++r.true_negatives;
        }
    }
    return r;
}

std::string format_double(double v) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, end) : std::string("nan");
}

void write_comparisons_csv(std::ostream& out, std::span<const ComparisonResult> results) {
    out << "pair_id,truth,estimate,error\n";
    for (const auto& r : results) {
        out << r.pair_id << ',' << format_double(r.truth) << ',' << format_double(r.estimate)
            << ',' << format_double(r.error) << '\n';
    }
}

void write_grid_csv(std::ostream& out, const RmseGrid& grid) {
    out << "dim,depth,rmse\n";
    for (std::size_t w = 0; w < grid.widths.size(); ++w) {
        for (std::size_t d = 0; d < grid.depths.size(); ++d) {
            out << grid.widths[w] << ',' << grid.depths[d] << ',';
            if (const auto& cell = grid.at(w, d)) out << format_double(*cell);
            out << '\n';
        }
    }
}

void write_threshold_csv(std::ostream& out, std::span<const ThresholdReport> reports) {
    out << "threshold,tp,fp,tn,fn,max_overshoot\n";
    for (const auto& r : reports) {
        out << format_double(r.threshold) << ',' << r.true_positives << ','
            << r.false_positives << ',' << r.true_negatives << ',' << r.false_negatives << ','
            << format_double(r.max_overshoot) << '\n';
    }
}

}  // namespace simsketch
