#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simsketch/datasets.hpp"
#include "simsketch/metrics.hpp"
#include "simsketch/sketches.hpp"

namespace simsketch {

struct ComparisonResult {
    std::string pair_id;
    double truth = 0.0;
    double estimate = 0.0;
    double error = 0.0;  // estimate - truth
};

struct PairFailure {
    std::string pair_id;
    std::string message;
};

struct PairwiseRun {
    std::vector<ComparisonResult> results;  // ascending truth, then pair id
    std::vector<PairFailure> failures;
};

/// Sketches both sides of every pair with `params` and scores them against
/// the exact metric. Pairs that raise are recorded in `failures`.
/// Throws std::invalid_argument for an empty corpus.
PairwiseRun run_pairwise(std::span<const MultisetPair> corpus, const SketchParams& params,
                         Metric metric);

/// Root mean square of the signed errors. Throws std::invalid_argument when empty.
double rmse(std::span<const ComparisonResult> results);

struct GridSpec {
    StructureKind kind = StructureKind::counting_bloom_filter;
    std::vector<std::uint32_t> widths{64, 128, 200, 400, 800};
    std::vector<std::uint32_t> depths{1, 2, 4, 8, 10};  // k for CBF, d for CMS
    Metric metric = Metric::dice;
    std::uint64_t seed = 0;
};

struct RmseGrid {
    std::vector<std::uint32_t> widths;
    std::vector<std::uint32_t> depths;
    std::vector<std::optional<double>> cells;  // row-major by width
    std::vector<std::string> failures;

    const std::optional<double>& at(std::size_t width_index, std::size_t depth_index) const;
    /// Cell for the given dimension values; throws std::out_of_range if absent.
    double value(std::uint32_t width, std::uint32_t depth) const;
};

/// One RMSE per (width, depth) cell. A cell with any failed pair is left
/// empty. Cells run on up to `threads` workers; the result does not depend
/// on the thread count. Throws std::invalid_argument for an invalid spec.
RmseGrid run_grid(std::span<const MultisetPair> corpus, const GridSpec& spec,
                  unsigned threads = 1);

struct ThresholdReport {
    double threshold = 0.0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t true_negatives = 0;
    std::size_t false_negatives = 0;
    /// Largest threshold - truth over the false positives; 0 when there are none.
    double max_overshoot = 0.0;
};

/// Predicted positive: estimate >= threshold; actual positive: truth >= threshold.
/// Throws std::invalid_argument unless 0 < threshold < 1.
ThresholdReport threshold_report(std::span<const ComparisonResult> results, double threshold);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_comparisons_csv(std::ostream& out, std::span<const ComparisonResult> results);
void write_grid_csv(std::ostream& out, const RmseGrid& grid);
void write_threshold_csv(std::ostream& out, std::span<const ThresholdReport> reports);

}  // namespace simsketch
