#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgseg/infodiv.hpp"
#include "qgseg/seqgen.hpp"

namespace qgseg {

inline constexpr double kDefaultRecursiveThreshold = 0.01;
inline constexpr std::size_t kDefaultMinSegment = 50;

/// Weights of the two halves at cursor k: ((k-1)/n, (n+1-k)/n). Requires 2 <= k <= n.
WeightPair cursor_weights(std::size_t k, std::size_t n);

/// Cumulative outcome counts per observable. Row `prefix` of observable r
/// holds the occurrences of each outcome among positions 1..prefix, so the
/// left half at cursor k is row k-1 and the right half is row n minus row k-1.
class PrefixCounts {
   public:
    PrefixCounts(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog);

    std::size_t n() const {
        return n_;
    }
    std::size_t observable_count() const {
        return outcome_counts_.size();
    }
    std::size_t outcome_count(std::size_t r) const {
        return outcome_counts_[r];
    }
    std::span<const std::uint32_t> row(std::size_t r, std::size_t prefix) const {
        std::size_t m = outcome_counts_[r];
        return std::span<const std::uint32_t>(counts_[r]).subspan(prefix * m, m);
    }
    std::uint32_t total(std::size_t r, std::size_t prefix) const {
        return totals_[r][prefix];
    }

   private:
    std::size_t n_;
    std::vector<std::size_t> outcome_counts_;
    std::vector<std::vector<std::uint32_t>> counts_;
    std::vector<std::vector<std::uint32_t>> totals_;
};

/// Empirical distributions of observable r left and right of cursor k, or
/// nullopt when either side has no measurement of r.
std::optional<std::pair<ProbDist, ProbDist>> estimated_distributions(const OutcomeSequence &seq,
                                                                     std::span<const OutcomeAlphabet> catalog,
                                                                     std::size_t k, std::size_t r);

/// JSD^r(k) for every observable and JSD^max(k) = max_r JSD^r(k), k = 2..n.
/// Vectors are indexed by k - 2.
struct JsdProfile {
    std::size_t n = 0;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> per_observable;
    std::vector<double> max_curve;
    std::size_t argmax_k = 2;
    double argmax_value = 0.0;
    std::optional<std::size_t> argmax_observable;

    double value(std::size_t r, std::size_t k) const {
        return per_observable[r][k - 2];
    }
    double max_at(std::size_t k) const {
        return max_curve[k - 2];
    }
};

struct ProfileOptions {
    /// Cursor positions are split into this many contiguous blocks evaluated
    /// on separate threads. Results do not depend on the value.
    unsigned workers = 1;
};

JsdProfile jsd_profile(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog,
                       const ProfileOptions &options = {});

/// Smallest index attaining the maximum of `curve` (0 for an empty curve).
std::size_t first_argmax(std::span<const double> curve);

struct SegmentationResult {
    std::size_t estimated_changepoint = 2;
    JsdProfile profile;
    std::string weights_used;
    /// Set when every JSD^max(k) is zero; estimated_changepoint is then 2.
    bool no_signal = false;
};

/// Change-point estimate: the smallest k maximizing JSD^max(k).
SegmentationResult estimate_changepoint(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog,
                                        const ProfileOptions &options = {});

/// Binary recursive segmentation. A split at the window's estimate is accepted
/// when its JSD^max value is at least `threshold` nats and both sides have at
/// least `min_segment` entries; accepted windows are split again. Returns the
/// accepted 1-based changing indices in increasing order.
std::vector<std::size_t> segment_recursive(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog,
                                           double threshold = kDefaultRecursiveThreshold,
                                           std::size_t min_segment = kDefaultMinSegment);

/// CSV with header `k,<label_1>,...,<label_d>,jsd_max` and one row per
/// k = 2..n, values with 12 significant digits.
void write_profile_csv(std::ostream &out, const JsdProfile &profile);
/// Reads the CSV above back. Argmax fields are recomputed from the curve.
JsdProfile read_profile_csv(std::istream &in);

}  // namespace qgseg
