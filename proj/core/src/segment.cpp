#include "qgseg/segment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

namespace qgseg {

namespace {

void validate_against_catalog(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog) {
    if (catalog.empty()) {
        throw ValidationError("observable catalog must not be empty");
    }
    for (std::size_t i = 0; i < seq.entries.size(); ++i) {
        const auto &e = seq.entries[i];
        if (e.observable >= catalog.size() || e.outcome >= catalog[e.observable].values.size()) {
            std::ostringstream msg;
            msg << "sequence entry " << i + 1 << " (observable " << e.observable << ", outcome " << e.outcome
                << ") is not in the catalog";
            throw ValidationError(msg.str());
        }
    }
}

void require_length(const OutcomeSequence &seq) {
    if (seq.size() < 2) {
        throw ValidationError("n ≥ 2 required");
    }
}

inline double left_weight(std::size_t k, std::size_t n) {
    return static_cast<double>(k - 1) / static_cast<double>(n);
}

inline double right_weight(std::size_t k, std::size_t n) {
    return static_cast<double>(n + 1 - k) / static_cast<double>(n);
}

// JSD^r at cursors [k_begin, k_end) into out[k - 2].
void profile_block(const PrefixCounts &counts, std::size_t r, std::size_t k_begin, std::size_t k_end,
                   std::vector<double> &out) {
    std::size_t n = counts.n();
    std::size_t m = counts.outcome_count(r);
    std::span<const std::uint32_t> all = counts.row(r, n);
    std::uint32_t all_total = counts.total(r, n);
    std::vector<double> p1(m);
    std::vector<double> p2(m);
    for (std::size_t k = k_begin; k < k_end; ++k) {
        std::uint32_t left_total = counts.total(r, k - 1);
        std::uint32_t right_total = all_total - left_total;
        if (left_total == 0 || right_total == 0) {
            out[k - 2] = 0.0;
            continue;
        }
        std::span<const std::uint32_t> left = counts.row(r, k - 1);
        for (std::size_t j = 0; j < m; ++j) {
            p1[j] = static_cast<double>(left[j]) / static_cast<double>(left_total);
            p2[j] = static_cast<double>(all[j] - left[j]) / static_cast<double>(right_total);
        }
        out[k - 2] = jsd_weighted(p1, p2, left_weight(k, n), right_weight(k, n));
    }
}

}  // namespace

WeightPair cursor_weights(std::size_t k, std::size_t n) {
    if (k < 2 || k > n) {
        std::ostringstream msg;
        msg << "cursor k = " << k << " outside 2.." << n;
        throw ValidationError(msg.str());
    }
    return WeightPair(left_weight(k, n), right_weight(k, n));
}

PrefixCounts::PrefixCounts(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog)
    : n_(seq.size()) {
    validate_against_catalog(seq, catalog);
    std::size_t d = catalog.size();
    outcome_counts_.resize(d);
    counts_.resize(d);
    totals_.resize(d);
    for (std::size_t r = 0; r < d; ++r) {
        outcome_counts_[r] = catalog[r].values.size();
        counts_[r].assign((n_ + 1) * outcome_counts_[r], 0);
        totals_[r].assign(n_ + 1, 0);
    }
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t r = 0; r < d; ++r) {
            std::size_t m = outcome_counts_[r];
            std::copy_n(counts_[r].begin() + i * m, m, counts_[r].begin() + (i + 1) * m);
            totals_[r][i + 1] = totals_[r][i];
        }
        const auto &e = seq.entries[i];
        counts_[e.observable][(i + 1) * outcome_counts_[e.observable] + e.outcome] += 1;
        totals_[e.observable][i + 1] += 1;
    }
}

std::optional<std::pair<ProbDist, ProbDist>> estimated_distributions(const OutcomeSequence &seq,
                                                                     std::span<const OutcomeAlphabet> catalog,
                                                                     std::size_t k, std::size_t r) {
    require_length(seq);
    validate_against_catalog(seq, catalog);
    std::size_t n = seq.size();
    if (k < 2 || k > n) {
        std::ostringstream msg;
        msg << "cursor k = " << k << " outside 2.." << n;
        throw ValidationError(msg.str());
    }
    if (r >= catalog.size()) {
        throw ValidationError("observable index outside the catalog");
    }
    std::size_t m = catalog[r].values.size();
    std::vector<std::uint32_t> left(m, 0);
    std::vector<std::uint32_t> right(m, 0);
    std::uint32_t left_total = 0;
    std::uint32_t right_total = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto &e = seq.entries[i];
        if (e.observable != r) {
            continue;
        }
        if (i + 1 < k) {
            ++left[e.outcome];
            ++left_total;
        } else {
            ++right[e.outcome];
            ++right_total;
        }
    }
    if (left_total == 0 || right_total == 0) {
        return std::nullopt;
    }
    std::vector<double> p1(m);
    std::vector<double> p2(m);
    for (std::size_t j = 0; j < m; ++j) {
        p1[j] = static_cast<double>(left[j]) / static_cast<double>(left_total);
        p2[j] = static_cast<double>(right[j]) / static_cast<double>(right_total);
    }
    return std::make_pair(ProbDist(std::move(p1), catalog[r].label), ProbDist(std::move(p2), catalog[r].label));
}

std::size_t first_argmax(std::span<const double> curve) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (curve[i] > curve[best]) {
            best = i;
        }
    }
    return best;
}

JsdProfile jsd_profile(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog,
                       const ProfileOptions &options) {
    require_length(seq);
    PrefixCounts counts(seq, catalog);
    std::size_t n = seq.size();
    std::size_t d = catalog.size();

    JsdProfile profile;
    profile.n = n;
    for (const auto &a : catalog) {
        profile.labels.push_back(a.label);
    }
    profile.per_observable.assign(d, std::vector<double>(n - 1, 0.0));

    std::size_t cursors = n - 1;
    std::size_t workers = std::clamp<std::size_t>(options.workers, 1, cursors);
    auto run_block = [&](std::size_t w) {
        std::size_t begin = 2 + cursors * w / workers;
        std::size_t end = 2 + cursors * (w + 1) / workers;
        for (std::size_t r = 0; r < d; ++r) {
            profile_block(counts, r, begin, end, profile.per_observable[r]);
        }
    };
    if (workers == 1) {
        run_block(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(run_block, w);
        }
    }

    profile.max_curve.assign(n - 1, 0.0);
    for (std::size_t i = 0; i < n - 1; ++i) {
        for (std::size_t r = 0; r < d; ++r) {
            profile.max_curve[i] = std::max(profile.max_curve[i], profile.per_observable[r][i]);
        }
    }
    std::size_t best = first_argmax(profile.max_curve);
    profile.argmax_k = best + 2;
    profile.argmax_value = profile.max_curve[best];
    if (profile.argmax_value > 0.0) {
        for (std::size_t r = 0; r < d; ++r) {
            if (profile.per_observable[r][best] == profile.argmax_value) {
                profile.argmax_observable = r;
                break;
            }
        }
    }
    return profile;
}

SegmentationResult estimate_changepoint(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog,
                                        const ProfileOptions &options) {
    SegmentationResult result;
    result.profile = jsd_profile(seq, catalog, options);
    result.estimated_changepoint = result.profile.argmax_k;
    result.no_signal = !(result.profile.argmax_value > 0.0);
    result.weights_used = "pi1(k)=(k-1)/n, pi2(k)=(n+1-k)/n";
    return result;
}

std::vector<std::size_t> segment_recursive(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog,
                                           double threshold, std::size_t min_segment) {
    if (min_segment < 2) {
        throw ValidationError("min_segment must be at least 2");
    }
    if (!(threshold >= 0.0)) {
        throw ValidationError("significance threshold must be non-negative");
    }
    require_length(seq);
    validate_against_catalog(seq, catalog);

    std::vector<std::size_t> accepted;
    // Half-open 0-based windows [lo, hi) still to be examined.
    std::vector<std::pair<std::size_t, std::size_t>> pending{{0, seq.size()}};
    while (!pending.empty()) {
        auto [lo, hi] = pending.back();
        pending.pop_back();
        std::size_t len = hi - lo;
        if (len < 2 * min_segment) {
            continue;
        }
        OutcomeSequence window;
        window.entries.assign(seq.entries.begin() + static_cast<std::ptrdiff_t>(lo),
                              seq.entries.begin() + static_cast<std::ptrdiff_t>(hi));
        SegmentationResult est = estimate_changepoint(window, catalog);
        if (est.no_signal || !(est.profile.argmax_value >= threshold)) {
            continue;
        }
        std::size_t k = est.estimated_changepoint;
        if (k - 1 < min_segment || len - (k - 1) < min_segment) {
            continue;
        }
        accepted.push_back(lo + k);
        pending.emplace_back(lo, lo + k - 1);
        pending.emplace_back(lo + k - 1, hi);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

void write_profile_csv(std::ostream &out, const JsdProfile &profile) {
    out << "k";
    for (const auto &label : profile.labels) {
        out << ',' << label;
    }
    out << ",jsd_max\n";
    char buf[32];
    for (std::size_t k = 2; k <= profile.n; ++k) {
        out << k;
        for (std::size_t r = 0; r < profile.labels.size(); ++r) {
            std::snprintf(buf, sizeof buf, "%.12g", profile.value(r, k));
            out << ',' << buf;
        }
        std::snprintf(buf, sizeof buf, "%.12g", profile.max_at(k));
        out << ',' << buf << '\n';
    }
}

JsdProfile read_profile_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError("empty profile CSV");
    }
    std::vector<std::string> header;
    {
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            header.push_back(cell);
        }
    }
    if (header.size() < 3 || header.front() != "k" || header.back() != "jsd_max") {
        throw ValidationError("profile CSV header must be k,<labels...>,jsd_max");
    }
    JsdProfile profile;
    profile.labels.assign(header.begin() + 1, header.end() - 1);
    profile.per_observable.resize(profile.labels.size());

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        std::vector<double> values;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            double x;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
            if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
                throw ValidationError("profile CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
            values.push_back(x);
        }
        if (values.size() != header.size()) {
            throw ValidationError("profile CSV line " + std::to_string(line_no) + ": wrong column count");
        }
        auto expected_k = static_cast<double>(profile.max_curve.size() + 2);
        if (values.front() != expected_k) {
            throw ValidationError("profile CSV line " + std::to_string(line_no) + ": rows must run k = 2, 3, ...");
        }
        for (std::size_t r = 0; r < profile.labels.size(); ++r) {
            profile.per_observable[r].push_back(values[r + 1]);
        }
        profile.max_curve.push_back(values.back());
    }
    profile.n = profile.max_curve.size() + 1;
    if (profile.max_curve.empty()) {
        throw ValidationError("profile CSV has no rows");
    }
    std::size_t best = first_argmax(profile.max_curve);
    profile.argmax_k = best + 2;
    profile.argmax_value = profile.max_curve[best];
    if (profile.argmax_value > 0.0) {
        for (std::size_t r = 0; r < profile.labels.size(); ++r) {
            if (profile.per_observable[r][best] == profile.argmax_value) {
                profile.argmax_observable = r;
                break;
            }
        }
    }
    return profile;
}

}  // namespace qgseg
