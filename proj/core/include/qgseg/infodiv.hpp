#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qgseg/errors.hpp"

namespace qgseg {

inline constexpr double kProbSumTol = 1e-9;
inline constexpr double kWeightSumTol = 1e-12;

/// Finite probability vector over an outcome alphabet. `alphabet_id` ties the
/// vector to the alphabet it was estimated on; an empty id matches anything.
class ProbDist {
   public:
    ProbDist() = default;
    /// Throws ValidationError unless every entry is in [0,1] and the entries
    /// sum to 1 within kProbSumTol.
    explicit ProbDist(std::vector<double> probs, std::string alphabet_id = {});

    const std::vector<double> &probs() const {
        return probs_;
    }
    const std::string &alphabet_id() const {
        return alphabet_id_;
    }
    std::size_t size() const {
        return probs_.size();
    }
    double operator[](std::size_t j) const {
        return probs_[j];
    }

    bool operator==(const ProbDist &) const = default;

   private:
    std::vector<double> probs_;
    std::string alphabet_id_;
};

struct WeightPair {
    double pi1;
    double pi2;

    /// Throws ValidationError unless both weights are non-negative and sum to
    /// 1 within kWeightSumTol.
    WeightPair(double pi1, double pi2);
};

/// Shannon entropy in nats, with 0 ln 0 = 0.
double shannon_entropy(const ProbDist &p);
double shannon_entropy(std::span<const double> p);

/// sum_j p_j ln(p_j / q_j). Throws UndefinedDivergence when some p_j > 0 has q_j = 0.
double kl_divergence(const ProbDist &p, const ProbDist &q);

/// Weighted Jensen-Shannon divergence, H(pi1 p1 + pi2 p2) - (pi1 H(p1) + pi2 H(p2)).
/// Exactly symmetric under swapping (p1, pi1) with (p2, pi2). Clamped at 0.
double jsd_weighted(const ProbDist &p1, const ProbDist &p2, const WeightPair &w);

/// Same as above on raw probability vectors of equal length. No validation;
/// this is the kernel the segmentation scan calls per cursor.
double jsd_weighted(std::span<const double> p1, std::span<const double> p2, double pi1, double pi2);

/// Jensen-Shannon divergence of m distributions, H(sum pi_i P^i) - sum pi_i H(P^i).
double jsd_multi(std::span<const ProbDist> dists, std::span<const double> weights);

}  // namespace qgseg
