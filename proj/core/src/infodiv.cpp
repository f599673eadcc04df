#include "qgseg/infodiv.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qgseg {

namespace {

void require_same_alphabet(const ProbDist &a, const ProbDist &b) {
    if (a.size() != b.size()) {
        std::ostringstream msg;
        msg << "distributions on different alphabets (sizes " << a.size() << " and " << b.size() << ")";
        throw ValidationError(msg.str());
    }
    if (!a.alphabet_id().empty() && !b.alphabet_id().empty() && a.alphabet_id() != b.alphabet_id()) {
        throw ValidationError("distributions on different alphabets ('" + a.alphabet_id() + "' vs '" +
                              b.alphabet_id() + "')");
    }
}

inline double plogp(double p) {
    return p > 0.0 ? p * std::log(p) : 0.0;
}

}  // namespace

ProbDist::ProbDist(std::vector<double> probs, std::string alphabet_id)
    : probs_(std::move(probs)), alphabet_id_(std::move(alphabet_id)) {
    if (probs_.empty()) {
        throw ValidationError("probability vector must not be empty");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < probs_.size(); ++j) {
        double p = probs_[j];
        if (!(p >= 0.0 && p <= 1.0)) {
            std::ostringstream msg;
            msg << "probability entry " << j << " = " << p << " outside [0,1]";
            throw ValidationError(msg.str());
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kProbSumTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "probabilities sum to " << total << ", expected 1";
        throw ValidationError(msg.str());
    }
}

WeightPair::WeightPair(double pi1_, double pi2_) : pi1(pi1_), pi2(pi2_) {
    if (!(pi1 >= 0.0) || !(pi2 >= 0.0)) {
        throw ValidationError("weights must be non-negative");
    }
    if (std::abs(pi1 + pi2 - 1.0) > kWeightSumTol) {
        throw ValidationError("weights must sum to 1");
    }
}

double shannon_entropy(std::span<const double> p) {
    double h = 0.0;
    for (double x : p) {
        h -= plogp(x);
    }
    return h;
}

double shannon_entropy(const ProbDist &p) {
    return shannon_entropy(std::span<const double>(p.probs()));
}

double kl_divergence(const ProbDist &p, const ProbDist &q) {
    require_same_alphabet(p, q);
    double d = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] == 0.0) {
            continue;
        }
        if (q[j] == 0.0) {
            std::ostringstream msg;
            msg << "undefined divergence: p[" << j << "] = " << p[j] << " but q[" << j << "] = 0";
            throw UndefinedDivergence(msg.str());
        }
        d += p[j] * std::log(p[j] / q[j]);
    }
    return std::max(d, 0.0);
}

double jsd_weighted(std::span<const double> p1, std::span<const double> p2, double pi1, double pi2) {
    double mixed = 0.0;
    for (std::size_t j = 0; j < p1.size(); ++j) {
        mixed -= plogp(pi1 * p1[j] + pi2 * p2[j]);
    }
    double parts = pi1 * shannon_entropy(p1) + pi2 * shannon_entropy(p2);
    return std::max(mixed - parts, 0.0);
}

double jsd_weighted(const ProbDist &p1, const ProbDist &p2, const WeightPair &w) {
    require_same_alphabet(p1, p2);
    return jsd_weighted(p1.probs(), p2.probs(), w.pi1, w.pi2);
}

double jsd_multi(std::span<const ProbDist> dists, std::span<const double> weights) {
    if (dists.empty()) {
        throw ValidationError("jsd_multi needs at least one distribution");
    }
    if (dists.size() != weights.size()) {
        throw ValidationError("jsd_multi: one weight per distribution required");
    }
    double weight_sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw ValidationError("jsd_multi: weights must be non-negative");
        }
        weight_sum += w;
    }
    if (std::abs(weight_sum - 1.0) > kWeightSumTol) {
        throw ValidationError("jsd_multi: weights must sum to 1");
    }
    for (const auto &d : dists) {
        require_same_alphabet(dists.front(), d);
    }

    std::size_t m = dists.front().size();
    std::vector<double> mixture(m, 0.0);
    double parts = 0.0;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            mixture[j] += weights[i] * dists[i][j];
        }
        parts += weights[i] * shannon_entropy(dists[i]);
    }
    return std::max(shannon_entropy(mixture) - parts, 0.0);
}

}  // namespace qgseg
