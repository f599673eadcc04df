#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qgseg/infodiv.hpp"
#include "qgseg/qmath.hpp"

namespace qgseg {

/// Outcome alphabet of one catalog entry: the label and the outcome values
/// (eigenvalues for observables, symbol codes for classical sequences).
struct OutcomeAlphabet {
    std::string label;
    std::vector<double> values;

    bool operator==(const OutcomeAlphabet &) const = default;
};

/// Catalog of observables plus the index pattern r_1..r_n.
struct ObservableProgram {
    std::vector<HermitianObservable> catalog;
    std::vector<std::uint32_t> pattern;

    /// Pattern i -> i mod |catalog|, ending mid-cycle when n is not a multiple.
    static ObservableProgram cyclic(std::vector<HermitianObservable> catalog, std::size_t n);

    std::size_t size() const {
        return pattern.size();
    }
    std::vector<OutcomeAlphabet> alphabets() const;
    /// Throws ValidationError on an empty catalog, n < 2, a bad index, or
    /// observables of mixed dimension.
    void validate() const;
};

struct ScheduleSegment {
    QuantumState state;
    std::size_t length;
};

/// Piecewise-constant sequence of states.
struct StateSchedule {
    std::vector<ScheduleSegment> segments;

    /// Two segments (first, l1) and (second, n - l1); requires 1 <= l1 < n.
    static StateSchedule single_change(QuantumState first, QuantumState second, std::size_t n, std::size_t l1);

    std::size_t total_length() const;
    /// 1-based start positions of segments 2..S (the changing indices).
    std::vector<std::size_t> changing_indices() const;
    void validate() const;
};

struct OutcomeEntry {
    std::uint32_t observable;
    std::uint32_t outcome;

    bool operator==(const OutcomeEntry &) const = default;
};

struct OutcomeSequence {
    std::vector<OutcomeEntry> entries;
    std::uint64_t seed = 0;
    std::string spec_digest;

    std::size_t size() const {
        return entries.size();
    }
    bool operator==(const OutcomeSequence &) const = default;
};

/// Deterministic 64-bit-seeded source of uniform variates in [0,1).
/// Each call to uniform() consumes exactly one engine output.
class MeasurementRng {
   public:
    explicit MeasurementRng(std::uint64_t seed) : engine_(seed) {
    }
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

   private:
    std::mt19937_64 engine_;
};

/// Inverse-CDF lookup in alphabet order for a uniform variate u in [0,1).
std::uint32_t sample_index(const ProbDist &dist, double u);

/// Draws one measurement outcome from born_distribution(state, obs).
std::uint32_t sample_outcome(const QuantumState &state, const HermitianObservable &obs, MeasurementRng &rng);

/// Measures program.pattern[i] on the state active at position i, one
/// variate per position.
OutcomeSequence generate_quantum_sequence(const ObservableProgram &program, const StateSchedule &schedule,
                                          std::uint64_t seed);

/// Independent draws from each (distribution, length) segment in turn; all
/// entries are tagged with observable index 0.
OutcomeSequence generate_classical_sequence(std::span<const std::pair<ProbDist, std::size_t>> segments,
                                            std::uint64_t seed);

/// Single-entry catalog "S" with symbols 0..m-1, for classical sequences.
std::vector<OutcomeAlphabet> classical_alphabet(std::size_t symbol_count, std::string label = "S");

/// Stable hex identifier of a program/schedule pair.
std::string spec_digest(const ObservableProgram &program, const StateSchedule &schedule);

}  // namespace qgseg
