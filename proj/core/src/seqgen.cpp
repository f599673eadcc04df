#include "qgseg/seqgen.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace qgseg {

namespace {

class Fnv1a {
   public:
    void add(std::string_view bytes) {
        for (unsigned char ch : bytes) {
            hash_ ^= ch;
            hash_ *= 0x100000001b3ULL;
        }
    }
    void add(double x) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, x);
        add(std::string_view(buf, res.ptr - buf));
        add(";");
    }
    void add(std::uint64_t x) {
        add(static_cast<double>(x));
    }
    void add(const ComplexMatrix &m) {
        for (Complex z : m.data()) {
            add(z.real());
            add(z.imag());
        }
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
        return buf;
    }

   private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

ObservableProgram ObservableProgram::cyclic(std::vector<HermitianObservable> catalog, std::size_t n) {
    if (catalog.empty()) {
        throw ValidationError("observable catalog must not be empty");
    }
    ObservableProgram program{std::move(catalog), {}};
    program.pattern.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        program.pattern[i] = static_cast<std::uint32_t>(i % program.catalog.size());
    }
    return program;
}

std::vector<OutcomeAlphabet> ObservableProgram::alphabets() const {
    std::vector<OutcomeAlphabet> out;
    out.reserve(catalog.size());
    for (const auto &obs : catalog) {
        out.push_back({obs.label(), obs.alphabet()});
    }
    return out;
}

void ObservableProgram::validate() const {
    if (catalog.empty()) {
        throw ValidationError("observable catalog must not be empty");
    }
    if (pattern.size() < 2) {
        throw ValidationError("n ≥ 2 required");
    }
    for (const auto &obs : catalog) {
        if (obs.dim() != catalog.front().dim()) {
            throw ValidationError("catalog observables act on different Hilbert space dimensions");
        }
    }
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] >= catalog.size()) {
            std::ostringstream msg;
            msg << "pattern entry " << i + 1 << " refers to observable " << pattern[i] << " but the catalog has "
                << catalog.size();
            throw ValidationError(msg.str());
        }
    }
}

StateSchedule StateSchedule::single_change(QuantumState first, QuantumState second, std::size_t n,
                                           std::size_t l1) {
    if (l1 < 1 || l1 >= n) {
        throw ValidationError("single changepoint schedule requires 1 <= l1 < n");
    }
    StateSchedule s;
    s.segments.push_back({std::move(first), l1});
    s.segments.push_back({std::move(second), n - l1});
    return s;
}

std::size_t StateSchedule::total_length() const {
    std::size_t n = 0;
    for (const auto &seg : segments) {
        n += seg.length;
    }
    return n;
}

std::vector<std::size_t> StateSchedule::changing_indices() const {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    for (std::size_t s = 0; s + 1 < segments.size(); ++s) {
        pos += segments[s].length;
        out.push_back(pos + 1);
    }
    return out;
}

void StateSchedule::validate() const {
    if (segments.empty()) {
        throw ValidationError("state schedule must have at least one segment");
    }
    for (const auto &seg : segments) {
        if (seg.length == 0) {
            throw ValidationError("schedule segment lengths must be positive");
        }
        if (seg.state.dim() != segments.front().state.dim()) {
            throw ValidationError("schedule states have different dimensions");
        }
    }
}

std::uint32_t sample_index(const ProbDist &dist, double u) {
    double cumulative = 0.0;
    for (std::size_t j = 0; j < dist.size(); ++j) {
        cumulative += dist[j];
        if (u < cumulative) {
            return static_cast<std::uint32_t>(j);
        }
    }
    // u landed in the rounding gap above the last partial sum: take the last
    // outcome with positive probability.
    for (std::size_t j = dist.size(); j-- > 0;) {
        if (dist[j] > 0.0) {
            return static_cast<std::uint32_t>(j);
        }
    }
    return 0;
}

std::uint32_t sample_outcome(const QuantumState &state, const HermitianObservable &obs, MeasurementRng &rng) {
    ProbDist dist = born_distribution(state, obs);
    return sample_index(dist, rng.uniform());
}

OutcomeSequence generate_quantum_sequence(const ObservableProgram &program, const StateSchedule &schedule,
                                          std::uint64_t seed) {
    program.validate();
    schedule.validate();
    if (schedule.total_length() != program.size()) {
        std::ostringstream msg;
        msg << "schedule covers " << schedule.total_length() << " positions but the program has " << program.size();
        throw ValidationError(msg.str());
    }
    if (schedule.segments.front().state.dim() != program.catalog.front().dim()) {
        throw ValidationError("state and observable dimensions differ");
    }

    // Born distributions per (segment, observable); identical to what
    // sample_outcome computes for each draw.
    std::vector<std::vector<ProbDist>> born(schedule.segments.size());
    for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
        for (const auto &obs : program.catalog) {
            born[s].push_back(born_distribution(schedule.segments[s].state, obs));
        }
    }

    OutcomeSequence seq;
    seq.seed = seed;
    seq.spec_digest = spec_digest(program, schedule);
    seq.entries.reserve(program.size());
    MeasurementRng rng(seed);
    std::size_t i = 0;
    for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
        for (std::size_t t = 0; t < schedule.segments[s].length; ++t, ++i) {
            std::uint32_t r = program.pattern[i];
            seq.entries.push_back({r, sample_index(born[s][r], rng.uniform())});
        }
    }
    return seq;
}

OutcomeSequence generate_classical_sequence(std::span<const std::pair<ProbDist, std::size_t>> segments,
                                            std::uint64_t seed) {
    if (segments.empty()) {
        throw ValidationError("classical generation needs at least one segment");
    }
    Fnv1a digest;
    digest.add("classical;");
    for (const auto &[dist, length] : segments) {
        if (dist.size() != segments.front().first.size()) {
            throw ValidationError("classical segments use different alphabets");
        }
        for (double p : dist.probs()) {
            digest.add(p);
        }
        digest.add(static_cast<std::uint64_t>(length));
    }

    OutcomeSequence seq;
    seq.seed = seed;
    seq.spec_digest = digest.hex();
    MeasurementRng rng(seed);
    for (const auto &[dist, length] : segments) {
        for (std::size_t t = 0; t < length; ++t) {
            seq.entries.push_back({0, sample_index(dist, rng.uniform())});
        }
    }
    return seq;
}

std::vector<OutcomeAlphabet> classical_alphabet(std::size_t symbol_count, std::string label) {
    OutcomeAlphabet a{std::move(label), {}};
    for (std::size_t j = 0; j < symbol_count; ++j) {
        a.values.push_back(static_cast<double>(j));
    }
    return {a};
}

std::string spec_digest(const ObservableProgram &program, const StateSchedule &schedule) {
    Fnv1a digest;
    digest.add("quantum;");
    for (const auto &obs : program.catalog) {
        digest.add(obs.label());
        digest.add(obs.matrix());
    }
    for (std::uint32_t r : program.pattern) {
        digest.add(static_cast<std::uint64_t>(r));
    }
    for (const auto &seg : schedule.segments) {
        digest.add(seg.state.rho());
        digest.add(static_cast<std::uint64_t>(seg.length));
    }
    return digest.hex();
}

}  // namespace qgseg
