#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qgseg/infodiv.hpp"
#include "qgseg/qmath.hpp"
#include "qgseg/seqgen.hpp"

namespace qgseg {

/// Born distributions of one catalog observable under the two schedule states.
struct ObservableContrast {
    std::string label;
    ProbDist first;
    ProbDist second;
    double l1_distance;
};

inline constexpr double kDistinguishTol = 1e-9;

/// Contrast of every catalog observable between `first` and `second`.
std::vector<ObservableContrast> contrast_catalog(const std::vector<HermitianObservable> &catalog,
                                                 const QuantumState &first, const QuantumState &second);

/// The subset whose Born distributions differ in L1 by more than kDistinguishTol.
std::vector<ObservableContrast> distinguishing_subset(const std::vector<ObservableContrast> &contrasts);

struct Scenario {
    std::string name;
    std::string short_alias;
    ObservableProgram program;
    StateSchedule schedule;
    std::size_t true_changepoint;
    std::vector<ObservableContrast> catalog_contrast;
    std::vector<ObservableContrast> distinguishing_observables;
    /// Construction notes, e.g. normalization of the printed kets.
    std::vector<std::string> notes;

    bool detectable() const {
        return !distinguishing_observables.empty();
    }
    std::vector<std::string> distinguishing_labels() const;
};

inline constexpr std::size_t kScenarioLength = 2000;
inline constexpr std::size_t kScenarioFirstSegment = 1000;

/// All scenario names in stable listing order.
const std::vector<std::string> &scenario_names();
/// Figure alias ("fig1", "fig2a", ...) of a scenario name.
std::string short_alias(std::string_view name);

/// Builds a scenario by name or figure alias. Unknown names throw
/// ValidationError listing the valid names.
Scenario build_scenario(std::string_view name);

}  // namespace qgseg
