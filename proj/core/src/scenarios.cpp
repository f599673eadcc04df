#include "qgseg/scenarios.hpp"

#include <array>
#include <cmath>

namespace qgseg {

namespace {

using namespace std::complex_literals;

struct Entry {
    std::string_view name;
    std::string_view alias;
    std::string_view observables;  // space-separated observable strings
    std::string_view states;       // "pure", "mixed" or "two_qubit"
};

constexpr std::array<Entry, 21> kEntries{{
    {"q1_xyz_pure", "fig1", "X Y Z", "pure"},
    {"q1_x_pure", "fig2a", "X", "pure"},
    {"q1_y_pure", "fig2b", "Y", "pure"},
    {"q1_z_pure", "fig2c", "Z", "pure"},
    {"q1_xy_pure", "fig2d", "X Y", "pure"},
    {"q1_xz_pure", "fig2e", "X Z", "pure"},
    {"q1_yz_pure", "fig2f", "Y Z", "pure"},
    {"q1_xyz_mixed", "fig3", "X Y Z", "mixed"},
    {"q1_x_mixed", "fig4a", "X", "mixed"},
    {"q1_y_mixed", "fig4b", "Y", "mixed"},
    {"q1_z_mixed", "fig4c", "Z", "mixed"},
    {"q1_xy_mixed", "fig4d", "X Y", "mixed"},
    {"q1_xz_mixed", "fig4e", "X Z", "mixed"},
    {"q1_yz_mixed", "fig4f", "Y Z", "mixed"},
    {"q2_xxyyzz", "fig5", "X*X Y*Y Z*Z", "two_qubit"},
    {"q2_xx", "fig6a", "X*X", "two_qubit"},
    {"q2_xy", "fig6b", "X*Y", "two_qubit"},
    {"q2_xz", "fig6c", "X*Z", "two_qubit"},
    {"q2_yy", "fig6d", "Y*Y", "two_qubit"},
    {"q2_yz", "fig6e", "Y*Z", "two_qubit"},
    {"q2_zz", "fig6f", "Z*Z", "two_qubit"},
}};

const Entry *find_entry(std::string_view name) {
    for (const auto &e : kEntries) {
        if (e.name == name || e.alias == name) {
            return &e;
        }
    }
    return nullptr;
}

std::pair<QuantumState, QuantumState> state_pair(std::string_view kind, std::vector<std::string> &notes) {
    if (kind == "pure") {
        // Kets as printed: squared norms 5/3 and 65/9, normalized here.
        const std::array<Complex, 2> psi1{1.0 / std::sqrt(3.0), 2.0i / std::sqrt(3.0)};
        const std::array<Complex, 2> psi2{1.0 / std::sqrt(9.0), 8.0i / std::sqrt(9.0)};
        std::vector<std::string> warnings;
        QuantumState first = pure_to_density(psi1, true, &warnings);
        QuantumState second = pure_to_density(psi2, true, &warnings);
        for (auto &w : warnings) {
            notes.push_back(std::move(w));
        }
        return {first, second};
    }
    if (kind == "mixed") {
        const std::array<Complex, 2> zero{1.0, 0.0};
        return {pure_to_density(zero), QuantumState(ComplexMatrix::identity(2).scaled(0.5))};
    }
    const std::array<Complex, 4> ket00{1.0, 0.0, 0.0, 0.0};
    const double h = 1.0 / std::sqrt(2.0);
    const std::array<Complex, 4> bell{h, 0.0, 0.0, h};
    return {pure_to_density(ket00), pure_to_density(bell)};
}

}  // namespace

std::vector<ObservableContrast> contrast_catalog(const std::vector<HermitianObservable> &catalog,
                                                 const QuantumState &first, const QuantumState &second) {
    std::vector<ObservableContrast> out;
    for (const auto &obs : catalog) {
        ProbDist p = born_distribution(first, obs);
        ProbDist q = born_distribution(second, obs);
        double l1 = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            l1 += std::abs(p[j] - q[j]);
        }
        out.push_back({obs.label(), std::move(p), std::move(q), l1});
    }
    return out;
}

std::vector<ObservableContrast> distinguishing_subset(const std::vector<ObservableContrast> &contrasts) {
    std::vector<ObservableContrast> out;
    for (const auto &c : contrasts) {
        if (c.l1_distance > kDistinguishTol) {
            out.push_back(c);
        }
    }
    return out;
}

std::vector<std::string> Scenario::distinguishing_labels() const {
    std::vector<std::string> labels;
    for (const auto &c : distinguishing_observables) {
        labels.push_back(c.label);
    }
    return labels;
}

const std::vector<std::string> &scenario_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &e : kEntries) {
            v.emplace_back(e.name);
        }
        return v;
    }();
    return names;
}

std::string short_alias(std::string_view name) {
    const Entry *e = find_entry(name);
    if (e == nullptr) {
        throw ValidationError("unknown scenario '" + std::string(name) + "'");
    }
    return std::string(e->alias);
}

Scenario build_scenario(std::string_view name) {
    const Entry *e = find_entry(name);
    if (e == nullptr) {
        std::string msg = "unknown scenario '" + std::string(name) + "'; valid names:";
        for (const auto &n : scenario_names()) {
            msg += " " + n;
        }
        throw ValidationError(msg);
    }

    std::vector<HermitianObservable> catalog;
    std::string_view rest = e->observables;
    while (!rest.empty()) {
        std::size_t space = rest.find(' ');
        catalog.push_back(parse_observable(rest.substr(0, space)));
        rest = space == std::string_view::npos ? std::string_view{} : rest.substr(space + 1);
    }

    std::vector<std::string> notes;
    auto [first, second] = state_pair(e->states, notes);
    auto contrast = contrast_catalog(catalog, first, second);
    auto distinguishing = distinguishing_subset(contrast);

    return Scenario{
        std::string(e->name),
        std::string(e->alias),
        ObservableProgram::cyclic(std::move(catalog), kScenarioLength),
        StateSchedule::single_change(std::move(first), std::move(second), kScenarioLength, kScenarioFirstSegment),
        kScenarioFirstSegment + 1,
        std::move(contrast),
        std::move(distinguishing),
        std::move(notes),
    };
}

}  // namespace qgseg
