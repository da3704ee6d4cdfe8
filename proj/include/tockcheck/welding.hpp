#pragma once

#include <map>
#include <memory>
#include <string>

#include "tockcheck/assertions.hpp"
#include "tockcheck/machine.hpp"
#include "tockcheck/model.hpp"

namespace tockcheck {

struct WeldingConfig {
    IntRange core_int{0, 2};
    /// Largest waypoint index of the UR robot (waypoints are 0..n).
    int n_waypoints_ur = 3;
    int n_waypoints_exax = 1;
    int big_dist_threshold = 1;

    /// Throws std::invalid_argument when a field is outside the model's ranges.
    void validate() const;
    ModelConfig overrides() const;
};

/// True when either joint distance exceeds the threshold in magnitude.
bool check_big_dist(int d1, int d2, int threshold);

/// The IntelliWelder model (types, platform, five machines, controller and
/// the two named configurations), with `cfg` applied.
ModelFile welding_model(const WeldingConfig& cfg = {});

/// Assertions A1 to A7.
AssertionFile welding_assertions();

struct WeldingSystem {
    std::shared_ptr<Environment> env;
    ComposedSystem composed;
    /// Each machine compiled on its own, keyed by machine name.
    std::map<std::string, CompiledMachine> machines;
};

WeldingSystem build_system(const WeldingConfig& cfg = {});

}  // namespace tockcheck
