#pragma once

#include "itosup/mc_verify.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace itosup {

// Everything needed to reproduce one verification run. Every field has a
// CLI flag twin; flags win over config-file values.
struct ScenarioConfig {
    std::string scenario;

    double horizon = 1.0;
    int n_steps = 4096;
    int n_paths = 100000;
    std::uint64_t seed = 42;
    double confidence = 0.99;

    std::vector<double> x_list; // explicit grid; empty selects the auto grid
    int x_points = 12;

    std::string sigma_source = "closed-form"; // closed-form | mc-estimate
    int workers = 0;                          // 0 = hardware concurrency

    // scenario-specific parameters
    double m = 1.0;                                            // classical-constant
    double cir_a = 2.0, cir_b = 1.0, cir_sigma = 1.0, cir_x0 = 1.0; // cir
    double epsilon = 0.0;                                      // running-max-sqrt
    std::string kernel = "one";                                // double-wiener
};

// scenario names accepted by run_scenario, in registry order
const std::vector<std::string>& scenario_names();

// throws std::invalid_argument on unknown scenarios or parameter
// violations (including the Feller condition)
void validate(const ScenarioConfig& cfg);

// simulate -> estimate -> certify; fills provenance and diagnostics
ScenarioReport run_scenario(const ScenarioConfig& cfg);

// closed-form sigma_bar^2 of the registered running-max scenarios
double running_max_exp_sigma_sq(double T);    // int_0^T 2 e^{2s} Phi(2 sqrt s) ds
double running_max_square_sigma_sq(double T); // T^3
double running_max_sqrt_sigma_sq(double T, double epsilon);

} // namespace itosup
