#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cyclemit/core_model.hpp"

namespace cyclemit::presets {

enum class Figure { Fig2, Fig3, Fig5, Fig6a, Fig6b };

std::optional<Figure> parse_figure(std::string_view name);
std::string to_string(Figure figure);

/// gamma_a = gamma_b = 0.01, gamma_c = 100, Omega_ab = 0.5, Omega_ca = Omega_bc = 5,
/// zero detunings, splittings 1e3. Populations do not depend on the splittings
/// (only the full lab-frame model reads them).
SystemParams nonreciprocal(double phi, Topology topology = Topology::CommonLower);

/// All gamma = 1, all Omega = 0.5, zero detunings, splittings 1e3.
SystemParams chiral(double phi);

}  // namespace cyclemit::presets
