#include "cyclemit/presets.hpp"

namespace cyclemit::presets {

std::optional<Figure> parse_figure(std::string_view name) {
  if (name == "fig2") return Figure::Fig2;
  if (name == "fig3") return Figure::Fig3;
  if (name == "fig5") return Figure::Fig5;
  if (name == "fig6a") return Figure::Fig6a;
  if (name == "fig6b") return Figure::Fig6b;
  return std::nullopt;
}

std::string to_string(Figure figure) {
  switch (figure) {
    case Figure::Fig2: return "fig2";
    case Figure::Fig3: return "fig3";
    case Figure::Fig5: return "fig5";
    case Figure::Fig6a: return "fig6a";
    case Figure::Fig6b: return "fig6b";
  }
  return "unknown";
}

SystemParams nonreciprocal(double phi, Topology topology) {
  SystemParams p;
  p.gamma_a = 0.01;
  p.gamma_b = 0.01;
  p.gamma_c = 100.0;
  p.omega_ab_rabi = 0.5;
  p.omega_bc_rabi = 5.0;
  p.omega_ca_rabi = 5.0;
  p.phi = phi;
  p.omega_ab_split = 1.0e3;
  p.omega_ca_split = 1.0e3;
  p.topology = topology;
  return p;
}

SystemParams chiral(double phi) {
  SystemParams p;
  p.gamma_a = p.gamma_b = p.gamma_c = 1.0;
  p.omega_ab_rabi = p.omega_bc_rabi = p.omega_ca_rabi = 0.5;
  p.phi = phi;
  p.omega_ab_split = 1.0e3;
  p.omega_ca_split = 1.0e3;
  return p;
}

}  // namespace cyclemit::presets
