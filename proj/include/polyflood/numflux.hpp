#ifndef POLYFLOOD_NUMFLUX_HPP_
#define POLYFLOOD_NUMFLUX_HPP_

#include <string>

#include "polyflood/physics.hpp"
#include "polyflood/riemann.hpp"

namespace polyflood {

enum class FluxKind { Dflu, Godunov, Upstream };

FluxKind parse_flux_kind(const std::string& name);
std::string to_string(FluxKind kind);

struct InterfaceInput {
  State left;
  State right;
  FluxContext ctx_left;
  FluxContext ctx_right;
};

InterfaceFlux dflu(const InterfaceInput& in, const PhysicsModel& model);

// mu_w and the DFLU argmin for one side of one face, reused while c and the
// context match bitwise; the result is identical to recomputing.
struct DfluSideMemo {
  Conc c{};
  FluxContext ctx{};
  double mu_w = 0.0;
  double theta = 0.0;
  bool valid = false;
};

InterfaceFlux dflu(const InterfaceInput& in, const PhysicsModel& model, DfluSideMemo& left,
                   DfluSideMemo& right);
InterfaceFlux godunov(const InterfaceInput& in, const PhysicsModel& model);
InterfaceFlux upstream_mobility(const InterfaceInput& in, const PhysicsModel& model);

InterfaceFlux interface_flux(FluxKind kind, const InterfaceInput& in, const PhysicsModel& model);

// G_l = c_l * F with c taken from the side carried by F; all zero when F == 0.
void concentration_flux(const InterfaceInput& in, const InterfaceFlux& flux, int m, double* G);

}  // namespace polyflood

#endif  // POLYFLOOD_NUMFLUX_HPP_
