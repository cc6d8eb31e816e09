#pragma once

#include <ostream>

#include "conenav/manifest.hpp"
#include "conenav/parallel.hpp"
#include "conenav/sim.hpp"

namespace conenav {

/// One evaluated grid cell. Masked cells (centers outside the free space)
/// carry no velocity.
struct FieldCell {
    Vec center;
    Vec velocity;
    ControlMode mode = ControlMode::Nominal;
    bool masked = false;
    double distance = 0.0;
};

struct FieldGrid {
    FieldSpec spec;
    std::vector<FieldCell> cells;  // row-major over the resolution grid
    int nx = 0;
    int ny = 0;
};

/// Evaluates the selected controller on every free cell center of a planar
/// grid. For the discontinuous kind a cell counts as "on the boundary" when
/// its center is within half a cell diagonal of it (grid snap).
FieldGrid export_field(const Environment& env, const ControllerConfig& cfg, const FieldSpec& spec,
                       ControllerKind kind, Exec exec = Exec::Parallel);

void write_field_csv(const FieldGrid& grid, std::ostream& out);

/// Quiver plot with the inner/outer margin bands shaded per cell tint.
void write_field_svg(const FieldGrid& grid, const ControllerConfig& cfg, std::ostream& out);

}  // namespace conenav
