#pragma once

#include "holekp/errors.hpp"

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace holekp {

struct AxisInterval {
    double lo = 0.0, hi = 0.0;
    double span() const { return hi - lo; }
};

struct Box3 {
    AxisInterval x, y, z;
};

struct Region {
    std::string name;
    std::vector<Box3> boxes;
};

enum class RegionId { SD, NS, OxY, OxZ };

RegionId region_from_name(const std::string& name);
const char* region_name(RegionId id);

// Channel/gate geometry. Region bounds follow the device layout: the
// source/drain slab starts just inside the gate edge, the nitride-spacer slab
// ends just inside the spacer edge, and the oxide slabs sit outside the
// channel walls. The small edge offsets reproduce the grid snapping of the
// reference device (gate edge -0.02 nm, spacer edge -0.04 nm, y-wall
// +0.04 nm).
struct DeviceGeometry {
    double gate_length_nm = 10.0;
    double width_nm = 10.0;        // sweepable
    double height_nm = 5.0;
    double spacer_nm = 3.0;
    double sd_depth_nm = 2.0;      // S/D extent beyond the spacer edge
    double oxide_y_thickness_nm = 3.36;
    double oxide_z_thickness_nm = 1.0;

    void validate() const;
    Box3 bounding_box() const;
    Region region(RegionId id) const;
};

struct ModelPotentialParams {
    double v_off_y_meV = 4600.0;
    double v_off_z_meV = 4600.0;
    double u_sd_meV = -30.0;
    double lever_arm_meV_per_V = 120.0;
    double v_threshold_V = -0.2;
    double smoothing_nm = 0.25;
    double gate_sigma_x_nm = 2.5;
    double beta_z_meV_per_nm_V = 15.0;

    void validate() const;
};

enum class Provenance { model, imported_grid, difference };

// Evaluable confinement potential U(r) in meV (hole convention: lower U
// attracts holes). Evaluators are pure functions of position and safe for
// concurrent use.
class PotentialField {
public:
    virtual ~PotentialField() = default;
    virtual double value(double x, double y, double z) const = 0;

    Provenance provenance() const { return provenance_; }
    double gate_voltage() const { return gate_voltage_; }

    // Fast path for separable fields: U = fx(x)+fy(y)+fz(z)+gx(x)*(a+b*z).
    struct SeparableParts {
        std::function<double(double)> fx, fy, fz, gx;
        double a = 0.0, b = 0.0;
    };
    virtual std::optional<SeparableParts> separable_parts() const {
        return std::nullopt;
    }

protected:
    PotentialField(Provenance p, double vg) : provenance_(p), gate_voltage_(vg) {}
    Provenance provenance_;
    double gate_voltage_;
};

using FieldPtr = std::shared_ptr<const PotentialField>;

FieldPtr model_potential(const DeviceGeometry& geom,
                         const ModelPotentialParams& params, double v_gate);

// Plain-text grid file: line 1 "NX NY NZ", line 2 "x0 dx y0 dy z0 dz" (nm),
// then NX*NY*NZ values in meV, x fastest, whitespace separated. Trilinear
// interpolation inside the box, clamped outside (with a warning counter).
FieldPtr import_grid(const std::string& path);

// δU = U(V_G + δV_G) − U(V_G). Model inputs with matching geometry/parameters
// produce the closed-form separable difference; grids with matching axes are
// subtracted node by node.
FieldPtr delta_potential(const FieldPtr& at_vg, const FieldPtr& at_vg_plus);

long grid_clamp_count(const PotentialField& field);

// Tensor Gauss-Legendre integral of a density over the region boxes.
double region_integral(
    const std::function<double(double, double, double)>& density,
    const Region& region, int order_per_axis = 24);

double logistic_step(double t);

} // namespace holekp
