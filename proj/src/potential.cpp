#include "holekp/potential.hpp"
#include "holekp/quadrature.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace holekp {

double logistic_step(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

RegionId region_from_name(const std::string& name) {
    if (name == "R_SD" || name == "sd") return RegionId::SD;
    if (name == "R_NS" || name == "ns") return RegionId::NS;
    if (name == "R_Ox_y" || name == "oxide_y") return RegionId::OxY;
    if (name == "R_Ox_z" || name == "oxide_z") return RegionId::OxZ;
    throw InvalidParameter("unknown region id: " + name);
}

const char* region_name(RegionId id) {
    switch (id) {
        case RegionId::SD: return "R_SD";
        case RegionId::NS: return "R_NS";
        case RegionId::OxY: return "R_Ox_y";
        case RegionId::OxZ: return "R_Ox_z";
    }
    return "?";
}

void DeviceGeometry::validate() const {
    if (gate_length_nm <= 0 || width_nm <= 0 || height_nm <= 0 ||
        spacer_nm <= 0 || sd_depth_nm <= 0 || oxide_y_thickness_nm <= 0 ||
        oxide_z_thickness_nm <= 0)
        throw InvalidParameter("DeviceGeometry: all lengths must be > 0");
}

Box3 DeviceGeometry::bounding_box() const {
    const double xb = gate_length_nm / 2 + spacer_nm + sd_depth_nm;
    const double yb = width_nm / 2 + 0.04 + oxide_y_thickness_nm;
    const double zb = height_nm / 2 + oxide_z_thickness_nm;
    return {{-xb, xb}, {-yb, yb}, {-zb, zb}};
}

Region DeviceGeometry::region(RegionId id) const {
    validate();
    const Box3 box = bounding_box();
    auto mirrored_x = [&](double lo, double hi) {
        Region r;
        r.boxes.push_back({{lo, hi}, box.y, box.z});
        r.boxes.push_back({{-hi, -lo}, box.y, box.z});
        return r;
    };
    auto mirrored_y = [&](double lo, double hi) {
        Region r;
        r.boxes.push_back({box.x, {lo, hi}, box.z});
        r.boxes.push_back({box.x, {-hi, -lo}, box.z});
        return r;
    };
    auto mirrored_z = [&](double lo, double hi) {
        Region r;
        r.boxes.push_back({box.x, box.y, {lo, hi}});
        r.boxes.push_back({box.x, box.y, {-hi, -lo}});
        return r;
    };

    Region r;
    switch (id) {
        case RegionId::SD:
            r = mirrored_x(gate_length_nm / 2 - 0.02, box.x.hi);
            break;
        case RegionId::NS:
            r = mirrored_x(gate_length_nm / 2 - 0.02,
                           gate_length_nm / 2 + spacer_nm - 0.04);
            break;
        case RegionId::OxY:
            r = mirrored_y(width_nm / 2 + 0.04, box.y.hi);
            break;
        case RegionId::OxZ:
            r = mirrored_z(height_nm / 2, box.z.hi);
            break;
    }
    r.name = region_name(id);
    return r;
}

void ModelPotentialParams::validate() const {
    if (v_off_y_meV <= 0 || v_off_z_meV <= 0)
        throw InvalidParameter("ModelPotentialParams: oxide offsets must be > 0");
    if (smoothing_nm <= 0)
        throw InvalidParameter("ModelPotentialParams: smoothing length must be > 0");
    if (gate_sigma_x_nm <= 0)
        throw InvalidParameter("ModelPotentialParams: gate sigma_x must be > 0");
}

namespace {

class ModelPotential final : public PotentialField {
public:
    ModelPotential(const DeviceGeometry& g, const ModelPotentialParams& p,
                   double vg)
        : PotentialField(Provenance::model, vg), geom_(g), par_(p) {
        g.validate();
        p.validate();
        dv_ = vg - p.v_threshold_V;
    }

    double value(double x, double y, double z) const override {
        return fx(x) + fy(y) + fz(z) + gate(x) * (a() + b() * z);
    }

    std::optional<SeparableParts> separable_parts() const override {
        SeparableParts s;
        s.fx = [this](double x) { return fx(x); };
        s.fy = [this](double y) { return fy(y); };
        s.fz = [this](double z) { return fz(z); };
        s.gx = [this](double x) { return gate(x); };
        s.a = a();
        s.b = b();
        return s;
    }

    const DeviceGeometry& geometry() const { return geom_; }
    const ModelPotentialParams& params() const { return par_; }

    double fx(double x) const {
        const double edge = geom_.gate_length_nm / 2 + geom_.spacer_nm;
        return par_.u_sd_meV *
               logistic_step((std::abs(x) - edge) / par_.smoothing_nm);
    }
    double fy(double y) const {
        return par_.v_off_y_meV *
               logistic_step((std::abs(y) - geom_.width_nm / 2) / par_.smoothing_nm);
    }
    double fz(double z) const {
        return par_.v_off_z_meV *
               logistic_step((std::abs(z) - geom_.height_nm / 2) / par_.smoothing_nm);
    }
    double gate(double x) const {
        const double s = par_.gate_sigma_x_nm;
        return std::exp(-x * x / (2.0 * s * s));
    }
    double a() const { return par_.lever_arm_meV_per_V * dv_; }
    double b() const { return par_.beta_z_meV_per_nm_V * dv_; }

private:
    DeviceGeometry geom_;
    ModelPotentialParams par_;
    double dv_;
};

// Closed-form difference of two model fields sharing geometry/parameters.
class ModelDelta final : public PotentialField {
public:
    ModelDelta(const ModelPotential& base, const ModelPotential& plus)
        : PotentialField(Provenance::difference, base.gate_voltage()),
          par_(base.params()),
          sigma_(base.params().gate_sigma_x_nm),
          dvg_(plus.gate_voltage() - base.gate_voltage()) {}

    double value(double x, double y, double z) const override {
        (void)y;
        return gate(x) * (a() + b() * z);
    }
    std::optional<SeparableParts> separable_parts() const override {
        SeparableParts s;
        auto zero = [](double) { return 0.0; };
        s.fx = zero;
        s.fy = zero;
        s.fz = zero;
        s.gx = [this](double x) { return gate(x); };
        s.a = a();
        s.b = b();
        return s;
    }

private:
    double gate(double x) const {
        return std::exp(-x * x / (2.0 * sigma_ * sigma_));
    }
    double a() const { return par_.lever_arm_meV_per_V * dvg_; }
    double b() const { return par_.beta_z_meV_per_nm_V * dvg_; }

    ModelPotentialParams par_;
    double sigma_;
    double dvg_;
};

struct GridAxes {
    int nx = 0, ny = 0, nz = 0;
    double x0 = 0, dx = 0, y0 = 0, dy = 0, z0 = 0, dz = 0;
    bool operator==(const GridAxes&) const = default;
};

class GridPotential final : public PotentialField {
public:
    GridPotential(GridAxes axes, std::vector<double> values, double vg,
                  Provenance prov = Provenance::imported_grid)
        : PotentialField(prov, vg), ax_(axes), v_(std::move(values)) {}

    double value(double x, double y, double z) const override {
        double fx = (x - ax_.x0) / ax_.dx;
        double fy = (y - ax_.y0) / ax_.dy;
        double fz = (z - ax_.z0) / ax_.dz;
        bool clamped = false;
        auto clamp = [&](double f, int n) {
            if (f < 0.0) { clamped = true; return 0.0; }
            if (f > n - 1.0) { clamped = true; return n - 1.0; }
            return f;
        };
        fx = clamp(fx, ax_.nx);
        fy = clamp(fy, ax_.ny);
        fz = clamp(fz, ax_.nz);
        if (clamped) ++clamp_count_;

        const int ix = std::min(static_cast<int>(fx), ax_.nx - 2);
        const int iy = std::min(static_cast<int>(fy), ax_.ny - 2);
        const int iz = std::min(static_cast<int>(fz), ax_.nz - 2);
        const double tx = fx - ix, ty = fy - iy, tz = fz - iz;

        auto at = [&](int i, int j, int k) {
            return v_[(static_cast<size_t>(k) * ax_.ny + j) * ax_.nx + i];
        };
        double c = 0.0;
        for (int d = 0; d < 8; ++d) {
            const int i = ix + (d & 1), j = iy + ((d >> 1) & 1),
                      k = iz + ((d >> 2) & 1);
            const double wx = (d & 1) ? tx : 1.0 - tx;
            const double wy = ((d >> 1) & 1) ? ty : 1.0 - ty;
            const double wz = ((d >> 2) & 1) ? tz : 1.0 - tz;
            c += wx * wy * wz * at(i, j, k);
        }
        return c;
    }

    const GridAxes& axes() const { return ax_; }
    const std::vector<double>& values() const { return v_; }
    long clamp_count() const { return clamp_count_.load(); }

private:
    GridAxes ax_;
    std::vector<double> v_;
    mutable std::atomic<long> clamp_count_{0};
};

// Whitespace tokenizer that remembers byte offsets for parse errors.
class TokenReader {
public:
    TokenReader(std::string text, std::string path)
        : text_(std::move(text)), path_(std::move(path)) {}

    double next_double(const char* what, long record) {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError(path_ + ": unexpected end of file while reading " +
                             std::string(what) + " (record " +
                             std::to_string(record) + ", byte offset " +
                             std::to_string(pos_) + ")");
        const char* start = text_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start)
            throw ParseError(path_ + ": malformed " + std::string(what) +
                             " at byte offset " + std::to_string(pos_));
        pos_ += static_cast<size_t>(end - start);
        return v;
    }

    long next_int(const char* what) {
        const double v = next_double(what, -1);
        const long i = static_cast<long>(v);
        if (static_cast<double>(i) != v)
            throw ParseError(path_ + ": expected integer for " +
                             std::string(what));
        return i;
    }

    size_t offset() const { return pos_; }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    std::string text_;
    std::string path_;
    size_t pos_ = 0;
};

} // namespace

FieldPtr model_potential(const DeviceGeometry& geom,
                         const ModelPotentialParams& params, double v_gate) {
    return std::make_shared<ModelPotential>(geom, params, v_gate);
}

FieldPtr import_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open grid file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    TokenReader tok(ss.str(), path);

    GridAxes ax;
    ax.nx = static_cast<int>(tok.next_int("NX"));
    ax.ny = static_cast<int>(tok.next_int("NY"));
    ax.nz = static_cast<int>(tok.next_int("NZ"));
    if (ax.nx < 2 || ax.ny < 2 || ax.nz < 2)
        throw ParseError(path + ": grid must have at least 2 nodes per axis");
    ax.x0 = tok.next_double("x0", -1);
    ax.dx = tok.next_double("dx", -1);
    ax.y0 = tok.next_double("y0", -1);
    ax.dy = tok.next_double("dy", -1);
    ax.z0 = tok.next_double("z0", -1);
    ax.dz = tok.next_double("dz", -1);
    if (!(ax.dx > 0.0) || !(ax.dy > 0.0) || !(ax.dz > 0.0))
        throw ParseError(path + ": axes must be strictly increasing (dx,dy,dz > 0)");

    const long total = static_cast<long>(ax.nx) * ax.ny * ax.nz;
    std::vector<double> values(total);
    for (long r = 0; r < total; ++r) {
        const double v = tok.next_double("grid value", r);
        if (std::isnan(v))
            throw ParseError(path + ": NaN value at record " + std::to_string(r) +
                             " (byte offset " + std::to_string(tok.offset()) + ")");
        values[r] = v;
    }
    return std::make_shared<GridPotential>(ax, std::move(values), 0.0);
}

FieldPtr delta_potential(const FieldPtr& at_vg, const FieldPtr& at_vg_plus) {
    if (!at_vg || !at_vg_plus)
        throw InvalidParameter("delta_potential: null field");
    const auto* m0 = dynamic_cast<const ModelPotential*>(at_vg.get());
    const auto* m1 = dynamic_cast<const ModelPotential*>(at_vg_plus.get());
    if (m0 && m1) {
        const auto& g0 = m0->geometry();
        const auto& g1 = m1->geometry();
        const bool same_geom = g0.gate_length_nm == g1.gate_length_nm &&
                               g0.width_nm == g1.width_nm &&
                               g0.height_nm == g1.height_nm &&
                               g0.spacer_nm == g1.spacer_nm;
        const auto& p0 = m0->params();
        const auto& p1 = m1->params();
        const bool same_par =
            p0.v_off_y_meV == p1.v_off_y_meV && p0.v_off_z_meV == p1.v_off_z_meV &&
            p0.u_sd_meV == p1.u_sd_meV &&
            p0.lever_arm_meV_per_V == p1.lever_arm_meV_per_V &&
            p0.v_threshold_V == p1.v_threshold_V &&
            p0.smoothing_nm == p1.smoothing_nm &&
            p0.gate_sigma_x_nm == p1.gate_sigma_x_nm &&
            p0.beta_z_meV_per_nm_V == p1.beta_z_meV_per_nm_V;
        if (!same_geom || !same_par)
            throw IncompatibleFields(
                "delta_potential: model fields differ in geometry/parameters");
        return std::make_shared<ModelDelta>(*m0, *m1);
    }
    const auto* g0 = dynamic_cast<const GridPotential*>(at_vg.get());
    const auto* g1 = dynamic_cast<const GridPotential*>(at_vg_plus.get());
    if (g0 && g1) {
        if (!(g0->axes() == g1->axes()))
            throw IncompatibleFields("delta_potential: grid axes differ");
        std::vector<double> diff(g0->values().size());
        for (size_t i = 0; i < diff.size(); ++i)
            diff[i] = g1->values()[i] - g0->values()[i];
        return std::make_shared<GridPotential>(g0->axes(), std::move(diff),
                                               g0->gate_voltage(),
                                               Provenance::difference);
    }
    throw IncompatibleFields(
        "delta_potential: fields must share provenance (model/model or grid/grid)");
}

long grid_clamp_count(const PotentialField& field) {
    if (const auto* g = dynamic_cast<const GridPotential*>(&field))
        return g->clamp_count();
    return 0;
}

double region_integral(
    const std::function<double(double, double, double)>& density,
    const Region& region, int order_per_axis) {
    if (order_per_axis < 2)
        throw InvalidParameter("region_integral: quadrature order too small");
    const quad::Rule rule = quad::gauss_legendre(order_per_axis);
    const int n = order_per_axis;

    double total = 0.0;
    for (const Box3& b : region.boxes) {
        const double cx = 0.5 * (b.x.lo + b.x.hi), hx = 0.5 * b.x.span();
        const double cy = 0.5 * (b.y.lo + b.y.hi), hy = 0.5 * b.y.span();
        const double cz = 0.5 * (b.z.lo + b.z.hi), hz = 0.5 * b.z.span();
        double box_sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double x = cx + hx * rule.nodes[i];
            for (int j = 0; j < n; ++j) {
                const double y = cy + hy * rule.nodes[j];
                double row = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double z = cz + hz * rule.nodes[k];
                    row += rule.weights[k] * density(x, y, z);
                }
                box_sum += rule.weights[i] * rule.weights[j] * row;
            }
        }
        total += box_sum * hx * hy * hz;
    }
    return total;
}

} // namespace holekp
