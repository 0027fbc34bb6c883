#include "conedelta/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "conedelta/errors.hpp"

namespace conedelta::fem {

namespace {

bool near_integer(double x, double tol = 1e-9) {
    return std::fabs(x - std::round(x)) <= tol * std::max(1.0, std::fabs(x));
}

// Bilinear shape functions on the unit square, node order
// (0,0), (1,0), (1,1), (0,1).
void shapes(double xi, double eta, double N[4]) {
    N[0] = (1.0 - xi) * (1.0 - eta);
    N[1] = xi * (1.0 - eta);
    N[2] = xi * eta;
    N[3] = (1.0 - xi) * eta;
}

void dshapes(double xi, double eta, double dxi[4], double deta[4]) {
    dxi[0] = -(1.0 - eta); dxi[1] = (1.0 - eta); dxi[2] = eta;  dxi[3] = -eta;
    deta[0] = -(1.0 - xi); deta[1] = -xi;        deta[2] = xi;  deta[3] = (1.0 - xi);
}

constexpr double kG2 = 0.57735026918962576;  // 1/sqrt(3)
constexpr double kG3x = 0.77459666924148338;  // sqrt(3/5)
constexpr double kG3w[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct ElementKernels {
    // K_e(r_c) = r_c * k1 + k1r ; M_e(r_c) = r_c * m0 + m0r
    double k1[4][4] = {};
    double k1r[4][4] = {};
    double m0[4] = {};
    double m0r[4] = {};
};

ElementKernels element_kernels(double hr, double hz) {
    ElementKernels k;
    const double gp[2] = {0.5 * (1.0 - kG2), 0.5 * (1.0 + kG2)};
    for (double xi : gp) {
        for (double eta : gp) {
            double N[4], dxi[4], deta[4];
            shapes(xi, eta, N);
            dshapes(xi, eta, dxi, deta);
            const double w = 0.25 * hr * hz;  // gauss weight x jacobian
            const double roff = (xi - 0.5) * hr;
            for (int a = 0; a < 4; ++a) {
                const double ga = dxi[a] / hr, ha = deta[a] / hz;
                k.m0[a] += w * N[a];
                k.m0r[a] += w * roff * N[a];
                for (int b = 0; b < 4; ++b) {
                    const double gb = dxi[b] / hr, hb = deta[b] / hz;
                    const double dot = ga * gb + ha * hb;
                    k.k1[a][b] += w * dot;
                    k.k1r[a][b] += w * roff * dot;
                }
            }
        }
    }
    return k;
}

struct Segment {
    double r0, z0, r1, z1;
};

// Liang-Barsky clip of a segment to the box [0,rmax]x[zmin,zmax].
bool clip_to_box(double rmax, double zmin, double zmax, Segment& s) {
    double t0 = 0.0, t1 = 1.0;
    const double dr = s.r1 - s.r0, dz = s.z1 - s.z0;
    auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        const double t = q / p;
        if (p < 0.0) {
            if (t > t1) return false;
            if (t > t0) t0 = t;
        } else {
            if (t < t0) return false;
            if (t < t1) t1 = t;
        }
        return true;
    };
    if (!clip(-dr, s.r0 - 0.0)) return false;
    if (!clip(dr, rmax - s.r0)) return false;
    if (!clip(-dz, s.z0 - zmin)) return false;
    if (!clip(dz, zmax - s.z0)) return false;
    if (t1 <= t0) return false;
    const Segment in = s;
    s.r0 = in.r0 + t0 * dr;
    s.z0 = in.z0 + t0 * dz;
    s.r1 = in.r0 + t1 * dr;
    s.z1 = in.z0 + t1 * dz;
    return true;
}

bool segments_properly_intersect(const Segment& a, const Segment& b) {
    auto cross = [](double ox, double oy, double ax, double ay, double bx, double by) {
        return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox);
    };
    const double d1 = cross(a.r0, a.z0, a.r1, a.z1, b.r0, b.z0);
    const double d2 = cross(a.r0, a.z0, a.r1, a.z1, b.r1, b.z1);
    const double d3 = cross(b.r0, b.z0, b.r1, b.z1, a.r0, a.z0);
    const double d4 = cross(b.r0, b.z0, b.r1, b.z1, a.r1, a.z1);
    return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
           ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

}  // namespace

Grid build_grid(const ConeModel& /*model*/, double r_max, double z_extent, double h) {
    if (!(r_max > 0.0 && z_extent > 0.0 && h > 0.0))
        throw InvalidInputError("build_grid: r_max, z_extent, h must be positive");
    if (!near_integer(r_max / h) || !near_integer(2.0 * z_extent / h))
        throw InvalidInputError("build_grid: h must divide r_max and 2*z_extent");
    Grid g;
    g.r_max = r_max;
    g.z_min = -z_extent;
    g.z_max = z_extent;
    g.h_r = h;
    g.h_z = h;
    g.nr = static_cast<int>(std::llround(r_max / h));
    g.nz = static_cast<int>(std::llround(2.0 * z_extent / h));
    g.dof.assign(static_cast<std::size_t>(g.nr + 1) * (g.nz + 1), -1);
    int c = 0;
    for (int i = 0; i < g.nr; ++i)       // r = r_max eliminated
        for (int j = 1; j < g.nz; ++j)   // z = z_min, z_max eliminated
            g.dof[static_cast<std::size_t>(g.node(i, j))] = c++;
    g.ndof = c;
    return g;
}

Generatrix Generatrix::straight_ray(double theta) {
    Generatrix g;
    g.straight = true;
    g.theta = theta;
    g.R0 = 0.0;
    return g;
}

Generatrix Generatrix::deformed(std::vector<std::pair<double, double>> polyline, double theta,
                                double R0) {
    Generatrix g;
    g.straight = false;
    g.theta = theta;
    g.R0 = R0;
    g.vertices = std::move(polyline);
    return g;
}

void Generatrix::validate() const {
    if (straight) return;
    if (vertices.size() < 2)
        throw InvalidInputError("Generatrix: polyline needs at least 2 vertices");
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        const double len = std::hypot(vertices[i + 1].first - vertices[i].first,
                                      vertices[i + 1].second - vertices[i].second);
        if (len < 1e-14)
            throw InvalidInputError("Generatrix: degenerate segment at vertex " +
                                    std::to_string(i));
    }
    const double ct = std::cos(theta) / std::sin(theta);
    for (const auto& [r, z] : vertices) {
        if (r < -1e-12) throw InvalidInputError("Generatrix: vertex with r < 0");
        const double dist = std::hypot(r, z);
        if (dist > R0 + 1e-12) {
            const double dev = std::fabs(z - r * ct);
            if (dev > 1e-9 * std::max(1.0, dist))
                throw InvalidInputError("Generatrix: vertex beyond R0 leaves the ray (|z - r cot| = " +
                                        std::to_string(dev) + ")");
        }
    }
    for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
        for (std::size_t j = i + 2; j + 1 < vertices.size(); ++j) {
            Segment a{vertices[i].first, vertices[i].second, vertices[i + 1].first,
                      vertices[i + 1].second};
            Segment b{vertices[j].first, vertices[j].second, vertices[j + 1].first,
                      vertices[j + 1].second};
            if (segments_properly_intersect(a, b))
                throw InvalidInputError("Generatrix: polyline self-intersects");
        }
    }
}

std::string Generatrix::describe() const {
    std::ostringstream os;
    if (straight)
        os << "straight_ray(theta=" << theta << ")";
    else
        os << "deformed(" << vertices.size() << " vertices, R0=" << R0 << ")";
    return os.str();
}

Generatrix load_generatrix(const std::string& path, double theta, double R0) {
    std::ifstream in(path);
    if (!in) throw InvalidInputError("load_generatrix: cannot open " + path);
    std::vector<std::pair<double, double>> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double r, z;
        if (ls >> r >> z) {
            pts.emplace_back(r, z);
        } else if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) {
            throw InvalidInputError("load_generatrix: bad line " + std::to_string(lineno) +
                                    " in " + path);
        }
    }
    return Generatrix::deformed(std::move(pts), theta, R0);
}

void save_generatrix(const Generatrix& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InvalidInputError("save_generatrix: cannot open " + path);
    out << "# generatrix polyline: r z\n";
    out.precision(17);
    for (const auto& [r, z] : g.vertices) out << r << " " << z << "\n";
}

namespace {

Pencil assemble_impl(const Grid& grid, const ConeModel& model, const Generatrix& gen) {
    const double hr = grid.h_r, hz = grid.h_z;
    const ElementKernels ker = element_kernels(hr, hz);

    using Trip = Eigen::Triplet<double>;
    std::vector<Trip> trips;
    trips.reserve(static_cast<std::size_t>(grid.nr) * grid.nz * 10 + 1024);
    Eigen::VectorXd Mdiag = Eigen::VectorXd::Zero(grid.ndof);

    auto emit_lower = [&](int da, int db, double v) {
        if (da < 0 || db < 0) return;
        if (da >= db)
            trips.emplace_back(da, db, v);
    };

    for (int i = 0; i < grid.nr; ++i) {
        const double rc = (i + 0.5) * hr;
        for (int j = 0; j < grid.nz; ++j) {
            const int nd[4] = {grid.dof[static_cast<std::size_t>(grid.node(i, j))],
                               grid.dof[static_cast<std::size_t>(grid.node(i + 1, j))],
                               grid.dof[static_cast<std::size_t>(grid.node(i + 1, j + 1))],
                               grid.dof[static_cast<std::size_t>(grid.node(i, j + 1))]};
            for (int a = 0; a < 4; ++a) {
                if (nd[a] < 0) continue;
                Mdiag[nd[a]] += rc * ker.m0[a] + ker.m0r[a];
                for (int b = 0; b < 4; ++b)
                    emit_lower(nd[a], nd[b], rc * ker.k1[a][b] + ker.k1r[a][b]);
            }
        }
    }

    // delta line: clip the generatrix to the box, split at grid lines, exact
    // 3-point Gauss per sub-segment (degree-5 integrand along a straight cut)
    std::vector<Segment> segs;
    if (gen.straight) {
        const double sn = std::sin(gen.theta), cs = std::cos(gen.theta);
        const double s_exit = std::min(grid.r_max / sn, grid.z_max / cs);
        segs.push_back({0.0, 0.0, s_exit * sn, s_exit * cs});
    } else {
        bool exits = false;
        for (std::size_t k = 0; k + 1 < gen.vertices.size(); ++k) {
            Segment s{gen.vertices[k].first, gen.vertices[k].second,
                      gen.vertices[k + 1].first, gen.vertices[k + 1].second};
            const bool outside_end =
                s.r1 > grid.r_max + 1e-12 || s.z1 > grid.z_max + 1e-12 || s.z1 < grid.z_min - 1e-12;
            if (clip_to_box(grid.r_max, grid.z_min, grid.z_max, s)) {
                segs.push_back(s);
                if (outside_end || std::fabs(s.r1 - grid.r_max) < 1e-12 ||
                    std::fabs(s.z1 - grid.z_max) < 1e-12 || std::fabs(s.z1 - grid.z_min) < 1e-12)
                    exits = true;
            }
        }
        if (segs.empty()) throw InvalidInputError("assemble: generatrix misses the grid box");
        if (!exits)
            throw InvalidInputError("assemble: generatrix must exit through the far boundary");
    }

    const double alpha = model.alpha;
    for (const Segment& seg : segs) {
        const double dr = seg.r1 - seg.r0, dz = seg.z1 - seg.z0;
        const double len = std::hypot(dr, dz);
        if (len < 1e-14) continue;
        // breakpoints at crossings with r = i*hr and z = zmin + j*hz
        std::set<double> cuts{0.0, 1.0};
        if (std::fabs(dr) > 1e-14 * len) {
            const int i0 = static_cast<int>(std::ceil(std::min(seg.r0, seg.r1) / hr - 1e-12));
            const int i1 = static_cast<int>(std::floor(std::max(seg.r0, seg.r1) / hr + 1e-12));
            for (int i = i0; i <= i1; ++i) {
                const double t = (i * hr - seg.r0) / dr;
                if (t > 1e-12 && t < 1.0 - 1e-12) cuts.insert(t);
            }
        }
        if (std::fabs(dz) > 1e-14 * len) {
            const int j0 = static_cast<int>(
                std::ceil((std::min(seg.z0, seg.z1) - grid.z_min) / hz - 1e-12));
            const int j1 = static_cast<int>(
                std::floor((std::max(seg.z0, seg.z1) - grid.z_min) / hz + 1e-12));
            for (int j = j0; j <= j1; ++j) {
                const double t = (grid.z_min + j * hz - seg.z0) / dz;
                if (t > 1e-12 && t < 1.0 - 1e-12) cuts.insert(t);
            }
        }
        std::vector<double> ts(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
            const double ta = ts[k], tb = ts[k + 1];
            if (tb - ta < 1e-14) continue;
            const double rm = seg.r0 + 0.5 * (ta + tb) * dr;
            const double zm = seg.z0 + 0.5 * (ta + tb) * dz;
            const int ci = std::clamp(static_cast<int>(std::floor(rm / hr)), 0, grid.nr - 1);
            const int cj = std::clamp(static_cast<int>(std::floor((zm - grid.z_min) / hz)), 0,
                                      grid.nz - 1);
            const int nd[4] = {grid.dof[static_cast<std::size_t>(grid.node(ci, cj))],
                               grid.dof[static_cast<std::size_t>(grid.node(ci + 1, cj))],
                               grid.dof[static_cast<std::size_t>(grid.node(ci + 1, cj + 1))],
                               grid.dof[static_cast<std::size_t>(grid.node(ci, cj + 1))]};
            const double sublen = (tb - ta) * len;
            double ke[4][4] = {};
            const double gt[3] = {0.5 * (1.0 - kG3x), 0.5, 0.5 * (1.0 + kG3x)};
            for (int q = 0; q < 3; ++q) {
                const double t = ta + (tb - ta) * gt[q];
                const double r = seg.r0 + t * dr;
                const double z = seg.z0 + t * dz;
                const double xi = (r - ci * hr) / hr;
                const double eta = (z - grid.z_min - cj * hz) / hz;
                double N[4];
                shapes(xi, eta, N);
                const double w = kG3w[q] * sublen * r;
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b) ke[a][b] += w * N[a] * N[b];
            }
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) emit_lower(nd[a], nd[b], -alpha * ke[a][b]);
        }
    }

    Eigen::SparseMatrix<double> lower(grid.ndof, grid.ndof);
    lower.setFromTriplets(trips.begin(), trips.end());

    Pencil p;
    p.A = lower.selfadjointView<Eigen::Lower>();
    p.M = std::move(Mdiag);
    p.alpha = model.alpha;
    p.theta = model.theta;
    p.grid = grid;
    p.generatrix_desc = gen.describe();
    if ((p.M.array() <= 0.0).any())
        throw NumericalFailure("assemble: nonpositive lumped-mass entry");
    return p;
}

}  // namespace

Pencil assemble(const Grid& grid, const ConeModel& model, const Generatrix& gen) {
    if (!gen.straight) gen.validate();
    return assemble_impl(grid, model, gen);
}

Pencil assemble_deformed(const Grid& grid, const ConeModel& model, const Generatrix& gen) {
    if (gen.straight) return assemble_impl(grid, model, gen);
    gen.validate();
    return assemble_impl(grid, model, gen);
}

}  // namespace conedelta::fem
