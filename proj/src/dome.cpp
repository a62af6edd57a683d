#include "domelab/dome.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "domelab/gauges.hpp"
#include "domelab/io.hpp"

namespace domelab {

namespace {

constexpr int kMaxLevel = 14;  // finest lattice: h / 2^14

// Inside test via the nearest boundary segment's orientation (CCW boundary:
// inside is on the left); falls back to even-odd when the nearest point is a
// polyline vertex.
struct InsideOracle {
    const PolyCurve* domain = nullptr;
    const SegmentIndex* index = nullptr;
    double orient_sign = 1.0;  // +1 for CCW boundaries

    bool operator()(const Vec2& p) const {
        Vec2 a, b;
        index->nearest_segment(p, &a, &b);
        Vec2 q = closest_point_on_segment(p, a, b);
        double la = dist(q, a), lb = dist(q, b), lab = dist(a, b);
        double margin = 1e-9 * lab;
        if (la > margin && lb > margin) {
            double c = (b - a).cross(p - q);
            if (std::abs(c) > 0) return orient_sign * c > 0;
        }
        std::vector<Vec2> poly(domain->vertex_count());
        for (std::size_t i = 0; i < poly.size(); i++) poly[i] = domain->vertex(i);
        return point_in_polygon(p, poly);
    }
};

struct CellKey {
    static std::uint64_t pack(int level, std::uint64_t i, std::uint64_t j) {
        return ((std::uint64_t)level << 60) | (i << 30) | j;
    }
};

struct MeshBuilder {
    const PolyCurve* domain;
    SegmentIndex index;
    InsideOracle inside;
    double ox = 0, oy = 0, h = 0, fine_h = 0;
    std::size_t nrx = 0, nry = 0;
    int band = 0;
    double alpha = 1.0;
    std::unordered_set<std::uint64_t> leaves;

    struct LatticeInfo {
        Vec2 pos;
        double dist = 0.0;
        bool in = false;
        std::uint32_t mesh_index = UINT32_MAX;
    };
    std::unordered_map<std::uint64_t, LatticeInfo> lattice;
    std::unordered_map<std::uint64_t, std::uint32_t> edge_cross;  // boundary verts

    DomeMesh mesh;

    Vec2 lattice_pos(std::uint64_t fx, std::uint64_t fy) const {
        return {ox + (double)fx * fine_h, oy + (double)fy * fine_h};
    }

    LatticeInfo& lattice_info(std::uint64_t fx, std::uint64_t fy) {
        std::uint64_t key = (fx << 32) | fy;
        auto it = lattice.find(key);
        if (it != lattice.end()) return it->second;
        LatticeInfo info;
        info.pos = lattice_pos(fx, fy);
        info.dist = index.distance(info.pos);
        info.in = inside(info.pos);
        return lattice.emplace(key, info).first->second;
    }

    std::uint32_t mesh_vertex(LatticeInfo& info) {
        if (info.mesh_index != UINT32_MAX) return info.mesh_index;
        double z = std::pow(info.dist, alpha);
        mesh.vertices.push_back({info.pos.x, info.pos.y, z});
        mesh.tags.push_back(SheetTag::upper);
        info.mesh_index = (std::uint32_t)mesh.vertices.size() - 1;
        return info.mesh_index;
    }

    std::uint32_t boundary_vertex(std::uint64_t ka, std::uint64_t kb, const Vec2& pa,
                                  bool ina, const Vec2& pb) {
        std::uint64_t lo = std::min(ka, kb), hi = std::max(ka, kb);
        // Derive a single edge id from both lattice keys.
        std::uint64_t ekey = lo * 0x9e3779b97f4a7c15ull ^ hi;
        auto it = edge_cross.find(ekey);
        if (it != edge_cross.end()) return it->second;
        // Bisect the inside/outside transition, then land exactly on the
        // boundary polyline.
        Vec2 a = pa, b = pb;
        bool in_a = ina;
        for (int k = 0; k < 48; k++) {
            Vec2 m = (a + b) * 0.5;
            if (inside(m) == in_a)
                a = m;
            else
                b = m;
        }
        Vec2 q = index.closest_point((a + b) * 0.5);
        mesh.vertices.push_back({q.x, q.y, 0.0});
        mesh.tags.push_back(SheetTag::boundary);
        std::uint32_t idx = (std::uint32_t)mesh.vertices.size() - 1;
        edge_cross.emplace(ekey, idx);
        return idx;
    }

    void add_triangle(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
        if (a == b || b == c || a == c) return;
        mesh.triangles.push_back({a, b, c});
    }

    void build_leaves() {
        std::deque<std::uint64_t> work;
        for (std::size_t i = 0; i < nrx; i++)
            for (std::size_t j = 0; j < nry; j++)
                work.push_back(CellKey::pack(0, i, j));
        while (!work.empty()) {
            std::uint64_t key = work.front();
            work.pop_front();
            int level = (int)(key >> 60);
            std::uint64_t i = (key >> 30) & 0x3fffffff, j = key & 0x3fffffff;
            double s = h / (double)(1 << level);
            Vec2 c = {ox + ((double)i + 0.5) * s, oy + ((double)j + 0.5) * s};
            double d = index.distance(c);
            if (level < band && d <= 1.5 * s) {
                for (int ci = 0; ci < 2; ci++)
                    for (int cj = 0; cj < 2; cj++)
                        work.push_back(CellKey::pack(level + 1, 2 * i + ci, 2 * j + cj));
                continue;
            }
            if (d > 0.75 * s && !inside(c)) continue;  // fully outside
            leaves.insert(key);
        }
    }

    bool covering_leaf(int level, std::int64_t i, std::int64_t j, std::uint64_t* found,
                       int* found_level) const {
        if (i < 0 || j < 0) return false;
        std::int64_t span_i = (std::int64_t)nrx << level, span_j = (std::int64_t)nry << level;
        if (i >= span_i || j >= span_j) return false;
        for (int k = 0; k <= level; k++) {
            std::uint64_t key = CellKey::pack(level - k, (std::uint64_t)(i >> k),
                                              (std::uint64_t)(j >> k));
            if (leaves.count(key)) {
                *found = key;
                *found_level = level - k;
                return true;
            }
        }
        return false;
    }

    void balance() {
        std::deque<std::uint64_t> work(leaves.begin(), leaves.end());
        while (!work.empty()) {
            std::uint64_t key = work.front();
            work.pop_front();
            if (!leaves.count(key)) continue;
            int level = (int)(key >> 60);
            std::int64_t i = (std::int64_t)((key >> 30) & 0x3fffffff);
            std::int64_t j = (std::int64_t)(key & 0x3fffffff);
            const std::int64_t di[4] = {-1, 1, 0, 0};
            const std::int64_t dj[4] = {0, 0, -1, 1};
            for (int n = 0; n < 4; n++) {
                std::uint64_t nb = 0;
                int nb_level = 0;
                if (!covering_leaf(level, i + di[n], j + dj[n], &nb, &nb_level)) continue;
                if (level - nb_level < 2) continue;
                // Split the too-coarse neighbor.
                leaves.erase(nb);
                std::uint64_t bi = (nb >> 30) & 0x3fffffff, bj = nb & 0x3fffffff;
                for (int ci = 0; ci < 2; ci++) {
                    for (int cj = 0; cj < 2; cj++) {
                        std::uint64_t child =
                            CellKey::pack(nb_level + 1, 2 * bi + ci, 2 * bj + cj);
                        leaves.insert(child);
                        work.push_back(child);
                    }
                }
                work.push_back(key);  // recheck this leaf
                break;
            }
        }
    }

    bool finer_neighbor(int level, std::int64_t i, std::int64_t j) const {
        // True when the slot (level+1 coords i, j) holds a leaf.
        if (i < 0 || j < 0) return false;
        return leaves.count(
                   CellKey::pack(level + 1, (std::uint64_t)i, (std::uint64_t)j)) > 0;
    }

    void triangulate() {
        for (std::uint64_t key : leaves) {
            int level = (int)(key >> 60);
            std::uint64_t i = (key >> 30) & 0x3fffffff, j = key & 0x3fffffff;
            std::uint64_t f = (std::uint64_t)1 << (kMaxLevel - level);
            std::uint64_t x0 = i * f, y0 = j * f, x1 = (i + 1) * f, y1 = (j + 1) * f;
            std::uint64_t xm = x0 + f / 2, ym = y0 + f / 2;
            std::int64_t ci = (std::int64_t)(2 * i), cj = (std::int64_t)(2 * j);

            // Polygon around the cell, inserting midpoints against finer sides.
            std::vector<std::pair<std::uint64_t, std::uint64_t>> poly;
            poly.push_back({x0, y0});
            if (finer_neighbor(level, ci, cj - 1) || finer_neighbor(level, ci + 1, cj - 1))
                poly.push_back({xm, y0});
            poly.push_back({x1, y0});
            if (finer_neighbor(level, ci + 2, cj) || finer_neighbor(level, ci + 2, cj + 1))
                poly.push_back({x1, ym});
            poly.push_back({x1, y1});
            if (finer_neighbor(level, ci, cj + 2) || finer_neighbor(level, ci + 1, cj + 2))
                poly.push_back({xm, y1});
            poly.push_back({x0, y1});
            if (finer_neighbor(level, ci - 1, cj) || finer_neighbor(level, ci - 1, cj + 1))
                poly.push_back({x0, ym});

            std::vector<LatticeInfo*> infos;
            bool all_in = true, any_in = false;
            for (auto& [fx, fy] : poly) {
                LatticeInfo& li = lattice_info(fx, fy);
                infos.push_back(&li);
                all_in = all_in && li.in;
                any_in = any_in || li.in;
            }
            double s = h / (double)(1 << level);
            Vec2 center = lattice_pos(xm, ym);
            double dc = index.distance(center);
            bool cell_has_boundary = dc <= 0.75 * s;

            if (all_in && !cell_has_boundary) {
                if (poly.size() == 4) {
                    std::uint32_t v0 = mesh_vertex(*infos[0]), v1 = mesh_vertex(*infos[1]);
                    std::uint32_t v2 = mesh_vertex(*infos[2]), v3 = mesh_vertex(*infos[3]);
                    add_triangle(v0, v1, v2);
                    add_triangle(v0, v2, v3);
                } else {
                    LatticeInfo& cinfo = lattice_info(xm, ym);
                    std::uint32_t vc = mesh_vertex(cinfo);
                    for (std::size_t k = 0; k < poly.size(); k++) {
                        std::uint32_t a = mesh_vertex(*infos[k]);
                        std::uint32_t b = mesh_vertex(*infos[(k + 1) % poly.size()]);
                        add_triangle(vc, a, b);
                    }
                }
                continue;
            }
            if (!any_in && !cell_has_boundary) continue;

            // Mixed cell: clip the polygon against the domain.
            std::vector<std::uint32_t> clipped;
            std::vector<Vec2> clipped_pos;
            for (std::size_t k = 0; k < poly.size(); k++) {
                std::size_t k2 = (k + 1) % poly.size();
                LatticeInfo& u = *infos[k];
                LatticeInfo& v = *infos[k2];
                if (u.in) {
                    clipped.push_back(mesh_vertex(u));
                    clipped_pos.push_back(u.pos);
                }
                if (u.in != v.in) {
                    std::uint64_t ku = (poly[k].first << 32) | poly[k].second;
                    std::uint64_t kv = (poly[k2].first << 32) | poly[k2].second;
                    std::uint32_t bv = boundary_vertex(ku, kv, u.pos, u.in, v.pos);
                    if (clipped.empty() || clipped.back() != bv) {
                        clipped.push_back(bv);
                        Vec3 p3 = mesh.vertices[bv];
                        clipped_pos.push_back({p3.x, p3.y});
                    }
                }
            }
            while (clipped.size() >= 2 && clipped.front() == clipped.back()) {
                clipped.pop_back();
                clipped_pos.pop_back();
            }
            if (clipped.size() < 3) continue;

            Vec2 centroid{0, 0};
            for (const Vec2& p : clipped_pos) centroid = centroid + p;
            centroid = centroid * (1.0 / (double)clipped_pos.size());
            if (clipped.size() > 3 && inside(centroid)) {
                double dcen = index.distance(centroid);
                mesh.vertices.push_back({centroid.x, centroid.y, std::pow(dcen, alpha)});
                mesh.tags.push_back(SheetTag::upper);
                std::uint32_t vc = (std::uint32_t)mesh.vertices.size() - 1;
                for (std::size_t k = 0; k < clipped.size(); k++)
                    add_triangle(vc, clipped[k], clipped[(k + 1) % clipped.size()]);
            } else {
                for (std::size_t k = 1; k + 1 < clipped.size(); k++)
                    add_triangle(clipped[0], clipped[k], clipped[k + 1]);
            }
        }
    }

    void mirror_sheet() {
        std::size_t n_up = mesh.vertices.size();
        mesh.mirror.resize(n_up);
        for (std::size_t v = 0; v < n_up; v++) {
            if (mesh.tags[v] == SheetTag::boundary) {
                mesh.mirror[v] = (std::uint32_t)v;
                continue;
            }
            Vec3 p = mesh.vertices[v];
            mesh.vertices.push_back({p.x, p.y, -p.z});
            mesh.tags.push_back(SheetTag::lower);
            mesh.mirror.push_back((std::uint32_t)v);
            mesh.mirror[v] = (std::uint32_t)mesh.vertices.size() - 1;
        }
        std::size_t n_tri = mesh.triangles.size();
        for (std::size_t t = 0; t < n_tri; t++) {
            auto tri = mesh.triangles[t];
            std::uint32_t a = mesh.mirror[tri[0]], b = mesh.mirror[tri[1]],
                          c = mesh.mirror[tri[2]];
            if (a == tri[0] && b == tri[1] && c == tri[2]) continue;  // all boundary
            mesh.triangles.push_back({a, c, b});
        }
    }

    void finish_areas() {
        mesh.tri_area.resize(mesh.triangles.size());
        for (std::size_t t = 0; t < mesh.triangles.size(); t++) {
            const auto& tri = mesh.triangles[t];
            mesh.tri_area[t] = triangle_area3(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                                              mesh.vertices[tri[2]]);
        }
    }
};

}  // namespace

DomeMesh build_dome(const PolyCurve& domain, double alpha, double h, int band_levels) {
    if (!(alpha > 0.0)) throw Error("alpha must be positive");
    if (!domain.closed()) throw Error("dome needs a closed domain boundary");
    double diam = domain.diameter();
    if (!(h > 0 && h < diam / 64.0)) throw Error("grid spacing must be < diam/64");
    if (band_levels < 0) band_levels = alpha < 1.0 ? 4 : 2;
    if (band_levels > kMaxLevel - 2) throw Error("band refinement too deep");

    MeshBuilder b;
    b.domain = &domain;
    std::vector<Vec2> pts(domain.vertex_count());
    double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
    for (std::size_t i = 0; i < pts.size(); i++) {
        pts[i] = domain.vertex(i);
        minx = std::min(minx, pts[i].x);
        maxx = std::max(maxx, pts[i].x);
        miny = std::min(miny, pts[i].y);
        maxy = std::max(maxy, pts[i].y);
    }
    b.index = SegmentIndex::build(pts, true);
    b.inside = {&domain, &b.index, domain.signed_area2() >= 0 ? 1.0 : -1.0};
    b.h = h;
    b.fine_h = h / (double)(1 << kMaxLevel);
    b.ox = minx - 2.0 * h;
    b.oy = miny - 2.0 * h;
    b.nrx = (std::size_t)std::ceil((maxx + 2.0 * h - b.ox) / h);
    b.nry = (std::size_t)std::ceil((maxy + 2.0 * h - b.oy) / h);
    b.band = band_levels;
    b.alpha = alpha;

    b.build_leaves();
    b.balance();
    b.triangulate();
    b.mirror_sheet();
    b.finish_areas();

    b.mesh.alpha = alpha;
    b.mesh.h = h;
    b.mesh.domain_diam = diam;
    b.mesh.domain = domain;
    b.mesh.index = std::move(b.index);
    return std::move(b.mesh);
}

double DomeMesh::total_area() const {
    double s = 0;
    for (double a : tri_area) s += a;
    return s;
}

int DomeMesh::euler_characteristic() const {
    std::unordered_set<std::uint64_t> edges;
    for (const auto& t : triangles) {
        for (int k = 0; k < 3; k++) {
            std::uint64_t a = t[(std::size_t)k], b = t[(std::size_t)((k + 1) % 3)];
            edges.insert((std::min(a, b) << 32) | std::max(a, b));
        }
    }
    std::unordered_set<std::uint32_t> used;
    for (const auto& t : triangles)
        for (int k = 0; k < 3; k++) used.insert(t[(std::size_t)k]);
    return (int)((std::int64_t)used.size() - (std::int64_t)edges.size() +
                 (std::int64_t)triangles.size());
}

std::vector<std::vector<std::pair<std::uint32_t, double>>> DomeMesh::adjacency() const {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(vertices.size());
    std::unordered_set<std::uint64_t> seen;
    for (const auto& t : triangles) {
        for (int k = 0; k < 3; k++) {
            std::uint32_t a = t[(std::size_t)k], b = t[(std::size_t)((k + 1) % 3)];
            std::uint64_t key = ((std::uint64_t)std::min(a, b) << 32) | std::max(a, b);
            if (!seen.insert(key).second) continue;
            double len = dist(vertices[a], vertices[b]);
            adj[a].push_back({b, len});
            adj[b].push_back({a, len});
        }
    }
    return adj;
}

namespace {

double clip_area(const Vec3& a, const Vec3& b, const Vec3& c,
                 const std::function<bool(const Vec3&)>& pred, int depth) {
    bool ia = pred(a), ib = pred(b), ic = pred(c);
    double area = triangle_area3(a, b, c);
    if (area == 0.0) return 0.0;
    if (ia && ib && ic) return area;
    if (depth == 0) {
        Vec3 cen{(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3, (a.z + b.z + c.z) / 3};
        return pred(cen) ? area : 0.0;
    }
    if (!ia && !ib && !ic && depth < 4) return 0.0;  // only the first level probes deeper
    Vec3 ab{(a.x + b.x) / 2, (a.y + b.y) / 2, (a.z + b.z) / 2};
    Vec3 bc{(b.x + c.x) / 2, (b.y + c.y) / 2, (b.z + c.z) / 2};
    Vec3 ca{(c.x + a.x) / 2, (c.y + a.y) / 2, (c.z + a.z) / 2};
    return clip_area(a, ab, ca, pred, depth - 1) + clip_area(b, bc, ab, pred, depth - 1) +
           clip_area(c, ca, bc, pred, depth - 1) + clip_area(ab, bc, ca, pred, depth - 1);
}

}  // namespace

double region_area(const DomeMesh& mesh, const std::function<bool(const Vec3&)>& pred) {
    double sum = 0.0;
    for (const auto& t : mesh.triangles)
        sum += clip_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]],
                         pred, 4);
    return sum;
}

double ball_area(const DomeMesh& mesh, const Vec3& center, double r) {
    auto pred = [&](const Vec3& p) { return dist(p, center) <= r; };
    double sum = 0.0;
    for (std::size_t t = 0; t < mesh.triangles.size(); t++) {
        const auto& tri = mesh.triangles[t];
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        double reach = std::max({dist(a, b), dist(b, c), dist(c, a)});
        if (dist(a, center) > r + reach) continue;
        sum += clip_area(a, b, c, pred, 4);
    }
    return sum;
}

RegularityReport regularity_scan(const DomeMesh& mesh, std::size_t centers_per_stratum,
                                 const std::vector<double>& radii, std::uint64_t seed) {
    double diam = mesh.domain_diam;
    std::vector<std::uint32_t> interior, near_b, on_b;
    for (std::uint32_t v = 0; v < mesh.vertices.size(); v++) {
        if (mesh.tags[v] == SheetTag::boundary) {
            on_b.push_back(v);
            continue;
        }
        if (mesh.tags[v] != SheetTag::upper) continue;
        double d = mesh.index.distance({mesh.vertices[v].x, mesh.vertices[v].y});
        if (d > 0.2 * diam)
            interior.push_back(v);
        else if (d < 0.05 * diam)
            near_b.push_back(v);
    }
    std::mt19937_64 rng(seed);
    auto pick = [&](std::vector<std::uint32_t>& pool) {
        std::shuffle(pool.begin(), pool.end(), rng);
        if (pool.size() > centers_per_stratum) pool.resize(centers_per_stratum);
    };
    pick(interior);
    pick(near_b);
    pick(on_b);

    RegularityReport report;
    std::size_t id = 0;
    auto run = [&](const std::vector<std::uint32_t>& pool, const char* stratum) {
        for (std::uint32_t v : pool) {
            for (double r : radii) {
                RegularityRow row;
                row.center_id = "c" + std::to_string(id);
                row.stratum = stratum;
                row.r = r;
                if (r < 4.0 * mesh.h || r > 2.0 * diam) {
                    row.ok = false;
                    report.rows.push_back(row);
                    continue;
                }
                row.area = ball_area(mesh, mesh.vertices[v], r);
                if (row.area > 0)
                    row.ratio = std::max(row.area / (r * r), (r * r) / row.area);
                else
                    row.ok = false;
                if (row.ok) report.constant = std::max(report.constant, row.ratio);
                report.rows.push_back(row);
            }
            id++;
        }
    };
    run(interior, "interior");
    run(near_b, "near_boundary");
    run(on_b, "on_boundary");
    return report;
}

std::string regularity_csv(const RegularityReport& report) {
    std::ostringstream os;
    os << "center_id,stratum,r,area,ratio\n";
    for (const auto& r : report.rows)
        os << r.center_id << ',' << r.stratum << ',' << io::fmt(r.r) << ','
           << io::fmt(r.area) << ',' << io::fmt(r.ratio) << '\n';
    return os.str();
}

namespace {

// Are a and b connected in the subgraph of vertices passing the filter?
bool graph_connected(const std::vector<std::vector<std::pair<std::uint32_t, double>>>& adj,
                     std::uint32_t a, std::uint32_t b,
                     const std::function<bool(std::uint32_t)>& keep) {
    if (a == b) return true;
    if (!keep(a) || !keep(b)) return false;
    std::vector<std::uint32_t> stack = {a};
    std::unordered_set<std::uint32_t> seen = {a};
    while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        for (const auto& [w, len] : adj[v]) {
            (void)len;
            if (seen.count(w) || !keep(w)) continue;
            if (w == b) return true;
            seen.insert(w);
            stack.push_back(w);
        }
    }
    return false;
}

}  // namespace

LlcReport llc_scan(const DomeMesh& mesh, std::size_t samples, std::uint64_t seed,
                   double lambda_cap) {
    auto adj = mesh.adjacency();
    std::mt19937_64 rng(seed);
    LlcReport report;

    // Near-rim upper vertices sorted by planar boundary distance: their mirror
    // pairs probe the rim geometry hardest.
    std::vector<std::pair<double, std::uint32_t>> rim;
    for (std::uint32_t v = 0; v < mesh.vertices.size(); v++) {
        if (mesh.tags[v] != SheetTag::upper) continue;
        if (mesh.vertices[v].z <= 0) continue;
        rim.push_back({mesh.vertices[v].z, v});
    }
    std::sort(rim.begin(), rim.end());

    auto lambda1_for = [&](std::uint32_t x, double r, std::uint32_t y1, std::uint32_t y2) {
        const Vec3& cx = mesh.vertices[x];
        auto keep_at = [&](double lam) {
            return [&, lam](std::uint32_t v) { return dist(mesh.vertices[v], cx) <= lam * r; };
        };
        if (graph_connected(adj, y1, y2, keep_at(1.0))) return 1.0;
        if (!graph_connected(adj, y1, y2, keep_at(lambda_cap))) return lambda_cap;
        double lo = 1.0, hi = lambda_cap;
        for (int it = 0; it < 24; it++) {
            double mid = 0.5 * (lo + hi);
            if (graph_connected(adj, y1, y2, keep_at(mid)))
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    };
    auto lambda2_for = [&](std::uint32_t x, double r, std::uint32_t y1, std::uint32_t y2) {
        const Vec3& cx = mesh.vertices[x];
        auto keep_at = [&](double lam) {
            return [&, lam](std::uint32_t v) { return dist(mesh.vertices[v], cx) >= r / lam; };
        };
        if (graph_connected(adj, y1, y2, keep_at(1.0))) return 1.0;
        if (!graph_connected(adj, y1, y2, keep_at(lambda_cap))) return lambda_cap;
        double lo = 1.0, hi = lambda_cap;
        for (int it = 0; it < 24; it++) {
            double mid = 0.5 * (lo + hi);
            if (graph_connected(adj, y1, y2, keep_at(mid)))
                hi = mid;
            else
                lo = mid;
        }
        return hi;
    };

    std::size_t id = 0;
    auto push_row = [&](std::uint32_t x, double r, std::uint32_t y1, std::uint32_t y2,
                        std::uint32_t z1, std::uint32_t z2) {
        LlcRow row;
        row.sample_id = "s" + std::to_string(id++);
        row.r = r;
        row.lambda1 = lambda1_for(x, r, y1, y2);
        row.capped1 = row.lambda1 >= lambda_cap;
        row.lambda2 = lambda2_for(x, r, z1, z2);
        row.capped2 = row.lambda2 >= lambda_cap;
        report.lambda1 = std::max(report.lambda1, row.lambda1);
        report.lambda2 = std::max(report.lambda2, row.lambda2);
        report.capped1 = report.capped1 || row.capped1;
        report.capped2 = report.capped2 || row.capped2;
        report.rows.push_back(row);
    };

    // Deliberate rim probes: x = y1, y2 = mirror(y1), r just above |y1 - y2|.
    std::size_t rim_probes = std::min<std::size_t>(samples / 2 + 1, rim.size());
    for (std::size_t k = 0; k < rim_probes; k++) {
        std::uint32_t y1 = rim[k].second;
        std::uint32_t y2 = mesh.mirror[y1];
        double r = 1.25 * dist(mesh.vertices[y1], mesh.vertices[y2]);
        if (r <= 0) continue;
        // LLC2 pair: two far-apart vertices outside the small ball.
        std::uint32_t z1 = rim.back().second, z2 = mesh.mirror[rim.back().second];
        push_row(y1, r, y1, y2, z1, z2);
    }
    // Random samples.
    std::uniform_int_distribution<std::uint32_t> vd(0, (std::uint32_t)mesh.vertices.size() - 1);
    for (std::size_t k = rim_probes; k < samples; k++) {
        std::uint32_t x = vd(rng);
        double r = mesh.domain_diam * std::pow(0.5, 1.0 + (double)(rng() % 5));
        const Vec3& cx = mesh.vertices[x];
        std::vector<std::uint32_t> in_ball, out_ball;
        for (std::uint32_t v = 0; v < mesh.vertices.size(); v++) {
            if (dist(mesh.vertices[v], cx) <= r)
                in_ball.push_back(v);
            else
                out_ball.push_back(v);
        }
        if (in_ball.size() < 2 || out_ball.size() < 2) continue;
        std::uint32_t y1 = in_ball[rng() % in_ball.size()];
        std::uint32_t y2 = in_ball[rng() % in_ball.size()];
        std::uint32_t z1 = out_ball[rng() % out_ball.size()];
        std::uint32_t z2 = out_ball[rng() % out_ball.size()];
        push_row(x, r, y1, y2, z1, z2);
    }
    return report;
}

std::string llc_csv(const LlcReport& report) {
    std::ostringstream os;
    os << "sample_id,r,lambda1,lambda2\n";
    for (const auto& r : report.rows)
        os << r.sample_id << ',' << io::fmt(r.r) << ',' << io::fmt(r.lambda1) << ','
           << io::fmt(r.lambda2) << '\n';
    return os.str();
}

namespace {

// Arc of `curve` between points a and b (snapped to the curve within tol),
// choosing the smaller-diameter side, materialized from a to b.
std::vector<Vec2> arc_points_between(const PolyCurve& curve, const Vec2& a, const Vec2& b,
                                     double tol) {
    auto [sa, da] = curve.nearest_param(a);
    auto [sb, db] = curve.nearest_param(b);
    if (da > tol || db > tol) throw Error("point does not lie on the level curve");
    double L = curve.total_length();
    ArcRef fwd = make_arc(curve, sa, sb <= sa ? sb + L : sb);
    ArcRef bwd = make_arc(curve, sb, sa <= sb ? sa + L : sa);
    bool use_fwd = arc_diameter(fwd) <= arc_diameter(bwd);
    std::vector<Vec2> pts = materialize(use_fwd ? fwd : bwd);
    if (!use_fwd) std::reverse(pts.begin(), pts.end());
    return pts;
}

}  // namespace

SquarePiece square_piece(const DomeMesh& mesh, const Vec2& px1, const Vec2& py1,
                         double t2, double c0, double grid_h) {
    double t1x = mesh.index.distance(px1);
    double t1y = mesh.index.distance(py1);
    if (std::abs(t1x - t1y) > 1e-3 * std::max(t1x, t1y))
        throw Error("square piece (i): corner points lie on different levels");
    double t1 = 0.5 * (t1x + t1y);
    if (!(t2 >= 0 && t2 < t1)) throw Error("square piece: need 0 <= t2 < t1");

    double alpha = mesh.alpha;
    Vec2 q1 = mesh.index.closest_point(px1);
    Vec2 q2 = mesh.index.closest_point(py1);
    Vec2 px2 = px1 + (q1 - px1) * ((t1 - t2) / t1);
    Vec2 py2 = py1 + (q2 - py1) * ((t1 - t2) / t1);

    double chord = dist(px1, py1);
    double gauge = (t1 - t2) + std::pow(t1, alpha) - std::pow(t2, alpha);
    if (!(gauge >= chord / (20.0 * c0) && gauge <= chord / 3.0))
        throw Error("square piece (iii): level gap incomparable with corner distance");
    if (!(chord / 3.0 <= mesh.domain_diam / (10.0 * c0)))
        throw Error("square piece (iii): corners too far apart for this domain");

    DistanceField f = build_distance_field(mesh.domain, grid_h);
    LevelCurve g1 = extract_level_curve(f, t1);
    LevelCurve g2 = extract_level_curve(f, t2 > 0 ? t2 : grid_h * 0.5);
    if (g1.components.size() != 1 || g2.components.size() != 1)
        throw Error("square piece: level sets are not single curves at these levels");
    double tol = std::max(4.0 * grid_h, 1e-4 * mesh.domain_diam);
    std::vector<Vec2> upper_arc = arc_points_between(g1.components[0], px1, py1, tol);
    std::vector<Vec2> lower_arc = arc_points_between(g2.components[0], px2, py2, tol);
    std::reverse(lower_arc.begin(), lower_arc.end());  // run py2 -> px2

    std::vector<Vec2> polygon = upper_arc;
    polygon.insert(polygon.end(), lower_arc.begin(), lower_arc.end());

    auto pred = [&](const Vec3& p) {
        return p.z >= 0 && point_in_polygon({p.x, p.y}, polygon);
    };
    SquarePiece piece;
    piece.t1 = t1;
    piece.t2 = t2;
    piece.x1 = {px1.x, px1.y, std::pow(t1, alpha)};
    piece.y1 = {py1.x, py1.y, std::pow(t1, alpha)};
    piece.x2 = {px2.x, px2.y, std::pow(t2, alpha)};
    piece.y2 = {py2.x, py2.y, std::pow(t2, alpha)};
    piece.area = region_area(mesh, pred);

    // Diameter from the lifted patch boundary, subsampled.
    std::vector<Vec3> lifted;
    std::size_t stride = std::max<std::size_t>(1, polygon.size() / 512);
    for (std::size_t i = 0; i < polygon.size(); i += stride) {
        double d = mesh.index.distance(polygon[i]);
        lifted.push_back({polygon[i].x, polygon[i].y, std::pow(d, alpha)});
    }
    double best = 0;
    for (std::size_t i = 0; i < lifted.size(); i++)
        for (std::size_t j = i + 1; j < lifted.size(); j++)
            best = std::max(best, dist(lifted[i], lifted[j]));
    piece.diam = best;
    piece.ratio = piece.diam > 0 ? piece.area / (piece.diam * piece.diam) : 0.0;
    return piece;
}

}  // namespace domelab
