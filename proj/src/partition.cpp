#include "domelab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "domelab/io.hpp"
#include "domelab/kernels.hpp"

namespace domelab {

namespace {

struct WalkResult {
    std::vector<double> cuts;     // interior piece boundaries (unwrapped params)
    double remainder_diam = 0.0;  // diameter of the final piece
};

class ArcWalker {
  public:
    ArcWalker(const ArcRef& arc) : arc_(arc) {
        pts_ = materialize(arc, &params_);
        n_ = pts_.size();
    }

    // Cut the arc into pieces of diameter exactly `target` (except the last).
    WalkResult walk(double target) const {
        WalkResult res;
        const PolyCurve& c = *arc_.curve;
        const double ptol = 1e-12 * std::max(1.0, c.total_length());

        std::vector<double> px, py;
        px.reserve(64);
        py.reserve(64);
        auto reset_piece = [&](const Vec2& p) {
            px.clear();
            py.clear();
            px.push_back(p.x);
            py.push_back(p.y);
        };
        reset_piece(pts_[0]);
        double cur2 = 0.0;
        double last_param = params_[0];
        Vec2 last_point = pts_[0];
        const double target2 = target * target;

        std::size_t j = 1;
        while (j < n_) {
            double cand = std::max(
                cur2, kernels::max_dist2_to_points(pts_[j].x, pts_[j].y, px.data(),
                                                   py.data(), px.size()));
            if (cand < target2) {
                px.push_back(pts_[j].x);
                py.push_back(pts_[j].y);
                cur2 = cand;
                last_param = params_[j];
                last_point = pts_[j];
                j++;
                continue;
            }
            // Crossing lies on (last_param, params_[j]]: bisect.
            double lo = last_param, hi = params_[j];
            for (int it = 0; it < 80 && hi - lo > ptol; it++) {
                double mid = 0.5 * (lo + hi);
                Vec2 q = c.point_at(mid);
                double d2 = std::max(
                    cur2, kernels::max_dist2_to_points(q.x, q.y, px.data(), py.data(),
                                                       px.size()));
                if (d2 >= target2)
                    hi = mid;
                else
                    lo = mid;
            }
            double cut = hi;
            if (cut >= params_.back() - ptol) break;  // lands on the arc end
            res.cuts.push_back(cut);
            Vec2 q = c.point_at(cut);
            reset_piece(q);
            cur2 = 0.0;
            last_param = cut;
            last_point = q;
            // Do not advance j: pts_[j] may force another cut immediately.
        }
        (void)last_point;
        res.remainder_diam = std::sqrt(cur2);
        return res;
    }

    const std::vector<double>& params() const { return params_; }

  private:
    ArcRef arc_;
    std::vector<Vec2> pts_;
    std::vector<double> params_;
    std::size_t n_ = 0;
};

Partition assemble(const ArcRef& arc, const std::vector<double>& cuts, double delta) {
    Partition p;
    p.parent = arc;
    p.delta = delta;
    double prev = arc.start;
    for (double c : cuts) {
        p.pieces.push_back(ArcRef{arc.curve, prev, c});
        prev = c;
    }
    p.pieces.push_back(ArcRef{arc.curve, prev, arc.end});
    return p;
}

}  // namespace

Partition build_delta_partition(const ArcRef& arc, double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw Error("delta must lie in (0,1)");
    const PolyCurve& c = *arc.curve;
    double D = arc_diameter(arc);
    if (delta * D <= 2.0 * c.min_spacing())
        throw Error("delta-partition below curve resolution; generate a deeper curve");

    ArcWalker walker(arc);
    const double lo_band = 0.5 * delta * D;
    const double hi_band = delta * D;

    auto try_target = [&](double t) -> std::optional<Partition> {
        WalkResult w = walker.walk(t * D);
        double rd = w.remainder_diam;
        if (rd >= lo_band * (1.0 + 1e-12) && rd <= hi_band * (1.0 - 1e-12))
            return assemble(arc, w.cuts, delta);
        return std::nullopt;
    };

    if (auto p = try_target(0.75 * delta)) return *p;
    // Golden-ratio sweep of the cut target over [delta/2, delta); the
    // remainder size is not monotone in the target, so a plain bisection can
    // stall.
    const double phi = 0.6180339887498949;
    double u = 0.5;
    for (int k = 0; k < 64; k++) {
        u = std::fmod(u + phi, 1.0);
        double t = delta * (0.52 + 0.46 * u);
        if (auto p = try_target(t)) return *p;
    }

    // Fallback: walk at 3/4 delta, merge the short remainder into the last
    // piece; if the merged piece leaves the band, split it at its diameter
    // midpoint.
    WalkResult w = walker.walk(0.75 * delta * D);
    if (w.cuts.empty()) throw Error("delta-partition failed: no cut produced");
    std::vector<double> cuts = w.cuts;
    cuts.pop_back();
    double merged_start = cuts.empty() ? arc.start : cuts.back();
    ArcRef merged{arc.curve, merged_start, arc.end};
    double dm = arc_diameter(merged);
    if (dm <= hi_band) {
        Partition p = assemble(arc, cuts, delta);
        return p;
    }
    ArcWalker mw(merged);
    WalkResult split = mw.walk(0.5 * dm);
    if (split.cuts.size() == 1) {
        cuts.push_back(split.cuts[0]);
        Partition p = assemble(arc, cuts, delta);
        for (const ArcRef& piece : p.pieces) {
            double pd = arc_diameter(piece);
            if (pd < lo_band * (1 - 1e-9) || pd > hi_band * (1 + 1e-9))
                throw Error("delta-partition failed: fallback split off band");
        }
        return p;
    }
    throw Error("delta-partition failed for this arc/delta");
}

double m_index(const ArcRef& arc, const Partition& partition) {
    if (partition.parent.curve != arc.curve)
        throw Error("partition parent does not match arc");
    const double L = arc.curve->total_length();
    const double tol = 1e-9 * std::max(1.0, L);
    auto mod_close = [&](double a, double b) {
        double d = std::fmod(std::abs(a - b), L);
        return d < tol || L - d < tol;
    };
    if (!mod_close(partition.parent.start, arc.start) ||
        !mod_close(partition.parent.end, arc.end))
        throw Error("partition parent does not match arc");
    // Tiling check: contiguous pieces spanning the parent.
    double prev = partition.parent.start;
    for (const ArcRef& piece : partition.pieces) {
        if (!mod_close(piece.start, prev)) throw Error("partition does not tile arc");
        prev = piece.start + piece.length();
    }
    if (!mod_close(prev, partition.parent.end)) throw Error("partition does not tile arc");

    double sum = 0.0;
    for (const ArcRef& piece : partition.pieces) sum += arc_diameter(piece);
    return sum / arc_diameter(arc);
}

Partition refine(const Partition& partition, const std::vector<Partition>& sub_partitions) {
    if (sub_partitions.size() != partition.pieces.size())
        throw Error("need one sub-partition per piece");
    Partition out;
    out.parent = partition.parent;
    const double L = partition.parent.curve->total_length();
    const double tol = 1e-9 * std::max(1.0, L);
    auto mod_close = [&](double a, double b) {
        double d = std::fmod(std::abs(a - b), L);
        return d < tol || L - d < tol;
    };
    for (std::size_t i = 0; i < partition.pieces.size(); i++) {
        const ArcRef& piece = partition.pieces[i];
        const Partition& sub = sub_partitions[i];
        if (sub.parent.curve != partition.parent.curve ||
            !mod_close(sub.parent.start, piece.start) ||
            !mod_close(sub.parent.end, piece.end) ||
            std::abs(sub.parent.length() - piece.length()) > tol)
            throw Error("sub-partition does not tile its piece");
        double prev = sub.parent.start;
        for (const ArcRef& sp : sub.pieces) {
            if (!mod_close(sp.start, prev)) throw Error("sub-partition does not tile its piece");
            prev = sp.start + sp.length();
        }
        if (!mod_close(prev, sub.parent.end))
            throw Error("sub-partition does not tile its piece");
        for (const ArcRef& sp : sub.pieces) out.pieces.push_back(sp);
    }
    return out;
}

WcaReport weak_chord_arc_scan(const PolyCurve& curve, const std::vector<ArcRef>& subarcs,
                              double m0) {
    WcaReport report;
    report.threshold = m0;
    for (std::size_t i = 0; i < subarcs.size(); i++) {
        const ArcRef& sub = subarcs[i];
        WcaRow row;
        row.subarc_id = "arc" + std::to_string(i);
        row.start = sub.start;
        row.end = sub.end;
        try {
            double d = arc_diameter(sub);
            row.diam = d;
            if (d >= 1.0) throw Error("subarc diameter must be < 1 (normalization)");
            Partition p = build_delta_partition(sub, d);
            row.pieces = p.pieces.size();
            row.m_index = m_index(sub, p);
            row.pass = row.m_index <= m0;
        } catch (const Error& e) {
            row.ok = false;
            row.note = e.what();
        }
        if (row.ok && row.m_index > report.max_index) {
            report.max_index = row.m_index;
            report.witness_row = i;
        }
        report.per_subarc.push_back(std::move(row));
    }
    return report;
}

double alpha_partition_index(const ArcRef& arc, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0,1)");
    double d = arc_diameter(arc);
    if (d >= 1.0) throw Error("arc diameter must be < 1 (normalization)");
    double delta = std::pow(d, 1.0 / alpha - 1.0);
    Partition p = build_delta_partition(arc, delta);
    return m_index(arc, p);
}

std::string wca_report_csv(const WcaReport& report) {
    std::ostringstream os;
    os << "subarc_id,start,end,diam,pieces,m_index,pass\n";
    for (const WcaRow& r : report.per_subarc) {
        os << r.subarc_id << ',' << io::fmt(r.start) << ',' << io::fmt(r.end) << ','
           << io::fmt(r.diam) << ',' << r.pieces << ',' << io::fmt(r.m_index) << ','
           << (r.ok ? (r.pass ? "true" : "false") : "flagged") << '\n';
    }
    return os.str();
}

}  // namespace domelab
