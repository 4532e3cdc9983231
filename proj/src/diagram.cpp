#include "skl/diagram.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace skl {

namespace {

long floor_q(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q.get_si();
}

long ceil_q(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q.get_si();
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

IVec2 to_ivec(const Point& p) {
  if (!is_integer(p.x) || !is_integer(p.y))
    throw std::logic_error("expected an integer translation, got " + p.to_string());
  return {p.x.get_num().get_si(), p.y.get_num().get_si()};
}

struct SegRef {
  std::size_t comp;
  std::size_t seg;
  Point start;
  Point dir;
  Rational minx, maxx, miny, maxy;
};

std::vector<SegRef> segment_table(const std::vector<Polyline>& comps) {
  std::vector<SegRef> out;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    for (std::size_t s = 0; s < comps[c].segment_count(); ++s) {
      Point a = comps[c].seg_start(s);
      Point b = comps[c].seg_end(s);
      out.push_back({c, s, a, b - a, std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y),
                     std::max(a.y, b.y)});
    }
  }
  return out;
}

std::string seg_name(const SegRef& s) {
  return "component " + std::to_string(s.comp) + " segment " + std::to_string(s.seg);
}

// Shared vertex between consecutive segments of one component.
bool legit_junction(const std::vector<Polyline>& comps, const SegRef& a, const SegRef& b, const IVec2& t,
                    const Rational& s, const Rational& u) {
  if (a.comp != b.comp) return false;
  const auto& pl = comps[a.comp];
  const std::size_t n = pl.segment_count();
  auto next = [n](std::size_t k) { return (k + 1) % n; };
  auto trans = [&](std::size_t k) { return k == n - 1 ? pl.wrap : IVec2{}; };
  if (s == 1 && u == 0 && b.seg == next(a.seg) && t == trans(a.seg)) return true;
  if (s == 0 && u == 1 && a.seg == next(b.seg) && t == -trans(b.seg)) return true;
  return false;
}

void validate_shape(const Surface& surface, const std::vector<Polyline>& comps) {
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto& pl = comps[c];
    if (pl.vertices.empty())
      throw DiagramError(DiagramError::Kind::Malformed, "component " + std::to_string(c) + " has no vertices");
    if (pl.heights.size() != pl.segment_count())
      throw DiagramError(DiagramError::Kind::Malformed,
                         "component " + std::to_string(c) + " needs one height per segment");
    if (!surface.periodic() && !pl.wrap.is_zero())
      throw DiagramError(DiagramError::Kind::Malformed,
                         "component " + std::to_string(c) + " wraps on the disk");
    for (std::size_t s = 0; s < pl.segment_count(); ++s)
      if (pl.seg_start(s) == pl.seg_end(s))
        throw DiagramError(DiagramError::Kind::Malformed,
                           "component " + std::to_string(c) + " segment " + std::to_string(s) +
                               " has zero length");
  }
}

void check_puncture(const Surface& surface, const std::vector<SegRef>& segs) {
  if (!surface.puncture()) return;
  const Point& p = *surface.puncture();
  for (const auto& s : segs) {
    for (long tx = ceil_q(s.minx - p.x); tx <= floor_q(s.maxx - p.x); ++tx)
      for (long ty = ceil_q(s.miny - p.y); ty <= floor_q(s.maxy - p.y); ++ty) {
        Point x = p + Point(tx, ty) - s.start;
        if (sgn(cross(x, s.dir)) == 0) {
          Rational k = dot(x, s.dir) / dot(s.dir, s.dir);
          if (k >= 0 && k <= 1)
            throw DiagramError(DiagramError::Kind::PunctureHit, seg_name(s) + " passes through the puncture");
        }
      }
  }
}

}  // namespace

std::string Point::to_string() const { return "(" + x.get_str() + "," + y.get_str() + ")"; }

Rational cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
Rational dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }

std::string IVec2::to_string() const {
  return "(" + std::to_string(p) + "," + std::to_string(q) + ")";
}

std::int64_t det(const IVec2& a, const IVec2& b) { return a.p * b.q - a.q * b.p; }
std::int64_t gcd_abs(const IVec2& v) { return std::gcd(v.p < 0 ? -v.p : v.p, v.q < 0 ? -v.q : v.q); }

std::string to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::Disk: return "disk";
    case SurfaceKind::Torus: return "torus";
    case SurfaceKind::PuncturedTorus: return "punctured_torus";
  }
  return "?";
}

SurfaceKind surface_kind_from_string(const std::string& name) {
  if (name == "disk") return SurfaceKind::Disk;
  if (name == "torus") return SurfaceKind::Torus;
  if (name == "punctured_torus") return SurfaceKind::PuncturedTorus;
  throw std::invalid_argument("unknown surface kind '" + name + "'");
}

Surface Surface::punctured_torus(Point puncture) {
  Surface s(SurfaceKind::PuncturedTorus, std::nullopt);
  s.puncture_ = s.reduce(puncture);
  return s;
}

Lattice Surface::homology() const {
  return kind_ == SurfaceKind::Disk ? Lattice() : Lattice::symplectic(1);
}

HomClass Surface::to_class(const IVec2& v) const {
  if (kind_ == SurfaceKind::Disk) return HomClass();
  return HomClass{v.p, v.q};
}

Point Surface::reduce(const Point& p) const {
  if (!periodic()) return p;
  return {p.x - floor_q(p.x), p.y - floor_q(p.y)};
}

Point Polyline::seg_end(std::size_t s) const {
  if (s + 1 < vertices.size()) return vertices[s + 1];
  return vertices[0] + wrap.as_point();
}

Polyline make_polyline(std::vector<Point> vertices, IVec2 wrap, int height) {
  Polyline pl;
  pl.heights.assign(vertices.size(), height);
  pl.vertices = std::move(vertices);
  pl.wrap = wrap;
  return pl;
}

std::vector<RawCrossing> find_crossings(const Surface& surface, const std::vector<Polyline>& comps) {
  validate_shape(surface, comps);
  const auto segs = segment_table(comps);
  check_puncture(surface, segs);

  std::vector<RawCrossing> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const SegRef& a = segs[i];
    for (std::size_t j = i; j < segs.size(); ++j) {
      const SegRef& b = segs[j];
      long tx0 = 0, tx1 = 0, ty0 = 0, ty1 = 0;
      if (surface.periodic()) {
        tx0 = ceil_q(a.minx - b.maxx);
        tx1 = floor_q(a.maxx - b.minx);
        ty0 = ceil_q(a.miny - b.maxy);
        ty1 = floor_q(a.maxy - b.miny);
      }
      for (long tx = tx0; tx <= tx1; ++tx) {
        for (long ty = ty0; ty <= ty1; ++ty) {
          if (i == j && (tx < 0 || (tx == 0 && ty <= 0))) continue;
          const IVec2 t{tx, ty};
          const Point d = b.start + t.as_point() - a.start;
          const Rational den = cross(a.dir, b.dir);
          auto where = [&] {
            return seg_name(a) + " and " + seg_name(b) + " (shift " + t.to_string() + ")";
          };
          if (sgn(den) != 0) {
            Rational s = cross(d, b.dir) / den;
            Rational u = cross(d, a.dir) / den;
            if (s < 0 || s > 1 || u < 0 || u > 1) continue;
            if (s > 0 && s < 1 && u > 0 && u < 1) {
              RawCrossing rc;
              rc.point = surface.reduce(a.start + s * a.dir);
              rc.a = {a.comp, a.seg, s, a.dir, a.start + s * a.dir};
              rc.b = {b.comp, b.seg, u, b.dir, b.start + u * b.dir};
              out.push_back(std::move(rc));
            } else if (!legit_junction(comps, a, b, t, s, u)) {
              throw DiagramError(DiagramError::Kind::VertexIncidence, "vertex incidence between " + where());
            }
            continue;
          }
          if (sgn(cross(d, a.dir)) != 0) continue;  // parallel, disjoint
          const Rational len2 = dot(a.dir, a.dir);
          Rational s0 = dot(d, a.dir) / len2;
          Rational s1 = dot(d + b.dir, a.dir) / len2;
          Rational lo = std::max(std::min(s0, s1), Rational(0));
          Rational hi = std::min(std::max(s0, s1), Rational(1));
          if (lo > hi) continue;
          if (lo < hi) throw DiagramError(DiagramError::Kind::NonTransverse, "overlapping segments: " + where());
          Rational u = (s0 == lo) ? Rational(0) : Rational(1);
          if (!legit_junction(comps, a, b, t, lo, u))
            throw DiagramError(DiagramError::Kind::VertexIncidence, "collinear touch between " + where());
        }
      }
    }
  }

  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return out[x].point < out[y].point; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const auto& x = out[order[k - 1]];
    const auto& y = out[order[k]];
    if (x.point == y.point)
      throw DiagramError(DiagramError::Kind::TriplePoint,
                         "triple point at " + x.point.to_string() + " (components " + std::to_string(x.a.component) +
                             ", " + std::to_string(x.b.component) + ", " + std::to_string(y.a.component) + ", " +
                             std::to_string(y.b.component) + ")");
  }
  std::vector<RawCrossing> sorted;
  sorted.reserve(out.size());
  for (auto k : order) sorted.push_back(std::move(out[k]));
  return sorted;
}

namespace {

// Lifted point at a position in [0, 2n) along a component.
Point point_at(const Polyline& pl, const Rational& pos) {
  const long n = static_cast<long>(pl.segment_count());
  long whole = floor_q(pos);
  Rational frac = pos - whole;
  Point shift;
  if (whole >= n) {
    whole -= n;
    shift = pl.wrap.as_point();
  }
  const auto s = static_cast<std::size_t>(whole);
  return pl.seg_start(s) + frac * pl.seg_dir(s) + shift;
}

int height_at(const Polyline& pl, const Rational& pos) {
  const long n = static_cast<long>(pl.segment_count());
  return pl.heights[static_cast<std::size_t>(floor_q(pos) % n)];
}

// Points from pos a to pos b (b > a) along the component.
void walk(const Polyline& pl, const Rational& a, const Rational& b, Arc& arc) {
  arc.points.push_back(point_at(pl, a));
  Rational cur = a;
  for (long v = floor_q(a) + 1; v < b; ++v) {
    arc.heights.push_back(height_at(pl, cur));
    arc.points.push_back(point_at(pl, Rational(v)));
    cur = v;
  }
  arc.heights.push_back(height_at(pl, cur));
  arc.points.push_back(point_at(pl, b));
}

}  // namespace

Diagram Diagram::build(Surface surface, std::vector<Polyline> components, std::vector<OverHint> hints) {
  auto raw = find_crossings(surface, components);

  std::map<Point, Point> hint_map;
  for (auto& h : hints) hint_map[surface.reduce(h.at)] = h.over_direction;

  Diagram d;
  d.surface_ = std::move(surface);
  d.components_ = std::move(components);
  for (auto& h : hints) h.at = d.surface_.reduce(h.at);
  d.hints_ = std::move(hints);

  for (auto& rc : raw) {
    bool a_over = false;
    if (auto it = hint_map.find(rc.point); it != hint_map.end()) {
      if (sgn(cross(rc.a.direction, it->second)) == 0) {
        a_over = true;
      } else if (sgn(cross(rc.b.direction, it->second)) == 0) {
        a_over = false;
      } else {
        throw DiagramError(DiagramError::Kind::Malformed,
                           "over hint at " + rc.point.to_string() + " matches neither strand");
      }
    } else {
      int ha = d.components_[rc.a.component].heights[rc.a.segment];
      int hb = d.components_[rc.b.component].heights[rc.b.segment];
      if (ha == hb)
        throw DiagramError(DiagramError::Kind::MissingOverride,
                           "crossing at " + rc.point.to_string() + " between component " +
                               std::to_string(rc.a.component) + " segment " + std::to_string(rc.a.segment) +
                               " and component " + std::to_string(rc.b.component) + " segment " +
                               std::to_string(rc.b.segment) + " has no over/under information");
      a_over = ha > hb;
    }
    Crossing c;
    c.point = rc.point;
    c.over = a_over ? rc.a : rc.b;
    c.under = a_over ? rc.b : rc.a;
    c.handedness = sgn(cross(c.over.direction, c.under.direction));
    d.crossings_.push_back(std::move(c));
  }

  // Arcs: split each component at its crossing events.
  struct Event {
    Rational pos;
    int out_end;
    int in_end;
  };
  std::vector<std::vector<Event>> events(d.components_.size());
  for (std::size_t k = 0; k < d.crossings_.size(); ++k) {
    const auto& c = d.crossings_[k];
    events[c.over.component].push_back({c.over.position(), end_id(k, Role::Over, true), end_id(k, Role::Over, false)});
    events[c.under.component].push_back(
        {c.under.position(), end_id(k, Role::Under, true), end_id(k, Role::Under, false)});
  }
  d.end_arc_.assign(4 * d.crossings_.size(), 0);
  for (std::size_t comp = 0; comp < d.components_.size(); ++comp) {
    auto& ev = events[comp];
    std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) { return x.pos < y.pos; });
    const auto& pl = d.components_[comp];
    const Rational n(static_cast<long>(pl.segment_count()));
    if (ev.empty()) {
      Arc arc;
      arc.component = comp;
      walk(pl, 0, n, arc);
      d.arcs_.push_back(std::move(arc));
      continue;
    }
    for (std::size_t j = 0; j < ev.size(); ++j) {
      const Event& from = ev[j];
      const Event& to = ev[(j + 1) % ev.size()];
      Arc arc;
      arc.component = comp;
      arc.start_end = from.out_end;
      arc.end_end = to.in_end;
      Rational stop = to.pos;
      if (j + 1 == ev.size()) stop += n;
      walk(pl, from.pos, stop, arc);
      d.end_arc_[static_cast<std::size_t>(arc.start_end)] = d.arcs_.size();
      d.end_arc_[static_cast<std::size_t>(arc.end_end)] = d.arcs_.size();
      d.arcs_.push_back(std::move(arc));
    }
  }
  return d;
}

IVec2 Diagram::total_class() const {
  IVec2 total;
  for (const auto& c : components_) total += c.wrap;
  return total;
}

Point Diagram::ray(int end) const {
  const auto& c = crossings_[end_crossing(end)];
  const Point& dir = end_role(end) == Role::Over ? c.over.direction : c.under.direction;
  return end_outgoing(end) ? dir : -dir;
}

std::vector<OverHint> Diagram::crossing_hints() const {
  std::vector<OverHint> out;
  out.reserve(crossings_.size());
  for (const auto& c : crossings_) out.push_back({c.point, c.over.direction});
  return out;
}

int State::sum() const { return std::accumulate(choice.begin(), choice.end(), 0); }

State state_from_index(std::size_t crossings, std::uint64_t index) {
  State s;
  s.choice.resize(crossings);
  for (std::size_t k = 0; k < crossings; ++k) s.choice[k] = ((index >> k) & 1U) ? -1 : 1;
  return s;
}

namespace {

// Partner of an end under choice +1/-1 at its crossing, or 0 to pass straight through.
int partner_end(const Diagram& d, int end, int choice) {
  const std::size_t k = end_crossing(end);
  const bool out = end_outgoing(end);
  const Role role = end_role(end);
  const Role other = role == Role::Over ? Role::Under : Role::Over;
  if (choice == 0) return end_id(k, role, !out);
  const bool out_with_in = (choice > 0) == (d.crossings()[k].handedness > 0);
  return end_id(k, other, out_with_in ? !out : out);
}

}  // namespace

int lattice_winding(const std::vector<Point>& poly, const Point& p, bool periodic) {
  if (poly.size() < 2) return 0;
  Rational minx = poly[0].x, maxx = poly[0].x, miny = poly[0].y, maxy = poly[0].y;
  for (const auto& q : poly) {
    minx = std::min(minx, q.x);
    maxx = std::max(maxx, q.x);
    miny = std::min(miny, q.y);
    maxy = std::max(maxy, q.y);
  }
  long tx0 = 0, tx1 = 0, ty0 = 0, ty1 = 0;
  if (periodic) {
    tx0 = floor_q(minx - p.x);
    tx1 = ceil_q(maxx - p.x);
    ty0 = floor_q(miny - p.y);
    ty1 = ceil_q(maxy - p.y);
  }
  int total = 0;
  for (long tx = tx0; tx <= tx1; ++tx)
    for (long ty = ty0; ty <= ty1; ++ty) {
      Point x = p + Point(tx, ty);
      int w = 0;
      for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
        const Point& a = poly[k];
        const Point& b = poly[k + 1];
        int side = sgn(cross(b - a, x - a));
        if (a.y <= x.y && x.y < b.y && side > 0) ++w;
        if (b.y <= x.y && x.y < a.y && side < 0) --w;
      }
      total += w;
    }
  return total;
}

std::vector<ResolvedComponent> trace(const Diagram& d, const std::vector<int>& choice) {
  if (choice.size() != d.crossing_count()) throw std::invalid_argument("trace: choice length mismatch");
  const auto& arcs = d.arcs();
  std::vector<bool> visited(arcs.size(), false);
  std::vector<ResolvedComponent> out;
  const bool need_winding = d.surface().kind() == SurfaceKind::PuncturedTorus;

  for (std::size_t a0 = 0; a0 < arcs.size(); ++a0) {
    if (visited[a0]) continue;
    ResolvedComponent comp;
    Point disp;
    std::vector<Point> poly;
    std::size_t cur = a0;
    bool fwd = true;
    while (true) {
      visited[cur] = true;
      comp.arcs.emplace_back(cur, fwd);
      const Arc& arc = arcs[cur];
      Point step = arc.displacement();
      disp += fwd ? step : -step;
      if (need_winding) {
        std::vector<Point> pts = arc.points;
        if (!fwd) std::reverse(pts.begin(), pts.end());
        Point off = poly.empty() ? Point() : poly.back() - pts.front();
        for (std::size_t k = poly.empty() ? 0 : 1; k < pts.size(); ++k) poly.push_back(pts[k] + off);
      }
      if (arc.start_end < 0) break;
      const int arrival = fwd ? arc.end_end : arc.start_end;
      const std::size_t k = end_crossing(arrival);
      const int next_end = partner_end(d, arrival, choice[k]);
      if (choice[k] != 0) comp.passages.push_back({k, arrival, next_end});
      const std::size_t next = d.arc_at(next_end);
      const bool next_fwd = end_outgoing(next_end);
      if (next == a0 && next_fwd) break;
      cur = next;
      fwd = next_fwd;
    }
    comp.homology = to_ivec(disp);
    if (need_winding && comp.homology.is_zero()) {
      comp.puncture_winding = lattice_winding(poly, *d.surface().puncture(), true);
    }
    comp.trivial = triviality(comp, d.surface());
    out.push_back(std::move(comp));
  }
  return out;
}

bool triviality(const ResolvedComponent& component, const Surface& surface) {
  switch (surface.kind()) {
    case SurfaceKind::Disk: return true;
    case SurfaceKind::Torus: return component.homology.is_zero();
    case SurfaceKind::PuncturedTorus: return component.homology.is_zero() && component.puncture_winding == 0;
  }
  return false;
}

IVec2 normalize_slope(const IVec2& v) {
  if (v.p < 0 || (v.p == 0 && v.q < 0)) return -v;
  return v;
}

SimpleMulticurve::SimpleMulticurve(SurfaceKind kind, std::map<IVec2, int> slopes, int boundary_parallel)
    : kind_(kind), boundary_parallel_(boundary_parallel) {
  if (boundary_parallel < 0) throw std::invalid_argument("negative boundary-parallel count");
  if (boundary_parallel > 0 && kind != SurfaceKind::PuncturedTorus)
    throw std::invalid_argument("boundary-parallel curves need a puncture");
  for (const auto& [v, mult] : slopes) {
    if (mult < 0) throw std::invalid_argument("negative multiplicity");
    if (mult == 0) continue;
    if (gcd_abs(v) != 1) throw std::invalid_argument("slope " + v.to_string() + " is not primitive");
    slopes_[normalize_slope(v)] += mult;
  }
  if (kind == SurfaceKind::Disk && !slopes_.empty()) throw std::invalid_argument("the disk has no essential curves");
  if (slopes_.size() > 1) throw std::invalid_argument("disjoint essential curves must share one slope");
}

int SimpleMulticurve::component_count() const {
  int n = boundary_parallel_;
  for (const auto& [v, m] : slopes_) n += m;
  return n;
}

IVec2 SimpleMulticurve::oriented_class() const {
  IVec2 total;
  for (const auto& [v, m] : slopes_) total += static_cast<std::int64_t>(m) * v;
  return total;
}

Z2Class SimpleMulticurve::z2_class() const {
  if (kind_ == SurfaceKind::Disk) return {};
  IVec2 c = oriented_class();
  return reduce_mod2(HomClass{c.p, c.q});
}

std::int64_t SimpleMulticurve::complexity() const {
  std::int64_t total = boundary_parallel_;
  for (const auto& [v, m] : slopes_) total += m * std::max(v.p < 0 ? -v.p : v.p, v.q < 0 ? -v.q : v.q);
  return total;
}

std::string SimpleMulticurve::to_string() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto& [v, m] : slopes_) {
    out << (first ? "" : ", ") << v.to_string() << ':' << m;
    first = false;
  }
  if (boundary_parallel_ > 0) out << (first ? "" : ", ") << "bp:" << boundary_parallel_;
  out << '}';
  return out.str();
}

SimpleMulticurve canonical_multicurve(const Surface& surface, const std::vector<CanonicalInput>& components) {
  std::map<IVec2, int> slopes;
  int bp = 0;
  for (const auto& c : components) {
    if (surface.kind() == SurfaceKind::Disk) throw std::invalid_argument("every curve on the disk is trivial");
    if (c.homology.is_zero()) {
      if (surface.kind() == SurfaceKind::PuncturedTorus && (c.puncture_winding == 1 || c.puncture_winding == -1)) {
        ++bp;
        continue;
      }
      throw std::invalid_argument("trivial component passed to canonical_multicurve");
    }
    if (gcd_abs(c.homology) != 1)
      throw std::invalid_argument("component class " + c.homology.to_string() + " is not primitive");
    slopes[normalize_slope(c.homology)] += 1;
  }
  if (slopes.size() > 1) throw std::invalid_argument("components with different slopes cannot be disjoint");
  return {surface.kind(), std::move(slopes), bp};
}

Resolution resolve(const Diagram& d, const State& s) {
  if (s.choice.size() != d.crossing_count()) throw std::invalid_argument("resolve: state length mismatch");
  for (int ch : s.choice)
    if (ch != 1 && ch != -1) throw std::invalid_argument("resolve: state entries must be +1 or -1");
  Resolution r;
  r.components = trace(d, s.choice);
  r.c = s.sum();
  std::vector<CanonicalInput> essential;
  for (const auto& comp : r.components) {
    if (comp.trivial) {
      ++r.t;
    } else {
      essential.push_back({comp.homology, comp.puncture_winding});
    }
  }
  r.s_prime = canonical_multicurve(d.surface(), essential);
  return r;
}

OrientedDiagram::OrientedDiagram(const Diagram& d, std::vector<int> dirs) : base(&d), direction(std::move(dirs)) {
  if (direction.size() != d.component_count()) throw std::invalid_argument("orientation length mismatch");
  for (int x : direction)
    if (x != 1 && x != -1) throw std::invalid_argument("orientation entries must be +1 or -1");
}

int OrientationData::seifert_count(const State& s) const {
  int n = 0;
  for (std::size_t k = 0; k < per_crossing.size(); ++k) n += s.choice[k] == per_crossing[k].seifert_choice;
  return n;
}

OrientationData orient_data(const OrientedDiagram& od) {
  const Diagram& d = *od.base;
  OrientationData out;
  auto oriented_out = [&](int end) {
    const auto& c = d.crossings()[end_crossing(end)];
    std::size_t comp = end_role(end) == Role::Over ? c.over.component : c.under.component;
    return end_outgoing(end) == (od.direction[comp] > 0);
  };
  for (std::size_t k = 0; k < d.crossing_count(); ++k) {
    const auto& c = d.crossings()[k];
    CrossingOrientation co;
    co.sign = c.handedness * od.direction[c.over.component] * od.direction[c.under.component];
    // The Seifert smoothing joins an oriented-incoming end to an oriented-outgoing one.
    const int probe = end_id(k, Role::Over, true);
    co.seifert_choice = oriented_out(probe) != oriented_out(partner_end(d, probe, +1)) ? +1 : -1;
    out.writhe += co.sign;
    out.per_crossing.push_back(co);
  }

  std::vector<int> seifert(d.crossing_count());
  for (std::size_t k = 0; k < seifert.size(); ++k) seifert[k] = out.per_crossing[k].seifert_choice;
  for (const auto& comp : trace(d, seifert)) {
    auto agrees = [&](const std::pair<std::size_t, bool>& a) {
      return a.second == (od.direction[d.arcs()[a.first].component] > 0);
    };
    const bool first = agrees(comp.arcs.front());
    for (const auto& a : comp.arcs)
      if (agrees(a) != first) throw std::logic_error("Seifert smoothing does not respect the orientation");
    out.xi += first ? comp.homology : -comp.homology;
  }
  return out;
}

ParityDetail euler_parity_detail(const Diagram& d, const OrientedDiagram& od, const State& s) {
  const auto data = orient_data(od);
  const auto comps = trace(d, s.choice);
  ParityDetail p;
  p.n = static_cast<int>(comps.size());
  p.chi = static_cast<int>(d.component_count()) - static_cast<int>(d.crossing_count());
  p.ss = data.seifert_count(s);

  std::vector<std::vector<Passage>> at(d.crossing_count());
  IVec2 s_bar;
  for (const auto& comp : comps) {
    s_bar += comp.homology;
    for (const auto& pass : comp.passages) at[pass.crossing].push_back(pass);
  }
  for (std::size_t k = 0; k < d.crossing_count(); ++k) {
    if (s.choice[k] == data.per_crossing[k].seifert_choice) continue;
    if (at[k].size() != 2) throw std::logic_error("crossing not passed exactly twice");
    Point c1 = d.ray(at[k][0].to) - d.ray(at[k][0].from);
    Point c2 = d.ray(at[k][1].to) - d.ray(at[k][1].from);
    if (sgn(dot(c1, c2)) < 0) ++p.m;
  }
  if (d.surface().periodic()) {
    const auto lattice = d.surface().homology();
    p.xi_dot_s = lattice.omega(d.surface().to_class(data.xi), d.surface().to_class(s_bar));
  }
  const int cr = static_cast<int>(d.crossing_count());
  p.parity_ok = (p.n + p.m + p.chi) % 2 == 0;
  p.m_formula_ok = p.xi_dot_s % 2 == 0 && ((cr + p.ss + p.xi_dot_s / 2 - p.m) % 2 + 2) % 2 == 0;
  return p;
}

bool euler_parity_check(const Diagram& d, const OrientedDiagram& od, const State& s) {
  auto p = euler_parity_detail(d, od, s);
  return p.parity_ok && p.m_formula_ok;
}

namespace {

bool sweep_hits_puncture(const Surface& surface, const std::vector<Polyline>& comps, const Point& off) {
  if (!surface.puncture()) return false;
  const Point& p = *surface.puncture();
  for (const auto& seg : segment_table(comps)) {
    const Rational sx = seg.minx + off.x, sX = seg.maxx + off.x, sy = seg.miny + off.y, sY = seg.maxy + off.y;
    const Rational minx = std::min(seg.minx, sx), maxx = std::max(seg.maxx, sX);
    const Rational miny = std::min(seg.miny, sy), maxy = std::max(seg.maxy, sY);
    for (long tx = floor_q(minx - p.x); tx <= ceil_q(maxx - p.x); ++tx)
      for (long ty = floor_q(miny - p.y); ty <= ceil_q(maxy - p.y); ++ty) {
        Point x = p + Point(tx, ty) - seg.start;
        Rational den = cross(seg.dir, off);
        if (sgn(den) == 0) {
          if (sgn(cross(x, seg.dir)) != 0) continue;
          // Degenerate sweep along the segment's own line.
          Rational len2 = dot(seg.dir, seg.dir);
          Rational k = dot(x, seg.dir) / len2;
          Rational k_off = dot(off, seg.dir) / len2;
          if (k >= std::min(Rational(0), k_off) && k <= std::max(Rational(1), Rational(1 + k_off))) return true;
          continue;
        }
        Rational s = cross(x, off) / den;
        Rational l = cross(seg.dir, x) / den;
        if (s >= 0 && s <= 1 && l >= 0 && l <= 1) return true;
      }
  }
  return false;
}

bool general_position_failure(const DiagramError& e) {
  return e.kind() != DiagramError::Kind::Malformed;
}

}  // namespace

Diagram translate(const Diagram& d, const Point& offset) {
  if (sweep_hits_puncture(d.surface(), d.components(), offset))
    throw DiagramError(DiagramError::Kind::PunctureHit, "translation sweeps across the puncture");
  std::vector<Polyline> comps = d.components();
  for (auto& pl : comps)
    for (auto& v : pl.vertices) v += offset;
  std::vector<OverHint> hints = d.crossing_hints();
  for (auto& h : hints) h.at += offset;
  return Diagram::build(d.surface(), std::move(comps), std::move(hints));
}

Diagram stack(const Diagram& top, const Diagram& bottom) {
  if (!(top.surface() == bottom.surface())) throw std::invalid_argument("stack: surfaces differ");
  int bottom_max = 0, top_min = 0;
  bool have_bottom = false, have_top = false;
  for (const auto& pl : bottom.components())
    for (int h : pl.heights) {
      bottom_max = have_bottom ? std::max(bottom_max, h) : h;
      have_bottom = true;
    }
  for (const auto& pl : top.components())
    for (int h : pl.heights) {
      top_min = have_top ? std::min(top_min, h) : h;
      have_top = true;
    }
  const int lift = (have_bottom && have_top) ? std::max(0, bottom_max - top_min + 1) : 0;

  constexpr int kAttempts = 24;
  std::string last_error = "no attempt made";
  for (int k = 0; k < kAttempts; ++k) {
    Point off = k == 0 ? Point() : Point(Rational(k, 331 * k + 17), Rational(k, 467 * k + 29));
    if (k > 0 && sweep_hits_puncture(bottom.surface(), bottom.components(), off)) continue;
    std::vector<Polyline> comps = top.components();
    for (auto& pl : comps)
      for (auto& h : pl.heights) h += lift;
    std::vector<OverHint> hints = top.crossing_hints();
    for (auto pl : bottom.components()) {
      for (auto& v : pl.vertices) v += off;
      comps.push_back(std::move(pl));
    }
    for (auto h : bottom.crossing_hints()) {
      h.at += off;
      hints.push_back(std::move(h));
    }
    try {
      return Diagram::build(top.surface(), std::move(comps), std::move(hints));
    } catch (const DiagramError& e) {
      if (!general_position_failure(e)) throw;
      last_error = e.what();
    }
  }
  throw DiagramError(DiagramError::Kind::NonTransverse, "stack: no generic position found (" + last_error + ")");
}

namespace {

bool triangle_contains_lattice_point(const Point& a, const Point& b, const Point& c, const Point& p) {
  Rational minx = std::min({a.x, b.x, c.x}), maxx = std::max({a.x, b.x, c.x});
  Rational miny = std::min({a.y, b.y, c.y}), maxy = std::max({a.y, b.y, c.y});
  for (long tx = floor_q(minx - p.x); tx <= ceil_q(maxx - p.x); ++tx)
    for (long ty = floor_q(miny - p.y); ty <= ceil_q(maxy - p.y); ++ty) {
      Point x = p + Point(tx, ty);
      int s1 = sgn(cross(b - a, x - a)), s2 = sgn(cross(c - b, x - b)), s3 = sgn(cross(a - c, x - c));
      bool has_neg = s1 < 0 || s2 < 0 || s3 < 0;
      bool has_pos = s1 > 0 || s2 > 0 || s3 > 0;
      if (!(has_neg && has_pos)) return true;
    }
  return false;
}

// One traced curve with the crossing `k` smoothed, pulled back by eps along
// the rays at that crossing. Sets `hits_puncture` when a connector corner
// would swing across the puncture.
Polyline rebuild_component(const Diagram& d, const ResolvedComponent& comp, std::size_t k, const Rational& eps,
                           bool& hits_puncture) {
  const auto& arcs = d.arcs();
  if (comp.arcs.size() == 1 && arcs[comp.arcs[0].first].start_end < 0) {
    return d.components()[arcs[comp.arcs[0].first].component];
  }
  std::vector<Point> verts;
  std::vector<int> heights;
  std::vector<bool> through;  // vertex sits on a crossing passed straight through
  std::vector<std::pair<std::size_t, Point>> connectors;  // segment index, crossing point in its frame
  Point first_unshifted;
  Point prev_end;
  for (std::size_t i = 0; i < comp.arcs.size(); ++i) {
    const auto [ai, fwd] = comp.arcs[i];
    const Arc& arc = arcs[ai];
    std::vector<Point> pts = arc.points;
    std::vector<int> hs = arc.heights;
    if (!fwd) {
      std::reverse(pts.begin(), pts.end());
      std::reverse(hs.begin(), hs.end());
    }
    if (i > 0) {
      Point off = prev_end - pts.front();
      for (auto& p : pts) p += off;
    } else {
      first_unshifted = pts.front();
    }
    prev_end = pts.back();
    const int depart = fwd ? arc.start_end : arc.end_end;
    const int arrive = fwd ? arc.end_end : arc.start_end;
    const bool smooth_start = end_crossing(depart) == k;
    const bool smooth_end = end_crossing(arrive) == k;
    if (smooth_start) pts.front() += eps * d.ray(depart);
    if (smooth_end) pts.back() += eps * d.ray(arrive);
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
      verts.push_back(pts[j]);
      heights.push_back(hs[j]);
      through.push_back(j == 0 && !smooth_start);
    }
    if (smooth_end) {
      verts.push_back(pts.back());
      heights.push_back(0);  // connector stays inside the eps-neighbourhood
      through.push_back(false);
      connectors.emplace_back(verts.size() - 1, prev_end);
    }
  }
  // Drop the split points at the other crossings; the pieces on either side
  // are collinear parts of one original segment.
  std::vector<std::size_t> new_index(verts.size());
  Polyline pl;
  pl.wrap = to_ivec(prev_end - first_unshifted);
  for (std::size_t j = 0; j < verts.size(); ++j) {
    new_index[j] = pl.vertices.size();
    if (through[j]) continue;
    pl.vertices.push_back(verts[j]);
    pl.heights.push_back(heights[j]);
  }
  for (auto& con : connectors) con.first = new_index[con.first];

  if (d.surface().puncture())
    for (const auto& [j, x] : connectors)
      if (triangle_contains_lattice_point(pl.seg_start(j), pl.seg_end(j), x, *d.surface().puncture()))
        hits_puncture = true;
  return pl;
}

}  // namespace

Diagram smooth_crossing(const Diagram& d, std::size_t k, int choice) {
  if (k >= d.crossing_count()) throw std::out_of_range("smooth_crossing: no such crossing");
  if (choice != 1 && choice != -1) throw std::invalid_argument("smooth_crossing: choice must be +1 or -1");
  std::vector<int> choices(d.crossing_count(), 0);
  choices[k] = choice;
  const auto traced = trace(d, choices);

  std::vector<OverHint> hints;
  std::set<Point> expected;
  for (std::size_t j = 0; j < d.crossing_count(); ++j) {
    if (j == k) continue;
    hints.push_back({d.crossings()[j].point, d.crossings()[j].over.direction});
    expected.insert(d.crossings()[j].point);
  }
  const auto& c = d.crossings()[k];
  Rational eps = std::min({c.over.param, Rational(1 - c.over.param), c.under.param, Rational(1 - c.under.param),
                           Rational(1, 8)}) /
                 2;
  std::string last_error;
  for (int attempt = 0; attempt < 60; ++attempt, eps /= 2) {
    bool hits = false;
    std::vector<Polyline> comps;
    for (const auto& comp : traced) comps.push_back(rebuild_component(d, comp, k, eps, hits));
    if (hits) continue;
    try {
      Diagram out = Diagram::build(d.surface(), std::move(comps), hints);
      std::set<Point> got;
      for (const auto& x : out.crossings()) got.insert(x.point);
      if (got == expected) return out;
      last_error = "crossing set changed";
    } catch (const DiagramError& e) {
      if (!general_position_failure(e)) throw;
      last_error = e.what();
    }
  }
  throw DiagramError(DiagramError::Kind::NonTransverse, "smooth_crossing failed: " + last_error);
}

Diagram add_trivial_loop(const Diagram& d, unsigned salt) {
  std::vector<OverHint> hints = d.crossing_hints();
  if (!d.surface().periodic()) {
    Rational maxx = 0, maxy = 0;
    for (const auto& pl : d.components())
      for (const auto& v : pl.vertices) {
        maxx = std::max(maxx, v.x);
        maxy = std::max(maxy, v.y);
      }
    Point c(maxx + 1 + salt, maxy + 1);
    auto comps = d.components();
    comps.push_back(make_polyline({c, c + Point(1, 0), c + Point(1, 1), c + Point(0, 1)}));
    return Diagram::build(d.surface(), std::move(comps), hints);
  }
  for (unsigned j = 0; j < 400; ++j) {
    unsigned idx = salt * 131 + j;
    Point c(Rational(static_cast<long>((idx * 37 + 11) % 101), 101),
            Rational(static_cast<long>((idx * 59 + 23) % 103), 103));
    for (Rational r(1, 200); r > Rational(1, 200000); r /= 4) {
      std::vector<Point> sq{c + Point(-r, -r), c + Point(r, -r), c + Point(r, r), c + Point(-r, r)};
      if (d.surface().puncture()) {
        std::vector<Point> closed = sq;
        closed.push_back(sq[0]);
        if (lattice_winding(closed, *d.surface().puncture(), true) != 0) continue;
      }
      auto comps = d.components();
      comps.push_back(make_polyline(sq));
      try {
        Diagram out = Diagram::build(d.surface(), std::move(comps), hints);
        if (out.crossing_count() == d.crossing_count()) return out;
      } catch (const DiagramError& e) {
        if (!general_position_failure(e)) throw;
      }
    }
  }
  throw DiagramError(DiagramError::Kind::NonTransverse, "add_trivial_loop: no free spot found");
}

Diagram realize(const Surface& surface, const SimpleMulticurve& mc, unsigned variant) {
  if (mc.kind() != surface.kind()) throw std::invalid_argument("realize: surface kind mismatch");
  for (unsigned attempt = 0; attempt < 64; ++attempt) {
    const unsigned v = variant * 7 + attempt;
    std::vector<Polyline> comps;
    for (const auto& [slope, mult] : mc.slopes()) {
      Point base(Rational(1, 7) + Rational(static_cast<long>(v % 13), 61),
                 Rational(1, 11) + Rational(static_cast<long>(v % 17), 67));
      Point shift = slope.q != 0 ? Point(Rational(1, (std::abs(slope.q)) * (mult + 1)), 0)
                                 : Point(0, Rational(1, mult + 1));
      for (int j = 0; j < mult; ++j) comps.push_back(make_polyline({base + Rational(j) * shift}, slope));
    }
    if (mc.boundary_parallel() > 0) {
      const Point& p = *surface.puncture();
      Rational r0 = Rational(1, 8 * (mc.complexity() + 2)) / (1 + (attempt / 8));
      for (int j = 0; j < mc.boundary_parallel(); ++j) {
        Rational r = r0 * (j + 1) / (mc.boundary_parallel() + 1);
        comps.push_back(make_polyline({p + Point(-r, -r), p + Point(r, -r), p + Point(r, r), p + Point(-r, r)}));
      }
    }
    try {
      Diagram out = Diagram::build(surface, std::move(comps));
      if (out.crossing_count() == 0) return out;
    } catch (const DiagramError& e) {
      if (!general_position_failure(e)) throw;
    }
  }
  throw DiagramError(DiagramError::Kind::NonTransverse, "realize: no crossingless realization of " + mc.to_string());
}

}  // namespace skl
