#pragma once

// Link diagrams on the disk, the torus and the once-punctured torus, drawn
// as closed polylines with exact rational vertices.
//
// On the periodic surfaces a component is stored in the universal cover:
// vertices v_0 .. v_{k-1} are lifted points and the closing segment runs
// from v_{k-1} to v_0 + wrap, so wrap is the component's homology class.
// Over/under information lives on segments (heights) and, where heights
// tie or disagree with the intended crossing, in point-keyed overrides.
//
// Smoothing convention. At a crossing with over direction u and under
// direction v, the positive (+1, coefficient zeta) smoothing joins each
// over half-edge to the half-edge immediately clockwise of it. When
// cross(u, v) > 0 this pairs over-out with under-in; otherwise over-out
// with under-out. For an oriented crossing of sign +1 this is the Seifert
// smoothing, so a kink of sign +1 has bracket -zeta^3.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skl/homology.hpp"
#include "skl/ring.hpp"

namespace skl {

struct Point {
  Rational x;
  Rational y;

  Point() = default;
  Point(Rational px, Rational py) : x(std::move(px)), y(std::move(py)) {
    x.canonicalize();
    y.canonicalize();
  }

  Point& operator+=(const Point& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Point& operator-=(const Point& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(const Rational& k, const Point& p) { return {k * p.x, k * p.y}; }
  Point operator-() const { return {-x, -y}; }
  friend bool operator==(const Point& a, const Point& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
  friend bool operator<(const Point& a, const Point& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; }
  std::string to_string() const;
};

Rational cross(const Point& a, const Point& b);
Rational dot(const Point& a, const Point& b);

/// Integer vector in the plane; the homology class of a curve on a torus.
struct IVec2 {
  std::int64_t p = 0;
  std::int64_t q = 0;

  IVec2& operator+=(const IVec2& o) {
    p += o.p;
    q += o.q;
    return *this;
  }
  friend IVec2 operator+(IVec2 a, const IVec2& b) { return a += b; }
  friend IVec2 operator-(const IVec2& a, const IVec2& b) { return {a.p - b.p, a.q - b.q}; }
  friend IVec2 operator*(std::int64_t k, const IVec2& a) { return {k * a.p, k * a.q}; }
  IVec2 operator-() const { return {-p, -q}; }
  bool is_zero() const { return p == 0 && q == 0; }
  Point as_point() const { return {Rational(static_cast<long>(p)), Rational(static_cast<long>(q))}; }
  friend auto operator<=>(const IVec2&, const IVec2&) = default;
  std::string to_string() const;
};

std::int64_t det(const IVec2& a, const IVec2& b);
std::int64_t gcd_abs(const IVec2& v);

enum class SurfaceKind { Disk, Torus, PuncturedTorus };

std::string to_string(SurfaceKind kind);
SurfaceKind surface_kind_from_string(const std::string& name);

class Surface {
 public:
  static Surface disk() { return Surface(SurfaceKind::Disk, std::nullopt); }
  static Surface torus() { return Surface(SurfaceKind::Torus, std::nullopt); }
  /// The puncture is reduced into [0,1)^2.
  static Surface punctured_torus(Point puncture = {Rational(1, 2), Rational(1, 2)});

  SurfaceKind kind() const { return kind_; }
  bool periodic() const { return kind_ != SurfaceKind::Disk; }
  const std::optional<Point>& puncture() const { return puncture_; }
  Lattice homology() const;
  /// Homology vector of a plane vector; empty on the disk.
  HomClass to_class(const IVec2& v) const;
  /// Representative in [0,1)^2 on periodic surfaces; identity on the disk.
  Point reduce(const Point& p) const;

  friend bool operator==(const Surface&, const Surface&) = default;

 private:
  Surface(SurfaceKind kind, std::optional<Point> puncture) : kind_(kind), puncture_(std::move(puncture)) {}
  SurfaceKind kind_;
  std::optional<Point> puncture_;
};

struct Polyline {
  std::vector<Point> vertices;  // lifted
  IVec2 wrap;                   // closing translation
  std::vector<int> heights;     // one per segment; higher passes over

  std::size_t segment_count() const { return vertices.size(); }
  Point seg_start(std::size_t s) const { return vertices[s]; }
  Point seg_end(std::size_t s) const;
  Point seg_dir(std::size_t s) const { return seg_end(s) - seg_start(s); }
};

/// Polyline with every segment at one height.
Polyline make_polyline(std::vector<Point> vertices, IVec2 wrap = {}, int height = 0);

/// At the crossing located at `at` (reduced), the strand parallel to
/// `over_direction` passes over.
struct OverHint {
  Point at;
  Point over_direction;
};

class DiagramError : public std::runtime_error {
 public:
  enum class Kind {
    NonTransverse,
    TriplePoint,
    VertexIncidence,
    MissingOverride,
    PunctureHit,
    Malformed,
  };
  DiagramError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct StrandPos {
  std::size_t component = 0;
  std::size_t segment = 0;
  Rational param;   // in (0, 1) along the segment
  Point direction;  // segment vector, traversal orientation
  Point lifted;     // crossing point in this component's lift
  Rational position() const { return Rational(static_cast<long>(segment)) + param; }
};

struct Crossing {
  Point point;  // reduced
  StrandPos over;
  StrandPos under;
  /// sign of cross(over.direction, under.direction); the crossing sign
  /// with every component traversed in its stored direction.
  int handedness = 0;
  bool is_self() const { return over.component == under.component; }
};

/// Ends of arcs at crossings are numbered 4k + 2*role + io with role 0 for
/// the over strand, 1 for the under strand, io 0 for the incoming end and 1
/// for the outgoing end.
enum class Role { Over = 0, Under = 1 };
constexpr int end_id(std::size_t crossing, Role role, bool outgoing) {
  return static_cast<int>(4 * crossing + 2 * static_cast<int>(role) + (outgoing ? 1 : 0));
}
constexpr std::size_t end_crossing(int end) { return static_cast<std::size_t>(end) / 4; }
constexpr Role end_role(int end) { return static_cast<Role>((end / 2) % 2); }
constexpr bool end_outgoing(int end) { return end % 2 == 1; }

struct Arc {
  std::size_t component = 0;
  int start_end = -1;  // outgoing end it leaves from; -1 for a crossingless loop
  int end_end = -1;    // incoming end it arrives at
  std::vector<Point> points;  // lifted, first..last; a closed loop repeats start + wrap
  std::vector<int> heights;   // per piece between consecutive points
  Point displacement() const { return points.back() - points.front(); }
};

class Diagram {
 public:
  /// Validates general position, computes crossings and arcs. Throws
  /// DiagramError with the offending segments named.
  static Diagram build(Surface surface, std::vector<Polyline> components,
                       std::vector<OverHint> hints = {});

  const Surface& surface() const { return surface_; }
  const std::vector<Polyline>& components() const { return components_; }
  const std::vector<OverHint>& hints() const { return hints_; }
  const std::vector<Crossing>& crossings() const { return crossings_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t crossing_count() const { return crossings_.size(); }
  std::size_t component_count() const { return components_.size(); }
  IVec2 component_class(std::size_t c) const { return components_[c].wrap; }
  IVec2 total_class() const;
  /// Arc attached to an end.
  std::size_t arc_at(int end) const { return end_arc_[static_cast<std::size_t>(end)]; }
  /// Half-edge direction of an end, pointing away from the crossing.
  Point ray(int end) const;
  /// Over hints reproducing every crossing of this diagram.
  std::vector<OverHint> crossing_hints() const;

 private:
  Surface surface_ = Surface::disk();
  std::vector<Polyline> components_;
  std::vector<OverHint> hints_;
  std::vector<Crossing> crossings_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> end_arc_;
};

/// Geometric crossings between segments before over/under is assigned;
/// exposed so the file loader can number self-crossings.
struct RawCrossing {
  Point point;
  StrandPos a;
  StrandPos b;
};
std::vector<RawCrossing> find_crossings(const Surface& surface, const std::vector<Polyline>& components);

/// A state: +1/-1 smoothing per crossing.
struct State {
  std::vector<int> choice;
  int sum() const;
};

/// All 2^n states in a fixed order (bit k of the index picks crossing k,
/// 0 -> +1).
State state_from_index(std::size_t crossings, std::uint64_t index);

/// One passage through a smoothed crossing: the traversal arrives on ray
/// `from` and leaves on ray `to`.
struct Passage {
  std::size_t crossing = 0;
  int from = 0;
  int to = 0;
};

struct ResolvedComponent {
  IVec2 homology;
  int puncture_winding = 0;  // only meaningful for null-homologous curves
  bool trivial = false;
  std::vector<std::pair<std::size_t, bool>> arcs;  // (arc, forward)
  std::vector<Passage> passages;
};

class SimpleMulticurve {
 public:
  SimpleMulticurve() = default;
  /// Normalizes slope keys; validates primitivity and disjointness.
  SimpleMulticurve(SurfaceKind kind, std::map<IVec2, int> slopes, int boundary_parallel = 0);
  static SimpleMulticurve empty(SurfaceKind kind) { return {kind, {}, 0}; }

  SurfaceKind kind() const { return kind_; }
  const std::map<IVec2, int>& slopes() const { return slopes_; }
  int boundary_parallel() const { return boundary_parallel_; }
  int component_count() const;
  bool is_empty() const { return component_count() == 0; }
  /// Homology of the multicurve with every component oriented along its key.
  IVec2 oriented_class() const;
  Z2Class z2_class() const;
  /// Complexity used by truncations: multiplicity times max(|p|, |q|) plus
  /// the boundary-parallel count.
  std::int64_t complexity() const;
  std::string to_string() const;

  friend auto operator<=>(const SimpleMulticurve&, const SimpleMulticurve&) = default;

 private:
  SurfaceKind kind_ = SurfaceKind::Disk;
  std::map<IVec2, int> slopes_;
  int boundary_parallel_ = 0;
};

/// Primitive key for a slope: first nonzero coordinate positive.
IVec2 normalize_slope(const IVec2& v);

struct CanonicalInput {
  IVec2 homology;
  int puncture_winding = 0;
};

/// Isotopy class of a set of disjoint, embedded, nontrivial curves. Throws
/// std::invalid_argument on a non-primitive class or mixed slopes.
SimpleMulticurve canonical_multicurve(const Surface& surface, const std::vector<CanonicalInput>& components);

bool triviality(const ResolvedComponent& component, const Surface& surface);

struct Resolution {
  std::vector<ResolvedComponent> components;
  int c = 0;  // sum of choices
  int t = 0;  // trivial components
  SimpleMulticurve s_prime;
};

Resolution resolve(const Diagram& d, const State& s);

/// Traces the curves obtained by smoothing the crossings where `choice` is
/// +1/-1 and passing straight through where it is 0.
std::vector<ResolvedComponent> trace(const Diagram& d, const std::vector<int>& choice);

struct OrientedDiagram {
  const Diagram* base = nullptr;
  std::vector<int> direction;  // +1 keeps the stored traversal

  OrientedDiagram(const Diagram& d, std::vector<int> dirs);
  static OrientedDiagram as_drawn(const Diagram& d) {
    return {d, std::vector<int>(d.component_count(), 1)};
  }
};

struct CrossingOrientation {
  int sign = 0;
  int seifert_choice = 0;  // the State entry that is the Seifert smoothing here
};

struct OrientationData {
  int writhe = 0;
  IVec2 xi;  // class of the fully Seifert-smoothed cycle
  std::vector<CrossingOrientation> per_crossing;

  int seifert_count(const State& s) const;
  int non_seifert_count(const State& s) const { return static_cast<int>(s.choice.size()) - seifert_count(s); }
};

OrientationData orient_data(const OrientedDiagram& od);

struct ParityDetail {
  int n = 0;        // components of the resolved state
  int m = 0;        // non-Seifert smoothings whose two arcs run the same way
  int chi = 0;      // n(D) - cr(D)
  int ss = 0;
  std::int64_t xi_dot_s = 0;  // omega(Xi, s-bar)
  bool parity_ok = false;     // n + m + chi even
  bool m_formula_ok = false;  // m = cr + ss + omega(Xi, s-bar)/2 mod 2
};

ParityDetail euler_parity_detail(const Diagram& d, const OrientedDiagram& od, const State& s);
bool euler_parity_check(const Diagram& d, const OrientedDiagram& od, const State& s);

/// Union with every crossing between the two parts having `top` over.
/// `bottom` is translated by a fixed schedule of small offsets when the
/// union is not in general position. Throws DiagramError after the schedule
/// is exhausted.
Diagram stack(const Diagram& top, const Diagram& bottom);

/// Geometric smoothing of one crossing, keeping all other crossings.
Diagram smooth_crossing(const Diagram& d, std::size_t crossing, int choice);

/// Adds a small square loop disjoint from everything else (and not around
/// the puncture). `salt` picks among deterministic candidate spots.
Diagram add_trivial_loop(const Diagram& d, unsigned salt = 0);

/// Straight-line realization of a multicurve; `variant` shifts base points.
Diagram realize(const Surface& surface, const SimpleMulticurve& mc, unsigned variant = 0);

/// Translates the whole diagram (an isotopy on the disk and the closed
/// torus; on the punctured torus the sweep must avoid the puncture).
Diagram translate(const Diagram& d, const Point& offset);

/// Total winding number of a closed lifted polygon about every lift of p.
int lattice_winding(const std::vector<Point>& closed_polygon, const Point& p, bool periodic);

}  // namespace skl
