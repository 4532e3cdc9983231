#include "skl/heegaard.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace skl {

namespace {

const Surface& torus() {
  static const Surface t = Surface::torus();
  return t;
}

std::int64_t omega(const IVec2& a, const IVec2& b) { return det(a, b); }

int mod4(std::int64_t w) { return static_cast<int>(((w % 4) + 4) % 4); }

// Point on the straight realization of a copy of an attaching curve.
Point copy_base(bool red, std::size_t curve, std::size_t copy, const IVec2& e) {
  Point base = red ? Point(Rational(3, 13) + Rational(static_cast<long>(curve), 71), Rational(5, 17))
                   : Point(Rational(8, 19), Rational(2, 7) + Rational(static_cast<long>(curve), 73));
  const long span = 8;
  Point step = e.q != 0 ? Point(Rational(1, std::abs(e.q) * span * 3), 0) : Point(0, Rational(1, span * 3));
  return base + Rational(static_cast<long>(copy)) * step;
}

const Rational kGap(1, 1009);

bool inside_triangle(const Point& a, const Point& b, const Point& c, const Point& x) {
  const int s1 = sgn(cross(b - a, x - a)), s2 = sgn(cross(c - b, x - b)), s3 = sgn(cross(a - c, x - c));
  return (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
}

// A band is a thin strip; it must not swallow an end of any other curve.
bool strip_is_clean(const std::array<Point, 4>& quad, std::size_t own, const std::vector<Polyline>& comps) {
  Rational minx = quad[0].x, maxx = quad[0].x, miny = quad[0].y, maxy = quad[0].y;
  for (const auto& q : quad) {
    minx = std::min(minx, q.x);
    maxx = std::max(maxx, q.x);
    miny = std::min(miny, q.y);
    maxy = std::max(maxy, q.y);
  }
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c == own) continue;
    for (const auto& v : comps[c].vertices) {
      const Rational lx = minx - v.x, hx = maxx - v.x, ly = miny - v.y, hy = maxy - v.y;
      for (long tx = lx.get_d() < 0 ? static_cast<long>(lx.get_d()) - 1 : static_cast<long>(lx.get_d());
           tx <= static_cast<long>(hx.get_d()) + 1; ++tx)
        for (long ty = ly.get_d() < 0 ? static_cast<long>(ly.get_d()) - 1 : static_cast<long>(ly.get_d());
             ty <= static_cast<long>(hy.get_d()) + 1; ++ty) {
          const Point w = v + Point(tx, ty);
          if (inside_triangle(quad[0], quad[1], quad[2], w) || inside_triangle(quad[0], quad[2], quad[3], w))
            return false;
        }
    }
  }
  return true;
}

}  // namespace

void HeegaardData::validate() const {
  if (red.empty() && blue.empty()) throw std::invalid_argument("Heegaard data has no attaching curves");
  for (const auto* list : {&red, &blue})
    for (const auto& c : *list)
      if (gcd_abs(c) != 1) throw std::invalid_argument("attaching curve " + c.to_string() + " is not primitive");
}

H1Report manifold_h1(const HeegaardData& h) {
  std::vector<HomClass> cols;
  for (const auto* list : {&h.red, &h.blue})
    for (const auto& c : *list) cols.push_back(HomClass{c.p, c.q});
  H1Report out;
  out.invariants = quotient_invariants(2, cols);
  out.two_torsion = has_two_torsion(out.invariants);
  return out;
}

namespace {

// All GF(2) decompositions c = rho + beta with rho in span(R), beta in span(B);
// returns the possible rho.
std::vector<IVec2> red_parts(const IVec2& c, const HeegaardData& h) {
  const std::size_t nr = h.red.size();
  const std::size_t n = nr + h.blue.size();
  std::vector<IVec2> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    IVec2 rho, beta;
    for (std::size_t k = 0; k < n; ++k) {
      if (!((mask >> k) & 1U)) continue;
      if (k < nr) rho += h.red[k];
      else beta += h.blue[k - nr];
    }
    IVec2 diff = c - rho - beta;
    if (diff.p % 2 == 0 && diff.q % 2 == 0) out.push_back(rho);
  }
  return out;
}

}  // namespace

bool z2_null_in_manifold(const IVec2& c, const HeegaardData& h) { return !red_parts(c, h).empty(); }

SlideRelation elementary_slide(const HeegaardData& h, const SimpleMulticurve& start,
                               const std::vector<BandSpec>& bands) {
  if (start.kind() != SurfaceKind::Torus) throw std::invalid_argument("slides live on the closed torus");
  if (start.is_empty()) throw std::invalid_argument("a band needs an endpoint on the start multicurve");
  if (bands.empty()) throw std::invalid_argument("a slide needs at least one band");

  SlideRelation rel;
  rel.start = start;
  rel.start_diagram = realize(torus(), start, 0);
  const auto& comps = rel.start_diagram.components();

  std::vector<Polyline> out = comps;
  std::set<std::size_t> touched;
  std::map<std::pair<bool, std::size_t>, std::size_t> next_copy;
  IVec2 red_total, blue_total;
  std::vector<std::pair<std::size_t, std::array<Point, 4>>> strips;
  for (std::size_t j = 0; j < bands.size(); ++j) {
    const BandSpec& b = bands[j];
    if (b.component >= comps.size()) throw std::invalid_argument("band names a missing component");
    if (!touched.insert(b.component).second) throw std::invalid_argument("one band per component");
    const auto& list = b.red ? h.red : h.blue;
    if (b.curve >= list.size()) throw std::invalid_argument("band names a missing attaching curve");
    const IVec2 e = list[b.curve];
    const std::size_t copy = next_copy[{b.red, b.curve}]++;

    const Polyline& gamma = comps[b.component];
    if (gamma.segment_count() != 1) throw std::logic_error("start components are expected to be straight");
    const Point hv = gamma.wrap.as_point();
    const Point x = gamma.vertices[0] + Rational(37, 101) * hv;
    const Point y = copy_base(b.red, b.curve, copy, e) + Rational(53 + 29 * static_cast<long>(copy), 107) * e.as_point() + b.winding.as_point();
    const Point a = y - x;
    const int ca = sgn(cross(a, hv));
    const int ce = sgn(cross(a, e.as_point()));
    if (ca == 0 || ce == 0) throw DiagramError(DiagramError::Kind::NonTransverse, "band parallel to a curve");
    const int sigma = (ca * ce < 0) ? 1 : -1;
    const IVec2 ev = sigma * e;
    const Point ep = ev.as_point();

    const int level = static_cast<int>(b.curve * 10 + copy);
    const int band_h = b.red ? 1 + level : -1 - level;
    const int copy_h = b.red ? 100 + level : -100 - level;
    Polyline pl;
    pl.vertices = {x + kGap * hv, x + hv - kGap * hv, y + hv + kGap * ep, y + hv + ep - kGap * ep};
    pl.heights = {gamma.heights[0], band_h, copy_h, band_h};
    pl.wrap = gamma.wrap + ev;
    strips.push_back({b.component,
                      {x + hv - kGap * hv, y + hv + kGap * ep, y + hv - kGap * ep, x + hv + kGap * hv}});
    out[b.component] = std::move(pl);

    BandRecord rec{b, sigma, ev};
    rel.bands.push_back(rec);
    rel.used[{b.red, b.curve}] += 1;
    (b.red ? red_total : blue_total) += ev;
  }
  for (const auto& [own, quad] : strips)
    if (!strip_is_clean(quad, own, out))
      throw DiagramError(DiagramError::Kind::VertexIncidence, "band strip contains the end of another curve");
  rel.result = Diagram::build(torus(), std::move(out));
  rel.slide_class = red_total + blue_total;
  rel.writhe = orient_data(OrientedDiagram::as_drawn(rel.result)).writhe;
  const IVec2 s_bar = rel.start.oriented_class();
  rel.writhe_formula = static_cast<int>(omega(s_bar, blue_total - red_total) + omega(red_total, blue_total));
  return rel;
}

namespace {

std::vector<IVec2> primitive_slopes(int max_slope) {
  std::vector<IVec2> out;
  for (std::int64_t p = 0; p <= max_slope; ++p)
    for (std::int64_t q = -max_slope; q <= max_slope; ++q) {
      IVec2 v{p, q};
      if (v.is_zero() || gcd_abs(v) != 1 || normalize_slope(v) != v) continue;
      out.push_back(v);
    }
  return out;
}

// Copy lists (red?, curve) with an even total class, up to max_arcs copies.
std::vector<std::vector<std::pair<bool, std::size_t>>> copy_lists(const HeegaardData& h, int max_arcs) {
  std::vector<std::pair<bool, std::size_t>> curves;
  for (std::size_t i = 0; i < h.red.size(); ++i) curves.emplace_back(true, i);
  for (std::size_t i = 0; i < h.blue.size(); ++i) curves.emplace_back(false, i);
  std::vector<std::vector<std::pair<bool, std::size_t>>> out;
  std::vector<int> counts(curves.size(), 0);
  // Odometer over copy counts.
  while (true) {
    std::size_t k = 0;
    while (k < counts.size() && counts[k] == max_arcs) counts[k++] = 0;
    if (k == counts.size()) break;
    ++counts[k];
    const int total = std::accumulate(counts.begin(), counts.end(), 0);
    if (total < 1 || total > max_arcs) continue;
    IVec2 cls;
    std::vector<std::pair<bool, std::size_t>> list;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const IVec2& e = curves[c].first ? h.red[curves[c].second] : h.blue[curves[c].second];
      cls += static_cast<std::int64_t>(counts[c]) * e;
      for (int m = 0; m < counts[c]; ++m) list.push_back(curves[c]);
    }
    if (cls.p % 2 != 0 || cls.q % 2 != 0) continue;
    out.push_back(std::move(list));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return out;
}

}  // namespace

std::vector<SlideRelation> generate_relations(const HeegaardData& h, const SlideBounds& bounds) {
  h.validate();
  std::vector<SlideRelation> out;
  if (bounds.max_arcs < 1 || bounds.max_multiplicity < 2) return out;
  const auto lists = copy_lists(h, bounds.max_arcs);
  const int r = bounds.winding_range;
  for (const IVec2& v : primitive_slopes(bounds.max_slope)) {
    for (int k = 2; k <= bounds.max_multiplicity; k += 2) {
      const SimpleMulticurve start(SurfaceKind::Torus, {{v, k}});
      for (const auto& list : lists) {
        const std::size_t m = list.size();
        if (m > static_cast<std::size_t>(k)) continue;
        // Ordered choice of distinct components for the copies.
        std::vector<std::size_t> pick(static_cast<std::size_t>(k));
        std::iota(pick.begin(), pick.end(), 0);
        std::set<std::vector<std::size_t>> seen;
        do {
          std::vector<std::size_t> assign(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m));
          if (!seen.insert(assign).second) continue;
          const std::size_t grid = static_cast<std::size_t>(2 * r + 1);
          std::size_t combos = 1;
          for (std::size_t t = 0; t < 2 * m; ++t) combos *= grid;
          for (std::size_t idx = 0; idx < combos; ++idx) {
            std::vector<BandSpec> bands;
            std::size_t rest = idx;
            for (std::size_t t = 0; t < m; ++t) {
              BandSpec b;
              b.component = assign[t];
              b.red = list[t].first;
              b.curve = list[t].second;
              b.winding.p = static_cast<std::int64_t>(rest % grid) - r;
              rest /= grid;
              b.winding.q = static_cast<std::int64_t>(rest % grid) - r;
              rest /= grid;
              bands.push_back(b);
            }
            try {
              out.push_back(elementary_slide(h, start, bands));
            } catch (const DiagramError&) {
            }
          }
        } while (std::next_permutation(pick.begin(), pick.end()));
      }
    }
  }
  return out;
}

int lk2(const Diagram& above, const Diagram& below, const HeegaardData& h) {
  const auto rhos = red_parts(above.total_class(), h);
  if (rhos.empty()) throw std::invalid_argument("lk2: the upper link is not Z2-null in M");
  const IVec2 below_class = below.total_class();
  std::optional<int> cap;
  for (const auto& rho : rhos) {
    const int v = static_cast<int>(((omega(rho, below_class) % 2) + 2) % 2);
    if (cap && *cap != v) throw std::logic_error("lk2 depends on the capping decomposition");
    cap = v;
  }
  const Diagram both = stack(above, below);
  const std::size_t split = above.component_count();
  int over = 0;
  for (const auto& x : both.crossings())
    if (x.over.component < split && x.under.component >= split) ++over;
  return (over + *cap) % 2;
}

Skein eval_skein(const Skein& x, const GaussRat& zeta) {
  Skein out(x.kind());
  for (const auto& [mc, c] : x.terms()) out.add(mc, LaurentPoly(lp_eval(c, zeta)));
  return out;
}

Skein k0_product(const Diagram& x, const Diagram& y, const HeegaardData& h, const GaussRat& zeta,
                 std::size_t max_crossings) {
  if (!z2_null_in_manifold(x.total_class(), h) || !z2_null_in_manifold(y.total_class(), h))
    throw std::invalid_argument("k0_product: both factors must be Z2-null in M");
  Skein b = eval_skein(bracket(stack(x, y), max_crossings), zeta);
  if (lk2(x, y, h)) b *= LaurentPoly(-1);
  return b;
}

Skein k0_product(const Skein& a, const Skein& b, const HeegaardData& h, const GaussRat& zeta,
                 std::size_t max_crossings) {
  Skein out(SurfaceKind::Torus);
  for (const auto& [x, p] : a.terms()) {
    const Diagram dx = realize(torus(), x, 0);
    for (const auto& [y, q] : b.terms()) {
      Skein term = k0_product(dx, realize(torus(), y, 1), h, zeta, max_crossings);
      out += LaurentPoly(lp_eval(p, zeta) * lp_eval(q, zeta)) * term;
    }
  }
  return out;
}

WritheAudit writhe_mod4_audit(const HeegaardData& h, const std::vector<SlideRelation>& relations) {
  WritheAudit out;
  out.h1 = manifold_h1(h);
  out.relations = relations.size();
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const auto& r = relations[k];
    ++out.histogram[static_cast<std::size_t>(mod4(r.writhe))];
    std::string desc = "start " + r.start.to_string() + ", slide class " + r.slide_class.to_string();
    for (const auto& b : r.bands)
      desc += ", " + std::string(b.spec.red ? "red" : "blue") + std::to_string(b.spec.curve) + " on component " +
              std::to_string(b.spec.component) + " winding " + b.spec.winding.to_string() + " sigma " +
              std::to_string(b.sigma);
    if (r.writhe != r.writhe_formula) {
      out.formula_agrees = false;
      out.disagreements.push_back({k, r.writhe, desc + ", formula " + std::to_string(r.writhe_formula)});
    }
    if (mod4(r.writhe) == 2) out.witnesses.push_back({k, r.writhe, desc});
  }
  return out;
}

WritheAudit writhe_mod4_audit(const HeegaardData& h, const SlideBounds& bounds) {
  return writhe_mod4_audit(h, generate_relations(h, bounds));
}

PsiRelationReport psi_on_relations(const std::vector<SlideRelation>& relations) {
  PsiRelationReport out;
  out.relations = relations.size();
  for (std::size_t k = 0; k < relations.size(); ++k) {
    const auto& r = relations[k];
    const PsiResult ps = psi(r.start_diagram);
    const PsiResult pd = psi(r.result);
    const GaussRat expected = (r.start.component_count() % 2) ? GaussRat(-1) : GaussRat(1);
    const HomClass zero = HomClass::zero(2);
    if (ps.coeff == expected && pd.coeff == expected && ps.key == zero && pd.key == zero) {
      ++out.passed;
    } else {
      out.failures.push_back({k, ps.coeff, pd.coeff, ps.key, pd.key});
    }
  }
  return out;
}

std::map<SimpleMulticurve, GaussRat> relation_row(const SlideRelation& r, const GaussRat& zeta,
                                                  std::size_t max_crossings) {
  std::map<SimpleMulticurve, GaussRat> row;
  auto add = [&](const SimpleMulticurve& mc, const GaussRat& c) {
    auto& v = row[mc];
    v += c;
    if (v.is_zero()) row.erase(mc);
  };
  add(r.start, GaussRat(1));
  const Skein br = bracket(r.result, max_crossings);
  for (const auto& [mc, c] : br.terms()) add(mc, -lp_eval(c, zeta));
  return row;
}

std::map<SimpleMulticurve, GaussRat> phi_row(const std::map<SimpleMulticurve, GaussRat>& row) {
  std::map<SimpleMulticurve, GaussRat> out;
  for (const auto& [mc, c] : row) {
    const IVec2 cls = mc.oriented_class();
    if (cls.p % 2 != 0 || cls.q % 2 != 0) throw std::invalid_argument("phi_row: odd multicurve " + mc.to_string());
    out[mc] = (mc.component_count() % 2) ? -c : c;
  }
  return out;
}

std::vector<SimpleMulticurve> truncated_basis(int n) {
  std::vector<SimpleMulticurve> out{SimpleMulticurve::empty(SurfaceKind::Torus)};
  for (const IVec2& v : primitive_slopes(std::max(n, 0))) {
    const std::int64_t size = std::max(std::abs(v.p), std::abs(v.q));
    for (int k = 2; k * size <= n; k += 2) out.emplace_back(SurfaceKind::Torus, std::map<IVec2, int>{{v, k}});
  }
  std::sort(out.begin(), out.end());
  return out;
}

QuotientResult truncated_quotient(const std::vector<SlideRelation>& relations, const GaussRat& zeta,
                                  int truncation, std::size_t max_crossings) {
  QuotientResult out;
  out.basis = truncated_basis(truncation);
  std::map<SimpleMulticurve, std::size_t> column;
  for (std::size_t k = 0; k < out.basis.size(); ++k) column[out.basis[k]] = k;
  out.relations.ncols = out.basis.size();
  for (const auto& r : relations) {
    ++out.generated;
    if (r.start.complexity() > truncation || r.result.crossing_count() > max_crossings) {
      ++out.dropped;
      continue;
    }
    SparseRow row;
    bool inside = true;
    for (const auto& [mc, c] : relation_row(r, zeta, max_crossings)) {
      auto it = column.find(mc);
      if (it == column.end()) {
        inside = false;
        break;
      }
      row[it->second] = c;
    }
    if (!inside) {
      ++out.dropped;
      continue;
    }
    out.relations.rows.push_back(std::move(row));
  }
  out.rank = rref_rank(out.relations).rank;
  out.dimension = out.basis.size() - out.rank;
  return out;
}

QuotientResult truncated_quotient(const HeegaardData& h, const GaussRat& zeta, int truncation,
                                  const SlideBounds& bounds, std::size_t max_crossings) {
  return truncated_quotient(generate_relations(h, bounds), zeta, truncation, max_crossings);
}

}  // namespace skl
