#include "skl/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace skl {

namespace {

const Integer kInt64Max(std::to_string(std::numeric_limits<std::int64_t>::max()));
const Integer kInt64Min(std::to_string(std::numeric_limits<std::int64_t>::min()));

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InputError(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(where + "/" + key, "missing field");
  return *it;
}

std::int64_t small_int(const Json& j, const std::string& where) {
  const Integer z = integer_from_json(j, where);
  if (z > kInt64Max || z < kInt64Min) throw InputError(where, "integer out of range");
  return std::stoll(z.get_str());
}

std::size_t index_from_json(const Json& j, const std::string& where) {
  const std::int64_t v = small_int(j, where);
  if (v < 0) throw InputError(where, "expected a non-negative index");
  return static_cast<std::size_t>(v);
}

IVec2 ivec_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw InputError(where, "expected [p, q]");
  return {small_int(j[0], where + "/0"), small_int(j[1], where + "/1")};
}

Json ivec_to_json(const IVec2& v) { return Json::array({v.p, v.q}); }

Point point_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw InputError(where, "expected [[xn, xd], [yn, yd]]");
  return {rational_from_json(j[0], where + "/0"), rational_from_json(j[1], where + "/1")};
}

Json point_to_json(const Point& p) { return Json::array({rational_to_json(p.x), rational_to_json(p.y)}); }

// Self-crossings of one component ordered by (earlier position, later position).
std::vector<std::pair<RawCrossing, bool>> ordered_self_crossings(const std::vector<RawCrossing>& raw,
                                                                 std::size_t component) {
  std::vector<std::pair<RawCrossing, bool>> out;  // bool: strand a comes first
  for (const auto& c : raw) {
    if (c.a.component != component || c.b.component != component) continue;
    out.emplace_back(c, c.a.position() < c.b.position());
  }
  auto key = [](const std::pair<RawCrossing, bool>& e) {
    const Rational pa = e.first.a.position();
    const Rational pb = e.first.b.position();
    return e.second ? std::make_pair(pa, pb) : std::make_pair(pb, pa);
  };
  std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) { return key(x) < key(y); });
  return out;
}

}  // namespace

Json integer_to_json(const Integer& z) {
  if (z > kInt64Max || z < kInt64Min) return z.get_str();
  return static_cast<std::int64_t>(std::stoll(z.get_str()));
}

Integer integer_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(std::to_string(j.get<std::uint64_t>()));
    return Integer(std::to_string(j.get<std::int64_t>()));
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const std::size_t start = (!s.empty() && s[0] == '-') ? 1 : 0;
    if (s.size() == start || s.find_first_not_of("0123456789", start) != std::string::npos)
      throw InputError(where, "'" + s + "' is not an integer");
    return Integer(s);
  }
  throw InputError(where, "expected an integer");
}

Json rational_to_json(const Rational& q) {
  return Json::array({integer_to_json(q.get_num()), integer_to_json(q.get_den())});
}

Rational rational_from_json(const Json& j, const std::string& where) {
  if (j.is_number_integer() || j.is_string()) return Rational(integer_from_json(j, where));
  if (!j.is_array() || j.size() != 2) throw InputError(where, "expected [numerator, denominator]");
  const Integer num = integer_from_json(j[0], where + "/0");
  const Integer den = integer_from_json(j[1], where + "/1");
  if (den == 0) throw InputError(where + "/1", "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Json gauss_to_json(const GaussRat& c) {
  return Json::array({integer_to_json(c.re().get_num()), integer_to_json(c.re().get_den()),
                      integer_to_json(c.im().get_num()), integer_to_json(c.im().get_den())});
}

Json laurent_to_json(const LaurentPoly& p) {
  Json out = Json::array();
  for (const auto& [e, c] : p.terms()) {
    Json term = Json::array({e});
    for (auto& part : gauss_to_json(c)) term.push_back(part);
    out.push_back(std::move(term));
  }
  return out;
}

LaurentPoly laurent_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where, "expected a list of [exp, re_num, re_den, im_num, im_den]");
  LaurentPoly out;
  std::set<std::int64_t> seen;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string w = where + "/" + std::to_string(k);
    const Json& t = j[k];
    if (!t.is_array() || t.size() != 5) throw InputError(w, "expected [exp, re_num, re_den, im_num, im_den]");
    const std::int64_t e = small_int(t[0], w + "/0");
    if (!seen.insert(e).second) throw InputError(w + "/0", "repeated exponent");
    const Rational re = rational_from_json(Json::array({t[1], t[2]}), w + "/re");
    const Rational im = rational_from_json(Json::array({t[3], t[4]}), w + "/im");
    out.add_term(static_cast<long>(e), GaussRat(re, im));
  }
  return out;
}

Json multicurve_to_json(const SimpleMulticurve& mc) {
  Json slopes = Json::array();
  for (const auto& [v, mult] : mc.slopes()) slopes.push_back(Json::array({v.p, v.q, mult}));
  return Json{{"slopes", slopes}, {"boundary_parallel", mc.boundary_parallel()}};
}

Json skein_to_json(const Skein& x) {
  Json out = Json::array();
  for (const auto& [mc, c] : x.terms())
    out.push_back(Json{{"multicurve", multicurve_to_json(mc)}, {"coeff", laurent_to_json(c)}});
  return out;
}

Json tensor_to_json(const TensorElem& x) {
  Json out = Json::array();
  for (const auto& [key, c] : x.terms()) {
    Json cls = Json::array();
    for (auto v : key.second.coords) cls.push_back(v);
    out.push_back(Json{{"multicurve", multicurve_to_json(key.first)}, {"a_key", cls}, {"coeff", laurent_to_json(c)}});
  }
  return out;
}

DiagramFile diagram_file_from_json(const Json& j) {
  DiagramFile f;
  if (!j.is_object()) throw InputError("", "expected an object at top level");
  const Json& surf = field(j, "surface", "");
  const Json& kind = field(surf, "kind", "/surface");
  if (!kind.is_string()) throw InputError("/surface/kind", "expected a string");
  SurfaceKind sk;
  try {
    sk = surface_kind_from_string(kind.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw InputError("/surface/kind", e.what());
  }
  if (sk == SurfaceKind::Disk) f.surface = Surface::disk();
  if (sk == SurfaceKind::Torus) f.surface = Surface::torus();
  if (surf.contains("puncture")) {
    if (sk != SurfaceKind::PuncturedTorus) throw InputError("/surface/puncture", "only a punctured torus has a puncture");
    f.puncture = point_from_json(surf["puncture"], "/surface/puncture");
    f.surface = Surface::punctured_torus(*f.puncture);
  } else if (sk == SurfaceKind::PuncturedTorus) {
    f.surface = Surface::punctured_torus();
  }

  const Json& comps = field(j, "components", "");
  if (!comps.is_array()) throw InputError("/components", "expected a list");
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const std::string w = "/components/" + std::to_string(i);
    const Json& c = comps[i];
    DiagramFile::Component comp;
    const Json& verts = field(c, "vertices", w);
    if (!verts.is_array() || verts.size() < 2) throw InputError(w + "/vertices", "expected at least two vertices");
    for (std::size_t k = 0; k < verts.size(); ++k)
      comp.vertices.push_back(point_from_json(verts[k], w + "/vertices/" + std::to_string(k)));
    comp.level = static_cast<int>(small_int(field(c, "level", w), w + "/level"));
    if (c.contains("wrap")) {
      comp.wrap = ivec_from_json(c["wrap"], w + "/wrap");
      if (!f.surface.periodic() && !comp.wrap.is_zero()) throw InputError(w + "/wrap", "a disk curve cannot wrap");
    }
    f.components.push_back(std::move(comp));
  }

  if (j.contains("self_crossing_overrides")) {
    const Json& ov = j["self_crossing_overrides"];
    if (!ov.is_array()) throw InputError("/self_crossing_overrides", "expected a list");
    for (std::size_t k = 0; k < ov.size(); ++k) {
      const std::string w = "/self_crossing_overrides/" + std::to_string(k);
      DiagramFile::Override o;
      o.component = index_from_json(field(ov[k], "component", w), w + "/component");
      if (o.component >= f.components.size()) throw InputError(w + "/component", "no such component");
      o.crossing_index = index_from_json(field(ov[k], "crossing_index", w), w + "/crossing_index");
      const Json& over = field(ov[k], "over", w);
      if (!over.is_boolean()) throw InputError(w + "/over", "expected a boolean");
      o.over = over.get<bool>();
      f.overrides.push_back(o);
    }
  }
  return f;
}

Json diagram_file_to_json(const DiagramFile& f) {
  Json surf{{"kind", to_string(f.surface.kind())}};
  if (f.puncture) surf["puncture"] = point_to_json(*f.puncture);
  Json comps = Json::array();
  for (const auto& c : f.components) {
    Json verts = Json::array();
    for (const auto& v : c.vertices) verts.push_back(point_to_json(v));
    Json comp{{"vertices", verts}};
    if (!c.wrap.is_zero()) comp["wrap"] = ivec_to_json(c.wrap);
    comp["level"] = c.level;
    comps.push_back(std::move(comp));
  }
  Json ov = Json::array();
  for (const auto& o : f.overrides)
    ov.push_back(Json{{"component", o.component}, {"crossing_index", o.crossing_index}, {"over", o.over}});
  return Json{{"surface", surf}, {"components", comps}, {"self_crossing_overrides", ov}};
}

Diagram build_diagram(const DiagramFile& f) {
  std::vector<Polyline> comps;
  for (const auto& c : f.components) comps.push_back(make_polyline(c.vertices, c.wrap, c.level));
  std::vector<OverHint> hints;
  if (!f.overrides.empty()) {
    const std::vector<RawCrossing> raw = find_crossings(f.surface, comps);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t k = 0; k < f.overrides.size(); ++k) {
      const auto& o = f.overrides[k];
      const std::string w = "/self_crossing_overrides/" + std::to_string(k);
      if (!seen.insert({o.component, o.crossing_index}).second) throw InputError(w, "repeated override");
      const auto list = ordered_self_crossings(raw, o.component);
      if (o.crossing_index >= list.size())
        throw InputError(w + "/crossing_index", "component " + std::to_string(o.component) + " has " +
                                                    std::to_string(list.size()) + " self-crossings");
      const auto& [c, a_first] = list[o.crossing_index];
      const StrandPos& first = a_first ? c.a : c.b;
      const StrandPos& second = a_first ? c.b : c.a;
      hints.push_back({f.surface.reduce(c.point), o.over ? first.direction : second.direction});
    }
  }
  return Diagram::build(f.surface, std::move(comps), std::move(hints));
}

HeegaardData heegaard_from_json(const Json& j) {
  HeegaardData h;
  if (!j.is_object()) throw InputError("", "expected an object at top level");
  for (const char* side : {"red", "blue"}) {
    const Json& list = field(j, side, "");
    if (!list.is_array()) throw InputError(std::string("/") + side, "expected a list of [p, q]");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const IVec2 v = ivec_from_json(list[k], std::string("/") + side + "/" + std::to_string(k));
      (side[0] == 'r' ? h.red : h.blue).push_back(v);
    }
  }
  try {
    h.validate();
  } catch (const std::invalid_argument& e) {
    throw InputError("", e.what());
  }
  return h;
}

Json heegaard_to_json(const HeegaardData& h) {
  Json red = Json::array();
  Json blue = Json::array();
  for (const auto& v : h.red) red.push_back(ivec_to_json(v));
  for (const auto& v : h.blue) blue.push_back(ivec_to_json(v));
  return Json{{"red", red}, {"blue", blue}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(path + ":" + std::to_string(line) + ":" + std::to_string(col), "JSON syntax error");
  }
}

}  // namespace skl
