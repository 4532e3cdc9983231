#include "skl/skein.hpp"

#include <sstream>

namespace skl {

Skein Skein::basis(const SimpleMulticurve& mc, LaurentPoly coeff) {
  Skein s(mc.kind());
  s.add(mc, coeff);
  return s;
}

LaurentPoly Skein::coeff(const SimpleMulticurve& mc) const {
  auto it = terms_.find(mc);
  return it == terms_.end() ? LaurentPoly() : it->second;
}

void Skein::add(const SimpleMulticurve& mc, const LaurentPoly& c) {
  if (mc.kind() != kind_) throw std::invalid_argument("Skein: multicurve lives on another surface");
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mc, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

Skein& Skein::operator+=(const Skein& o) {
  if (o.kind_ != kind_) throw std::invalid_argument("Skein: surfaces differ");
  for (const auto& [mc, c] : o.terms_) add(mc, c);
  return *this;
}

Skein& Skein::operator-=(const Skein& o) {
  if (o.kind_ != kind_) throw std::invalid_argument("Skein: surfaces differ");
  for (const auto& [mc, c] : o.terms_) add(mc, -c);
  return *this;
}

Skein& Skein::operator*=(const LaurentPoly& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [mc, v] : terms_) v *= c;
  return *this;
}

std::string Skein::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [mc, c] : terms_) {
    out << (first ? "" : " + ") << '(' << c.to_string() << ")*" << mc.to_string();
    first = false;
  }
  return out.str();
}

void for_each_state(const Diagram& d, std::size_t max_crossings,
                    const std::function<void(const State&, const Resolution&)>& fn) {
  const std::size_t n = d.crossing_count();
  if (n > max_crossings) throw CrossingCapExceeded(n, max_crossings);
  if (n >= 63) throw CrossingCapExceeded(n, 62);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    State s = state_from_index(n, idx);
    fn(s, resolve(d, s));
  }
}

Skein bracket(const Diagram& d, std::size_t max_crossings) {
  std::map<SimpleMulticurve, std::map<std::pair<int, int>, long>> counts;
  int max_t = 0;
  for_each_state(d, max_crossings, [&](const State&, const Resolution& r) {
    ++counts[r.s_prime][{r.c, r.t}];
    max_t = std::max(max_t, r.t);
  });
  std::vector<LaurentPoly> loop_pow{LaurentPoly(1)};
  for (int t = 1; t <= max_t; ++t) loop_pow.push_back(loop_pow.back() * LaurentPoly::loop_value());

  Skein out(d.surface().kind());
  for (const auto& [mc, by_ct] : counts) {
    LaurentPoly total;
    for (const auto& [ct, count] : by_ct)
      total += LaurentPoly::monomial(GaussRat(count), ct.first) * loop_pow[static_cast<std::size_t>(ct.second)];
    out.add(mc, total);
  }
  return out;
}

Skein twist(const Skein& x) {
  Skein out(x.kind());
  for (const auto& [mc, c] : x.terms()) out.add(mc, lp_twist(c));
  return out;
}

Skein skein_mul(const Surface& surface, const Skein& a, const Skein& b, std::size_t max_crossings) {
  if (a.kind() != surface.kind() || b.kind() != surface.kind())
    throw std::invalid_argument("skein_mul: surfaces differ");
  Skein out(surface.kind());
  for (const auto& [x, p] : a.terms()) {
    const Diagram top = realize(surface, x, 0);
    for (const auto& [y, q] : b.terms()) {
      const Diagram d = stack(top, realize(surface, y, 1));
      out += (p * q) * bracket(d, max_crossings);
    }
  }
  return out;
}

GradedSkein grade(const Skein& x) {
  GradedSkein out;
  for (const auto& [mc, c] : x.terms()) {
    auto [it, inserted] = out.try_emplace(mc.z2_class(), x.kind());
    it->second.add(mc, c);
  }
  return out;
}

int Z2Character::operator()(const Z2Class& u) const {
  if (u.bits.size() != dual.bits.size()) throw DimensionMismatch("character and class ranks differ");
  int parity = 0;
  for (std::size_t k = 0; k < u.bits.size(); ++k) parity ^= u.bits[k] & dual.bits[k];
  return parity ? -1 : 1;
}

Skein character_act(const Skein& x, const Z2Character& c) {
  Skein out(x.kind());
  for (const auto& [mc, v] : x.terms()) out.add(mc, c(mc.z2_class()) < 0 ? -v : v);
  return out;
}

void TensorElem::add(const SimpleMulticurve& mc, const HomClass& key, const LaurentPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace({mc, key}, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

bool TensorElem::is_diagonal() const {
  for (const auto& [key, c] : terms_)
    if (key.first.z2_class() != reduce_mod2(key.second)) return false;
  return true;
}

std::string TensorElem::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    out << (first ? "" : " + ") << '(' << c.to_string() << ")*" << key.first.to_string() << "(x)["
        << key.second.to_string() << ']';
    first = false;
  }
  return out.str();
}

TensorElem phi(const Skein& x, const Surface& surface) {
  if (x.kind() != surface.kind()) throw std::invalid_argument("phi: surfaces differ");
  const Lattice lattice = surface.homology();
  TensorElem out;
  for (const auto& [mc, c] : x.terms()) {
    CanonicalLift lift = a_canonicalize(surface.to_class(mc.oriented_class()), lattice);
    GaussRat unit = lift.unit;
    if (mc.component_count() % 2) unit = -unit;
    out.add(mc, lift.key, c * unit);
  }
  return out;
}

PsiResult psi(const OrientedDiagram& od) {
  const Diagram& d = *od.base;
  const OrientationData data = orient_data(od);
  CanonicalLift lift = a_canonicalize(d.surface().to_class(data.xi), d.surface().homology());
  PsiResult out;
  out.writhe = data.writhe;
  out.xi = data.xi;
  out.key = lift.key;
  out.coeff = GaussRat::i_pow(-data.writhe) * lift.unit;
  if (d.component_count() % 2) out.coeff = -out.coeff;
  return out;
}

PsiResult psi(const Diagram& d) { return psi(OrientedDiagram::as_drawn(d)); }

TensorElem bracket_psi(const Diagram& d, std::size_t max_crossings) {
  const PsiResult p = psi(d);
  TensorElem out;
  const Skein br = bracket(d, max_crossings);
  for (const auto& [mc, c] : br.terms()) out.add(mc, p.key, c * p.coeff);
  return out;
}

TensorElem psi_expand(const Diagram& d, std::size_t crossing, std::size_t max_crossings) {
  if (crossing >= d.crossing_count()) throw std::out_of_range("psi_expand: no such crossing");
  if (d.crossings()[crossing].is_self())
    throw std::logic_error("psi does not respect the skein relation at a crossing of a component with itself");
  TensorElem out;
  for (int choice : {1, -1}) {
    const LaurentPoly weight = LaurentPoly::monomial(GaussRat::i_pow(choice), choice);
    const TensorElem part = bracket_psi(smooth_crossing(d, crossing, choice), max_crossings);
    for (const auto& [key, c] : part.terms())
      out.add(key.first, key.second, weight * c);
  }
  return out;
}

namespace {

std::string describe_state(const State& s) {
  std::string out = "[";
  for (std::size_t k = 0; k < s.choice.size(); ++k) out += (k ? "," : "") + std::to_string(s.choice[k]);
  return out + "]";
}

std::string first_difference(const TensorElem& a, const TensorElem& b) {
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  auto show = [](const TensorElem::Key& k) {
    return k.first.to_string() + "(x)[" + k.second.to_string() + "]";
  };
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->first < ib->first))
      return "lhs-only term " + show(ia->first) + ": " + ia->second.to_string();
    if (ia == a.terms().end() || ib->first < ia->first)
      return "rhs-only term " + show(ib->first) + ": " + ib->second.to_string();
    if (ia->second != ib->second)
      return "term " + show(ia->first) + ": lhs " + ia->second.to_string() + ", rhs " + ib->second.to_string();
    ++ia;
    ++ib;
  }
  return {};
}

}  // namespace

CommReport verify_comm_report(const Diagram& d, std::size_t max_crossings) {
  CommReport rep;
  const Surface& surface = d.surface();
  const Lattice lattice = surface.homology();
  const Skein br = bracket(d, max_crossings);
  const PsiResult p = psi(d);
  for (const auto& [mc, c] : br.terms()) rep.lhs.add(mc, p.key, c * p.coeff);
  rep.rhs = phi(twist(br), surface);
  rep.sides_equal = rep.lhs == rep.rhs;
  if (!rep.sides_equal) rep.witness = first_difference(rep.lhs, rep.rhs);

  const OrientedDiagram od = OrientedDiagram::as_drawn(d);
  const OrientationData data = orient_data(od);
  const HomClass xi = surface.to_class(data.xi);
  const CanonicalLift xi_lift = a_canonicalize(xi, lattice);
  const int cr = static_cast<int>(d.crossing_count());
  const int nd = static_cast<int>(d.component_count());
  rep.states_ok = true;
  for_each_state(d, max_crossings, [&](const State& s, const Resolution& r) {
    ++rep.states_checked;
    if (!rep.states_ok) return;
    const int ss = data.seifert_count(s);
    std::string failed;
    if (ss + data.non_seifert_count(s) != cr) failed = "seifert count";
    if (failed.empty() && GaussRat::i_pow(r.c + data.writhe) != GaussRat((ss % 2) ? -1 : 1))
      failed = "i^(c+w) = (-1)^ss";
    HomClass s_bar = HomClass::zero(lattice.rank());
    for (const auto& comp : r.components) s_bar += surface.to_class(comp.homology);
    const std::int64_t xs = lattice.rank() ? lattice.omega(xi, s_bar) : 0;
    if (failed.empty()) {
      const CanonicalLift s_lift = a_canonicalize(s_bar, lattice);
      const GaussRat expected = (xs % 2 == 0 && (xs / 2) % 2 != 0) ? -xi_lift.unit : xi_lift.unit;
      if (xs % 2 != 0 || s_lift.key != xi_lift.key || s_lift.unit != expected) failed = "[s] = (-1)^(Xi.s/2) [Xi]";
    }
    if (failed.empty() && ((nd + static_cast<int>(r.components.size()) + ss + xs / 2) % 2 + 2) % 2 != 0)
      failed = "n(D) + n(s) + ss + Xi.s/2 even";
    if (failed.empty()) {
      const ParityDetail pd = euler_parity_detail(d, od, s);
      if (!pd.parity_ok) failed = "n + m + chi even";
      else if (!pd.m_formula_ok) failed = "m = cr + ss + Xi.s/2 mod 2";
    }
    if (!failed.empty()) {
      rep.states_ok = false;
      if (rep.witness.empty()) rep.witness = "state " + describe_state(s) + ": " + failed;
    }
  });
  rep.ok = rep.sides_equal && rep.states_ok;
  return rep;
}

bool verify_comm(const Diagram& d, std::size_t max_crossings) { return verify_comm_report(d, max_crossings).ok; }

}  // namespace skl
