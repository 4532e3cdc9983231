#pragma once

// Skein algebras of surfaces over the basis of simple multicurves, and the
// twisted maps phi / psi between parameters zeta and i*zeta.

#include <cstddef>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "skl/diagram.hpp"
#include "skl/homology.hpp"
#include "skl/ring.hpp"

namespace skl {

inline constexpr std::size_t kDefaultCrossingCap = 20;

class CrossingCapExceeded : public std::runtime_error {
 public:
  CrossingCapExceeded(std::size_t crossings, std::size_t cap)
      : std::runtime_error("diagram has " + std::to_string(crossings) + " crossings, cap is " + std::to_string(cap)) {}
};

class Skein {
 public:
  using Terms = std::map<SimpleMulticurve, LaurentPoly>;

  explicit Skein(SurfaceKind kind = SurfaceKind::Disk) : kind_(kind) {}
  static Skein basis(const SimpleMulticurve& mc, LaurentPoly coeff = 1);
  static Skein empty_curve(SurfaceKind kind) { return basis(SimpleMulticurve::empty(kind)); }

  SurfaceKind kind() const { return kind_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  LaurentPoly coeff(const SimpleMulticurve& mc) const;
  void add(const SimpleMulticurve& mc, const LaurentPoly& c);

  Skein& operator+=(const Skein& o);
  Skein& operator-=(const Skein& o);
  Skein& operator*=(const LaurentPoly& c);
  friend Skein operator+(Skein a, const Skein& b) { return a += b; }
  friend Skein operator-(Skein a, const Skein& b) { return a -= b; }
  friend Skein operator*(const LaurentPoly& c, Skein a) { return a *= c; }
  friend bool operator==(const Skein& a, const Skein& b) { return a.kind_ == b.kind_ && a.terms_ == b.terms_; }
  std::string to_string() const;

 private:
  SurfaceKind kind_;
  Terms terms_;
};

/// Calls fn(state, resolution) for every state of d, in index order.
void for_each_state(const Diagram& d, std::size_t max_crossings,
                    const std::function<void(const State&, const Resolution&)>& fn);

/// Kauffman bracket state sum in symbolic zeta.
Skein bracket(const Diagram& d, std::size_t max_crossings = kDefaultCrossingCap);

/// Coefficient-wise lp_twist: the bracket at i*zeta.
Skein twist(const Skein& x);

/// Stack-then-bracket on realized basis curves, extended bilinearly.
Skein skein_mul(const Surface& surface, const Skein& a, const Skein& b,
                std::size_t max_crossings = kDefaultCrossingCap);

using GradedSkein = std::map<Z2Class, Skein>;
GradedSkein grade(const Skein& x);

/// Z2-linear functional u -> (-1)^{<dual, u>}.
struct Z2Character {
  Z2Class dual;
  int operator()(const Z2Class& u) const;
};

Skein character_act(const Skein& x, const Z2Character& c);

/// Element of the tensor product with A, keyed by (multicurve, canonical
/// lift key).
class TensorElem {
 public:
  using Key = std::pair<SimpleMulticurve, HomClass>;
  using Terms = std::map<Key, LaurentPoly>;

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const SimpleMulticurve& mc, const HomClass& key, const LaurentPoly& c);
  /// Every term has multicurve Z2 class equal to its lift key mod 2.
  bool is_diagonal() const;
  friend bool operator==(const TensorElem&, const TensorElem&) = default;
  std::string to_string() const;

 private:
  Terms terms_;
};

/// (-1)^{n(alpha)} alpha (x) [alpha-bar] on every basis term.
TensorElem phi(const Skein& x, const Surface& surface);

struct PsiResult {
  GaussRat coeff;  // (-1)^{n(D)} i^{-w} times the canonicalization unit
  HomClass key;
  int writhe = 0;
  IVec2 xi;
};

/// psi with every component oriented as stored.
PsiResult psi(const Diagram& d);
PsiResult psi(const OrientedDiagram& od);

/// (bracket_zeta (x) Id)(psi(d)).
TensorElem bracket_psi(const Diagram& d, std::size_t max_crossings = kDefaultCrossingCap);

/// Expands (bracket (x) Id) psi of d through one crossing via its two
/// smoothings at i*zeta. Throws std::logic_error for a crossing of a
/// component with itself, where psi does not respect the skein relation.
TensorElem psi_expand(const Diagram& d, std::size_t crossing, std::size_t max_crossings = kDefaultCrossingCap);

struct CommReport {
  bool ok = false;
  bool sides_equal = false;
  bool states_ok = false;
  std::size_t states_checked = 0;
  TensorElem lhs;
  TensorElem rhs;
  std::string witness;  // first failing state or term
};

CommReport verify_comm_report(const Diagram& d, std::size_t max_crossings = kDefaultCrossingCap);
bool verify_comm(const Diagram& d, std::size_t max_crossings = kDefaultCrossingCap);

}  // namespace skl
