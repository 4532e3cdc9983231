#pragma once

// Integer homology lattices with antisymmetric intersection forms, the
// Z/2 reduction, Smith normal form, and the twisted group algebra A on
// H_1(F; Z) modulo [2g] = 1.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skl/ring.hpp"

namespace skl {

/// Integer vector in a lattice of fixed rank.
struct HomClass {
  std::vector<std::int64_t> coords;

  HomClass() = default;
  explicit HomClass(std::vector<std::int64_t> c) : coords(std::move(c)) {}
  HomClass(std::initializer_list<std::int64_t> c) : coords(c) {}
  static HomClass zero(std::size_t rank) { return HomClass(std::vector<std::int64_t>(rank, 0)); }

  std::size_t rank() const { return coords.size(); }
  bool is_zero() const;

  HomClass& operator+=(const HomClass& o);
  HomClass& operator-=(const HomClass& o);
  friend HomClass operator+(HomClass a, const HomClass& b) { return a += b; }
  friend HomClass operator-(HomClass a, const HomClass& b) { return a -= b; }
  friend HomClass operator*(std::int64_t k, HomClass a);
  HomClass operator-() const { return (-1) * *this; }
  friend auto operator<=>(const HomClass&, const HomClass&) = default;

  std::string to_string() const;
};

/// Element of H_1(.; Z/2).
struct Z2Class {
  std::vector<std::uint8_t> bits;

  bool is_zero() const;
  Z2Class& operator+=(const Z2Class& o);
  friend Z2Class operator+(Z2Class a, const Z2Class& b) { return a += b; }
  friend auto operator<=>(const Z2Class&, const Z2Class&) = default;
  std::string to_string() const;
};

Z2Class reduce_mod2(const HomClass& c);

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Free abelian group Z^rank with an antisymmetric integer form.
class Lattice {
 public:
  Lattice() = default;
  /// Throws std::invalid_argument unless form is square and antisymmetric.
  explicit Lattice(std::vector<std::vector<std::int64_t>> form);

  /// Standard symplectic lattice of a genus-g surface:
  /// omega(e_{2k-1}, e_{2k}) = +1.
  static Lattice symplectic(int genus);

  std::size_t rank() const { return form_.size(); }
  const std::vector<std::vector<std::int64_t>>& form() const { return form_; }
  std::int64_t omega(const HomClass& a, const HomClass& b) const;
  void check(const HomClass& c) const;
  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  std::vector<std::vector<std::int64_t>> form_;
};

/// Representative [key] of the Z/2 class of gamma with all coordinates in
/// {0,1}, together with the unit such that [gamma] = unit * [key] in A.
struct CanonicalLift {
  GaussRat unit;
  HomClass key;
};

CanonicalLift a_canonicalize(const HomClass& gamma, const Lattice& lattice);

/// Element of A in the canonical-lift basis.
class AElem {
 public:
  using Terms = std::map<HomClass, GaussRat>;

  AElem() = default;
  /// The generator [gamma], already canonicalized.
  static AElem generator(const HomClass& gamma, const Lattice& lattice);
  static AElem one(const Lattice& lattice) { return generator(HomClass::zero(lattice.rank()), lattice); }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Adds c*[key]; key must already have 0/1 coordinates.
  void add(const HomClass& key, const GaussRat& c);
  AElem& operator+=(const AElem& o);
  AElem& operator*=(const GaussRat& c);
  friend bool operator==(const AElem&, const AElem&) = default;
  std::string to_string() const;

 private:
  Terms terms_;
};

/// Distributive extension of [g][h] = i^{-omega(g,h)} [g+h], followed by
/// canonicalization.
AElem a_mul(const AElem& x, const AElem& y, const Lattice& lattice);

using IntMatrix = std::vector<std::vector<Integer>>;

struct SmithForm {
  std::vector<Integer> diagonal;  // d_1 | d_2 | ..., length min(rows, cols)
  IntMatrix u;                    // rows x rows, unimodular
  IntMatrix v;                    // cols x cols, unimodular
};

/// u * m * v = diag(d). Exact over arbitrary-precision integers.
SmithForm smith_form(const IntMatrix& m);

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b);
Integer determinant(const IntMatrix& m);

/// Invariant factors of Z^n / span(columns): entries != 1, 0 meaning a free
/// Z summand. Empty means the trivial group.
std::vector<Integer> quotient_invariants(std::size_t n, const std::vector<HomClass>& columns);
bool has_two_torsion(const std::vector<Integer>& invariants);

struct DivisibilityWitness {
  HomClass alpha;
  HomClass alpha_prime;
  std::int64_t omega = 0;
};

struct DivisibilityReport {
  bool hypothesis_ok = true;
  std::string violation;                 // why the hypothesis failed, if it did
  std::vector<Integer> quotient;         // invariant factors of A / (L + L')
  std::size_t pairs = 0;                 // pairs with alpha + alpha' = 0 mod 2
  std::array<std::size_t, 4> histogram{};  // omega mod 4
  std::optional<DivisibilityWitness> witness;  // first pair with omega != 0 mod 4

  bool all_divisible() const { return histogram[1] + histogram[2] + histogram[3] == 0; }
};

/// Enumerates alpha in span(sub), alpha' in span(sub_prime) with coefficient
/// magnitudes <= bound and alpha + alpha' even, recording omega(alpha, alpha')
/// mod 4. A failed hypothesis is reported, not thrown.
DivisibilityReport lemma_divisibility_audit(const Lattice& lattice,
                                            const std::vector<HomClass>& sub,
                                            const std::vector<HomClass>& sub_prime, int bound);

}  // namespace skl
