#pragma once

// Genus-1 Heegaard data: handle-slide relations, Z2 linking numbers, the
// signed product at zeta = +-i, and truncated presentations of skein modules.
//
// Red curves are attached above the torus, blue curves below. A slide band
// sums one component of a multicurve with a parallel copy of an attaching
// curve; red copies pass over everything, blue copies under.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skl/diagram.hpp"
#include "skl/homology.hpp"
#include "skl/linalg.hpp"
#include "skl/skein.hpp"

namespace skl {

struct HeegaardData {
  std::vector<IVec2> red;
  std::vector<IVec2> blue;

  /// Throws std::invalid_argument on a non-primitive class or empty data.
  void validate() const;
  static HeegaardData lens(std::int64_t p, std::int64_t q = 1) { return {{{1, 0}}, {{q, p}}}; }
  static HeegaardData s3() { return {{{1, 0}}, {{0, 1}}}; }
};

struct H1Report {
  std::vector<Integer> invariants;  // 0 = free summand; empty = trivial group
  bool two_torsion = false;
};

H1Report manifold_h1(const HeegaardData& h);

/// Whether a class of the torus is zero in H1(M; Z2).
bool z2_null_in_manifold(const IVec2& c, const HeegaardData& h);

struct BandSpec {
  std::size_t component = 0;  // component of the start multicurve
  bool red = true;
  std::size_t curve = 0;  // index into h.red or h.blue
  IVec2 winding;          // lattice offset of the copy end of the band
};

struct BandRecord {
  BandSpec spec;
  int sigma = 0;  // +1 when the copy is traversed along its class
  IVec2 signed_class;
};

struct SlideRelation {
  SimpleMulticurve start;
  Diagram start_diagram;
  Diagram result;
  std::map<std::pair<bool, std::size_t>, int> used;  // (red?, curve) -> copies
  IVec2 slide_class;                                 // signed sum of the copies
  std::vector<BandRecord> bands;
  int writhe = 0;          // of the result, every component as drawn
  int writhe_formula = 0;  // omega(s, b - r) + omega(r, b)
};

/// Band-sums the listed components of `start` with fresh parallel copies of
/// the attaching curves. Throws std::invalid_argument for an empty start or a
/// band naming a missing component/curve, and DiagramError when the bands
/// are not in general position.
SlideRelation elementary_slide(const HeegaardData& h, const SimpleMulticurve& start,
                               const std::vector<BandSpec>& bands);

struct SlideBounds {
  int max_multiplicity = 2;  // start multicurves {v: k}, k even, k <= this
  int max_slope = 1;         // |p|, |q| <= this
  int max_arcs = 2;          // copies per compound slide
  int winding_range = 1;     // band offsets in [-R, R]^2
};

/// Compound slides with even slide class, from even starting multicurves, in
/// a fixed order.
std::vector<SlideRelation> generate_relations(const HeegaardData& h, const SlideBounds& bounds);

/// Z2 linking number of `above` with `below` when `above` is stacked over it.
/// Throws std::invalid_argument when `above` is not Z2-null in M, and
/// std::logic_error if two capping decompositions disagree.
int lk2(const Diagram& above, const Diagram& below, const HeegaardData& h);

/// Coefficients evaluated at a fourth root of unity.
Skein eval_skein(const Skein& x, const GaussRat& zeta);

/// (-1)^{lk2(x, y)} <x stacked over y> at zeta.
Skein k0_product(const Diagram& x, const Diagram& y, const HeegaardData& h, const GaussRat& zeta,
                 std::size_t max_crossings = kDefaultCrossingCap);

/// Bilinear extension of k0_product over realized basis curves.
Skein k0_product(const Skein& a, const Skein& b, const HeegaardData& h, const GaussRat& zeta,
                 std::size_t max_crossings = kDefaultCrossingCap);

struct WritheWitness {
  std::size_t relation = 0;
  int writhe = 0;
  std::string description;
};

struct WritheAudit {
  H1Report h1;
  std::size_t relations = 0;
  std::array<std::size_t, 4> histogram{};
  bool formula_agrees = true;
  std::vector<WritheWitness> witnesses;  // writhe = 2 mod 4
  std::vector<WritheWitness> disagreements;
};

WritheAudit writhe_mod4_audit(const HeegaardData& h, const SlideBounds& bounds);
WritheAudit writhe_mod4_audit(const HeegaardData& h, const std::vector<SlideRelation>& relations);

struct PsiRelationFailure {
  std::size_t relation = 0;
  GaussRat start_coeff;
  GaussRat result_coeff;
  HomClass start_key;
  HomClass result_key;
};

struct PsiRelationReport {
  std::size_t relations = 0;
  std::size_t passed = 0;
  std::vector<PsiRelationFailure> failures;
  bool all_pass() const { return failures.empty(); }
};

/// psi(start) and psi(result) must both be (-1)^n (x) [0].
PsiRelationReport psi_on_relations(const std::vector<SlideRelation>& relations);

/// Row of <start> - <result> at zeta, keyed by multicurve.
std::map<SimpleMulticurve, GaussRat> relation_row(const SlideRelation& r, const GaussRat& zeta,
                                                  std::size_t max_crossings = kDefaultCrossingCap);

/// phi on a row of constants: alpha -> (-1)^{n(alpha)} alpha (every key even).
std::map<SimpleMulticurve, GaussRat> phi_row(const std::map<SimpleMulticurve, GaussRat>& row);

struct QuotientResult {
  std::size_t dimension = 0;
  std::vector<SimpleMulticurve> basis;
  SparseMatrix relations;  // kept rows, columns indexed by basis
  std::size_t generated = 0;
  std::size_t dropped = 0;  // support left the truncation or crossing cap hit
  std::size_t rank = 0;
};

/// Even multicurves on the torus with complexity <= n, in canonical order.
std::vector<SimpleMulticurve> truncated_basis(int n);

/// TRUNCATED presentation: dimension is an upper bound for the span of the
/// basis modulo the generated relations that stay inside it.
QuotientResult truncated_quotient(const HeegaardData& h, const GaussRat& zeta, int truncation,
                                  const SlideBounds& bounds, std::size_t max_crossings = kDefaultCrossingCap);
QuotientResult truncated_quotient(const std::vector<SlideRelation>& relations, const GaussRat& zeta,
                                  int truncation, std::size_t max_crossings = kDefaultCrossingCap);

}  // namespace skl
