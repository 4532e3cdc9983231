#include "skl/homology.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace skl {

bool HomClass::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](auto x) { return x == 0; });
}

HomClass& HomClass::operator+=(const HomClass& o) {
  if (o.rank() != rank()) throw DimensionMismatch("HomClass rank mismatch");
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] += o.coords[k];
  return *this;
}

HomClass& HomClass::operator-=(const HomClass& o) {
  if (o.rank() != rank()) throw DimensionMismatch("HomClass rank mismatch");
  for (std::size_t k = 0; k < coords.size(); ++k) coords[k] -= o.coords[k];
  return *this;
}

HomClass operator*(std::int64_t k, HomClass a) {
  for (auto& x : a.coords) x *= k;
  return a;
}

std::string HomClass::to_string() const {
  std::ostringstream out;
  out << '(';
  for (std::size_t k = 0; k < coords.size(); ++k) out << (k ? "," : "") << coords[k];
  out << ')';
  return out.str();
}

bool Z2Class::is_zero() const {
  return std::all_of(bits.begin(), bits.end(), [](auto b) { return b == 0; });
}

Z2Class& Z2Class::operator+=(const Z2Class& o) {
  if (o.bits.size() != bits.size()) throw DimensionMismatch("Z2Class rank mismatch");
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] ^= o.bits[k];
  return *this;
}

std::string Z2Class::to_string() const {
  std::string s = "[";
  for (auto b : bits) s += b ? '1' : '0';
  return s + "]";
}

Z2Class reduce_mod2(const HomClass& c) {
  Z2Class z;
  z.bits.reserve(c.rank());
  for (auto x : c.coords) z.bits.push_back(static_cast<std::uint8_t>(((x % 2) + 2) % 2));
  return z;
}

Lattice::Lattice(std::vector<std::vector<std::int64_t>> form) : form_(std::move(form)) {
  for (std::size_t r = 0; r < form_.size(); ++r) {
    if (form_[r].size() != form_.size()) throw std::invalid_argument("Lattice: form is not square");
    for (std::size_t c = 0; c <= r; ++c)
      if (form_[r][c] != -form_[c][r]) throw std::invalid_argument("Lattice: form is not antisymmetric");
  }
}

Lattice Lattice::symplectic(int genus) {
  std::vector<std::vector<std::int64_t>> form(2 * genus, std::vector<std::int64_t>(2 * genus, 0));
  for (int g = 0; g < genus; ++g) {
    form[2 * g][2 * g + 1] = 1;
    form[2 * g + 1][2 * g] = -1;
  }
  return Lattice(std::move(form));
}

void Lattice::check(const HomClass& c) const {
  if (c.rank() != rank())
    throw DimensionMismatch("class " + c.to_string() + " does not live in a rank-" +
                            std::to_string(rank()) + " lattice");
}

std::int64_t Lattice::omega(const HomClass& a, const HomClass& b) const {
  check(a);
  check(b);
  std::int64_t total = 0;
  for (std::size_t r = 0; r < rank(); ++r) {
    if (a.coords[r] == 0) continue;
    for (std::size_t c = 0; c < rank(); ++c) total += a.coords[r] * form_[r][c] * b.coords[c];
  }
  return total;
}

CanonicalLift a_canonicalize(const HomClass& gamma, const Lattice& lattice) {
  lattice.check(gamma);
  HomClass key = gamma;
  for (auto& x : key.coords) x = ((x % 2) + 2) % 2;
  // [gamma] = i^{omega(key, gamma)} [key]
  return {GaussRat::i_pow(lattice.omega(key, gamma)), std::move(key)};
}

AElem AElem::generator(const HomClass& gamma, const Lattice& lattice) {
  auto lift = a_canonicalize(gamma, lattice);
  AElem e;
  e.add(lift.key, lift.unit);
  return e;
}

void AElem::add(const HomClass& key, const GaussRat& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

AElem& AElem::operator+=(const AElem& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

AElem& AElem::operator*=(const GaussRat& c) {
  if (c.is_zero()) terms_.clear();
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

std::string AElem::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [k, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += c.to_string() + "*[" + k.to_string() + "]";
  }
  return s;
}

AElem a_mul(const AElem& x, const AElem& y, const Lattice& lattice) {
  AElem out;
  for (const auto& [g, cg] : x.terms()) {
    for (const auto& [h, ch] : y.terms()) {
      auto lift = a_canonicalize(g + h, lattice);
      out.add(lift.key, cg * ch * GaussRat::i_pow(-lattice.omega(g, h)) * lift.unit);
    }
  }
  return out;
}

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix m(n, std::vector<Integer>(n, 0));
  for (std::size_t k = 0; k < n; ++k) m[k][k] = 1;
  return m;
}

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) { std::swap(m[a], m[b]); }

void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}

// row[dst] += k * row[src]
void add_row(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& k) {
  for (std::size_t c = 0; c < m[dst].size(); ++c) m[dst][c] += k * m[src][c];
}

void add_col(IntMatrix& m, std::size_t dst, std::size_t src, const Integer& k) {
  for (auto& row : m) row[dst] += k * row[src];
}

}  // namespace

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.empty()) return {};
  std::size_t inner = b.size();
  std::size_t cols = b.empty() ? 0 : b[0].size();
  IntMatrix r(a.size(), std::vector<Integer>(cols, 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k)
      for (std::size_t j = 0; j < cols; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Integer determinant(const IntMatrix& m) {
  // Bareiss fraction-free elimination.
  std::size_t n = m.size();
  if (n == 0) return 1;
  IntMatrix a = m;
  Integer sign = 1;
  Integer prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

SmithForm smith_form(const IntMatrix& input) {
  const std::size_t rows = input.size();
  const std::size_t cols = rows ? input[0].size() : 0;
  IntMatrix a = input;
  IntMatrix u = identity(rows);
  IntMatrix v = identity(cols);
  const std::size_t steps = std::min(rows, cols);

  for (std::size_t t = 0; t < steps; ++t) {
    while (true) {
      // Pivot: smallest nonzero |entry| in the trailing block.
      std::size_t pr = rows, pc = cols;
      for (std::size_t r = t; r < rows; ++r)
        for (std::size_t c = t; c < cols; ++c)
          if (a[r][c] != 0 && (pr == rows || abs(a[r][c]) < abs(a[pr][pc]))) {
            pr = r;
            pc = c;
          }
      if (pr == rows) break;  // trailing block is zero
      swap_rows(a, t, pr);
      swap_rows(u, t, pr);
      swap_cols(a, t, pc);
      swap_cols(v, t, pc);

      bool clean = true;
      for (std::size_t r = t + 1; r < rows; ++r) {
        if (a[r][t] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[r][t].get_mpz_t(), a[t][t].get_mpz_t());
        add_row(a, r, t, -q);
        add_row(u, r, t, -q);
        if (a[r][t] != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < cols; ++c) {
        if (a[t][c] == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), a[t][c].get_mpz_t(), a[t][t].get_mpz_t());
        add_col(a, c, t, -q);
        add_col(v, c, t, -q);
        if (a[t][c] != 0) clean = false;
      }
      if (!clean) continue;

      // Divisibility: every trailing entry must be a multiple of the pivot.
      bool divides = true;
      for (std::size_t r = t + 1; r < rows && divides; ++r)
        for (std::size_t c = t + 1; c < cols; ++c)
          if (a[r][c] % a[t][t] != 0) {
            add_row(a, t, r, 1);
            add_row(u, t, r, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }
  }

  SmithForm out;
  out.diagonal.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) out.diagonal.push_back(a[t][t]);
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

std::vector<Integer> quotient_invariants(std::size_t n, const std::vector<HomClass>& columns) {
  IntMatrix m(n, std::vector<Integer>(columns.size(), 0));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].rank() != n) throw DimensionMismatch("quotient_invariants: rank mismatch");
    for (std::size_t r = 0; r < n; ++r) m[r][c] = static_cast<long>(columns[c].coords[r]);
  }
  std::vector<Integer> out;
  std::vector<Integer> diag = columns.empty() ? std::vector<Integer>{} : smith_form(m).diagonal;
  for (std::size_t r = 0; r < n; ++r) {
    Integer d = r < diag.size() ? diag[r] : Integer(0);
    if (d != 1) out.push_back(d);
  }
  return out;
}

bool has_two_torsion(const std::vector<Integer>& invariants) {
  return std::any_of(invariants.begin(), invariants.end(),
                     [](const Integer& d) { return d != 0 && d % 2 == 0; });
}

namespace {

// All integer vectors of length n with entries in [-bound, bound].
std::vector<std::vector<std::int64_t>> coefficient_box(std::size_t n, int bound) {
  std::vector<std::vector<std::int64_t>> out{{}};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& prefix : out)
      for (int a = -bound; a <= bound; ++a) {
        auto v = prefix;
        v.push_back(a);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

HomClass combine(const std::vector<HomClass>& gens, const std::vector<std::int64_t>& coeffs,
                 std::size_t rank) {
  HomClass out = HomClass::zero(rank);
  for (std::size_t k = 0; k < gens.size(); ++k) out += coeffs[k] * gens[k];
  return out;
}

}  // namespace

DivisibilityReport lemma_divisibility_audit(const Lattice& lattice, const std::vector<HomClass>& sub,
                                            const std::vector<HomClass>& sub_prime, int bound) {
  for (const auto& c : sub) lattice.check(c);
  for (const auto& c : sub_prime) lattice.check(c);

  DivisibilityReport report;
  auto isotropic = [&](const std::vector<HomClass>& gens, const char* name) {
    for (std::size_t a = 0; a < gens.size(); ++a)
      for (std::size_t b = a + 1; b < gens.size(); ++b)
        if (lattice.omega(gens[a], gens[b]) != 0) {
          report.hypothesis_ok = false;
          report.violation += std::string("omega does not vanish on ") + name + "; ";
          return;
        }
  };
  isotropic(sub, "L");
  isotropic(sub_prime, "L'");

  std::vector<HomClass> all = sub;
  all.insert(all.end(), sub_prime.begin(), sub_prime.end());
  report.quotient = quotient_invariants(lattice.rank(), all);
  if (has_two_torsion(report.quotient)) {
    report.hypothesis_ok = false;
    report.violation += "quotient by L + L' has 2-torsion; ";
  }

  const auto box = coefficient_box(sub.size(), bound);
  const auto box_prime = coefficient_box(sub_prime.size(), bound);
  for (const auto& a : box) {
    HomClass alpha = combine(sub, a, lattice.rank());
    for (const auto& b : box_prime) {
      HomClass alpha_prime = combine(sub_prime, b, lattice.rank());
      if (!reduce_mod2(alpha + alpha_prime).is_zero()) continue;
      ++report.pairs;
      std::int64_t w = lattice.omega(alpha, alpha_prime);
      report.histogram[static_cast<std::size_t>(((w % 4) + 4) % 4)]++;
      if (w % 4 != 0 && !report.witness) report.witness = DivisibilityWitness{alpha, alpha_prime, w};
    }
  }
  return report;
}

}  // namespace skl
