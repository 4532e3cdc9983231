#include "skl/random_diagram.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace skl {

namespace {

constexpr long kGrid = 61;

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Point random_point(std::mt19937_64& rng, long span) {
  auto coord = [&] { return Rational(std::uniform_int_distribution<long>(0, span * kGrid - 1)(rng), kGrid); };
  Rational x = coord();
  Rational y = coord();
  return {x, y};
}

}  // namespace

std::optional<Diagram> try_random_diagram(const Surface& surface, std::mt19937_64& rng,
                                          const RandomDiagramOptions& opts) {
  const std::size_t ncomp = pick(rng, 1, std::max<std::size_t>(1, opts.max_components));
  std::vector<Polyline> comps;
  std::size_t total_segments = 0;
  for (std::size_t c = 0; c < ncomp; ++c) {
    Polyline pl;
    if (surface.periodic()) {
      pl.wrap = {static_cast<std::int64_t>(pick(rng, 0, 2)) - 1, static_cast<std::int64_t>(pick(rng, 0, 2)) - 1};
    }
    const std::size_t min_vertices = pl.wrap.is_zero() ? 3 : 1;
    const std::size_t nv = pick(rng, min_vertices, std::max(min_vertices, opts.max_vertices));
    const long span = surface.periodic() ? 1 : 3;
    for (std::size_t v = 0; v < nv; ++v) pl.vertices.push_back(random_point(rng, span));
    total_segments += nv;
    comps.push_back(std::move(pl));
  }
  // Distinct heights give every crossing an over strand.
  std::vector<int> heights(total_segments);
  std::iota(heights.begin(), heights.end(), 0);
  std::shuffle(heights.begin(), heights.end(), rng);
  std::size_t next = 0;
  for (auto& pl : comps)
    for (std::size_t s = 0; s < pl.segment_count(); ++s) pl.heights.push_back(heights[next++]);

  try {
    Diagram d = Diagram::build(surface, comps);
    if (d.crossing_count() > opts.max_crossings) return std::nullopt;
    if (d.crossing_count() == 0 && !opts.allow_crossingless) return std::nullopt;
    // Flip some crossings against the heights so that over/under is not
    // always a layering.
    std::vector<OverHint> hints;
    bool flipped = false;
    for (const auto& x : d.crossings()) {
      if (pick(rng, 0, 3) == 0) {
        hints.push_back({x.point, x.under.direction});
        flipped = true;
      }
    }
    if (!flipped) return d;
    return Diagram::build(surface, std::move(comps), std::move(hints));
  } catch (const DiagramError&) {
    return std::nullopt;
  }
}

Diagram random_diagram(const Surface& surface, std::mt19937_64& rng, const RandomDiagramOptions& opts) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    if (auto d = try_random_diagram(surface, rng, opts)) return std::move(*d);
  }
  throw std::runtime_error("random_diagram: no acceptable candidate after 10000 attempts");
}

}  // namespace skl
