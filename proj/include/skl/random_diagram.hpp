#pragma once

// Seeded random link diagrams for property tests and the CLI.

#include <cstddef>
#include <optional>
#include <random>

#include "skl/diagram.hpp"

namespace skl {

struct RandomDiagramOptions {
  std::size_t max_crossings = 6;
  std::size_t max_components = 3;
  std::size_t max_vertices = 5;
  bool allow_crossingless = false;
};

/// One attempt; nullopt when the candidate is not in general position or
/// exceeds the crossing bound.
std::optional<Diagram> try_random_diagram(const Surface& surface, std::mt19937_64& rng,
                                          const RandomDiagramOptions& opts = {});

/// Retries until a candidate is accepted. Throws std::runtime_error after
/// 10000 rejections.
Diagram random_diagram(const Surface& surface, std::mt19937_64& rng, const RandomDiagramOptions& opts = {});

}  // namespace skl
