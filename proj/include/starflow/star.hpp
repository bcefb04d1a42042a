#pragma once

#include "starflow/calculus.hpp"

namespace starflow {

// A named formal star product. The Weyl-Moyal product is frame-agnostic: it
// uses the constant Poisson tensor of whatever frame the operands live in,
// which is the transported standard product because all transports are linear.
// Wick-type products are tied to a complex frame and a set of (z, zbar) pairs.
struct StarProduct {
  enum class Kind { weyl, wick };

  Kind kind;
  FrameId frame;                          // meaningful for wick
  std::vector<std::pair<int, int>> pairs; // meaningful for wick
  std::string name;

  static StarProduct weyl();
  static StarProduct wick_total();   // complex-normal frame, both pairs
  static StarProduct wick_system();  // complex-factor frame, (zS, zbS)
  static StarProduct wick_bath();    // complex-factor frame, (zB, zbB)
  static std::optional<StarProduct> by_name(std::string_view name);
};

// f star g truncated at the operands' order. Operands of different frames are
// transported to the first operand's frame (Weyl) or the product's frame
// (Wick); this needs a catalog with exact transports under the rational
// backend.
FormalSeries star_product(const StarProduct& prod, const FormalSeries& f,
                          const FormalSeries& g, const FrameCatalog* frames = nullptr);

FormalSeries weyl_star(const FormalSeries& f, const FormalSeries& g,
                       const FrameCatalog* frames = nullptr);
FormalSeries wick_star(const StarProduct& prod, const FormalSeries& f,
                       const FormalSeries& g, const FrameCatalog* frames = nullptr);

FormalSeries star_commutator(const StarProduct& prod, const FormalSeries& f,
                             const FormalSeries& g,
                             const FrameCatalog* frames = nullptr);

}  // namespace starflow
