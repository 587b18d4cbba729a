#pragma once

#include "ainfty/tensoralg.hpp"

// B = T(a, b, c, x) / (a^2 + x, xc + cx, (ac+ca)^2, c^2, tb, bt), d c = x, d b = 2c
inline ainfty::AlgebraPresentation torsion_presentation() {
  using namespace ainfty;
  AlgebraPresentation p;
  p.add_generator("a", 2, 2);
  std::size_t b = p.add_generator("b", 2, 2);
  std::size_t c = p.add_generator("c", 3, 4);
  p.add_generator("x", 4, 2);
  p.set_differential(c, p.parse("x"));
  p.set_differential(b, p.parse("2c"));
  for (const char* r : {"a^2 + x", "xc + cx", "(ac + ca)^2", "c^2"}) p.add_relation(p.parse(r));
  p.add_annihilator(b, Annihilator::Side::Both);
  return p;
}
