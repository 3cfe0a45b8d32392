#pragma once

#include <vector>

#include "qrr/ctkit.hpp"

namespace qrr {

// Constant-term representations of the parametric multi-sums, each as a CT
// of Euler factors against a theta kernel, with the sum it equals as target.

CtScript rank2_index12();
CtScript rank2_index24();
CtScript rank2_index14();
CtScript rank2_index88();
CtScript rank3_index113();
/// v and w enter the sum only through v^2 and w^2; the letters v, w here
/// stand for those squares.
CtScript rank3_index122_e();
CtScript rank3_index122_f();
CtScript rank3_index124();
/// t stands for the square of the fourth sum parameter.
CtScript rank4_index1112();
/// Rank-two alpha family exactly as first written: before z -> q^{-1/2} z.
CtScript alpha_family_raw(QExp alpha);
/// The same after z -> q^{-1/2} z.
CtScript alpha_family(QExp alpha);

/// The parametric representations above with more than one free parameter.
std::vector<CtScript> general_ct_representations();

/// Every specialised proof script of the constant-term chains that has
/// finite windows.
std::vector<CtScript> replay_scripts();

}  // namespace qrr
