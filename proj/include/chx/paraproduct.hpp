#pragma once

#include "chx/littlewood_paley.hpp"

namespace chx {

// Bony decomposition fg = (f para< g) + (f res g) + (f para> g) in block
// numbering: para< sums pairs Delta_a f Delta_b g with a <= b-2, the
// resonant part the pairs with |a-b| <= 1 (each exactly once), para> the
// rest.  All pairwise products are dealiased.
struct BonyDecomposition {
    Field para_lt;   // f below g
    Field resonant;
    Field para_gt;   // f above g, equals g para< f
};

Field para_lt(const DyadicPartition& part, const Field& f, const Field& g);
Field resonant(const DyadicPartition& part, const Field& f, const Field& g);
BonyDecomposition bony_decompose(const DyadicPartition& part, const Field& f, const Field& g);

}  // namespace chx
