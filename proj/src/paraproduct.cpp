#include "chx/paraproduct.hpp"

#include <stdexcept>

namespace chx {

namespace {

void require_same_grid(const Field& f, const Field& g) {
    if (!(f.grid == g.grid)) throw std::invalid_argument("paraproduct: grid mismatch");
}

}  // namespace

Field para_lt(const DyadicPartition& part, const Field& f, const Field& g) {
    require_same_grid(f, g);
    const BlockSet bf = decompose(part, f);
    const BlockSet bg = decompose(part, g);
    // sum_b Delta_b g * S_{b-2} f with running low-frequency sums of f
    Field out = zero_field(f.grid);
    Field low = zero_field(f.grid);
    for (int b = 1; b <= bf.jmax; ++b) {
        add_inplace(low, bf.at(b - 2));
        add_inplace(out, product_dealiased(low, bg.at(b)));
    }
    return out;
}

Field resonant(const DyadicPartition& part, const Field& f, const Field& g) {
    require_same_grid(f, g);
    const BlockSet bf = decompose(part, f);
    const BlockSet bg = decompose(part, g);
    // pairs (j, j-1), (j, j), (j, j+1); the written clamp would count the
    // pair (-1,-1) twice, so the lower diagonal starts at j = 0
    Field out = zero_field(f.grid);
    for (int j = -1; j <= bf.jmax; ++j) {
        Field near = bg.at(j);
        if (j >= 0) add_inplace(near, bg.at(j - 1));
        if (j + 1 <= bf.jmax) add_inplace(near, bg.at(j + 1));
        add_inplace(out, product_dealiased(bf.at(j), near));
    }
    return out;
}

BonyDecomposition bony_decompose(const DyadicPartition& part, const Field& f, const Field& g) {
    BonyDecomposition d;
    d.para_lt = para_lt(part, f, g);
    d.resonant = resonant(part, f, g);
    d.para_gt = para_lt(part, g, f);
    return d;
}

}  // namespace chx
