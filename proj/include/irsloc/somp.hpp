// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "irsloc/music.hpp"

#include <vector>

namespace irsloc {

struct SompAtom {
    FieldType field = FieldType::Far;
    std::size_t index = 0; // into the near or far dictionary
    double d = kInfiniteRange;
    double theta = 0.0;
    double score = 0.0;
};

/// Simultaneous OMP over the union of the near and far dictionaries. Picks k
/// atoms by summed normalised correlation magnitude across the snapshot
/// columns, re-fitting all selected atoms by least squares after each pick.
std::vector<SompAtom> somp(const CMatrix& snapshots, const CMatrix& near_dict, const CMatrix& far_dict,
                           const SpectrumGrid& grid, int k);

} // namespace irsloc
