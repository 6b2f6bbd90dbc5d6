#pragma once

#include "fuzzysweep/core.hpp"

namespace fuzzysweep {

// The 150 x 4 iris measurements with species labels.
DataSet iris();

}  // namespace fuzzysweep
