#pragma once

#include <stdexcept>
#include <string>

#include "spix/algorithms/fh.hpp"
#include "spix/algorithms/slic.hpp"
#include "spix/algorithms/watershed.hpp"

namespace spix {

inline bool known_algorithm(const std::string& id) {
    return id == "slic" || id == "watershed" || id == "fh";
}

// Dispatch by algorithm id; each implementation times its own raw region
// (color conversion included, connectivity enforcement excluded).
inline SegmentationResult segment(const std::string& algorithm_id, const Image& image,
                                  const AlgorithmParams& params) {
    if (algorithm_id == "slic") return slic_segment(image, params);
    if (algorithm_id == "watershed") return watershed_segment(image, params);
    if (algorithm_id == "fh") return fh_segment(image, params);
    throw std::invalid_argument("unknown algorithm id: " + algorithm_id);
}

}  // namespace spix
