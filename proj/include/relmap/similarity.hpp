#pragma once

#include <string_view>

#include "relmap/embedding.hpp"
#include "relmap/stoplist.hpp"

namespace relmap {

/// Similarity of two relation phrases in [0, 1]: zero when either phrase is
/// stoplisted, otherwise max(0, cosine) with values below `threshold` set to zero.
/// Throws InputError when threshold is outside [0, 1].
double phrase_similarity(std::string_view a, std::string_view b, EmbeddingProvider& provider,
                         const Stoplist& stoplist, double threshold);

/// Same rule applied to an already computed cosine.
double thresholded_similarity(double cosine_value, double threshold);

}  // namespace relmap
