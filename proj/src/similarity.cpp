#include "relmap/similarity.hpp"

#include <algorithm>
#include <string>

#include "relmap/errors.hpp"

namespace relmap {

double thresholded_similarity(double cosine_value, double threshold) {
  const double s = std::clamp(cosine_value, 0.0, 1.0);
  return s < threshold ? 0.0 : s;
}

double phrase_similarity(std::string_view a, std::string_view b, EmbeddingProvider& provider,
                         const Stoplist& stoplist, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InputError("similarity threshold must lie in [0, 1], got " + std::to_string(threshold));
  }
  if (stoplist.contains(a) || stoplist.contains(b)) return 0.0;
  // Embed in a fixed order so the result is bit-identical under argument swap.
  const bool swap = b < a;
  const auto va = provider.embed(swap ? b : a);
  const auto vb = provider.embed(swap ? a : b);
  return thresholded_similarity(cosine(va, vb), threshold);
}

}  // namespace relmap
